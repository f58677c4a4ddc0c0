#include "hesim/coherent_label.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hesim {

namespace {

constexpr std::int64_t kComponentLimit = std::int64_t{1} << 31;

bool in_range(const Rational& r) {
  const auto n = r.numerator();
  return n < kComponentLimit && n > -kComponentLimit && r.denominator() < kComponentLimit;
}

std::string rational_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace

CoherentLabel::CoherentLabel(Rational a, Rational b) : a_(a), b_(b) { check_range(); }

void CoherentLabel::check_range() const {
  if (!in_range(a_) || !in_range(b_)) {
    throw std::overflow_error("coherent label component exceeds exact range");
  }
}

int CoherentLabel::sign() const {
  // Mixed rational/int comparisons recurse under C++20 rewritten operators, so
  // signs are read off the numerators (denominators are always positive).
  const auto sa = static_cast<int>((a_.numerator() > 0) - (a_.numerator() < 0));
  const auto sb = static_cast<int>((b_.numerator() > 0) - (b_.numerator() < 0));
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: compare a^2 with 2 b^2.
  const Rational a2 = a_ * a_;
  const Rational b2 = b_ * b_ * 2;
  if (a2 == b2) return 0;  // unreachable for rationals, kept for totality
  return a2 > b2 ? sa : sb;
}

double CoherentLabel::value() const {
  return boost::rational_cast<double>(a_) + boost::rational_cast<double>(b_) * std::sqrt(2.0);
}

std::string CoherentLabel::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  const bool b_negative = b_.numerator() < 0;
  if (a_.numerator() != 0) out = rational_string(a_);
  if (b_.numerator() != 0) {
    const Rational mag = b_negative ? -b_ : b_;
    if (!out.empty()) out += b_negative ? "-" : "+";
    else if (b_negative) out += "-";
    if (mag != Rational(1)) out += rational_string(mag) + "*";
    out += "sqrt2";
  }
  return out;
}

std::pair<CoherentLabel, CoherentLabel> beamsplit(const CoherentLabel& x, const CoherentLabel& y) {
  return {(x + y).div_sqrt2(), (x - y).div_sqrt2()};
}

std::complex<double> coherent_overlap(const CoherentLabel& x, const CoherentLabel& y, double alpha) {
  // exp(-(|x a|^2 + |y a|^2)/2 + x y a^2) = exp(-(x - y)^2 a^2 / 2) for real labels.
  const double d = (x - y).value() * alpha;
  return {std::exp(-0.5 * d * d), 0.0};
}

}  // namespace hesim
