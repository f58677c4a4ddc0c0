// Exact coherent-state amplitude labels of the form (a + b*sqrt(2)) * alpha.

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>

#include <boost/rational.hpp>

namespace hesim {

using Rational = boost::rational<std::int64_t>;

/// Multiplier of the base amplitude alpha, kept exactly as a + b*sqrt(2)
/// with rational a and b.
///
/// The set is closed under x/sqrt(2), so any chain of 50:50 beamsplitters
/// acting on labels from {0, +-1} stays representable and like terms can be
/// merged by exact comparison. Components are kept in lowest terms by
/// boost::rational; an std::overflow_error is raised if a numerator or
/// denominator leaves the +-2^31 window, which keeps every intermediate
/// product inside int64.
class CoherentLabel {
 public:
  CoherentLabel() = default;
  CoherentLabel(Rational a, Rational b);

  static CoherentLabel integer(std::int64_t n) { return {Rational(n), Rational(0)}; }
  /// n * sqrt(2)
  static CoherentLabel sqrt2(std::int64_t n = 1) { return {Rational(0), Rational(n)}; }

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt2_part() const { return b_; }

  bool is_zero() const { return a_.numerator() == 0 && b_.numerator() == 0; }
  /// Exact sign of a + b*sqrt(2): -1, 0 or +1.
  int sign() const;
  double value() const;

  CoherentLabel operator-() const { return {-a_, -b_}; }
  CoherentLabel operator+(const CoherentLabel& o) const { return {a_ + o.a_, b_ + o.b_}; }
  CoherentLabel operator-(const CoherentLabel& o) const { return {a_ - o.a_, b_ - o.b_}; }
  CoherentLabel abs() const { return sign() < 0 ? -*this : *this; }

  /// (a + b*sqrt(2)) / sqrt(2) = b + (a/2)*sqrt(2)
  CoherentLabel div_sqrt2() const { return {b_, a_ / 2}; }
  CoherentLabel mul_sqrt2() const { return {b_ * 2, a_}; }

  bool operator==(const CoherentLabel& o) const { return a_ == o.a_ && b_ == o.b_; }
  bool operator!=(const CoherentLabel& o) const { return !(*this == o); }
  /// Structural order on (a, b); used for canonical term ordering only.
  bool operator<(const CoherentLabel& o) const {
    return a_ < o.a_ || (a_ == o.a_ && b_ < o.b_);
  }

  /// Human-readable form such as "0", "-1", "sqrt2", "1/2+1/2*sqrt2".
  std::string to_string() const;

 private:
  void check_range() const;

  Rational a_{0};
  Rational b_{0};
};

/// Output labels of the 50:50 beamsplitter |x>|y> -> |(x+y)/sqrt2>|(x-y)/sqrt2>.
std::pair<CoherentLabel, CoherentLabel> beamsplit(const CoherentLabel& x, const CoherentLabel& y);

/// <x*alpha | y*alpha> for real labels and real alpha > 0.
std::complex<double> coherent_overlap(const CoherentLabel& x, const CoherentLabel& y, double alpha);

}  // namespace hesim
