#include "hesim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace hesim {

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::theta1: return "theta1";
    case SweepAxis::theta2: return "theta2";
    case SweepAxis::theta3: return "theta3";
    case SweepAxis::alpha: return "alpha";
  }
  return "?";
}

SweepAxis parse_sweep_axis(const std::string& name) {
  for (auto a : {SweepAxis::theta1, SweepAxis::theta2, SweepAxis::theta3, SweepAxis::alpha}) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown sweep axis: " + name);
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points == 0) throw std::invalid_argument("grid needs at least one point");
  std::vector<double> v(points);
  if (points == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < points; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  v.back() = hi;
  return v;
}

namespace {

struct Point {
  AngleParams angles;
  double alpha;
};

void assign(Point& pt, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::theta1: pt.angles.theta1 = value; break;
    case SweepAxis::theta2: pt.angles.theta2 = value; break;
    case SweepAxis::theta3: pt.angles.theta3 = value; break;
    case SweepAxis::alpha: pt.alpha = value; break;
  }
}

SweepRow evaluate(const Point& pt) {
  const ECPParams p = pt.angles.to_params(pt.alpha);
  ECPOptions o;
  o.keep_trace = false;
  const auto r = run_ecp(p, o);
  return {pt.angles.theta1, pt.angles.theta2, pt.angles.theta3, pt.alpha, success_probability_closed_form(p),
          r.success_probability};
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.grids.empty() || spec.grids.size() > 2) throw std::invalid_argument("sweep needs one or two axes");
  if (spec.grids.size() == 2 && spec.grids[0].axis == spec.grids[1].axis) {
    throw std::invalid_argument("sweep axes must differ");
  }
  for (const auto& g : spec.grids) {
    if (g.values.empty()) throw std::invalid_argument("sweep grid is empty");
  }
  const bool alpha_on_grid = std::any_of(spec.grids.begin(), spec.grids.end(),
                                         [](const SweepGrid& g) { return g.axis == SweepAxis::alpha; });
  const std::vector<double> alphas = alpha_on_grid ? std::vector<double>{1.0} : spec.alphas;
  if (alphas.empty()) throw std::invalid_argument("sweep needs at least one alpha");

  std::vector<Point> points;
  const auto& g0 = spec.grids[0];
  for (double alpha : alphas) {
    for (double v0 : g0.values) {
      Point base{spec.fixed, alpha};
      assign(base, g0.axis, v0);
      if (spec.grids.size() == 1) {
        points.push_back(base);
        continue;
      }
      for (double v1 : spec.grids[1].values) {
        Point pt = base;
        assign(pt, spec.grids[1].axis, v1);
        points.push_back(pt);
      }
    }
  }
  for (const auto& pt : points) {
    if (!(pt.alpha > 0.0)) throw std::invalid_argument("sweep alpha must be positive");
  }

  std::vector<SweepRow> rows(points.size());
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) rows[i] = evaluate(points[i]);
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepHeader << '\n';
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.theta1, r.theta2, r.theta3, r.alpha,
                  r.p_closed, r.p_sim);
    os << buf;
  }
}

}  // namespace hesim
