// Grid evaluation of the concentration success probability.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hesim/ecp.hpp"

namespace hesim {

enum class SweepAxis { theta1, theta2, theta3, alpha };

std::string to_string(SweepAxis a);
SweepAxis parse_sweep_axis(const std::string& name);

struct SweepGrid {
  SweepAxis axis;
  std::vector<double> values;
};

/// `points` evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t points);

struct SweepSpec {
  /// One or two varying axes. The first is the slower-varying one in the output.
  std::vector<SweepGrid> grids;
  AngleParams fixed;
  /// Alpha values iterated outermost when alpha is not itself a grid axis.
  std::vector<double> alphas{0.5, 1.0, 2.0};
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
};

struct SweepRow {
  double theta1;
  double theta2;
  double theta3;
  double alpha;
  double p_closed;
  double p_sim;
};

/// Rows ordered by alpha, then the first grid axis, then the second, whatever
/// the thread count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

inline constexpr const char* kSweepHeader = "theta1,theta2,theta3,alpha,P_closed,P_sim";

/// CSV with the header above and every value printed to 17 significant digits.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace hesim
