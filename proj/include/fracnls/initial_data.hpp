#ifndef FRACNLS_INITIAL_DATA_HPP
#define FRACNLS_INITIAL_DATA_HPP

#include <utility>
#include <vector>

#include "fracnls/spectral.hpp"

namespace fracnls {

// Frequency-side data families. The closed forms are specified directly as
// fhat(xi); gaussian_packet is eps0 * exp(-(xi-xi_c)^2/width^2) * e^{i phase},
// double_packet adds the mirror bump at -xi_c. custom_table carries explicit
// per-node values and is only addressable through the API, not text configs.
struct InitialDataSpec {
  enum class Family { gaussian_packet, double_packet, custom_table };
  Family family = Family::gaussian_packet;
  double eps0 = 0.05;  // smallness regime: 0 < eps0 <= 0.5
  double xi_center = 1.0;
  double width = 0.5;
  double phase = 0.0;
  std::vector<cd> table;  // custom_table only; length must match the grid

  void validate() const;  // throws std::invalid_argument
  cd eval_fhat(double xi) const;  // closed-form families only
  std::vector<cd> sample(const SpectralGrid& g) const;  // dealiased

  // [lo, hi] containing all xi with |fhat| >= rel_floor * max (closed forms)
  std::pair<double, double> support(double rel_floor) const;
};

}  // namespace fracnls

#endif
