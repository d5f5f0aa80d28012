#include "fracnls/initial_data.hpp"

#include <cmath>
#include <stdexcept>

namespace fracnls {

void InitialDataSpec::validate() const {
  if (!(eps0 > 0.0) || eps0 > 0.5)
    throw std::invalid_argument("initial data: eps0 must be in (0, 0.5]");
  if (!(width > 0.0))
    throw std::invalid_argument("initial data: width must be positive");
  if (family == Family::custom_table && table.empty())
    throw std::invalid_argument("initial data: custom_table needs values");
}

cd InitialDataSpec::eval_fhat(double xi) const {
  const cd rot{std::cos(phase), std::sin(phase)};
  switch (family) {
    case Family::gaussian_packet: {
      const double a = (xi - xi_center) / width;
      return eps0 * std::exp(-a * a) * rot;
    }
    case Family::double_packet: {
      const double a = (xi - xi_center) / width;
      const double b = (xi + xi_center) / width;
      return eps0 * (std::exp(-a * a) + std::exp(-b * b)) * rot;
    }
    case Family::custom_table:
      throw std::logic_error("custom_table has no closed form");
  }
  return {};
}

std::vector<cd> InitialDataSpec::sample(const SpectralGrid& g) const {
  validate();
  std::vector<cd> out(g.M);
  if (family == Family::custom_table) {
    if (static_cast<int>(table.size()) != g.M)
      throw std::invalid_argument("custom_table length does not match grid");
    out = table;
  } else {
    for (int i = 0; i < g.M; ++i) out[i] = eval_fhat(g.xi_nodes[i]);
  }
  for (int i = 0; i < g.M; ++i)
    if (!g.dealias_mask[i]) out[i] = cd{};
  return out;
}

std::pair<double, double> InitialDataSpec::support(double rel_floor) const {
  if (family == Family::custom_table)
    throw std::logic_error("custom_table has no closed-form support");
  const double r = width * std::sqrt(std::log(1.0 / rel_floor));
  if (family == Family::gaussian_packet)
    return {xi_center - r, xi_center + r};
  const double c = std::abs(xi_center);
  return {-c - r, c + r};
}

}  // namespace fracnls
