#include "ifbl/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "ifbl/error.hpp"
#include "ifbl/simd/kernels.hpp"

namespace ifbl {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double interpolate(const std::vector<double>& grid, const std::vector<double>& values, double x,
                   double outside) {
  if (x < grid.front() || x > grid.back()) return outside;
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  if (it == grid.end()) return values.back();
  const auto hi = static_cast<std::size_t>(it - grid.begin());
  const auto lo = hi - 1;
  const double t = (x - grid[lo]) / (grid[hi] - grid[lo]);
  return values[lo] + t * (values[hi] - values[lo]);
}

double ramp_up(double x, double lo, double hi) {
  if (x < lo) return 0.0;
  if (x >= hi) return 1.0;
  return (x - lo) / (hi - lo);
}

double ramp_down(double x, double lo, double hi) {
  if (x <= lo) return 1.0;
  if (x > hi) return 0.0;
  return (hi - x) / (hi - lo);
}

double trapezoid_value(const std::array<double, 4>& k, double x) {
  if (x < k[0] || x > k[3]) return 0.0;
  if (x < k[1]) return ramp_up(x, k[0], k[1]);
  if (x <= k[2]) return 1.0;
  return ramp_down(x, k[2], k[3]);
}

double mass(const IfsOnReals& a, const std::vector<double>& values) {
  return simd::trapezoid(a.grid(), values);
}

double energy_of_mass(double m) { return m / (1.0 + m); }

// Unchecked assembly for operations whose output is valid whenever the input
// is; make_ifs still runs its cheap validation pass.
IfsOnReals assemble(std::vector<double> grid, std::vector<double> mu, std::vector<double> nu) {
  return make_ifs(std::move(grid), std::move(mu), std::move(nu));
}

std::vector<double> merged_nodes(const IfsOnReals& a, const IfsOnReals& b) {
  std::vector<double> nodes;
  nodes.reserve(a.size() + b.size());
  std::merge(a.grid().begin(), a.grid().end(), b.grid().begin(), b.grid().end(),
             std::back_inserter(nodes));
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

}  // namespace

double IfsOnReals::membership(double x) const { return interpolate(grid_, mu_, x, 0.0); }

double IfsOnReals::nonmembership(double x) const { return interpolate(grid_, nu_, x, 1.0); }

IfsOnReals make_ifs(std::vector<double> grid, std::vector<double> mu, std::vector<double> nu) {
  if (grid.size() != mu.size() || grid.size() != nu.size()) {
    throw Error(ErrorKind::InputShape, codes::kShape,
                "grid, mu and nu must have equal length (" + std::to_string(grid.size()) + ", " +
                    std::to_string(mu.size()) + ", " + std::to_string(nu.size()) + ")",
                "ifs");
  }
  if (grid.size() < 2) {
    throw Error(ErrorKind::InputShape, codes::kShape, "at least two grid points are required",
                "ifs.grid");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw Error(ErrorKind::Validation, codes::kIfs, "grid must be finite and strictly increasing",
                  "ifs.grid[" + std::to_string(i) + "]");
    }
    if (!(mu[i] >= 0.0 && mu[i] <= 1.0)) {
      throw Error(ErrorKind::Validation, codes::kIfs, "membership outside [0,1]: " + fmt(mu[i]),
                  "ifs.mu[" + std::to_string(i) + "]");
    }
    if (!(nu[i] >= 0.0 && nu[i] <= 1.0)) {
      throw Error(ErrorKind::Validation, codes::kIfs,
                  "nonmembership outside [0,1]: " + fmt(nu[i]),
                  "ifs.nu[" + std::to_string(i) + "]");
    }
  }
  if (simd::max_pair_sum(mu, nu) > 1.0 + kValidityTolerance) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double excess = mu[i] + nu[i] - 1.0;
      if (excess > kValidityTolerance) {
        throw Error(ErrorKind::Validation, codes::kIfs,
                    "validity mu + nu <= 1 violated at grid index " + std::to_string(i) +
                        " (x=" + fmt(grid[i]) + "), excess " + fmt(excess),
                    "ifs[" + std::to_string(i) + "]");
      }
    }
  }
  return IfsOnReals(std::move(grid), std::move(mu), std::move(nu));
}

IfsOnReals embed_fuzzy(std::vector<double> grid, std::span<const double> mu) {
  std::vector<double> m(mu.begin(), mu.end());
  auto nu = simd::one_minus(m);
  return make_ifs(std::move(grid), std::move(m), std::move(nu));
}

double hesitation(const IfsOnReals& a, double x) {
  return 1.0 - a.membership(x) - a.nonmembership(x);
}

IfsOnReals complement(const IfsOnReals& a) { return assemble(a.grid(), a.nu(), a.mu()); }

IfsOnReals resample(const IfsOnReals& a, std::span<const double> grid) {
  std::vector<double> mu(grid.size());
  std::vector<double> nu(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    mu[i] = a.membership(grid[i]);
    nu[i] = a.nonmembership(grid[i]);
  }
  return assemble(std::vector<double>(grid.begin(), grid.end()), std::move(mu), std::move(nu));
}

IfsOnReals set_union(const IfsOnReals& a, const IfsOnReals& b) {
  if (a.grid() == b.grid()) {
    return assemble(a.grid(), simd::pointwise_max(a.mu(), b.mu()),
                    simd::pointwise_min(a.nu(), b.nu()));
  }
  const auto nodes = merged_nodes(a, b);
  const auto ra = resample(a, nodes);
  const auto rb = resample(b, nodes);
  return assemble(nodes, simd::pointwise_max(ra.mu(), rb.mu()),
                  simd::pointwise_min(ra.nu(), rb.nu()));
}

IfsOnReals set_intersection(const IfsOnReals& a, const IfsOnReals& b) {
  if (a.grid() == b.grid()) {
    return assemble(a.grid(), simd::pointwise_min(a.mu(), b.mu()),
                    simd::pointwise_max(a.nu(), b.nu()));
  }
  const auto nodes = merged_nodes(a, b);
  const auto ra = resample(a, nodes);
  const auto rb = resample(b, nodes);
  return assemble(nodes, simd::pointwise_min(ra.mu(), rb.mu()),
                  simd::pointwise_max(ra.nu(), rb.nu()));
}

IfsOnReals necessity(const IfsOnReals& a) {
  return assemble(a.grid(), a.mu(), simd::one_minus(a.mu()));
}

IfsOnReals possibility(const IfsOnReals& a) {
  return assemble(a.grid(), simd::one_minus(a.nu()), a.nu());
}

double energy(const IfsOnReals& a) { return energy_of_mass(mass(a, a.mu())); }

double entropy(const IfsOnReals& a) {
  // A and its complement share a grid, so min/max run node-wise directly.
  const double lower = energy_of_mass(mass(a, simd::pointwise_min(a.mu(), a.nu())));
  const double upper = energy_of_mass(mass(a, simd::pointwise_max(a.mu(), a.nu())));
  if (upper == 0.0) return 0.0;
  return lower / upper;
}

double ignorance(const IfsOnReals& a) {
  const double upper = energy_of_mass(mass(a, simd::one_minus(a.nu())));
  const double lower = energy(a);
  return std::max(0.0, upper - lower);
}

MeasureTriple measures(const IfsOnReals& a) { return {energy(a), entropy(a), ignorance(a)}; }

TrapezoidalIfn make_trapezoidal(std::array<double, 4> mu_knots, std::array<double, 4> co_knots) {
  static constexpr const char* kMuNames = "abcd";
  static constexpr const char* kCoNames = "efgh";
  for (int i = 0; i < 4; ++i) {
    if (!std::isfinite(mu_knots[i]) || !std::isfinite(co_knots[i])) {
      throw Error(ErrorKind::Validation, codes::kViews, "knots must be finite", "knots");
    }
  }
  for (int i = 0; i < 3; ++i) {
    if (mu_knots[i] > mu_knots[i + 1]) {
      throw Error(ErrorKind::Validation, codes::kViews,
                  std::string("knot ordering violated (") + kMuNames[i] + " > " + kMuNames[i + 1] +
                      ")",
                  "mu_knots");
    }
    if (co_knots[i] > co_knots[i + 1]) {
      throw Error(ErrorKind::Validation, codes::kViews,
                  std::string("knot ordering violated (") + kCoNames[i] + " > " + kCoNames[i + 1] +
                      ")",
                  "co_knots");
    }
  }
  const bool lower_side[4] = {true, true, false, false};
  for (int i = 0; i < 4; ++i) {
    const bool ok = lower_side[i] ? co_knots[i] <= mu_knots[i] : co_knots[i] >= mu_knots[i];
    if (!ok) {
      throw Error(ErrorKind::Validation, codes::kViewDominance,
                  std::string("nonmembership dominance violated (") + kCoNames[i] +
                      (lower_side[i] ? " > " : " < ") + kMuNames[i] + ")",
                  "co_knots");
    }
  }
  return TrapezoidalIfn(mu_knots, co_knots);
}

double TrapezoidalIfn::membership(double x) const { return trapezoid_value(mu_knots_, x); }

double TrapezoidalIfn::nonmembership(double x) const {
  return 1.0 - trapezoid_value(co_knots_, x);
}

Interval TrapezoidalIfn::alpha_cut(double alpha) const {
  const auto& [a, b, c, d] = mu_knots_;
  return {a + alpha * (b - a), d - alpha * (d - c)};
}

Interval TrapezoidalIfn::beta_cut(double beta) const {
  const auto& [e, f, g, h] = co_knots_;
  const double level = 1.0 - beta;
  return {e + level * (f - e), h - level * (h - g)};
}

TrapezoidalIfn TrapezoidalIfn::scaled(double factor) const {
  auto mu = mu_knots_;
  auto co = co_knots_;
  for (auto& v : mu) v *= factor;
  for (auto& v : co) v *= factor;
  return make_trapezoidal(mu, co);
}

std::vector<double> merged_grid(double lo, double hi, std::size_t count,
                                std::span<const double> extra) {
  std::vector<double> nodes;
  nodes.reserve(count + extra.size());
  const double span = hi - lo;
  for (std::size_t i = 0; i < count; ++i) {
    nodes.push_back(i + 1 == count ? hi
                                   : lo + span * static_cast<double>(i) /
                                              static_cast<double>(count - 1));
  }
  for (double x : extra) {
    if (x > lo && x < hi) nodes.push_back(x);
  }
  std::sort(nodes.begin(), nodes.end());
  const double tol = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  std::vector<double> out;
  out.reserve(nodes.size());
  for (double x : nodes) {
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  }
  if (out.back() != hi) out.back() = hi;
  return out;
}

IfsOnReals to_grid(const TrapezoidalIfn& t, std::size_t resolution) {
  if (resolution < 2) {
    throw Error(ErrorKind::Validation, codes::kConfig, "resolution must be >= 2",
                "grid_resolution");
  }
  const auto& co = t.co_knots();
  double lo = co[0];
  double hi = co[3];
  if (hi - lo <= 1e-12 * std::max(1.0, std::abs(lo))) {
    const double pad = 1e-6 * std::max(1.0, std::abs(lo));
    lo -= pad;
    hi += pad;
  }
  std::array<double, 8> knots{};
  std::copy(t.mu_knots().begin(), t.mu_knots().end(), knots.begin());
  std::copy(co.begin(), co.end(), knots.begin() + 4);
  auto grid = merged_grid(lo, hi, resolution, knots);
  std::vector<double> mu(grid.size());
  std::vector<double> nu(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    mu[i] = t.membership(grid[i]);
    nu[i] = std::min(t.nonmembership(grid[i]), 1.0 - mu[i]);
  }
  return make_ifs(std::move(grid), std::move(mu), std::move(nu));
}

double membership_centroid(const TrapezoidalIfn& t) {
  const auto& [a, b, c, d] = t.mu_knots();
  const double denom = 3.0 * (d + c - a - b);
  if (denom == 0.0) return a;
  return (d * d + c * c + c * d - a * a - b * b - a * b) / denom;
}

}  // namespace ifbl
