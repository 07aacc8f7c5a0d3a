#pragma once

// Intuitionistic fuzzy sets on a bounded stretch of the real line.
//
// A set is stored as membership/nonmembership samples on a strictly
// increasing grid and is piecewise linear between nodes. Outside the grid it
// is mu = 0, nu = 1, so both mu and 1 - nu have finite mass and the energy
// measure reduces to a trapezoid-rule integral.

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace ifbl {

inline constexpr double kValidityTolerance = 1e-12;
inline constexpr std::size_t kDefaultGridResolution = 1001;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
  bool contains(const Interval& other, double tol = 0.0) const {
    return other.lo >= lo - tol && other.hi <= hi + tol;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

class IfsOnReals {
 public:
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& mu() const { return mu_; }
  const std::vector<double>& nu() const { return nu_; }
  std::size_t size() const { return grid_.size(); }
  Interval support() const { return {grid_.front(), grid_.back()}; }

  /// Piecewise-linear evaluation; (0, 1) outside the support.
  double membership(double x) const;
  double nonmembership(double x) const;

  friend bool operator==(const IfsOnReals&, const IfsOnReals&) = default;

 private:
  IfsOnReals(std::vector<double> grid, std::vector<double> mu, std::vector<double> nu)
      : grid_(std::move(grid)), mu_(std::move(mu)), nu_(std::move(nu)) {}

  friend IfsOnReals make_ifs(std::vector<double> grid, std::vector<double> mu,
                             std::vector<double> nu);

  std::vector<double> grid_;
  std::vector<double> mu_;
  std::vector<double> nu_;
};

/// Validating constructor. Rejects mismatched lengths, fewer than two nodes,
/// a non-increasing grid, degrees outside [0,1] and any node where
/// mu + nu > 1 (reports the first offending index and the excess).
IfsOnReals make_ifs(std::vector<double> grid, std::vector<double> mu, std::vector<double> nu);

/// Embeds an ordinary fuzzy set: nu = 1 - mu, zero hesitation.
IfsOnReals embed_fuzzy(std::vector<double> grid, std::span<const double> mu);

double hesitation(const IfsOnReals& a, double x);

IfsOnReals complement(const IfsOnReals& a);
IfsOnReals set_union(const IfsOnReals& a, const IfsOnReals& b);
IfsOnReals set_intersection(const IfsOnReals& a, const IfsOnReals& b);

/// A* = (mu, 1 - mu)
IfsOnReals necessity(const IfsOnReals& a);
/// A_* = (1 - nu, nu)
IfsOnReals possibility(const IfsOnReals& a);

/// Resamples onto `grid` using the outside convention.
IfsOnReals resample(const IfsOnReals& a, std::span<const double> grid);

struct MeasureTriple {
  double energy = 0.0;
  double entropy = 0.0;
  double ignorance = 0.0;
};

/// m / (1 + m) with m the trapezoid-rule mass of mu.
double energy(const IfsOnReals& a);
/// Kosko ratio energy(A and not A) / energy(A or not A); 0 when both vanish.
double entropy(const IfsOnReals& a);
/// energy(possibility) - energy(necessity). Nonnegative by construction.
double ignorance(const IfsOnReals& a);
MeasureTriple measures(const IfsOnReals& a);

/// Trapezoidal intuitionistic fuzzy number. mu is the trapezoid on
/// (a, b, c, d); 1 - nu is the trapezoid on (e, f, g, h). Dominance
/// e <= a, f <= b, c <= g, d <= h makes mu <= 1 - nu everywhere.
class TrapezoidalIfn {
 public:
  const std::array<double, 4>& mu_knots() const { return mu_knots_; }
  const std::array<double, 4>& co_knots() const { return co_knots_; }

  double membership(double x) const;
  double nonmembership(double x) const;

  /// {x : mu(x) >= alpha} for alpha in (0, 1]. alpha = 0 yields the closed
  /// support [a, d].
  Interval alpha_cut(double alpha) const;
  /// {x : nu(x) <= beta} for beta in [0, 1). beta = 1 yields [e, h].
  Interval beta_cut(double beta) const;

  /// Same set with every knot multiplied by `factor` (> 0).
  TrapezoidalIfn scaled(double factor) const;

  friend bool operator==(const TrapezoidalIfn&, const TrapezoidalIfn&) = default;

 private:
  TrapezoidalIfn(std::array<double, 4> mu, std::array<double, 4> co)
      : mu_knots_(mu), co_knots_(co) {}
  friend TrapezoidalIfn make_trapezoidal(std::array<double, 4>, std::array<double, 4>);

  std::array<double, 4> mu_knots_;
  std::array<double, 4> co_knots_;
};

/// Throws validation.views / validation.views.dominance naming the failed
/// ordering or dominance relation.
TrapezoidalIfn make_trapezoidal(std::array<double, 4> mu_knots, std::array<double, 4> co_knots);

/// Uniform grid of `resolution` points over [e, h] merged with the eight
/// knots. A point view is padded to a tiny interval around the point.
IfsOnReals to_grid(const TrapezoidalIfn& t, std::size_t resolution = kDefaultGridResolution);

/// Centroid of the membership trapezoid.
double membership_centroid(const TrapezoidalIfn& t);

/// Uniform grid of `count` points on [lo, hi] merged with `extra` points
/// inside the interval; near-duplicates within 1e-12 relative are dropped.
std::vector<double> merged_grid(double lo, double hi, std::size_t count,
                                std::span<const double> extra);

}  // namespace ifbl
