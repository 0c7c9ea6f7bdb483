#pragma once

// Volume density theta(tu) = |det A_t| / t^d, geodesic-sphere areas and
// geodesic-ball volumes by Monte Carlo over the unit sphere of m, and the
// power-series coefficients of det A_t.

#include <cstdint>
#include <vector>

#include "nrh/jacobi.hpp"

namespace nrh {

enum class TIntegrator { simpson, gauss };

struct QuadratureConfig {
  long sample_count = 100000;
  std::uint64_t seed = 1;
  TIntegrator t_integrator = TIntegrator::simpson;
  /// Simpson: total node count over [0, r] (odd). Gauss: nodes per grid interval.
  int t_nodes = 201;
  int series_order = kDefaultSeriesOrder;
  /// Largest admissible Taylor tail bound at any evaluated radius.
  double tolerance = 1e-9;
  /// Worker threads; 0 picks the hardware concurrency. Never affects results.
  int threads = 0;
};

struct VolumeRow {
  double t = 0.0;
  double theta_mean = 0.0;
  double theta_stderr = 0.0;
  double area = 0.0;
  double volume = 0.0;  // cumulative over [0, t]
};

struct Moment {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Area of the unit sphere S^(dim-1): 2 pi^(dim/2) / Gamma(dim/2).
double unit_sphere_area(int dim);

/// |det A_t| / t^d for one direction; 1 at t = 0. The spec overload
/// re-centres the expansion when one series about 0 does not reach t.
double theta(const TaylorTensor& series, double t, double tol = 1e-9);
double theta(const AlgebraSpec& spec, const AlgVec<double>& v, double t, int order = kDefaultSeriesOrder,
             double tol = 1e-9);

/// a_0..a_{n_max}: coefficients of t^n in det A_t, from Gaussian elimination
/// over truncated power series on A_t / t. Throws std::invalid_argument when
/// the series order is below n_max - d + 1.
std::vector<double> det_series(const TaylorTensor& series, int n_max);
double det_series_coeff(const TaylorTensor& series, int n);

struct AreaEstimate {
  double area = 0.0;
  double std_error = 0.0;
  double theta_mean = 0.0;
  double theta_stderr = 0.0;
};

/// S(t) = vol(S^(d-1)) t^(d-1) E_u[theta(tu)].
AreaEstimate sphere_area(const AlgebraSpec& spec, double t, const QuadratureConfig& quad);

/// V(r) = int_0^r S(t) dt with the configured 1-D rule; same samples at every node.
double ball_volume(const AlgebraSpec& spec, double r, const QuadratureConfig& quad);

/// One row per grid radius (ascending, positive), cumulative volume.
std::vector<VolumeRow> volume_table(const AlgebraSpec& spec, const std::vector<double>& radii,
                                    const QuadratureConfig& quad);

/// Sphere averages of a_k(u), k = 0..k_max, with standard errors.
std::vector<Moment> det_moments(const AlgebraSpec& spec, int k_max, const QuadratureConfig& quad);

/// normalization * sum_{k = d, d+2, ..., k <= 2 n_max + 1} M_k t^(k-1).
double area_series_from_moments(const std::vector<Moment>& moments, int dim, double t, int n_max,
                                double normalization);

/// Series form of S(t) with the plain sphere average and vol(S^(d-1)).
double area_series(const AlgebraSpec& spec, double t, int n_max, const QuadratureConfig& quad);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace nrh
