#pragma once

// Jacobi tensor A_t along a geodesic: A'' = -R_t A, A_0 = 0, A'_0 = I.
// Columns of A_t are the Jacobi fields with Y(0) = 0 and Y'(0) = E_k.

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "nrh/curvature.hpp"

namespace nrh {

inline constexpr int kDefaultSeriesOrder = 40;

class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double bound) : std::runtime_error(what), bound_(bound) {}
  double bound() const { return bound_; }

 private:
  double bound_;
};

/// Taylor coefficients C_k = A^(k)_0 / k!, k = 0..order.
struct TaylorTensor {
  int order = 0;
  std::vector<Eigen::MatrixXd> coeffs;
};

/// Leibniz recurrence A^(k+2) = -sum_j C(k,j) R^(j)_0 A^(k-j) with the R^(j)
/// supplied by the rank-2 pattern, so only R_0, R^(1)_0, R^(2)_0 are used.
TaylorTensor taylor_series(const CurvatureJet<double>& jet, int order = kDefaultSeriesOrder);

/// Same recurrence about a point t0 of the geodesic, from the jet of R at t0
/// and the values A(t0), A'(t0). Coefficients are in powers of (t - t0).
TaylorTensor taylor_series(const CurvatureJet<double>& jet_at_t0, int order, const Eigen::MatrixXd& a0,
                           const Eigen::MatrixXd& da0);

/// Convenience: jet of a unit direction, after checking the rank-2 pattern.
TaylorTensor taylor_series(const AlgebraSpec& spec, const AlgVec<double>& v, int order = kDefaultSeriesOrder);

struct SeriesEvaluation {
  Eigen::MatrixXd a;
  Eigen::MatrixXd da;
  double tail_bound = 0.0;
};

/// Heuristic bound on the truncated tail at |t|:
///   M |t|^N * N / (N - |t| rho)
/// with M |t|^N the larger of the last two retained terms and rho the
/// observed growth rate sqrt(k (k-1) |C_k| / |C_{k-2}|) over the last few k.
/// Infinite when N <= |t| rho.
double tail_bound(const TaylorTensor& series, double t);

/// Horner evaluation of A_t and A'_t. Throws TruncationError when the tail
/// bound exceeds tol.
SeriesEvaluation evaluate_A(const TaylorTensor& series, double t, double tol = 1e-9);

/// A_t only, without the tail check.
Eigen::MatrixXd evaluate_A_unchecked(const TaylorTensor& series, double t);

/// Chain of expansions of the same order about 0, w, 2w, ... covering
/// [0, t_max] (or [t_max, 0]), each started from the previous one. Used when
/// a single expansion about 0 does not reach t_max within tol.
struct PiecewiseTaylor {
  double width = 0.0;  // signed
  std::vector<TaylorTensor> pieces;
  double tail_bound = 0.0;  // worst over pieces, at full width

  SeriesEvaluation evaluate(double t) const;
  Eigen::MatrixXd evaluate_A(double t) const;
};

/// Fewest equal pieces (at most max_pieces) whose tail bounds all stay
/// within tol; throws TruncationError otherwise.
PiecewiseTaylor taylor_pieces(const ClosedFormJacobi<double>& rt, double t_max, int order = kDefaultSeriesOrder,
                              double tol = 1e-9, int max_pieces = 64);

struct OdeState {
  Eigen::MatrixXd a;
  Eigen::MatrixXd da;
};

/// Classical RK4 on A'' = -R_t A from (0, I) with R_t from the closed form.
/// The last step is shortened to land on t_end.
OdeState ode_oracle(const ClosedFormJacobi<double>& rt, double t_end, double step = 1e-3);

/// Y(t) = A_t w.
Eigen::VectorXd jacobi_field(const TaylorTensor& series, const Eigen::VectorXd& w, double t, double tol = 1e-9);

}  // namespace nrh
