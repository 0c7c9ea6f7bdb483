#pragma once

// Jacobi operator R_0 along the geodesic t -> exp(tv)o, its covariant
// derivatives from nested brackets, and the resulting R_t in a parallel frame.
// All matrices act on m in the orthonormal frame obtained by parallel
// translating the basis; entry (j, k) is <R(E_k), E_j>.

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "nrh/algebra.hpp"

namespace nrh {

class DirectionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedSpaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws DirectionError unless v lies in m and has unit norm (exactly for
/// Radical, within 1e-12 for double).
template <class T>
void require_unit_m_vector(const AlgebraSpec& spec, const AlgVec<T>& v);

/// Matrix of X -> (1/2)[v, X]_m on m.
template <class T>
Endo<T> lambda_matrix(const AlgebraSpec& spec, const AlgVec<T>& v);

/// R_0(X) = -[[X,v]_h, v] - (1/4)[[X,v]_m, v]_m.
template <class T>
Endo<T> jacobi_operator(const AlgebraSpec& spec, const AlgVec<T>& v);

/// R^(n)_0 from the alternating sum of bracket chains with one h-projection:
///   (-1)^(n-1) 2^n R^(n)_0(X) = sum_i (-1)^i C(n,i) [..[[X,v]_m ..]_h^(i+1) .., v]_m
/// Chains are built innermost-out: B1 = [X,v], B_{j+1} = [pi_j B_j, v] with
/// pi_j the h-projection for j = i+1 and the m-projection otherwise.
template <class T>
Endo<T> jacobi_derivative(const AlgebraSpec& spec, const AlgVec<T>& v, int n);

/// (1/2) <[[[Q1,Qi]_h,Qj]_m,Qk]_m - [[[Q1,Qi]_m,Qj]_h,Qk]_m, Q1>, 1-based
/// indices in m. With these values R^(1)_0(1,1) = sum x_i x_j x_k T[i,j,k].
Radical t1_component(const AlgebraSpec& spec, int i, int j, int k);

/// exp(t S) for skew-symmetric S, from the real Schur form (rotation
/// blocks). Falls back to Pade scaling-and-squaring if the Schur form is
/// not block diagonal.
Eigen::MatrixXd skew_exp(const Eigen::MatrixXd& skew, double t);

/// exp(t Lambda(v)) R_0 exp(-t Lambda(v)).
Eigen::MatrixXd conjugated_jacobi(const AlgebraSpec& spec, const AlgVec<double>& v, double t);

/// R_0, R^(1)_0, R^(2)_0 for one direction.
template <class T>
struct CurvatureJet {
  Endo<T> r0;
  Endo<T> r1;
  Endo<T> r2;
};

template <class T>
CurvatureJet<T> curvature_jet(const AlgebraSpec& spec, const AlgVec<T>& v);

/// R^(n)_0 predicted by the rank-2 pattern R^(2k) = (-1)^(k-1) R^(2),
/// R^(2k+1) = (-1)^k R^(1). n = 0 returns R_0.
template <class T>
Endo<T> derivative_pattern(const CurvatureJet<T>& jet, int n);

/// R_t = constant + sin(t) sin_coeff + cos(t) cos_coeff.
template <class T>
struct ClosedFormJacobi {
  Endo<T> constant;   // R_0 + R^(2)_0
  Endo<T> sin_coeff;  // R^(1)_0
  Endo<T> cos_coeff;  // -R^(2)_0
  CurvatureJet<T> jet;

  /// n-th covariant derivative R^(n)_t (n = 0 gives R_t).
  Eigen::MatrixXd at(double t, int n = 0) const;
};

/// Builds the closed form from a jet without checking the pattern.
template <class T>
ClosedFormJacobi<T> closed_form_from_jet(CurvatureJet<T> jet);

/// Closed form after checking R^(3)_0 = -R^(1)_0 and R^(4)_0 = -R^(2)_0
/// (exactly, or within 1e-9 relative in double). Throws
/// UnsupportedSpaceError when the pattern fails.
template <class T>
ClosedFormJacobi<T> closed_form_jacobi(const AlgebraSpec& spec, const AlgVec<T>& v);

struct OsculatingProfile {
  enum class Status { determined, locally_symmetric, undetermined };
  Status status = Status::undetermined;
  /// Smallest r with R^(r+1) in span{R^(1)..R^(r)}; 0 unless determined.
  int rank = 0;
  /// R^(r+1) = sum_i coefficients[i] R^(i+1).
  std::vector<double> coefficients;
  /// Set when computed in exact arithmetic.
  std::vector<Radical> exact_coefficients;
  double residual = 0.0;
};

OsculatingProfile osculating_rank(const AlgebraSpec& spec, const AlgVec<double>& v, int max_n, double tol = 1e-9);
/// Exact linear algebra over the radical field; residual is 0 when determined.
OsculatingProfile osculating_rank(const AlgebraSpec& spec, const AlgVec<Radical>& v, int max_n);

std::string describe(const OsculatingProfile& profile);

/// Entry-wise double conversion.
Eigen::MatrixXd to_double(const Endo<Radical>& m);
inline Eigen::MatrixXd to_double(const Endo<double>& m) { return m; }

}  // namespace nrh
