#pragma once

// Oracles and reference data shared by the unit tests and the acceptance run.
// Nothing here calls into the quantity it is used to check.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "nrh/algebra.hpp"
#include "nrh/curvature.hpp"
#include "nrh/jacobi.hpp"
#include "nrh/sampling.hpp"
#include "nrh/scalars.hpp"

namespace nrh::testing {

inline Radical r15() { return Radical::sqrt_of(15); }

// Non-vanishing <(nabla_Qk R)(Q1,Qi)Qj, Q1> as printed, keyed (i, j, k).
struct ComponentEntry {
  int i, j, k;
  Radical printed;
};

inline std::vector<ComponentEntry> printed_t1() {
  const Radical h(Rational(3, 2));
  const Radical s = r15() * Radical(Rational(1, 2));
  const Radical f = r15();
  return {
      {2, 6, 4, -h}, {2, 7, 5, h},  {3, 6, 5, -h}, {3, 7, 4, -h}, {4, 2, 6, h},  {4, 3, 7, -h}, {4, 4, 6, -s},
      {4, 5, 7, -s}, {4, 6, 2, -h}, {4, 6, 4, -f}, {4, 7, 3, -h}, {4, 7, 5, -f}, {5, 2, 7, -h}, {5, 3, 6, -h},
      {5, 4, 7, -s}, {5, 5, 6, s},  {5, 6, 3, -h}, {5, 6, 5, f},  {5, 7, 2, h},  {5, 7, 4, -f}, {6, 2, 4, h},
      {6, 3, 5, h},  {6, 4, 4, -s}, {6, 5, 5, -s}, {7, 2, 5, -h}, {7, 3, 4, h},  {7, 4, 5, -s}, {7, 5, 4, -s},
  };
}

// The (1,1) entry of R^(1)_0 as a polynomial in the m-coordinates x1..x7.
inline Radical r11_polynomial(const AlgVec<Radical>& x) {
  return Radical(-2) * r15() * (x(3) * x(3) * x(5) - x(4) * x(4) * x(5) + Radical(2) * x(3) * x(4) * x(6));
}

inline double r11_polynomial(const AlgVec<double>& x) {
  return -2.0 * std::sqrt(15.0) * (x(3) * x(3) * x(5) - x(4) * x(4) * x(5) + 2.0 * x(3) * x(4) * x(6));
}

// sum over (i,j,k) of T[i,j,k] x_i x_j x_k for a table keyed as printed_t1.
template <class T>
T cubic_form(const std::vector<ComponentEntry>& table, const AlgVec<T>& x);

template <>
inline Radical cubic_form<Radical>(const std::vector<ComponentEntry>& table, const AlgVec<Radical>& x) {
  Radical sum;
  for (const auto& e : table) sum = sum + e.printed * x(e.i - 1) * x(e.j - 1) * x(e.k - 1);
  return sum;
}

template <>
inline double cubic_form<double>(const std::vector<ComponentEntry>& table, const AlgVec<double>& x) {
  double sum = 0.0;
  for (const auto& e : table) sum += e.printed.to_double() * x(e.i - 1) * x(e.j - 1) * x(e.k - 1);
  return sum;
}

inline AlgVec<double> random_direction(const AlgebraSpec& spec, std::mt19937_64& rng) {
  return from_m<double>(spec, random_unit_vector(rng, spec.dim_m()));
}

inline AlgVec<Radical> rational_direction(const AlgebraSpec& spec, std::mt19937_64& rng) {
  return from_m<Radical>(spec, rational_unit_vector(rng, spec.dim_m()));
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Coefficient of t^n in det A_t straight from the permutation expansion:
// a_n = sum over (r_1..r_d), sum r = n, of sum_sigma sgn(sigma) prod_l C_{r_l}(sigma(l), l).
inline double permutation_det_coeff(const TaylorTensor& series, int n) {
  const int d = static_cast<int>(series.coeffs[1].rows());
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  double total = 0.0;
  do {
    int inversions = 0;
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b)
        if (perm[a] > perm[b]) ++inversions;
    const double sign = inversions % 2 == 0 ? 1.0 : -1.0;
    // Distribute n over d columns, each r_l >= 1.
    const int extra = n - d;
    if (extra < 0) return 0.0;
    auto recurse = [&](auto&& self, int col, int left, double prod) -> double {
      if (prod == 0.0) return 0.0;
      if (col == d - 1) {
        const int k = 1 + left;
        if (k > series.order) return 0.0;
        return prod * series.coeffs[k](perm[col], col);
      }
      double acc = 0.0;
      for (int take = 0; take <= left; ++take) {
        const int k = 1 + take;
        if (k > series.order) break;
        acc += self(self, col + 1, left - take, prod * series.coeffs[k](perm[col], col));
      }
      return acc;
    };
    total += sign * recurse(recurse, 0, extra, 1.0);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace nrh::testing
