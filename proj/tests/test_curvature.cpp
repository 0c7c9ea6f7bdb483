#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "support.hpp"

using namespace nrh;
using namespace nrh::testing;

namespace {

const AlgebraSpec& v1() {
  static const AlgebraSpec spec = sp2_su2();
  return spec;
}

template <class T>
AlgVec<T> e(const AlgebraSpec& spec, int one_based) {
  return basis_vector<T>(spec, one_based - 1);
}

template <class T>
AlgVec<T> br(const AlgVec<T>& x, const AlgVec<T>& y) {
  return bracket(v1(), x, y);
}

template <class T>
AlgVec<T> pm(const AlgVec<T>& x) {
  return project(v1(), x, Part::m);
}

template <class T>
AlgVec<T> ph(const AlgVec<T>& x) {
  return project(v1(), x, Part::h);
}

// Column k of an operator on m given by a vector map.
template <class T, class F>
Endo<T> operator_matrix(const AlgebraSpec& spec, F&& f) {
  const int d = spec.dim_m();
  Endo<T> out(d, d);
  for (int k = 0; k < d; ++k) {
    const AlgVec<T> y = f(e<T>(spec, k + 1));
    for (int j = 0; j < d; ++j) out(j, k) = y(j);
  }
  return out;
}

// R_0(X) = -[[X,v]_h, v] - 1/4 [[X,v]_m, v]_m, vector by vector.
template <class T>
Endo<T> r0_oracle(const AlgVec<T>& v) {
  return operator_matrix<T>(v1(), [&](const AlgVec<T>& x) {
    const AlgVec<T> xv = br(x, v);
    return AlgVec<T>(pm<T>(-br<T>(ph(xv), v) - T(Rational(1, 4)) * pm<T>(br<T>(pm(xv), v))));
  });
}

// n brackets deep with m-projections, except h after bracket `hpos`.
AlgVec<double> chain(const AlgVec<double>& x, const AlgVec<double>& v, int total, int hpos) {
  AlgVec<double> b = br(x, v);
  for (int j = 1; j < total; ++j) b = br<double>(j == hpos ? ph(b) : pm(b), v);
  return pm(b);
}

Eigen::MatrixXd dbl(const Endo<Radical>& m) { return to_double(m); }

AlgebraSpec off_pattern_space() {
  AlgebraSpec s("odd", 4, 3);
  s.set_bracket(0, 1, {{3, Radical(1)}, {2, Radical(1)}});
  s.set_bracket(3, 0, {{1, Radical(1)}});
  s.set_bracket(3, 1, {{0, Radical(-1)}});
  s.set_bracket(0, 2, {{0, Radical(2)}});
  return s;
}

}  // namespace

TEST_CASE("lambda is half the m-bracket") {
  const Endo<Radical> lam = lambda_matrix(v1(), e<Radical>(v1(), 1));
  // [Q1, Q2] = Q3
  CHECK(lam(2, 1) == Radical(Rational(1, 2)));
  CHECK(lam(1, 2) == Radical(Rational(-1, 2)));
  CHECK(lam.col(0) == Endo<Radical>::Zero(7, 1).col(0).eval());
  // skew on every direction
  std::mt19937_64 rng(31);
  for (int n = 0; n < 10; ++n) {
    const AlgVec<Radical> v = rational_direction(v1(), rng);
    const Endo<Radical> l = lambda_matrix(v1(), v);
    CHECK(l == Endo<Radical>(-l.transpose()));
  }
}

TEST_CASE("R_0 at Q1") {
  const Endo<Radical> r0 = jacobi_operator(v1(), e<Radical>(v1(), 1));
  const Rational want[7] = {0, Rational(1, 4), Rational(1, 4), Rational(25, 4), Rational(25, 4), Rational(1, 4),
                            Rational(1, 4)};
  for (int j = 0; j < 7; ++j)
    for (int k = 0; k < 7; ++k) CHECK(r0(j, k) == Radical(j == k ? want[j] : Rational(0)));
}

TEST_CASE("R_0 matches the bracket formula, exactly") {
  std::mt19937_64 rng(32);
  for (int n = 0; n < 10; ++n) {
    const AlgVec<Radical> v = rational_direction(v1(), rng);
    CHECK(jacobi_operator(v1(), v) == r0_oracle(v));
  }
}

TEST_CASE("R_0 is symmetric, kills v, and is positive semidefinite") {
  std::mt19937_64 rng(33);
  for (int n = 0; n < 50; ++n) {
    const AlgVec<Radical> v = rational_direction(v1(), rng);
    const Endo<Radical> r0 = jacobi_operator(v1(), v);
    REQUIRE(r0 == Endo<Radical>(r0.transpose()));
    const AlgVec<Radical> vm = v.head(7);
    REQUIRE((r0 * vm).eval() == AlgVec<Radical>::Zero(7).eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dbl(r0));
    REQUIRE(es.eigenvalues().minCoeff() > -1e-12);
  }
}

TEST_CASE("derivatives: n = 1 and n = 3 against explicit chains") {
  std::mt19937_64 rng(34);
  for (int n = 0; n < 5; ++n) {
    const AlgVec<double> v = random_direction(v1(), rng);
    const Eigen::MatrixXd r1 = operator_matrix<double>(v1(), [&](const AlgVec<double>& x) {
      return AlgVec<double>(0.5 * (chain(x, v, 3, 1) - chain(x, v, 3, 2)));
    });
    CHECK(max_abs(jacobi_derivative(v1(), v, 1) - r1) < 1e-12);
    const Eigen::MatrixXd r3 = operator_matrix<double>(v1(), [&](const AlgVec<double>& x) {
      return AlgVec<double>((chain(x, v, 5, 1) - 3.0 * chain(x, v, 5, 2) + 3.0 * chain(x, v, 5, 3) -
                             chain(x, v, 5, 4)) /
                            8.0);
    });
    CHECK(max_abs(jacobi_derivative(v1(), v, 3) - r3) < 1e-12);
  }
}

TEST_CASE("derivatives are symmetric, exactly") {
  std::mt19937_64 rng(35);
  for (int n = 0; n < 50; ++n) {
    const AlgVec<Radical> v = rational_direction(v1(), rng);
    for (int k = 1; k <= 2; ++k) {
      const Endo<Radical> r = jacobi_derivative(v1(), v, k);
      REQUIRE(r == Endo<Radical>(r.transpose()));
    }
  }
}

TEST_CASE("t1 components") {
  CHECK(t1_component(v1(), 2, 6, 4) == Radical(Rational(-3, 2)));
  CHECK(t1_component(v1(), 4, 6, 4) == Radical::term(-1, 15));
  CHECK(t1_component(v1(), 4, 3, 7) == Radical(Rational(3, 2)));
  CHECK(t1_component(v1(), 1, 1, 1).is_zero());
  CHECK_THROWS_AS(t1_component(v1(), 0, 1, 1), std::out_of_range);
}

TEST_CASE("closed form at special times") {
  std::mt19937_64 rng(36);
  const AlgVec<double> v = random_direction(v1(), rng);
  const ClosedFormJacobi<double> cf = closed_form_jacobi(v1(), v);
  const CurvatureJet<double> jet = curvature_jet(v1(), v);
  CHECK(max_abs(cf.at(0.0) - jet.r0) < 1e-13);
  CHECK(max_abs(cf.at(std::numbers::pi) - (jet.r0 + 2.0 * jet.r2)) < 1e-12);
  CHECK(max_abs(cf.at(std::numbers::pi / 2) - (jet.r0 + jet.r2 + jet.r1)) < 1e-12);
  for (int n = 1; n <= 6; ++n) CHECK(max_abs(cf.at(0.0, n) - derivative_pattern(jet, n)) < 1e-12);
}

TEST_CASE("closed form derivatives by finite differences") {
  std::mt19937_64 rng(37);
  const double h = 1e-3;
  for (int n = 0; n < 10; ++n) {
    const AlgVec<double> v = random_direction(v1(), rng);
    const ClosedFormJacobi<double> cf = closed_form_jacobi(v1(), v);
    const double t = 0.7;
    for (int k = 1; k <= 3; ++k) {
      const Eigen::MatrixXd fd = (cf.at(t + h, k - 1) - cf.at(t - h, k - 1)) / (2 * h);
      CHECK(max_abs(fd - cf.at(t, k)) < 1e-5);
    }
    // and the conjugation, from t = 0
    const Eigen::MatrixXd fd1 = (conjugated_jacobi(v1(), v, h) - conjugated_jacobi(v1(), v, -h)) / (2 * h);
    CHECK(max_abs(fd1 - jacobi_derivative(v1(), v, 1)) < 1e-5);
  }
}

TEST_CASE("conjugation keeps the spectrum of R_0") {
  std::mt19937_64 rng(38);
  const AlgVec<double> v = random_direction(v1(), rng);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> base(jacobi_operator(v1(), v), Eigen::EigenvaluesOnly);
  for (double t : {0.3, 1.0, 2.5, -4.0}) {
    const Eigen::MatrixXd rt = conjugated_jacobi(v1(), v, t);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (rt + rt.transpose()), Eigen::EigenvaluesOnly);
    CHECK((es.eigenvalues() - base.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(max_abs(rt - rt.transpose()) < 1e-12);
  }
}

TEST_CASE("skew exponential is orthogonal and matches the series") {
  std::mt19937_64 rng(39);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) a(i, j) = g(rng);
  const Eigen::MatrixXd s = a - a.transpose();
  const Eigen::MatrixXd q = skew_exp(s, 0.4);
  CHECK(max_abs(q * q.transpose() - Eigen::MatrixXd::Identity(5, 5)) < 1e-13);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(5, 5), term = sum;
  for (int k = 1; k < 60; ++k) {
    term = term * (0.4 * s) / k;
    sum += term;
  }
  CHECK(max_abs(q - sum) < 1e-12);
}

TEST_CASE("osculating rank") {
  std::mt19937_64 rng(40);
  const AlgVec<Radical> v = rational_direction(v1(), rng);
  const OsculatingProfile p = osculating_rank(v1(), v, 6);
  REQUIRE(p.status == OsculatingProfile::Status::determined);
  CHECK(p.rank == 2);
  REQUIRE(p.exact_coefficients.size() == 2);
  CHECK(p.exact_coefficients[0] == Radical(-1));
  CHECK(p.exact_coefficients[1].is_zero());

  const OsculatingProfile pd = osculating_rank(v1(), random_direction(v1(), rng), 6);
  CHECK(pd.rank == 2);
  CHECK(pd.coefficients[0] == doctest::Approx(-1.0));
  CHECK(pd.coefficients[1] == doctest::Approx(0.0).epsilon(1e-9));

  CHECK(osculating_rank(v1(), e<Radical>(v1(), 1), 6).status == OsculatingProfile::Status::locally_symmetric);
  const AlgebraSpec su2 = su2_biinv();
  CHECK(osculating_rank(su2, e<Radical>(su2, 1), 6).status == OsculatingProfile::Status::locally_symmetric);
  CHECK_FALSE(describe(p).empty());
}

TEST_CASE("rank-2 pattern for n = 3, 5, 6") {
  std::mt19937_64 rng(41);
  const AlgVec<Radical> v = rational_direction(v1(), rng);
  const CurvatureJet<Radical> jet = curvature_jet(v1(), v);
  for (int n : {3, 5, 6}) CHECK(jacobi_derivative(v1(), v, n) == derivative_pattern(jet, n));
  CHECK(derivative_pattern(jet, 3) == Endo<Radical>(-jet.r1));
  CHECK(derivative_pattern(jet, 4) == Endo<Radical>(-jet.r2));
  CHECK(derivative_pattern(jet, 5) == jet.r1);
}

TEST_CASE("R_0 and R_t do not commute in general") {
  std::mt19937_64 rng(42);
  double worst = 0.0;
  for (int n = 0; n < 20; ++n) {
    const AlgVec<double> v = random_direction(v1(), rng);
    const Eigen::MatrixXd r0 = jacobi_operator(v1(), v);
    for (double t : {0.5, 1.0, 2.0}) {
      const Eigen::MatrixXd rt = conjugated_jacobi(v1(), v, t);
      worst = std::max(worst, max_abs(r0 * rt - rt * r0));
    }
  }
  CHECK(worst > 1e-3);
}

TEST_CASE("a space off the pattern has no closed form") {
  const AlgebraSpec s = off_pattern_space();
  AlgVec<double> v = AlgVec<double>::Zero(4);
  v(0) = 0.6;
  v(1) = 0.8;
  CHECK_THROWS_AS(closed_form_jacobi(s, v), UnsupportedSpaceError);
}

TEST_CASE("direction errors") {
  AlgVec<double> v = AlgVec<double>::Zero(10);
  CHECK_THROWS_AS(jacobi_operator(v1(), v), DirectionError);
  v(0) = 2.0;
  CHECK_THROWS_AS(jacobi_operator(v1(), v), DirectionError);
  v(0) = 0.0;
  v(8) = 1.0;
  CHECK_THROWS_AS(jacobi_operator(v1(), v), DirectionError);
  CHECK_THROWS_AS(jacobi_operator(v1(), AlgVec<double>::Zero(7).eval()), DirectionError);
  AlgVec<Radical> x = e<Radical>(v1(), 1) * Radical(Rational(3, 5));
  CHECK_THROWS_AS(jacobi_operator(v1(), x), DirectionError);
  x = x + e<Radical>(v1(), 2) * Radical(Rational(4, 5));
  CHECK_NOTHROW(jacobi_operator(v1(), x));
}
