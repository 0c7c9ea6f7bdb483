#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "support.hpp"

using namespace nrh;
using namespace nrh::testing;

namespace {

const AlgebraSpec& v1() {
  static const AlgebraSpec spec = sp2_su2();
  return spec;
}

AlgVec<Radical> q(int one_based) { return basis_vector<Radical>(v1(), one_based - 1); }

Radical rad(const Rational& c, int radicand = 1) { return Radical::term(c, radicand); }

AlgVec<Radical> random_exact(const AlgebraSpec& spec, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> c(-4, 4);
  std::uniform_int_distribution<int> slot(0, 7);
  AlgVec<Radical> x(spec.dim_g());
  for (int i = 0; i < spec.dim_g(); ++i) {
    std::array<Rational, Radical::kDim> coeffs;
    coeffs[0] = c(rng);
    coeffs[static_cast<std::size_t>(slot(rng))] += Rational(c(rng), 2);
    x(i) = Radical::from_coeffs(coeffs);
  }
  return x;
}

std::complex<double> entry(const Mat4c& m, int i, int j) { return m(i - 1, j - 1); }

}  // namespace

TEST_CASE("bracket table entries") {
  CHECK(bracket(v1(), q(1), q(2)) == q(3));
  // [Q4, Q10] = -2 sqrt(3/2) Q1 - sqrt(5/2) Q7
  const AlgVec<Radical> want = q(1) * rad(-1, 6) + q(7) * rad(Rational(-1, 2), 10);
  CHECK(bracket(v1(), q(4), q(10)) == want);
  // [Q1, Q4] = -Q5 - sqrt6 Q10
  CHECK(bracket(v1(), q(1), q(4)) == (-q(5) - q(10) * rad(1, 6)).eval());
  CHECK(bracket(v1(), q(8), q(9)) == q(10));
}

TEST_CASE("bracket is antisymmetric and bilinear on random exact vectors") {
  std::mt19937_64 rng(21);
  for (int n = 0; n < 20; ++n) {
    const AlgVec<Radical> x = random_exact(v1(), rng), y = random_exact(v1(), rng), z = random_exact(v1(), rng);
    const Radical a = rad(Rational(n - 7, 3)), b = rad(1, 2);
    REQUIRE(bracket(v1(), x, x) == AlgVec<Radical>::Zero(10).eval());
    REQUIRE(bracket(v1(), x, y) == (-bracket(v1(), y, x)).eval());
    REQUIRE(bracket(v1(), (x * a + y * b).eval(), z) == (bracket(v1(), x, z) * a + bracket(v1(), y, z) * b).eval());
  }
}

TEST_CASE("projections") {
  const AlgVec<Radical> zero = AlgVec<Radical>::Zero(10);
  CHECK(project(v1(), q(9), Part::m) == zero);
  CHECK(project(v1(), q(3), Part::m) == q(3));
  CHECK(project(v1(), bracket(v1(), q(4), q(10)), Part::h) == zero);
  std::mt19937_64 rng(22);
  const AlgVec<Radical> x = random_exact(v1(), rng);
  CHECK((project(v1(), x, Part::m) + project(v1(), x, Part::h)).eval() == x);
  CHECK(grading(v1(), q(9)) == Grading::h_only);
  CHECK(grading(v1(), q(2)) == Grading::m_only);
  CHECK(grading(v1(), AlgVec<Radical>::Zero(10).eval()) == Grading::zero);
  CHECK(grading(v1(), (q(2) + q(9)).eval()) == Grading::full);
}

TEST_CASE("inner product") {
  CHECK(inner(q(3), q(3)) == Radical(1));
  CHECK(inner(q(3), q(7)).is_zero());
  CHECK(inner((q(1) + q(2)).eval(), q(2)) == Radical(1));
}

TEST_CASE("dimension mismatch is a spec error") {
  const AlgVec<double> x = AlgVec<double>::Zero(3);
  CHECK_THROWS_AS(bracket(v1(), x, x), SpecError);
}

TEST_CASE("builtins validate cleanly") {
  const ValidationReport rep = validate(v1());
  CHECK(rep.ok());
  CHECK(rep.checks.at(Axiom::jacobi) == 120);
  CHECK(rep.checks.at(Axiom::naturally_reductive) == 343);
  CHECK(rep.checks.at(Axiom::ad_invariance) == 1000);
  CHECK(validate(su2_biinv()).ok());
  CHECK(validate(abelian(7)).ok());
}

TEST_CASE("non-invariant metric flagged normal") {
  AlgebraSpec spec("heis", 3, 3, {}, true);
  spec.set_bracket(0, 1, {{2, Radical(1)}});
  const ValidationReport rep = validate(spec);
  CHECK(rep.count(Axiom::jacobi) == 0);
  CHECK(rep.count(Axiom::ad_invariance) > 0);
  CHECK(rep.count(Axiom::antisymmetry) == 0);
}

TEST_CASE("broken Jacobi identity lists the triple") {
  AlgebraSpec spec("broken", 3, 3);
  spec.set_bracket(0, 1, {{0, Radical(1)}});
  spec.set_bracket(0, 2, {{1, Radical(1)}});
  const ValidationReport rep = validate(spec);
  REQUIRE(rep.count(Axiom::jacobi) == 1);
  for (const auto& v : rep.violations) {
    if (v.axiom == Axiom::jacobi) CHECK(v.indices == std::vector<int>{1, 2, 3});
  }
}

TEST_CASE("explicit asymmetric brackets are reported") {
  AlgebraSpec spec("asym", 2, 2);
  spec.set_bracket(0, 1, {{0, Radical(1)}});
  spec.set_bracket(1, 0, {{0, Radical(1)}});
  CHECK(validate(spec).count(Axiom::antisymmetry) == 1);
}

TEST_CASE("reductivity failure") {
  // [m, h] landing in h
  AlgebraSpec spec("bad", 3, 2);
  spec.set_bracket(0, 2, {{2, Radical(1)}});
  CHECK(validate(spec).count(Axiom::reductivity) > 0);
}

TEST_CASE("V1 grading of brackets") {
  for (int i = 1; i <= 7; ++i)
    for (int j = 8; j <= 10; ++j) CHECK(grading(v1(), bracket(v1(), q(i), q(j))) != Grading::h_only);
  for (int i = 8; i <= 10; ++i)
    for (int j = 8; j <= 10; ++j) {
      const Grading g = grading(v1(), bracket(v1(), q(i), q(j)));
      CHECK((g == Grading::h_only || g == Grading::zero));
    }
}

TEST_CASE("matrix model: S_i are sp(2) elements and Q_i orthonormal") {
  const MatrixRep rep = build_matrix_rep();
  const std::complex<double> I(0, 1);
  CHECK(entry(rep.s[0], 1, 1) == I);
  CHECK(entry(rep.s[0], 2, 2) == -I);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j)
      if (!((i == 1 && j == 1) || (i == 2 && j == 2))) CHECK(std::abs(entry(rep.s[0], i, j)) == 0.0);
  for (const auto& s : rep.s) {
    CHECK(in_sp2(s));
    CHECK((s + s.adjoint()).norm() == 0.0);
  }
  // Row 2 of the transform: Q2 = sqrt(5/2) S3
  for (int k = 0; k < 10; ++k) {
    if (k == 2) {
      CHECK(rep.transform(1, k) == rad(Rational(1, 2), 10));
    } else {
      CHECK(rep.transform(1, k).is_zero());
    }
  }
  for (int i = 0; i < 10; ++i) {
    CHECK(in_sp2(rep.q[i]));
    for (int j = 0; j < 10; ++j) CHECK(trace_inner(rep.q[i], rep.q[j]) == doctest::Approx(i == j ? 1.0 : 0.0));
  }
}

TEST_CASE("commutators reproduce the table") {
  const AlgebraSpec rebuilt = table_from_matrices(build_matrix_rep());
  CHECK(bracket(rebuilt, q(1), q(2)) == q(3));
  // [Q2, Q6] = -Q4 + sqrt(3/2) Q9
  CHECK(bracket(rebuilt, q(2), q(6)) == (-q(4) + q(9) * rad(Rational(1, 2), 6)).eval());
  CHECK(rebuilt == v1());
}

TEST_CASE("snapping") {
  CHECK(snap_radical(std::sqrt(6.0) / 2) == rad(Rational(1, 2), 6));
  CHECK(snap_radical(-1.5) == Radical(Rational(-3, 2)));
  CHECK(snap_radical(0.0) == Radical(0));
  CHECK_FALSE(snap_radical(0.1234567).has_value());
  CHECK_FALSE(snap_radical(1.0 + 1e-8).has_value());
}

TEST_CASE("unrecognisable commutator coefficient") {
  MatrixRep rep = build_matrix_rep();
  rep.q[0] *= 1.01;
  CHECK_THROWS_AS(table_from_matrices(rep), ReconstructionError);
}

TEST_CASE("spec files round trip") {
  const auto path = std::filesystem::temp_directory_path() / "nrh_roundtrip.json";
  save_spec(v1(), path);
  CHECK(load_spec(path) == v1());
  std::filesystem::remove(path);
  CHECK(parse_spec(serialize_spec(su2_biinv())) == su2_biinv());
}

TEST_CASE("spec parse errors carry a location") {
  CHECK_THROWS_WITH_AS(parse_spec(R"({"name":"x","dim_g":2,"dim_m":3,"brackets":[]})"), doctest::Contains("dim_m"),
                       SpecError);
  CHECK_THROWS_WITH_AS(
      parse_spec(R"({"name":"x","dim_g":3,"dim_m":3,"brackets":[{"i":1,"j":2,"terms":[{"k":3,"coeff":["1"]}]}]})"),
      doctest::Contains("brackets[0].terms[0].coeff"), SpecError);
  CHECK_THROWS_WITH_AS(
      parse_spec(
          R"({"name":"x","dim_g":3,"dim_m":3,"brackets":[{"i":1,"j":2,"terms":[{"k":3,"coeff":["1","0","0","0","0","0","0","pi"]}]}]})"),
      doctest::Contains("coeff[7]"), SpecError);
  CHECK_THROWS_AS(parse_spec("{not json"), SpecError);
  CHECK_THROWS_AS(load_spec("/nonexistent/spec.json"), SpecError);
}

TEST_CASE("implied antisymmetric entry") {
  const AlgebraSpec spec = parse_spec(
      R"({"name":"x","dim_g":3,"dim_m":3,"brackets":[{"i":1,"j":2,"terms":[{"k":3,"coeff":["1","0","0","0","0","0","0","0"]}]}]})");
  CHECK(spec.constant(1, 0, 2) == Radical(-1));
  CHECK_FALSE(spec.is_explicit(1, 0));
}

TEST_CASE("resolve_space") {
  CHECK(resolve_space("sp2_su2") == v1());
  CHECK(resolve_space("abelian4").dim_m() == 4);
  CHECK(builtin_spec("nope") == std::nullopt);
  CHECK_THROWS_AS(resolve_space("missing.json"), SpecError);
}
