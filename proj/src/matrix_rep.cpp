#include <cmath>

#include "nrh/algebra.hpp"

namespace nrh {

Mat4c sp2_element(std::complex<double> a11, std::complex<double> a33, std::complex<double> a12,
                  std::complex<double> a13, std::complex<double> a14, std::complex<double> a34) {
  using std::conj;
  Mat4c m;
  // clang-format off
  m << a11,        a12,       a13,        a14,
       -conj(a12), -a11,      conj(a14),  -conj(a13),
       -conj(a13), -a14,      a33,        a34,
       -conj(a14), a13,       -conj(a34), -a33;
  // clang-format on
  return m;
}

bool in_sp2(const Mat4c& m, double tol) {
  if ((m + m.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  Mat4c rebuilt = sp2_element(m(0, 0), m(2, 2), m(0, 1), m(0, 2), m(0, 3), m(2, 3));
  return (m - rebuilt).cwiseAbs().maxCoeff() <= tol;
}

double trace_inner(const Mat4c& a, const Mat4c& b) { return -(a * b).trace().real() / 5.0; }

MatrixRep build_matrix_rep() {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> one(1.0, 0.0);
  const std::complex<double> zero(0.0, 0.0);

  MatrixRep rep;
  // Each S_k sets one free entry of the sp(2) pattern; the pattern fixes the rest.
  //                      a11   a33   a12   a13   a14   a34
  rep.s[0] = sp2_element(i,    zero, zero, zero, zero, zero);
  rep.s[1] = sp2_element(zero, i,    zero, zero, zero, zero);
  rep.s[2] = sp2_element(zero, zero, one,  zero, zero, zero);
  rep.s[3] = sp2_element(zero, zero, i,    zero, zero, zero);
  rep.s[4] = sp2_element(zero, zero, zero, zero, zero, one);
  rep.s[5] = sp2_element(zero, zero, zero, zero, zero, i);
  rep.s[6] = sp2_element(zero, zero, zero, one,  zero, zero);
  rep.s[7] = sp2_element(zero, zero, zero, i,    zero, zero);
  rep.s[8] = sp2_element(zero, zero, zero, zero, one,  zero);
  rep.s[9] = sp2_element(zero, zero, zero, zero, i,    zero);

  auto& t = rep.transform;
  t.setConstant(Radical(0));
  const auto half = [](int radicand) { return Radical::term(Rational(1, 2), radicand); };
  t(0, 0) = Radical(Rational(1, 2));
  t(0, 1) = Radical(Rational(-3, 2));
  t(1, 2) = half(10);  // sqrt(5/2)
  t(2, 3) = half(10);
  t(3, 4) = half(6);
  t(3, 6) = -half(2);
  t(4, 5) = half(6);
  t(4, 7) = -half(2);
  t(5, 8) = half(5);
  t(6, 9) = half(5);
  t(7, 0) = Radical(Rational(3, 2));
  t(7, 1) = Radical(Rational(1, 2));
  t(8, 4) = Radical(1);
  t(8, 6) = half(3);
  t(9, 5) = Radical(1);
  t(9, 7) = half(3);

  for (int a = 0; a < 10; ++a) {
    rep.q[a].setZero();
    for (int b = 0; b < 10; ++b) {
      if (!t(a, b).is_zero()) rep.q[a] += t(a, b).to_double() * rep.s[b];
    }
  }
  return rep;
}

std::optional<Radical> snap_radical(double x, double tol) {
  if (std::abs(x) <= tol) return Radical(0);
  for (int s = 0; s < Radical::kDim; ++s) {
    const double root = std::sqrt(static_cast<double>(Radical::kRadicand[s]));
    for (int q : {1, 2, 4}) {
      const double p = std::round(x * q / root);
      if (p == 0 || std::abs(p) > 12) continue;
      if (std::abs(x - p / q * root) <= tol) {
        return Radical::term(Rational(static_cast<long>(p), q), Radical::kRadicand[s]);
      }
    }
  }
  return std::nullopt;
}

AlgebraSpec table_from_matrices(const MatrixRep& rep) {
  std::vector<std::string> labels;
  for (int i = 1; i <= 10; ++i) labels.push_back("Q" + std::to_string(i));
  AlgebraSpec spec("sp2_su2", 10, 7, labels, true);
  for (int a = 0; a < 10; ++a) {
    for (int b = a + 1; b < 10; ++b) {
      const Mat4c comm = rep.q[a] * rep.q[b] - rep.q[b] * rep.q[a];
      std::vector<BracketTerm> terms;
      Mat4c rebuilt = Mat4c::Zero();
      for (int k = 0; k < 10; ++k) {
        const double c = trace_inner(comm, rep.q[k]);
        auto snapped = snap_radical(c);
        if (!snapped) {
          throw ReconstructionError("coefficient " + std::to_string(c) + " of Q" + std::to_string(k + 1) + " in [Q" +
                                    std::to_string(a + 1) + ",Q" + std::to_string(b + 1) +
                                    "] is not a recognisable radical");
        }
        if (!snapped->is_zero()) terms.push_back({k, *snapped});
        rebuilt += c * rep.q[k];
      }
      // The expansion must account for the whole commutator, i.e. it stays in span{Q}.
      if ((rebuilt - comm).cwiseAbs().maxCoeff() > 1e-9) {
        throw ReconstructionError("commutator [Q" + std::to_string(a + 1) + ",Q" + std::to_string(b + 1) +
                                  "] leaves the span of the Q basis");
      }
      if (!terms.empty()) spec.set_bracket(a, b, terms);
    }
  }
  return spec;
}

}  // namespace nrh
