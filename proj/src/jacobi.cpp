#include "nrh/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nrh {

TaylorTensor taylor_series(const CurvatureJet<double>& jet_at_t0, int order, const Eigen::MatrixXd& a0,
                           const Eigen::MatrixXd& da0) {
  if (order < 2) throw std::invalid_argument("series order must be at least 2");
  const Eigen::Index d = jet_at_t0.r0.rows();
  TaylorTensor series;
  series.order = order;
  series.coeffs.assign(static_cast<std::size_t>(order) + 1, Eigen::MatrixXd::Zero(d, d));
  series.coeffs[0] = a0;
  series.coeffs[1] = da0;

  // With C_k = A^(k)/k! and R^(j)/j! grouped by which of R, R^(1), R^(2)
  // it is (up to sign), the recurrence becomes
  //   (k+2)(k+1) C_{k+2} = -(R C_k + R^(1) S1_k + R^(2) S2_k)
  //   S1_k = sum_{j odd}      (-1)^((j-1)/2) / j! C_{k-j}
  //   S2_k = sum_{j even, >0} (-1)^(j/2-1)  / j! C_{k-j}
  std::vector<double> inv_fact(static_cast<std::size_t>(order) + 1, 1.0);
  for (int j = 1; j <= order; ++j) inv_fact[j] = inv_fact[j - 1] / j;
  const bool from_origin = a0.isZero(0.0);

  Eigen::MatrixXd s1(d, d);
  Eigen::MatrixXd s2(d, d);
  for (int k = 0; k + 2 <= order; ++k) {
    s1.setZero();
    s2.setZero();
    for (int j = 1; j <= k; ++j) {
      if (from_origin && k == j) continue;  // C_0 = 0
      const Eigen::MatrixXd& c = series.coeffs[k - j];
      if (j % 2 == 1) {
        const double sign = ((j - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
        s1.noalias() += (sign * inv_fact[j]) * c;
      } else {
        const double sign = (j / 2 - 1) % 2 == 0 ? 1.0 : -1.0;
        s2.noalias() += (sign * inv_fact[j]) * c;
      }
    }
    Eigen::MatrixXd next = jet_at_t0.r0 * series.coeffs[k];
    next.noalias() += jet_at_t0.r1 * s1;
    next.noalias() += jet_at_t0.r2 * s2;
    series.coeffs[k + 2] = -next / (static_cast<double>(k + 2) * (k + 1));
  }
  return series;
}

TaylorTensor taylor_series(const CurvatureJet<double>& jet, int order) {
  const Eigen::Index d = jet.r0.rows();
  return taylor_series(jet, order, Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Identity(d, d));
}

TaylorTensor taylor_series(const AlgebraSpec& spec, const AlgVec<double>& v, int order) {
  return taylor_series(closed_form_jacobi(spec, v).jet, order);
}

double tail_bound(const TaylorTensor& series, double t) {
  const int n = series.order;
  const double at = std::abs(t);
  if (at == 0.0) return 0.0;
  auto norm = [&](int k) { return series.coeffs[k].cwiseAbs().maxCoeff(); };
  const double last = std::max(norm(n) * std::pow(at, n), norm(n - 1) * std::pow(at, n - 1));
  if (last == 0.0) return 0.0;
  double rho = 0.0;
  for (int k = std::max(2, n - 5); k <= n; ++k) {
    const double prev = norm(k - 2);
    if (prev > 0.0) rho = std::max(rho, std::sqrt(k * (k - 1.0) * norm(k) / prev));
  }
  const double denom = n - at * rho;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return last * n / denom;
}

Eigen::MatrixXd evaluate_A_unchecked(const TaylorTensor& series, double t) {
  Eigen::MatrixXd a = series.coeffs[series.order];
  for (int k = series.order - 1; k >= 0; --k) {
    a *= t;
    a += series.coeffs[k];
  }
  return a;
}

namespace {

Eigen::MatrixXd evaluate_dA(const TaylorTensor& series, double t) {
  const int n = series.order;
  Eigen::MatrixXd da = n * series.coeffs[n];
  for (int k = n - 1; k >= 1; --k) {
    da *= t;
    da += k * series.coeffs[k];
  }
  return da;
}

[[noreturn]] void truncation(double bound, double t) {
  throw TruncationError("Taylor tail bound " + std::to_string(bound) + " at t = " + std::to_string(t) +
                            " exceeds tolerance; raise the series order",
                        bound);
}

}  // namespace

SeriesEvaluation evaluate_A(const TaylorTensor& series, double t, double tol) {
  SeriesEvaluation out;
  out.tail_bound = tail_bound(series, t);
  if (!(out.tail_bound <= tol)) truncation(out.tail_bound, t);
  out.a = evaluate_A_unchecked(series, t);
  out.da = evaluate_dA(series, t);
  return out;
}

PiecewiseTaylor taylor_pieces(const ClosedFormJacobi<double>& rt, double t_max, int order, double tol,
                              int max_pieces) {
  PiecewiseTaylor out;
  TaylorTensor first = taylor_series(rt.jet, order);
  const double first_tail = tail_bound(first, t_max);
  if (first_tail <= tol || t_max == 0.0) {
    out.width = t_max;
    out.tail_bound = first_tail;
    out.pieces.push_back(std::move(first));
    return out;
  }
  double worst = first_tail;
  for (int m = 2; m <= max_pieces; ++m) {
    const double w = t_max / m;
    std::vector<TaylorTensor> pieces{first};
    double tail = tail_bound(first, w);
    for (int p = 1; p < m && tail <= tol; ++p) {
      const double t0 = p * w;
      const TaylorTensor& prev = pieces.back();
      const CurvatureJet<double> jet{rt.at(t0, 0), rt.at(t0, 1), rt.at(t0, 2)};
      pieces.push_back(taylor_series(jet, order, evaluate_A_unchecked(prev, w), evaluate_dA(prev, w)));
      tail = std::max(tail, tail_bound(pieces.back(), w));
    }
    if (tail <= tol) {
      out.width = w;
      out.pieces = std::move(pieces);
      out.tail_bound = tail;
      return out;
    }
    worst = std::min(worst, tail);
  }
  truncation(worst, t_max);
}

SeriesEvaluation PiecewiseTaylor::evaluate(double t) const {
  const int m = static_cast<int>(pieces.size());
  int p = 0;
  if (width != 0.0) p = std::clamp(static_cast<int>(std::floor(t / width)), 0, m - 1);
  const double s = t - p * width;
  return {evaluate_A_unchecked(pieces[p], s), evaluate_dA(pieces[p], s), tail_bound};
}

Eigen::MatrixXd PiecewiseTaylor::evaluate_A(double t) const {
  const int m = static_cast<int>(pieces.size());
  int p = 0;
  if (width != 0.0) p = std::clamp(static_cast<int>(std::floor(t / width)), 0, m - 1);
  return evaluate_A_unchecked(pieces[p], t - p * width);
}

OdeState ode_oracle(const ClosedFormJacobi<double>& rt, double t_end, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("RK4 step must be positive");
  const Eigen::Index d = rt.constant.rows();
  OdeState s{Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Identity(d, d)};
  const double direction = t_end < 0.0 ? -1.0 : 1.0;
  const double span = std::abs(t_end);
  const auto steps = static_cast<long>(std::ceil(span / step - 1e-12));
  double t = 0.0;
  for (long i = 0; i < steps; ++i) {
    const double h = direction * std::min(step, span - std::abs(t));
    const Eigen::MatrixXd r_start = rt.at(t);
    const Eigen::MatrixXd r_mid = rt.at(t + 0.5 * h);
    const Eigen::MatrixXd r_end = rt.at(t + h);
    // y = (A, A'), y' = (A', -R_t A)
    const Eigen::MatrixXd k1a = s.da;
    const Eigen::MatrixXd k1v = -r_start * s.a;
    const Eigen::MatrixXd k2a = s.da + 0.5 * h * k1v;
    const Eigen::MatrixXd k2v = -r_mid * (s.a + 0.5 * h * k1a);
    const Eigen::MatrixXd k3a = s.da + 0.5 * h * k2v;
    const Eigen::MatrixXd k3v = -r_mid * (s.a + 0.5 * h * k2a);
    const Eigen::MatrixXd k4a = s.da + h * k3v;
    const Eigen::MatrixXd k4v = -r_end * (s.a + h * k3a);
    s.a += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    s.da += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    t = direction * std::min(span, std::abs(t + h));
  }
  return s;
}

Eigen::VectorXd jacobi_field(const TaylorTensor& series, const Eigen::VectorXd& w, double t, double tol) {
  const SeriesEvaluation ev = evaluate_A(series, t, tol);
  if (w.size() != ev.a.cols()) throw std::invalid_argument("initial derivative does not conform to dim m");
  return ev.a * w;
}

}  // namespace nrh
