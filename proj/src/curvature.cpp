#include "nrh/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace nrh {

namespace {

template <class T>
bool is_zero(const T& x) {
  if constexpr (std::is_same_v<T, Radical>) {
    return x.is_zero();
  } else {
    return x == 0.0;
  }
}

// Dense product that skips zero entries; radical multiplication dominates.
template <class T>
Endo<T> mul(const Endo<T>& a, const Endo<T>& b) {
  if constexpr (std::is_same_v<T, double>) {
    return a * b;
  } else {
    Endo<T> out = Endo<T>::Zero(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index k = 0; k < a.cols(); ++k) {
        if (is_zero(a(i, k))) continue;
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
          if (is_zero(b(k, j))) continue;
          out(i, j) += a(i, k) * b(k, j);
        }
      }
    }
    return out;
  }
}

template <class T>
Endo<T> projected(const AlgebraSpec& spec, Endo<T> b, Part part) {
  if (part == Part::m) {
    b.bottomRows(spec.dim_h()).setZero();
  } else {
    b.topRows(spec.dim_m()).setZero();
  }
  return b;
}

template <class T>
T from_int(long long value) {
  return T(static_cast<int>(value));
}

}  // namespace

template <class T>
void require_unit_m_vector(const AlgebraSpec& spec, const AlgVec<T>& v) {
  if (v.size() != spec.dim_g()) throw DirectionError("direction does not conform to '" + spec.name() + "'");
  const Grading gr = grading(spec, v);
  if constexpr (std::is_same_v<T, Radical>) {
    if (gr == Grading::h_only || gr == Grading::full) throw DirectionError("direction is not in m");
    if (inner(v, v) != Radical(1)) throw DirectionError("direction is not a unit vector");
  } else {
    for (int i = spec.dim_m(); i < spec.dim_g(); ++i) {
      if (std::abs(v(i)) > 1e-12) throw DirectionError("direction is not in m");
    }
    if (std::abs(std::sqrt(v.squaredNorm()) - 1.0) > 1e-12) throw DirectionError("direction is not a unit vector");
  }
}

template <class T>
Endo<T> lambda_matrix(const AlgebraSpec& spec, const AlgVec<T>& v) {
  if (v.size() != spec.dim_g()) throw DirectionError("direction does not conform to '" + spec.name() + "'");
  const Grading gr = grading(spec, v);
  if (gr == Grading::h_only || gr == Grading::full) throw DirectionError("direction is not in m");
  const int d = spec.dim_m();
  Endo<T> out = Endo<T>::Zero(d, d);
  const T half = T(1) / T(2);
  for (int k = 0; k < d; ++k) {
    AlgVec<T> image = bracket(spec, v, basis_vector<T>(spec, k));
    out.col(k) = half * image.head(d);
  }
  return out;
}

template <class T>
Endo<T> jacobi_operator(const AlgebraSpec& spec, const AlgVec<T>& v) {
  require_unit_m_vector(spec, v);
  const int d = spec.dim_m();
  const Endo<T> right = right_bracket_matrix(spec, v);
  const Endo<T> b1 = right.leftCols(d);
  const Endo<T> h_term = mul(right, projected(spec, b1, Part::h));
  const Endo<T> m_term = mul(right, projected(spec, b1, Part::m));
  const T quarter = T(1) / T(4);
  Endo<T> out = Endo<T>::Zero(d, d);
  out = -h_term.topRows(d) - quarter * m_term.topRows(d);
  return out;
}

template <class T>
Endo<T> jacobi_derivative(const AlgebraSpec& spec, const AlgVec<T>& v, int n) {
  if (n < 0) throw std::invalid_argument("derivative order must be non-negative");
  if (n == 0) return jacobi_operator(spec, v);
  require_unit_m_vector(spec, v);
  const int d = spec.dim_m();
  const Endo<T> right = right_bracket_matrix(spec, v);

  // prefix[j] holds the chain after j+1 brackets with all projections in m.
  std::vector<Endo<T>> prefix;
  prefix.push_back(right.leftCols(d));
  for (int j = 1; j <= n; ++j) prefix.push_back(mul(right, projected(spec, prefix.back(), Part::m)));

  Endo<T> sum = Endo<T>::Zero(spec.dim_g(), d);
  for (int i = 0; i <= n; ++i) {
    // Brackets 1..i+1 already taken with m-projections in between; the
    // (i+1)-th bracket is projected to h before the next one.
    Endo<T> chain = mul(right, projected(spec, prefix[i], Part::h));
    for (int j = i + 2; j <= n + 1; ++j) chain = mul(right, projected(spec, chain, Part::m));
    const BigInt c = binomial(n, i);
    const T coeff = from_int<T>(c.convert_to<long long>()) * T(i % 2 == 0 ? 1 : -1);
    sum += coeff * chain;
  }
  // Scale by (-1)^(n-1) / 2^n and keep the m-part.
  T scale = T(1);
  for (int j = 0; j < n; ++j) scale = scale / T(2);
  if ((n - 1) % 2 != 0) scale = -scale;
  Endo<T> out = scale * sum.topRows(d);
  return out;
}

Radical t1_component(const AlgebraSpec& spec, int i, int j, int k) {
  const int d = spec.dim_m();
  if (i < 1 || j < 1 || k < 1 || i > d || j > d || k > d) throw std::out_of_range("t1_component index outside m");
  auto e = [&](int idx) { return basis_vector<Radical>(spec, idx - 1); };
  const AlgVec<Radical> q1i = bracket(spec, e(1), e(i));
  const AlgVec<Radical> first = project(
      spec, bracket(spec, project(spec, bracket(spec, project(spec, q1i, Part::h), e(j)), Part::m), e(k)), Part::m);
  const AlgVec<Radical> second = project(
      spec, bracket(spec, project(spec, bracket(spec, project(spec, q1i, Part::m), e(j)), Part::h), e(k)), Part::m);
  return Radical(Rational(1, 2)) * inner<Radical>(first - second, e(1));
}

Eigen::MatrixXd skew_exp(const Eigen::MatrixXd& skew, double t) {
  const Eigen::Index n = skew.rows();
  if (n == 0) return Eigen::MatrixXd(0, 0);
  const double scale = std::max(1.0, skew.cwiseAbs().maxCoeff());
  Eigen::RealSchur<Eigen::MatrixXd> schur(skew);
  if (schur.info() == Eigen::Success) {
    const Eigen::MatrixXd& tri = schur.matrixT();
    const Eigen::MatrixXd& u = schur.matrixU();
    const double tiny = 1e-13 * scale;
    Eigen::MatrixXd block_exp = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd residual = tri;
    bool ok = true;
    for (Eigen::Index i = 0; i < n;) {
      if (i + 1 < n && std::abs(tri(i + 1, i)) > tiny) {
        // Rotation block [[a, b], [c, a]] with a ~ 0 and c ~ -b.
        const double omega = 0.5 * (tri(i, i + 1) - tri(i + 1, i));
        const double angle = omega * t;
        block_exp(i, i) = std::cos(angle);
        block_exp(i, i + 1) = std::sin(angle);
        block_exp(i + 1, i) = -std::sin(angle);
        block_exp(i + 1, i + 1) = std::cos(angle);
        residual(i, i + 1) -= omega;
        residual(i + 1, i) += omega;
        i += 2;
      } else {
        block_exp(i, i) = 1.0;
        i += 1;
      }
    }
    if (residual.cwiseAbs().maxCoeff() > 1e-10 * scale) ok = false;
    if (ok) return u * block_exp * u.transpose();
  }
  Eigen::MatrixXd scaled = t * skew;
  return scaled.exp();
}

Eigen::MatrixXd conjugated_jacobi(const AlgebraSpec& spec, const AlgVec<double>& v, double t) {
  const Eigen::MatrixXd r0 = jacobi_operator(spec, v);
  const Eigen::MatrixXd rot = skew_exp(lambda_matrix(spec, v), t);
  return rot * r0 * rot.transpose();
}

template <class T>
CurvatureJet<T> curvature_jet(const AlgebraSpec& spec, const AlgVec<T>& v) {
  return {jacobi_operator(spec, v), jacobi_derivative(spec, v, 1), jacobi_derivative(spec, v, 2)};
}

template <class T>
Endo<T> derivative_pattern(const CurvatureJet<T>& jet, int n) {
  if (n < 0) throw std::invalid_argument("derivative order must be non-negative");
  if (n == 0) return jet.r0;
  if (n % 2 == 1) {
    const int k = (n - 1) / 2;
    return k % 2 == 0 ? Endo<T>(jet.r1) : Endo<T>(-jet.r1);
  }
  const int k = n / 2;
  return (k - 1) % 2 == 0 ? Endo<T>(jet.r2) : Endo<T>(-jet.r2);
}

template <class T>
Eigen::MatrixXd ClosedFormJacobi<T>::at(double t, int n) const {
  if (n < 0) throw std::invalid_argument("derivative order must be non-negative");
  const double phase = n * std::numbers::pi / 2.0;
  Eigen::MatrixXd out = std::sin(t + phase) * to_double(sin_coeff) + std::cos(t + phase) * to_double(cos_coeff);
  if (n == 0) out += to_double(constant);
  return out;
}

template <class T>
ClosedFormJacobi<T> closed_form_from_jet(CurvatureJet<T> jet) {
  ClosedFormJacobi<T> cf;
  cf.constant = jet.r0 + jet.r2;
  cf.sin_coeff = jet.r1;
  cf.cos_coeff = -jet.r2;
  cf.jet = std::move(jet);
  return cf;
}

template <class T>
ClosedFormJacobi<T> closed_form_jacobi(const AlgebraSpec& spec, const AlgVec<T>& v) {
  CurvatureJet<T> jet = curvature_jet(spec, v);
  const Endo<T> r3 = jacobi_derivative(spec, v, 3);
  const Endo<T> r4 = jacobi_derivative(spec, v, 4);
  bool pattern = false;
  if constexpr (std::is_same_v<T, Radical>) {
    pattern = (r3 == -jet.r1) && (r4 == -jet.r2);
  } else {
    const double scale = std::max({1.0, jet.r0.cwiseAbs().maxCoeff(), jet.r1.cwiseAbs().maxCoeff(),
                                   jet.r2.cwiseAbs().maxCoeff()});
    pattern = (r3 + jet.r1).cwiseAbs().maxCoeff() <= 1e-9 * scale &&
              (r4 + jet.r2).cwiseAbs().maxCoeff() <= 1e-9 * scale;
  }
  if (!pattern) {
    throw UnsupportedSpaceError("'" + spec.name() +
                                "' does not satisfy R^(3) = -R^(1), R^(4) = -R^(2); no closed form for R_t");
  }
  return closed_form_from_jet(std::move(jet));
}

Eigen::MatrixXd to_double(const Endo<Radical>& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).to_double();
  }
  return out;
}

namespace {

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, 1> vectorize(const Endo<T>& m) {
  return Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>(m.data(), m.size());
}

// Solves A x = b exactly when consistent; free variables are set to zero.
std::optional<std::vector<Radical>> solve_exact(Endo<Radical> a, AlgVec<Radical> b) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  std::vector<Eigen::Index> pivot_col;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < cols && row < rows; ++col) {
    Eigen::Index pivot = -1;
    for (Eigen::Index r = row; r < rows; ++r) {
      if (!a(r, col).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    a.row(pivot).swap(a.row(row));
    std::swap(b(pivot), b(row));
    const Radical inv = a(row, col).inverse();
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (r == row || a(r, col).is_zero()) continue;
      const Radical factor = a(r, col) * inv;
      for (Eigen::Index c = col; c < cols; ++c) {
        if (!a(row, c).is_zero()) a(r, c) -= factor * a(row, c);
      }
      if (!b(row).is_zero()) b(r) -= factor * b(row);
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (Eigen::Index r = row; r < rows; ++r) {
    if (!b(r).is_zero()) return std::nullopt;
  }
  std::vector<Radical> x(static_cast<std::size_t>(cols), Radical(0));
  for (std::size_t p = 0; p < pivot_col.size(); ++p) {
    const auto r = static_cast<Eigen::Index>(p);
    x[static_cast<std::size_t>(pivot_col[p])] = b(r) / a(r, pivot_col[p]);
  }
  return x;
}

}  // namespace

OsculatingProfile osculating_rank(const AlgebraSpec& spec, const AlgVec<double>& v, int max_n, double tol) {
  if (max_n < 1) throw std::invalid_argument("max_n must be at least 1");
  require_unit_m_vector(spec, v);
  OsculatingProfile profile;
  std::vector<Eigen::VectorXd> derivs;
  for (int n = 1; n <= max_n + 1; ++n) derivs.push_back(vectorize<double>(jacobi_derivative(spec, v, n)));
  const double scale = std::max(1.0, jacobi_operator(spec, v).cwiseAbs().maxCoeff());
  if (derivs[0].cwiseAbs().maxCoeff() <= tol * scale) {
    profile.status = OsculatingProfile::Status::locally_symmetric;
    profile.residual = derivs[0].cwiseAbs().maxCoeff();
    return profile;
  }
  for (int r = 1; r <= max_n; ++r) {
    Eigen::MatrixXd a(derivs[0].size(), r);
    for (int c = 0; c < r; ++c) a.col(c) = derivs[c];
    const Eigen::VectorXd& b = derivs[r];
    const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
    const double residual = (a * x - b).cwiseAbs().maxCoeff();
    if (residual <= tol * std::max(1.0, b.cwiseAbs().maxCoeff())) {
      profile.status = OsculatingProfile::Status::determined;
      profile.rank = r;
      profile.coefficients.assign(x.data(), x.data() + x.size());
      profile.residual = residual;
      return profile;
    }
    profile.residual = residual;
  }
  return profile;
}

OsculatingProfile osculating_rank(const AlgebraSpec& spec, const AlgVec<Radical>& v, int max_n) {
  if (max_n < 1) throw std::invalid_argument("max_n must be at least 1");
  require_unit_m_vector(spec, v);
  OsculatingProfile profile;
  std::vector<AlgVec<Radical>> derivs;
  for (int n = 1; n <= max_n + 1; ++n) derivs.push_back(vectorize<Radical>(jacobi_derivative(spec, v, n)));
  const bool r1_vanishes =
      std::all_of(derivs[0].begin(), derivs[0].end(), [](const Radical& x) { return x.is_zero(); });
  if (r1_vanishes) {
    profile.status = OsculatingProfile::Status::locally_symmetric;
    return profile;
  }
  for (int r = 1; r <= max_n; ++r) {
    Endo<Radical> a(derivs[0].size(), r);
    for (int c = 0; c < r; ++c) a.col(c) = derivs[c];
    if (auto x = solve_exact(a, derivs[r])) {
      profile.status = OsculatingProfile::Status::determined;
      profile.rank = r;
      profile.exact_coefficients = *x;
      for (const auto& c : *x) profile.coefficients.push_back(c.to_double());
      profile.residual = 0.0;
      return profile;
    }
  }
  return profile;
}

std::string describe(const OsculatingProfile& profile) {
  std::ostringstream os;
  switch (profile.status) {
    case OsculatingProfile::Status::locally_symmetric:
      os << "osculating rank: locally symmetric along the geodesic (R^(1) = 0)";
      break;
    case OsculatingProfile::Status::undetermined:
      os << "osculating rank: undetermined (no dependency found; residual " << profile.residual << ")";
      break;
    case OsculatingProfile::Status::determined: {
      os << "osculating rank: " << profile.rank << "\n";
      os << "R^(" << profile.rank + 1 << ") =";
      for (std::size_t i = 0; i < profile.coefficients.size(); ++i) {
        os << (i == 0 ? " " : " + ");
        if (!profile.exact_coefficients.empty()) {
          os << "(" << profile.exact_coefficients[i] << ")";
        } else {
          os << "(" << profile.coefficients[i] << ")";
        }
        os << " R^(" << i + 1 << ")";
      }
      break;
    }
  }
  return os.str();
}

#define NRH_INSTANTIATE_CURVATURE(T)                                                         \
  template void require_unit_m_vector<T>(const AlgebraSpec&, const AlgVec<T>&);              \
  template Endo<T> lambda_matrix<T>(const AlgebraSpec&, const AlgVec<T>&);                   \
  template Endo<T> jacobi_operator<T>(const AlgebraSpec&, const AlgVec<T>&);                 \
  template Endo<T> jacobi_derivative<T>(const AlgebraSpec&, const AlgVec<T>&, int);          \
  template CurvatureJet<T> curvature_jet<T>(const AlgebraSpec&, const AlgVec<T>&);           \
  template Endo<T> derivative_pattern<T>(const CurvatureJet<T>&, int);                       \
  template struct ClosedFormJacobi<T>;                                                       \
  template ClosedFormJacobi<T> closed_form_from_jet<T>(CurvatureJet<T>);                     \
  template ClosedFormJacobi<T> closed_form_jacobi<T>(const AlgebraSpec&, const AlgVec<T>&);

NRH_INSTANTIATE_CURVATURE(Radical)
NRH_INSTANTIATE_CURVATURE(double)
#undef NRH_INSTANTIATE_CURVATURE

}  // namespace nrh
