#include "nrh/algebra.hpp"

#include <sstream>

namespace nrh {

AlgebraSpec::AlgebraSpec(std::string name, int dim_g, int dim_m, std::vector<std::string> labels, bool normal)
    : name_(std::move(name)), dim_g_(dim_g), dim_m_(dim_m), normal_(normal), labels_(std::move(labels)) {
  if (dim_g <= 0) throw SpecError("dim_g must be positive");
  if (dim_m <= 0 || dim_m > dim_g) throw SpecError("dim_m must lie in [1, dim_g]");
  if (labels_.empty()) {
    for (int i = 0; i < dim_g; ++i) labels_.push_back("e" + std::to_string(i + 1));
  }
  if (static_cast<int>(labels_.size()) != dim_g) throw SpecError("label count differs from dim_g");
  const auto n = static_cast<std::size_t>(dim_g) * dim_g;
  terms_.assign(n, {});
  exact_.assign(n, {});
  float_.assign(n, {});
  explicit_.assign(n, false);
}

void AlgebraSpec::rebuild_float(std::size_t idx) {
  exact_[idx].clear();
  float_[idx].clear();
  for (const auto& t : terms_[idx]) {
    if (t.coeff.is_zero()) continue;
    exact_[idx].emplace_back(t.k, t.coeff);
    float_[idx].emplace_back(t.k, t.coeff.to_double());
  }
}

void AlgebraSpec::set_bracket(int i, int j, const std::vector<BracketTerm>& terms) {
  if (i < 0 || j < 0 || i >= dim_g_ || j >= dim_g_) throw SpecError("bracket index out of range");
  std::map<int, Radical> merged;
  for (const auto& t : terms) {
    if (t.k < 0 || t.k >= dim_g_) throw SpecError("bracket target index out of range");
    merged[t.k] += t.coeff;
  }
  std::vector<BracketTerm> clean;
  for (auto& [k, c] : merged) {
    if (!c.is_zero()) clean.push_back({k, c});
  }
  const auto ij = index(i, j);
  terms_[ij] = clean;
  explicit_[ij] = true;
  rebuild_float(ij);
  if (i != j && !explicit_[index(j, i)]) {
    const auto ji = index(j, i);
    terms_[ji].clear();
    for (const auto& t : clean) terms_[ji].push_back({t.k, -t.coeff});
    rebuild_float(ji);
  }
}

Radical AlgebraSpec::constant(int i, int j, int k) const {
  for (const auto& [kk, c] : exact_[index(i, j)]) {
    if (kk == k) return c;
  }
  return Radical();
}

bool operator==(const AlgebraSpec& a, const AlgebraSpec& b) {
  if (a.name_ != b.name_ || a.dim_g_ != b.dim_g_ || a.dim_m_ != b.dim_m_ || a.normal_ != b.normal_ ||
      a.labels_ != b.labels_) {
    return false;
  }
  for (int i = 0; i < a.dim_g_; ++i) {
    for (int j = 0; j < a.dim_g_; ++j) {
      for (int k = 0; k < a.dim_g_; ++k) {
        if (a.constant(i, j, k) != b.constant(i, j, k)) return false;
      }
    }
  }
  return true;
}

template <class T>
AlgVec<T> basis_vector(const AlgebraSpec& spec, int index) {
  AlgVec<T> v = AlgVec<T>::Zero(spec.dim_g());
  v(index) = T(1);
  return v;
}

template <class T>
AlgVec<T> from_m(const AlgebraSpec& spec, const AlgVec<T>& m_coords) {
  if (m_coords.size() != spec.dim_m()) throw SpecError("direction length differs from dim_m");
  AlgVec<T> v = AlgVec<T>::Zero(spec.dim_g());
  v.head(spec.dim_m()) = m_coords;
  return v;
}

namespace {

template <class T>
bool is_zero(const T& x) {
  if constexpr (std::is_same_v<T, Radical>) {
    return x.is_zero();
  } else {
    return x == T(0);
  }
}

void check_dim(const AlgebraSpec& spec, Eigen::Index n) {
  if (n != spec.dim_g()) {
    throw SpecError("vector of length " + std::to_string(n) + " does not conform to '" + spec.name() +
                    "' (dim_g = " + std::to_string(spec.dim_g()) + ")");
  }
}

}  // namespace

template <class T>
AlgVec<T> bracket(const AlgebraSpec& spec, const AlgVec<T>& x, const AlgVec<T>& y) {
  check_dim(spec, x.size());
  check_dim(spec, y.size());
  AlgVec<T> out = AlgVec<T>::Zero(spec.dim_g());
  for (int i = 0; i < spec.dim_g(); ++i) {
    if (is_zero(x(i))) continue;
    for (int j = 0; j < spec.dim_g(); ++j) {
      if (is_zero(y(j))) continue;
      const auto& terms = spec.sparse_terms<T>(i, j);
      if (terms.empty()) continue;
      T xy = x(i) * y(j);
      for (const auto& [k, c] : terms) out(k) += c * xy;
    }
  }
  return out;
}

template <class T>
AlgVec<T> project(const AlgebraSpec& spec, const AlgVec<T>& x, Part part) {
  check_dim(spec, x.size());
  AlgVec<T> out = x;
  if (part == Part::m) {
    out.tail(spec.dim_h()).setZero();
  } else {
    out.head(spec.dim_m()).setZero();
  }
  return out;
}

template <class T>
T inner(const AlgVec<T>& x, const AlgVec<T>& y) {
  if (x.size() != y.size()) throw SpecError("inner product of vectors of different length");
  T acc(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (is_zero(x(i)) || is_zero(y(i))) continue;
    acc += x(i) * y(i);
  }
  return acc;
}

template <class T>
Grading grading(const AlgebraSpec& spec, const AlgVec<T>& x) {
  check_dim(spec, x.size());
  bool has_m = false;
  bool has_h = false;
  for (int i = 0; i < spec.dim_g(); ++i) {
    if (is_zero(x(i))) continue;
    (spec.in_m(i) ? has_m : has_h) = true;
  }
  if (has_m && has_h) return Grading::full;
  if (has_m) return Grading::m_only;
  if (has_h) return Grading::h_only;
  return Grading::zero;
}

template <class T>
Endo<T> right_bracket_matrix(const AlgebraSpec& spec, const AlgVec<T>& v) {
  check_dim(spec, v.size());
  const int n = spec.dim_g();
  Endo<T> out = Endo<T>::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (is_zero(v(j))) continue;
      for (const auto& [k, c] : spec.sparse_terms<T>(i, j)) out(k, i) += c * v(j);
    }
  }
  return out;
}

#define NRH_INSTANTIATE_ALGEBRA(T)                                                      \
  template AlgVec<T> basis_vector<T>(const AlgebraSpec&, int);                          \
  template AlgVec<T> from_m<T>(const AlgebraSpec&, const AlgVec<T>&);                   \
  template AlgVec<T> bracket<T>(const AlgebraSpec&, const AlgVec<T>&, const AlgVec<T>&); \
  template AlgVec<T> project<T>(const AlgebraSpec&, const AlgVec<T>&, Part);            \
  template T inner<T>(const AlgVec<T>&, const AlgVec<T>&);                              \
  template Grading grading<T>(const AlgebraSpec&, const AlgVec<T>&);                    \
  template Endo<T> right_bracket_matrix<T>(const AlgebraSpec&, const AlgVec<T>&);

NRH_INSTANTIATE_ALGEBRA(Radical)
NRH_INSTANTIATE_ALGEBRA(double)
#undef NRH_INSTANTIATE_ALGEBRA

// ---------------------------------------------------------------------------

std::string to_string(Axiom axiom) {
  switch (axiom) {
    case Axiom::antisymmetry: return "antisymmetry";
    case Axiom::jacobi: return "jacobi";
    case Axiom::reductivity: return "reductivity";
    case Axiom::naturally_reductive: return "naturally_reductive";
    case Axiom::ad_invariance: return "ad_invariance";
  }
  return "unknown";
}

long ValidationReport::count(Axiom axiom) const {
  long n = 0;
  for (const auto& v : violations) {
    if (v.axiom == axiom) ++n;
  }
  return n;
}

namespace {

std::string describe(const AlgVec<Radical>& x) {
  std::ostringstream os;
  bool first = true;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (x(k).is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << x(k) << ")e" << (k + 1);
  }
  return first ? "0" : os.str();
}

}  // namespace

ValidationReport validate(const AlgebraSpec& spec) {
  ValidationReport report;
  const int g = spec.dim_g();
  const int m = spec.dim_m();
  auto e = [&](int i) { return basis_vector<Radical>(spec, i); };

  long& n_anti = report.checks[Axiom::antisymmetry];
  for (int i = 0; i < g; ++i) {
    for (int j = i; j < g; ++j) {
      ++n_anti;
      AlgVec<Radical> sum = bracket(spec, e(i), e(j)) + bracket(spec, e(j), e(i));
      if (grading(spec, sum) != Grading::zero) {
        report.violations.push_back({Axiom::antisymmetry, {i + 1, j + 1}, "[x,y] + [y,x] = " + describe(sum)});
      }
    }
  }

  long& n_jac = report.checks[Axiom::jacobi];
  for (int i = 0; i < g; ++i) {
    for (int j = i + 1; j < g; ++j) {
      for (int k = j + 1; k < g; ++k) {
        ++n_jac;
        AlgVec<Radical> sum = bracket(spec, bracket(spec, e(i), e(j)), e(k)) +
                              bracket(spec, bracket(spec, e(j), e(k)), e(i)) +
                              bracket(spec, bracket(spec, e(k), e(i)), e(j));
        if (grading(spec, sum) != Grading::zero) {
          report.violations.push_back({Axiom::jacobi, {i + 1, j + 1, k + 1}, "cyclic sum = " + describe(sum)});
        }
      }
    }
  }

  long& n_red = report.checks[Axiom::reductivity];
  for (int i = 0; i < m; ++i) {
    for (int j = m; j < g; ++j) {
      ++n_red;
      AlgVec<Radical> h_part = project(spec, bracket(spec, e(i), e(j)), Part::h);
      if (grading(spec, h_part) != Grading::zero) {
        report.violations.push_back({Axiom::reductivity, {i + 1, j + 1}, "[m,h] has h-part " + describe(h_part)});
      }
    }
  }

  long& n_nat = report.checks[Axiom::naturally_reductive];
  for (int u = 0; u < m; ++u) {
    for (int v = 0; v < m; ++v) {
      for (int w = 0; w < m; ++w) {
        ++n_nat;
        Radical lhs = spec.constant(u, v, w) + spec.constant(u, w, v);
        if (!lhs.is_zero()) {
          report.violations.push_back({Axiom::naturally_reductive, {u + 1, v + 1, w + 1},
                                       "<[u,v]_m,w> + <v,[u,w]_m> = " + lhs.to_string()});
        }
      }
    }
  }

  if (spec.normal()) {
    long& n_ad = report.checks[Axiom::ad_invariance];
    for (int u = 0; u < g; ++u) {
      for (int v = 0; v < g; ++v) {
        for (int w = 0; w < g; ++w) {
          ++n_ad;
          Radical diff = spec.constant(u, v, w) - spec.constant(v, w, u);
          if (!diff.is_zero()) {
            report.violations.push_back({Axiom::ad_invariance, {u + 1, v + 1, w + 1},
                                         "<[u,v],w> - <u,[v,w]> = " + diff.to_string()});
          }
        }
      }
    }
  }
  return report;
}

}  // namespace nrh
