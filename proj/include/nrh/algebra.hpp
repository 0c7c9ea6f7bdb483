#pragma once

// Reductive Lie algebras g = m + h given by structure constants in an
// orthonormal basis. Basis indices 0..dim_m-1 span m, dim_m..dim_g-1 span h.

#include <array>
#include <complex>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nrh/scalars.hpp"

namespace nrh {

template <class T>
using AlgVec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <class T>
using Endo = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Part { m, h };
enum class Grading { zero, m_only, h_only, full };

struct BracketTerm {
  int k = 0;  // 0-based target index
  Radical coeff;
};

class AlgebraSpec {
 public:
  AlgebraSpec() = default;
  AlgebraSpec(std::string name, int dim_g, int dim_m, std::vector<std::string> labels = {}, bool normal = false);

  const std::string& name() const { return name_; }
  int dim_g() const { return dim_g_; }
  int dim_m() const { return dim_m_; }
  int dim_h() const { return dim_g_ - dim_m_; }
  bool normal() const { return normal_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool in_m(int index) const { return index < dim_m_; }

  /// Sets [e_i, e_j] (0-based). Unless [e_j, e_i] was itself set explicitly,
  /// it is implied as the negative. Duplicate targets are merged.
  void set_bracket(int i, int j, const std::vector<BracketTerm>& terms);

  /// True if [e_i, e_j] was given explicitly (as opposed to implied).
  bool is_explicit(int i, int j) const { return explicit_[index(i, j)]; }

  const std::vector<BracketTerm>& terms(int i, int j) const { return terms_[index(i, j)]; }

  /// c_{ij}^k in [e_i, e_j] = sum_k c_{ij}^k e_k.
  Radical constant(int i, int j, int k) const;

  template <class T>
  const std::vector<std::pair<int, T>>& sparse_terms(int i, int j) const;

  friend bool operator==(const AlgebraSpec& a, const AlgebraSpec& b);

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * dim_g_ + j; }
  void rebuild_float(std::size_t idx);

  std::string name_;
  int dim_g_ = 0;
  int dim_m_ = 0;
  bool normal_ = false;
  std::vector<std::string> labels_;
  std::vector<std::vector<BracketTerm>> terms_;
  std::vector<std::vector<std::pair<int, Radical>>> exact_;
  std::vector<std::vector<std::pair<int, double>>> float_;
  std::vector<bool> explicit_;
};

template <>
inline const std::vector<std::pair<int, Radical>>& AlgebraSpec::sparse_terms<Radical>(int i, int j) const {
  return exact_[index(i, j)];
}
template <>
inline const std::vector<std::pair<int, double>>& AlgebraSpec::sparse_terms<double>(int i, int j) const {
  return float_[index(i, j)];
}

/// Unit vector e_index of length dim_g.
template <class T>
AlgVec<T> basis_vector(const AlgebraSpec& spec, int index);

/// Embeds m-coordinates (length dim_m) into g.
template <class T>
AlgVec<T> from_m(const AlgebraSpec& spec, const AlgVec<T>& m_coords);

template <class T>
AlgVec<T> bracket(const AlgebraSpec& spec, const AlgVec<T>& x, const AlgVec<T>& y);

template <class T>
AlgVec<T> project(const AlgebraSpec& spec, const AlgVec<T>& x, Part part);

/// Declared-orthonormal inner product.
template <class T>
T inner(const AlgVec<T>& x, const AlgVec<T>& y);

template <class T>
Grading grading(const AlgebraSpec& spec, const AlgVec<T>& x);

/// Matrix of X -> [X, v] on g (column i is [e_i, v]).
template <class T>
Endo<T> right_bracket_matrix(const AlgebraSpec& spec, const AlgVec<T>& v);

// ---------------------------------------------------------------------------
// Validation

enum class Axiom { antisymmetry, jacobi, reductivity, naturally_reductive, ad_invariance };

std::string to_string(Axiom axiom);

struct Violation {
  Axiom axiom;
  std::vector<int> indices;  // 1-based basis indices
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::map<Axiom, long> checks;  // number of instances examined per axiom

  bool ok() const { return violations.empty(); }
  long count(Axiom axiom) const;
};

/// Exact check of every algebraic hypothesis; violations are returned, not thrown.
ValidationReport validate(const AlgebraSpec& spec);

// ---------------------------------------------------------------------------
// Builtins

/// The Berger space Sp(2)/SU(2): m = {Q1..Q7}, h = {Q8, Q9, Q10}.
AlgebraSpec sp2_su2();
/// su(2) with h = 0 and [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2.
AlgebraSpec su2_biinv();
/// Abelian algebra R^d with h = 0 (flat space).
AlgebraSpec abelian(int dim);

/// Resolves "sp2_su2", "su2_biinv" or "abelian<d>"; nullopt otherwise.
std::optional<AlgebraSpec> builtin_spec(const std::string& name);

// ---------------------------------------------------------------------------
// Matrix model of sp(2)

using Mat4c = Eigen::Matrix<std::complex<double>, 4, 4>;

/// Element of sp(2) from its free entries (a11, a33 purely imaginary).
Mat4c sp2_element(std::complex<double> a11, std::complex<double> a33, std::complex<double> a12,
                  std::complex<double> a13, std::complex<double> a14, std::complex<double> a34);

/// True if m is skew-Hermitian and has the sp(2) block pattern, within tol.
bool in_sp2(const Mat4c& m, double tol = 1e-12);

/// <A, B> = -(1/5) Re Tr(AB).
double trace_inner(const Mat4c& a, const Mat4c& b);

struct MatrixRep {
  std::array<Mat4c, 10> s;                     // S_1..S_10
  Eigen::Matrix<Radical, 10, 10> transform;    // Q = transform * S
  std::array<Mat4c, 10> q;                     // Q_1..Q_10
};

MatrixRep build_matrix_rep();

class ReconstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nearest p/q * sqrt(s) with |p| <= 12, q in {1,2,4}, s a radical basis
/// element, accepted when within tol of x.
std::optional<Radical> snap_radical(double x, double tol = 1e-10);

/// Expands every commutator [Q_i, Q_j] in the Q basis and snaps the
/// coefficients to radicals. Throws ReconstructionError when a coefficient
/// is not recognisable.
AlgebraSpec table_from_matrices(const MatrixRep& rep);

// ---------------------------------------------------------------------------
// Spec files

AlgebraSpec load_spec(const std::filesystem::path& path);
void save_spec(const AlgebraSpec& spec, const std::filesystem::path& path);
AlgebraSpec parse_spec(const std::string& json_text);
std::string serialize_spec(const AlgebraSpec& spec);

/// Builtin name or spec-file path.
AlgebraSpec resolve_space(const std::string& space);

}  // namespace nrh
