#pragma once

// Exact scalars for structure constants: rationals and the radical field
// Q(sqrt2, sqrt3, sqrt5), plus the integer combinatorics used by the
// covariant-derivative recurrences.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Core>

namespace nrh {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "p", "p/q" or a finite decimal such as "-0.125" into an exact rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

/// Element of Q(sqrt2, sqrt3, sqrt5) stored as 8 rational coordinates on
/// {1, sqrt2, sqrt3, sqrt5, sqrt6, sqrt10, sqrt15, sqrt30}.
///
/// Internally slot i holds the square-free radicand whose prime bitmask
/// (bit0 = 2, bit1 = 3, bit2 = 5) is kMaskOfSlot[i], so products of basis
/// elements reduce with one xor and one integer factor.
class Radical {
 public:
  static constexpr int kDim = 8;
  static constexpr std::array<int, kDim> kRadicand = {1, 2, 3, 5, 6, 10, 15, 30};

  Radical() = default;
  Radical(int value) : Radical(Rational(value)) {}  // NOLINT(google-explicit-constructor)
  Radical(const Rational& value);                   // NOLINT(google-explicit-constructor)

  /// sqrt(n) for n one of kRadicand; throws std::invalid_argument otherwise.
  static Radical sqrt_of(int radicand);
  /// coeff * sqrt(radicand).
  static Radical term(const Rational& coeff, int radicand);
  static Radical from_coeffs(const std::array<Rational, kDim>& coeffs);

  /// Coefficient on sqrt(kRadicand[slot]).
  const Rational& coeff(int slot) const { return coeffs_[slot]; }
  const std::array<Rational, kDim>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  bool is_rational() const;

  Radical& operator+=(const Radical& rhs);
  Radical& operator-=(const Radical& rhs);
  Radical& operator*=(const Radical& rhs);
  Radical& operator/=(const Radical& rhs);

  friend Radical operator+(Radical lhs, const Radical& rhs) { return lhs += rhs; }
  friend Radical operator-(Radical lhs, const Radical& rhs) { return lhs -= rhs; }
  friend Radical operator*(const Radical& lhs, const Radical& rhs);
  friend Radical operator/(Radical lhs, const Radical& rhs) { return lhs /= rhs; }
  Radical operator-() const;

  friend bool operator==(const Radical& lhs, const Radical& rhs) { return lhs.coeffs_ == rhs.coeffs_; }
  friend bool operator!=(const Radical& lhs, const Radical& rhs) { return !(lhs == rhs); }

  /// Multiplicative inverse via the product of the seven Galois conjugates.
  /// Throws std::domain_error on zero.
  Radical inverse() const;

  /// Image under the automorphism flipping the signs of the radicals whose
  /// primes are set in prime_mask.
  Radical conjugate(int prime_mask) const;

  /// Nearest double, evaluated in 50 significant digits before rounding.
  double to_double() const;

  /// Human-readable form, e.g. "-1/2 + 3*sqrt(6)" or "0".
  std::string to_string() const;

 private:
  std::array<Rational, kDim> coeffs_{};
};

std::ostream& operator<<(std::ostream& os, const Radical& r);

inline double to_double(const Radical& r) { return r.to_double(); }
inline double to_double(double x) { return x; }

/// Binomial coefficient; 0 when k < 0 or k > n.
BigInt binomial(int n, int k);

/// sum_{j=1}^{i} s_j C(k+1, j) C(k+1-j, i-j) with s_j = (-1)^j when
/// `sign_exponent_offset` is 0 and s_j = (-1)^(j-1) when it is 1.
BigInt alternating_binomial_sum(int k, int i, int sign_exponent_offset);

}  // namespace nrh

namespace Eigen {

template <>
struct NumTraits<nrh::Radical> : GenericNumTraits<nrh::Radical> {
  using Real = nrh::Radical;
  using NonInteger = nrh::Radical;
  using Nested = nrh::Radical;
  using Literal = nrh::Radical;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 64,
    MulCost = 256
  };

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
