#include "nrh/scalars.hpp"

#include <bit>
#include <cctype>
#include <ostream>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace nrh {

namespace {

// Prime bitmask (bit0 = 2, bit1 = 3, bit2 = 5) of each slot's radicand.
constexpr std::array<int, Radical::kDim> kMaskOfSlot = {0, 1, 2, 4, 3, 5, 6, 7};
constexpr std::array<int, Radical::kDim> kSlotOfMask = {0, 1, 2, 4, 3, 5, 6, 7};
constexpr std::array<int, 3> kPrimes = {2, 3, 5};

int prime_product(int mask) {
  int p = 1;
  for (int b = 0; b < 3; ++b) {
    if (mask & (1 << b)) p *= kPrimes[b];
  }
  return p;
}

int slot_of_radicand(int radicand) {
  for (int s = 0; s < Radical::kDim; ++s) {
    if (Radical::kRadicand[s] == radicand) return s;
  }
  return -1;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ParseError("empty rational");

  auto parse_int = [&](std::string_view digits) -> BigInt {
    if (digits.empty()) throw ParseError("malformed number '" + s + "'");
    std::size_t start = (digits[0] == '-' || digits[0] == '+') ? 1 : 0;
    if (start == digits.size()) throw ParseError("malformed number '" + s + "'");
    for (std::size_t i = start; i < digits.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(digits[i]))) {
        throw ParseError("malformed number '" + s + "'");
      }
    }
    // strip leading zeros; a leading 0 would make the BigInt parse it as octal
    std::string_view body = digits.substr(start);
    while (body.size() > 1 && body[0] == '0') body.remove_prefix(1);
    BigInt v{std::string(body)};
    return digits[0] == '-' ? BigInt(-v) : v;
  };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    BigInt num = parse_int(std::string_view(s).substr(0, slash));
    BigInt den = parse_int(std::string_view(s).substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rational(num, den);
  }

  // Decimal with optional fraction and exponent.
  std::string_view rest(s);
  bool negative = false;
  if (rest[0] == '-' || rest[0] == '+') {
    negative = rest[0] == '-';
    rest.remove_prefix(1);
  }
  int exponent = 0;
  if (auto e = rest.find_first_of("eE"); e != std::string_view::npos) {
    BigInt ev = parse_int(rest.substr(e + 1));
    if (ev > 400 || ev < -400) throw ParseError("exponent out of range in '" + s + "'");
    exponent = ev.convert_to<int>();
    rest = rest.substr(0, e);
  }
  std::string digits;
  if (auto dot = rest.find('.'); dot != std::string_view::npos) {
    digits = std::string(rest.substr(0, dot)) + std::string(rest.substr(dot + 1));
    exponent -= static_cast<int>(rest.size() - dot - 1);
  } else {
    digits = std::string(rest);
  }
  if (digits.empty()) throw ParseError("malformed number '" + s + "'");
  BigInt mantissa = parse_int(digits);
  Rational value(mantissa);
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  value = exponent < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

Radical::Radical(const Rational& value) { coeffs_[0] = value; }

Radical Radical::sqrt_of(int radicand) { return term(Rational(1), radicand); }

Radical Radical::term(const Rational& coeff, int radicand) {
  int slot = slot_of_radicand(radicand);
  if (slot < 0) throw std::invalid_argument("radicand outside Q(sqrt2,sqrt3,sqrt5) basis: " + std::to_string(radicand));
  Radical r;
  r.coeffs_[slot] = coeff;
  return r;
}

Radical Radical::from_coeffs(const std::array<Rational, kDim>& coeffs) {
  Radical r;
  r.coeffs_ = coeffs;
  return r;
}

bool Radical::is_zero() const {
  for (const auto& c : coeffs_) {
    if (c != 0) return false;
  }
  return true;
}

bool Radical::is_rational() const {
  for (int s = 1; s < kDim; ++s) {
    if (coeffs_[s] != 0) return false;
  }
  return true;
}

Radical& Radical::operator+=(const Radical& rhs) {
  for (int s = 0; s < kDim; ++s) {
    if (rhs.coeffs_[s] != 0) coeffs_[s] += rhs.coeffs_[s];
  }
  return *this;
}

Radical& Radical::operator-=(const Radical& rhs) {
  for (int s = 0; s < kDim; ++s) {
    if (rhs.coeffs_[s] != 0) coeffs_[s] -= rhs.coeffs_[s];
  }
  return *this;
}

Radical operator*(const Radical& lhs, const Radical& rhs) {
  Radical out;
  for (int a = 0; a < Radical::kDim; ++a) {
    if (lhs.coeffs_[a] == 0) continue;
    for (int b = 0; b < Radical::kDim; ++b) {
      if (rhs.coeffs_[b] == 0) continue;
      int ma = kMaskOfSlot[a];
      int mb = kMaskOfSlot[b];
      int slot = kSlotOfMask[ma ^ mb];
      Rational prod = lhs.coeffs_[a] * rhs.coeffs_[b];
      int factor = prime_product(ma & mb);
      if (factor != 1) prod *= factor;
      out.coeffs_[slot] += prod;
    }
  }
  return out;
}

Radical& Radical::operator*=(const Radical& rhs) { return *this = *this * rhs; }

Radical& Radical::operator/=(const Radical& rhs) { return *this = *this * rhs.inverse(); }

Radical Radical::operator-() const {
  Radical out;
  for (int s = 0; s < kDim; ++s) out.coeffs_[s] = -coeffs_[s];
  return out;
}

Radical Radical::conjugate(int prime_mask) const {
  Radical out = *this;
  for (int s = 0; s < kDim; ++s) {
    if (std::popcount(static_cast<unsigned>(kMaskOfSlot[s] & prime_mask)) % 2 == 1) {
      out.coeffs_[s] = -out.coeffs_[s];
    }
  }
  return out;
}

Radical Radical::inverse() const {
  if (is_zero()) throw std::domain_error("Radical: division by zero");
  if (is_rational()) return Radical(Rational(1) / coeffs_[0]);
  Radical partial(1);
  for (int m = 1; m < 8; ++m) partial *= conjugate(m);
  Radical norm = *this * partial;
  // The full Galois norm is rational.
  return partial * Radical(Rational(1) / norm.coeffs_[0]);
}

double Radical::to_double() const {
  using Float = boost::multiprecision::cpp_bin_float_50;
  Float acc = 0;
  for (int s = 0; s < kDim; ++s) {
    if (coeffs_[s] == 0) continue;
    Float c = Float(numerator(coeffs_[s])) / Float(denominator(coeffs_[s]));
    acc += s == 0 ? c : c * boost::multiprecision::sqrt(Float(kRadicand[s]));
  }
  return acc.convert_to<double>();
}

std::string Radical::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int s = 0; s < kDim; ++s) {
    const Rational& c = coeffs_[s];
    if (c == 0) continue;
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (s == 0) {
      os << nrh::to_string(mag);
    } else {
      if (mag != 1) os << nrh::to_string(mag) << "*";
      os << "sqrt(" << kRadicand[s] << ")";
    }
  }
  if (first) return "0";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Radical& r) { return os << r.to_string(); }

BigInt binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (int j = 1; j <= k; ++j) {
    result *= n - k + j;
    result /= j;
  }
  return result;
}

BigInt alternating_binomial_sum(int k, int i, int sign_exponent_offset) {
  BigInt total = 0;
  for (int j = 1; j <= i; ++j) {
    BigInt term = binomial(k + 1, j) * binomial(k + 1 - j, i - j);
    if ((j + sign_exponent_offset) % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

}  // namespace nrh
