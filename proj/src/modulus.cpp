#include "congsub/modulus.hpp"

#include <ostream>
#include <string>

namespace congsub {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidModulus: return "InvalidModulus";
    case ErrorKind::ModulusMismatch: return "ModulusMismatch";
    case ErrorKind::NonUnit: return "NonUnit";
    case ErrorKind::PrecisionExceeded: return "PrecisionExceeded";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::UnsupportedPrime: return "UnsupportedPrime";
    case ErrorKind::UnsupportedPrecision: return "UnsupportedPrecision";
    case ErrorKind::ClosureBudgetExceeded: return "ClosureBudgetExceeded";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::DegenerateSpan: return "DegenerateSpan";
    case ErrorKind::NoUnitDerivative: return "NoUnitDerivative";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::NotSurjective: return "NotSurjective";
    case ErrorKind::BracketClosureAnomaly: return "BracketClosureAnomaly";
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::ZeroModP: return "ZeroModP";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::IdenticallyZeroOnV: return "IdenticallyZeroOnV";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::AssertionFailure: return "AssertionFailure";
  }
  return "Unknown";
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {
constexpr i64 kMaxModulus = i64{1} << 62;
}

Modulus Modulus::make(i64 p, int precision) {
  if (!is_prime(p)) fail(ErrorKind::InvalidModulus, "p = " + std::to_string(p) + " is not prime");
  if (precision < 1) fail(ErrorKind::InvalidModulus, "precision must be >= 1");
  i64 pn = 1;
  for (int i = 0; i < precision; ++i) {
    if (pn > kMaxModulus / p)
      fail(ErrorKind::InvalidModulus,
           std::to_string(p) + "^" + std::to_string(precision) + " overflows the 62-bit residue model");
    pn *= p;
  }
  return Modulus(p, precision, pn);
}

i64 Modulus::power(int k) const {
  if (k < 0 || k > n_) fail(ErrorKind::PrecisionExceeded, "p^" + std::to_string(k) + " outside [0, N]");
  i64 r = 1;
  for (int i = 0; i < k; ++i) r *= p_;
  return r;
}

i64 Modulus::pow(i64 a, u64 e) const {
  i64 base = reduce(a);
  i64 result = reduce(1);
  while (e > 0) {
    if (e & 1U) result = mul(result, base);
    base = mul(base, base);
    e >>= 1U;
  }
  return result;
}

int Modulus::valuation(i64 a) const {
  a = reduce(a);
  if (a == 0) return n_;
  int v = 0;
  while (a % p_ == 0) {
    a /= p_;
    ++v;
  }
  return v;
}

i64 Modulus::inverse(i64 a) const {
  a = reduce(a);
  if (!is_unit(a)) fail(ErrorKind::NonUnit, std::to_string(a) + " is not a unit mod " + std::to_string(pn_));
  // extended Euclid on (a, p^N)
  __int128 old_r = a, r = pn_, old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    __int128 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  i64 inv = static_cast<i64>(old_s % pn_);
  return inv < 0 ? inv + pn_ : inv;
}

Modulus Modulus::truncated(int precision) const {
  if (precision > n_) fail(ErrorKind::PrecisionExceeded, "cannot truncate to a higher precision");
  return make(p_, precision);
}

int integer_valuation(i64 a, i64 p) {
  if (a == 0) return 1 << 20;
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

int factorial_valuation(i64 k, i64 p) {
  int v = 0;
  for (i64 q = p; q <= k; q *= p) {
    v += static_cast<int>(k / q);
    if (q > k / p) break;
  }
  return v;
}

std::ostream& operator<<(std::ostream& os, const Modulus& m) {
  return os << "Z/" << m.p() << "^" << m.N();
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.residue(); }

}  // namespace congsub
