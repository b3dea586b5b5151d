#pragma once

#include <cstdint>
#include <compare>
#include <iosfwd>

#include "congsub/error.hpp"

namespace congsub {

using i64 = std::int64_t;
using u64 = std::uint64_t;

bool is_prime(i64 n);

/// Valuation capped at the working precision. `value == cap` means the
/// residue is indistinguishable from zero.
struct Valuation {
  int value = 0;
  int cap = 0;
  bool capped() const { return value >= cap; }
  friend bool operator==(const Valuation&, const Valuation&) = default;
};

/// The ring Z/p^N. Construction rejects composite p and any p^N that does not
/// fit comfortably in 62 bits (products go through 128-bit intermediates).
class Modulus {
 public:
  static Modulus make(i64 p, int precision);

  i64 p() const { return p_; }
  int N() const { return n_; }
  i64 value() const { return pn_; }

  /// p^k for 0 <= k <= N.
  i64 power(int k) const;

  i64 reduce(i64 a) const {
    i64 r = a % pn_;
    return r < 0 ? r + pn_ : r;
  }
  i64 add(i64 a, i64 b) const {
    i64 s = a + b;
    return s >= pn_ ? s - pn_ : s;
  }
  i64 sub(i64 a, i64 b) const {
    i64 s = a - b;
    return s < 0 ? s + pn_ : s;
  }
  i64 neg(i64 a) const { return a == 0 ? 0 : pn_ - a; }
  i64 mul(i64 a, i64 b) const {
    return static_cast<i64>((static_cast<__int128>(a) * b) % pn_);
  }
  i64 pow(i64 a, u64 e) const;

  /// v_p of a residue, capped at N.
  int valuation(i64 a) const;
  bool is_unit(i64 a) const { return a % p_ != 0; }
  /// Inverse of a unit residue; NonUnit otherwise.
  i64 inverse(i64 a) const;

  /// Same prime, smaller (or equal) precision.
  Modulus truncated(int precision) const;
  /// Same prime, precision raised by `extra` digits.
  Modulus extended(int extra) const { return make(p_, n_ + extra); }

  friend bool operator==(const Modulus& a, const Modulus& b) { return a.p_ == b.p_ && a.n_ == b.n_; }

 private:
  Modulus(i64 p, int n, i64 pn) : p_(p), n_(n), pn_(pn) {}
  i64 p_;
  int n_;
  i64 pn_;
};

/// A residue modulo p^N. Arithmetic between different moduli is an error.
class Scalar {
 public:
  Scalar(Modulus mod, i64 value) : mod_(mod), r_(mod.reduce(value)) {}

  const Modulus& modulus() const { return mod_; }
  i64 residue() const { return r_; }

  Valuation valuation() const { return {mod_.valuation(r_), mod_.N()}; }
  bool is_unit() const { return mod_.is_unit(r_); }
  bool is_zero() const { return r_ == 0; }
  Scalar inverse() const { return {mod_, mod_.inverse(r_)}; }

  Scalar operator+(const Scalar& o) const { check(o); return {mod_, mod_.add(r_, o.r_)}; }
  Scalar operator-(const Scalar& o) const { check(o); return {mod_, mod_.sub(r_, o.r_)}; }
  Scalar operator*(const Scalar& o) const { check(o); return {mod_, mod_.mul(r_, o.r_)}; }
  Scalar operator-() const { return {mod_, mod_.neg(r_)}; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.mod_ == b.mod_ && a.r_ == b.r_; }

 private:
  void check(const Scalar& o) const {
    if (!(mod_ == o.mod_)) fail(ErrorKind::ModulusMismatch, "scalar operands live in different rings");
  }
  Modulus mod_;
  i64 r_;
};

/// Free-function form: min(v_p(a), N) with the capped flag.
inline Valuation valuation(const Scalar& a) { return a.valuation(); }

/// v_p of a nonzero ordinary integer (no cap).
int integer_valuation(i64 a, i64 p);
/// v_p(k!) via Legendre's formula.
int factorial_valuation(i64 k, i64 p);
/// ceil(a / b) for b > 0.
inline i64 ceil_div(i64 a, i64 b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

std::ostream& operator<<(std::ostream& os, const Modulus& m);
std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace congsub
