#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "congsub/modulus.hpp"

namespace congsub {

/// A 2x2 matrix over Z/p^N, row-major (a b; c d). This is the only matrix size
/// the library works with (G = SL(2)).
class Mat2 {
 public:
  explicit Mat2(Modulus mod) : mod_(mod), e_{0, 0, 0, 0} {}
  Mat2(Modulus mod, i64 a, i64 b, i64 c, i64 d)
      : mod_(mod), e_{mod.reduce(a), mod.reduce(b), mod.reduce(c), mod.reduce(d)} {}

  static Mat2 identity(Modulus mod) { return {mod, 1, 0, 0, 1}; }
  static Mat2 diagonal(Modulus mod, i64 a, i64 d) { return {mod, a, 0, 0, d}; }

  const Modulus& modulus() const { return mod_; }
  i64 operator()(int row, int col) const { return e_[static_cast<std::size_t>(2 * row + col)]; }
  Scalar entry(int row, int col) const { return {mod_, (*this)(row, col)}; }
  const std::array<i64, 4>& raw() const { return e_; }

  i64 det() const { return mod_.sub(mod_.mul(e_[0], e_[3]), mod_.mul(e_[1], e_[2])); }
  i64 trace() const { return mod_.add(e_[0], e_[3]); }
  bool is_zero() const { return e_[0] == 0 && e_[1] == 0 && e_[2] == 0 && e_[3] == 0; }
  bool is_identity() const { return e_[0] == mod_.reduce(1) && e_[1] == 0 && e_[2] == 0 && e_[3] == mod_.reduce(1); }
  /// Minimum valuation over the four entries (capped at N).
  int valuation() const;

  Mat2 operator+(const Mat2& o) const;
  Mat2 operator-(const Mat2& o) const;
  Mat2 operator*(const Mat2& o) const;
  Mat2 operator-() const { return Mat2(mod_) - *this; }
  Mat2 scaled(i64 k) const;
  Mat2 pow(u64 e) const;
  /// Two-sided inverse; NonUnit when det is divisible by p.
  Mat2 inverse() const;

  /// Reduction to a lower precision (same prime).
  Mat2 reduced(int precision) const;
  Mat2 reduced(const Modulus& target) const;
  /// Canonical lift of the residues to a higher precision.
  Mat2 lifted(const Modulus& target) const;

  /// Packed key for hash sets; requires p^N < 2^16.
  u64 key() const {
    return static_cast<u64>(e_[0]) | (static_cast<u64>(e_[1]) << 16U) | (static_cast<u64>(e_[2]) << 32U) |
           (static_cast<u64>(e_[3]) << 48U);
  }
  static Mat2 from_key(Modulus mod, u64 key) {
    return {mod, static_cast<i64>(key & 0xFFFFU), static_cast<i64>((key >> 16U) & 0xFFFFU),
            static_cast<i64>((key >> 32U) & 0xFFFFU), static_cast<i64>(key >> 48U)};
  }

  friend bool operator==(const Mat2& x, const Mat2& y) { return x.mod_ == y.mod_ && x.e_ == y.e_; }

  std::string to_string() const;

 private:
  void check(const Mat2& o) const {
    if (!(mod_ == o.mod_)) fail(ErrorKind::ModulusMismatch, "matrix operands live in different rings");
  }
  Modulus mod_;
  std::array<i64, 4> e_;
};

std::ostream& operator<<(std::ostream& os, const Mat2& m);

/// Is p^N small enough for Mat2::key()?
inline bool packable(const Modulus& mod) { return mod.value() < (i64{1} << 16); }

/// g in the image of the principal congruence subgroup of level p^m:
/// every entry of g - 1 has valuation >= m.
bool in_principal_congruence(const Mat2& g, int m);

/// g^p == 1 mod p. Requires p >= 2 (N0 = 2).
bool residually_unipotent(const Mat2& g);

/// (g mod p)^2 == 0, the N0 = 2 form of residual nilpotence.
bool residually_nilpotent(const Mat2& x);

/// Free-function spelling used across the code base.
inline Mat2 mat_inverse(const Mat2& g) { return g.inverse(); }

/// [k, x] = k x k^-1 x^-1.
Mat2 commutator(const Mat2& k, const Mat2& x);

}  // namespace congsub
