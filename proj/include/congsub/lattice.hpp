#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "congsub/matrix.hpp"

namespace congsub {

/// Coordinates of an element of sl(2) in the ordered basis (e, h, f):
/// v <-> [[v_h, v_e], [v_f, -v_h]].
class Vec3 {
 public:
  explicit Vec3(Modulus mod) : mod_(mod), c_{0, 0, 0} {}
  Vec3(Modulus mod, i64 e, i64 h, i64 f) : mod_(mod), c_{mod.reduce(e), mod.reduce(h), mod.reduce(f)} {}

  static Vec3 e(Modulus mod) { return {mod, 1, 0, 0}; }
  static Vec3 h(Modulus mod) { return {mod, 0, 1, 0}; }
  static Vec3 f(Modulus mod) { return {mod, 0, 0, 1}; }
  static Vec3 unit(Modulus mod, int i);
  /// Traceless matrix -> coordinates; DomainViolation if the trace is nonzero.
  static Vec3 from_matrix(const Mat2& x);

  const Modulus& modulus() const { return mod_; }
  i64 operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  const std::array<i64, 3>& raw() const { return c_; }
  Mat2 to_matrix() const { return {mod_, c_[1], c_[0], c_[2], mod_.neg(c_[1])}; }

  int valuation() const;
  bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0; }
  bool is_primitive() const { return valuation() == 0; }

  Vec3 operator+(const Vec3& o) const;
  Vec3 operator-(const Vec3& o) const;
  Vec3 operator-() const { return Vec3(mod_) - *this; }
  Vec3 scaled(i64 k) const;
  Vec3 reduced(const Modulus& target) const;
  Vec3 lifted(const Modulus& target) const;
  /// Standard dot product with a coefficient triple (used for functionals).
  i64 dot(const Vec3& o) const;

  friend bool operator==(const Vec3& a, const Vec3& b) { return a.mod_ == b.mod_ && a.c_ == b.c_; }
  std::string to_string() const;

 private:
  Modulus mod_;
  std::array<i64, 3> c_;
};

/// Bracket table of sl(2) on (e, h, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h.
struct StructureConstants {
  /// c[i][j][k] with [x_i, x_j] = sum_k c[i][j][k] x_k.
  std::array<std::array<std::array<int, 3>, 3>, 3> c;
  static const StructureConstants& sl2();
  bool antisymmetric() const;
  bool satisfies_jacobi() const;
};

Vec3 bracket(const Vec3& x, const Vec3& y);

/// 3x3 matrix over Z/p^N (columns are vectors), used for adapted bases.
class Mat3 {
 public:
  explicit Mat3(Modulus mod) : mod_(mod), e_{} {}
  static Mat3 identity(Modulus mod);
  static Mat3 from_columns(std::span<const Vec3> cols);

  const Modulus& modulus() const { return mod_; }
  i64 operator()(int r, int c) const { return e_[static_cast<std::size_t>(3 * r + c)]; }
  i64& at(int r, int c) { return e_[static_cast<std::size_t>(3 * r + c)]; }
  Vec3 column(int c) const { return {mod_, (*this)(0, c), (*this)(1, c), (*this)(2, c)}; }
  Vec3 apply(const Vec3& v) const;
  Mat3 operator*(const Mat3& o) const;
  i64 det() const;
  Mat3 inverse() const;
  friend bool operator==(const Mat3& a, const Mat3& b) { return a.mod_ == b.mod_ && a.e_ == b.e_; }

 private:
  Modulus mod_;
  std::array<i64, 9> e_;
};

/// Elementary divisor data of a generator list: the span equals
/// span{p^alpha_i x_i}, with alpha ascending and alpha_i = N meaning "absent"
/// (the span has lower rank at this precision).
struct SmithForm {
  std::array<int, 3> alpha{};
  Mat3 adapted;          ///< columns x_1, x_2, x_3: a basis of the ambient lattice
  Mat3 adapted_inverse;  ///< coordinates with respect to the adapted basis
};

/// Smith reduction over Z/p^N with minimal-valuation pivots, ties broken by
/// (row, column). Generators may be rank-deficient.
SmithForm smith_form(Modulus mod, std::span<const Vec3> generators);

/// A Z_p-submodule of sl(2, Z_p) known modulo p^N, i.e. L + p^N·g. Values are
/// immutable; divisors and adapted basis are computed once at construction.
class LieLattice {
 public:
  /// Full-rank lattice; PrecisionExhausted if some divisor reaches N.
  static LieLattice from_columns(Modulus mod, std::span<const Vec3> columns);
  /// Arbitrary-rank span of generators.
  static LieLattice span(Modulus mod, std::span<const Vec3> generators);
  static LieLattice ambient(Modulus mod);
  /// p^k·g.
  static LieLattice scaled_ambient(Modulus mod, int k);

  const Modulus& modulus() const { return mod_; }
  const std::array<int, 3>& divisors() const { return smith_.alpha; }
  Vec3 adapted(int i) const { return smith_.adapted.column(i); }
  const SmithForm& smith() const { return smith_; }
  int rank() const;
  bool full_rank() const { return rank() == 3; }
  /// p^alpha_i x_i for the present divisors.
  std::vector<Vec3> basis() const;

  /// v in L + p^m g (m <= N).
  bool contains(const Vec3& v, int m) const;
  bool contains(const Vec3& v) const { return contains(v, mod_.N()); }
  /// other ⊆ this + p^m g.
  bool contains(const LieLattice& other, int m) const;
  bool contains(const LieLattice& other) const { return contains(other, mod_.N()); }

  /// p^k L.
  LieLattice scaled(int k) const;
  /// Sum with another lattice at the same precision.
  LieLattice operator+(const LieLattice& o) const;
  /// Closure under bracket (spans brackets until stable).
  LieLattice lie_closure() const;

  friend bool operator==(const LieLattice& a, const LieLattice& b) { return a.contains(b) && b.contains(a); }
  std::string to_string() const;

 private:
  LieLattice(Modulus mod, SmithForm smith) : mod_(mod), smith_(std::move(smith)) {}
  Modulus mod_;
  SmithForm smith_;
};

/// alpha_3 of a full-rank lattice: least n with p^n g ⊆ L.
int lattice_level(const LieLattice& L);
/// Same adapted basis, divisors zeroed on the span; isolated by construction.
LieLattice saturate(const LieLattice& L);
/// Saturation of the span of a generator list (any rank).
LieLattice saturate(Modulus mod, std::span<const Vec3> generators);
/// All pairwise brackets of lattice generators lie in L + p^nu g.
bool is_subalgebra_mod(const LieLattice& L, int nu);
/// v in L + p^m g.
bool membership_mod(const LieLattice& L, const Vec3& v, int m);
/// Index [sat(L) : L] as a p-exponent: sum of the present divisors.
int saturation_index_exponent(const LieLattice& L);

}  // namespace congsub
