#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "congsub/closure.hpp"
#include "congsub/exec.hpp"
#include "congsub/rational.hpp"
#include "congsub/matrix.hpp"

namespace congsub {

/// Integer matrix (a b; c d), typically an element of SL(2, Z).
struct IntMat2 {
  i64 a = 1, b = 0, c = 0, d = 1;
  i64 det() const { return a * d - b * c; }
  Mat2 reduce(const Modulus& mod) const { return {mod, a, b, c, d}; }
  friend bool operator==(const IntMat2&, const IntMat2&) = default;
  std::string to_string() const;
};

/// prime -> exponent, exponents >= 1.
using LevelFactorization = std::map<i64, int>;
LevelFactorization factorize(i64 n);
i64 level_value(const LevelFactorization& f);

/// min over v in {e, h, f} of v_p((Ad(x) - 1) v), capped at N.
Valuation lambda_p(const Mat2& x);

/// Membership test for a subgroup of SL(2, Z/p^n).
using Membership = std::function<bool(const Mat2&)>;

/// Named subgroups of SL(2, Z/p^n).
enum class SubgroupKind { Whole, Gamma0, Gamma1, Principal, Trivial };
struct SubgroupSpec {
  SubgroupKind kind = SubgroupKind::Gamma0;
  /// Exponent j of the defining congruence mod p^j (defaults to n).
  std::optional<int> level;
  std::string to_string() const;
};
Membership membership(const SubgroupSpec& spec, const Modulus& mod);
/// Membership in a finite subgroup given by its closure.
Membership membership(const GroupClosure& group);

struct VolumeCount {
  u64 count = 0;
  u64 total = 0;
  Rational ratio() const { return {static_cast<i64>(count), static_cast<i64>(total)}; }
};

/// #{k in SL(2, Z/p^n) : k x k^-1 x^-1 in K} / |SL(2, Z/p^n)|; x is reduced to mod.
VolumeCount phi_brute(const Membership& K, const Mat2& x, const Modulus& mod, const Budget& budget = {},
                      Exec exec = Exec::Parallel);

/// Number of points of P^1(Z/p^n) fixed by the Möbius action of x.
u64 fixed_points_P1(const Mat2& x, int n);
/// |P^1(Z/p^n)| = p^n + p^(n-1).
u64 p1_size(i64 p, int n);

/// Closed form for Γ0(p^n) and upper-triangular x with r = min(v(d-a), v(b)) < n.
Rational phi_gamma0(const Mat2& x, int n);

enum class DeltaKind { Gamma0, GammaFull };
struct CDeltaResult {
  u64 count = 0;
  u64 index = 0;
  Rational ratio() const { return {static_cast<i64>(count), static_cast<i64>(index)}; }
};
/// Fixed points of gamma on Γ/Δ for Δ = Γ0(M) or Γ(M).
CDeltaResult c_delta(const IntMat2& gamma, DeltaKind kind, i64 M, Exec exec = Exec::Parallel);
/// [Γ : Γ0(M)] = M prod (1 + 1/p); [Γ : Γ(M)] = M^3 prod (1 - 1/p^2).
u64 index_gamma0(i64 M);
u64 index_gamma_full(i64 M);

struct BetaResult {
  i64 value = 1;
  std::map<i64, int> lambda;
};
/// prod over p | N with lambda_p(x) < delta n_p of p^(n_p).
BetaResult beta(const LevelFactorization& N, const IntMat2& x, Rational delta);

/// (1 / (|U| |G|)) #{(u, k) : k^-1 u k in K}, U upper unitriangular mod p^n.
VolumeCount unipotent_orbital_volume(const Membership& K, const Modulus& mod, const Budget& budget = {},
                                     Exec exec = Exec::Parallel);
/// The same count with the loops swapped (u outer, k inner).
VolumeCount unipotent_orbital_volume_by_unipotent(const Membership& K, const Modulus& mod, const Budget& budget = {});

/// (1 + 1/p)^-1 p^-ceil(n/2): c_Δ(γ)/[Γ:Δ] for γ = [[1,1],[0,1]], Δ = Γ0(p^n).
Rational gamma0_unipotent_ratio(i64 p, int n);
/// ratio <= index^(-1/3), decided as ratio^3 * index <= 1.
bool decay_bound_holds(Rational ratio, u64 index);

}  // namespace congsub
