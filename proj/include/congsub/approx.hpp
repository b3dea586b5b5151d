#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "congsub/closure.hpp"
#include "congsub/exec.hpp"
#include "congsub/rational.hpp"
#include "congsub/lattice.hpp"
#include "congsub/random.hpp"

namespace congsub {

/// c = (c1, c2, c3) for the traceless matrix [[c1, c2], [c3, -c1]], stored as
/// the functional w on (e, h, f) coordinates with tr(c·x) = w·x, i.e.
/// w = (c3, 2c1, c2). Keeping 2c1 makes p = 2 work without halving.
class AnnihilatorPoint {
 public:
  /// From a functional; DegenerateSpan unless it is primitive.
  static AnnihilatorPoint from_functional(const Vec3& w);
  /// From (c1, c2, c3) directly.
  static AnnihilatorPoint from_c(Modulus mod, i64 c1, i64 c2, i64 c3);

  const Vec3& functional() const { return w_; }
  const Modulus& modulus() const { return w_.modulus(); }
  i64 c2() const { return w_[2]; }
  i64 c3() const { return w_[0]; }
  i64 two_c1() const { return w_[1]; }

  /// Scale so the first unit among (c2, c3, c1) becomes 1.
  AnnihilatorPoint canonical() const;
  /// tr(c·x) = 0.
  bool annihilates(const Vec3& x) const { return w_.dot(x) == 0; }
  /// J(c) as a rank-2 lattice with an adapted basis.
  LieLattice kernel() const;
  /// Two vectors spanning J(c) (independent mod p).
  std::array<Vec3, 2> kernel_basis() const;

  friend bool operator==(const AnnihilatorPoint& a, const AnnihilatorPoint& b) { return a.w_ == b.w_; }
  std::string to_string() const;

 private:
  explicit AnnihilatorPoint(Vec3 w) : w_(w) {}
  Vec3 w_;
};

/// (2c1)^2 + 4 c2 c3.
i64 quadric_residual(const AnnihilatorPoint& c);

/// The annihilator of the plane spanned by x1, x2 (the cross product).
/// DegenerateSpan when the pair is dependent mod p.
AnnihilatorPoint annihilator_of_plane(const Vec3& x1, const Vec3& x2);

/// Exact lift of a point on the quadric mod p^m. For odd p the result agrees
/// with c mod p^m; for p = 2 mod 2^(m-2) and m >= 3 is required.
AnnihilatorPoint lift_quadric(const AnnihilatorPoint& c, int m);

struct RSelection {
  int r = 0;
  int nu = 0;
  Rational c{1, 4};
};

/// Maximal r with alpha_r < c·alpha_{r+1} (1-based, 0 if none) and
/// nu = ceil((1 - 2c) c^(d-r-1) n), d = 3, n = alpha_3. Checks
/// alpha_{r+1} >= c^(d-r-1) n on every call.
RSelection select_r(const std::array<int, 3>& alpha, Rational c = Rational(1, 4));

enum class ApproxBranch { Rank1, Rank2Lifted };
std::string to_string(ApproxBranch b);

struct ApproxOptions {
  Rational c{1, 4};
  /// Enables the p = 2 variant (lift loses two digits).
  bool allow_p2 = false;
};

struct ApproxResult {
  LieLattice subalgebra;
  int m = 0;
  ApproxBranch branch = ApproxBranch::Rank1;
  RSelection r_selection;
  int level = 0;
  std::array<int, 3> divisors{};
  std::optional<AnnihilatorPoint> annihilator;
};

/// Proper isolated subalgebra I and m >= ceil(n/2) with M ⊆ I + p^m g, where
/// p^n is the level of M. The containment is verified before returning.
ApproxResult approximate_sl2(const LieLattice& M, const ApproxOptions& options = {});

/// p^k·ker(w) + p^n·g with n = 2k, for a functional w that is surjective mod p.
LieLattice worst_case_subalgebra(i64 p, int n, int precision, const Vec3& functional);

struct OptimalityResult {
  bool found = false;
  u64 candidates = 0;
  u64 rank1_candidates = 0;
  u64 rank2_candidates = 0;
  /// Description of the first witness in enumeration order.
  std::string witness;
};

/// Exhaustive search for a proper isolated I with M ⊆ I + p^m g, over all
/// rank-1 spans and all rank-2 J(c) on the quadric mod p^m.
OptimalityResult optimality_search_detailed(const LieLattice& M, int m, const Budget& budget = {},
                                            Exec exec = Exec::Parallel);
bool optimality_search(const LieLattice& M, int m, const Budget& budget = {}, Exec exec = Exec::Parallel);

struct GroupCertificate {
  bool holds = false;
  std::size_t group_order = 0;
  /// First element whose log escapes p·I + p^m g.
  std::optional<Mat2> counterexample;
};

/// log h ∈ p·I + p^m·g for every h in the closure of H (generators ≡ 1 mod p').
GroupCertificate group_certificate_detailed(std::span<const Mat2> generators, const LieLattice& I, int m,
                                            std::size_t cap = 1'000'000);
bool group_certificate(std::span<const Mat2> generators, const LieLattice& I, int m, std::size_t cap = 1'000'000);

/// Z_p h + p^a e + p^n f at precision N.
LieLattice borel_family(const Modulus& mod, int a, int n);

/// Full-rank subalgebra of level exactly p^n: either a conjugate of a Borel
/// family member or the bracket closure of two scaled random vectors and p^n g.
LieLattice random_exact_subalgebra(const Modulus& mod, int n, Rng& rng);

/// Reduction of a lattice to lower precision (same prime).
LieLattice reduce_lattice(const LieLattice& L, const Modulus& target);

}  // namespace congsub
