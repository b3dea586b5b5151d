#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "congsub/closure.hpp"
#include "congsub/exec.hpp"
#include "congsub/lattice.hpp"
#include "congsub/random.hpp"

namespace congsub {

/// Subgroup of SL(2, F_p), stored as its sorted element keys.
class FpSubgroup {
 public:
  static FpSubgroup generate(Modulus fp, std::span<const Mat2> generators, std::size_t cap = 1'000'000);
  static FpSubgroup trivial(Modulus fp);
  static FpSubgroup whole(Modulus fp);

  const Modulus& modulus() const { return mod_; }
  std::size_t size() const { return keys_.size(); }
  const std::vector<u64>& keys() const { return keys_; }
  const std::vector<Mat2>& generators() const { return gens_; }
  bool contains(const Mat2& g) const;
  std::vector<Mat2> elements() const;

  friend bool operator==(const FpSubgroup& a, const FpSubgroup& b) { return a.mod_ == b.mod_ && a.keys_ == b.keys_; }
  friend bool operator<(const FpSubgroup& a, const FpSubgroup& b) { return a.keys_ < b.keys_; }

 private:
  FpSubgroup(Modulus mod, std::vector<u64> keys, std::vector<Mat2> gens)
      : mod_(mod), keys_(std::move(keys)), gens_(std::move(gens)) {}
  Modulus mod_;
  std::vector<u64> keys_;
  std::vector<Mat2> gens_;
};

/// Subspace of sl(2, F_p) with a reduced echelon basis.
class FpLieSubalgebra {
 public:
  static FpLieSubalgebra span(Modulus fp, std::span<const Vec3> vectors);
  /// Span closed under the bracket.
  static FpLieSubalgebra generate(Modulus fp, std::span<const Vec3> vectors);

  const Modulus& modulus() const { return mod_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Vec3>& basis() const { return basis_; }
  bool contains(const Vec3& v) const;
  bool closed_under_bracket() const;
  /// All p^dim elements, in a fixed order.
  std::vector<Vec3> elements() const;

  friend bool operator==(const FpLieSubalgebra& a, const FpLieSubalgebra& b) {
    return a.mod_ == b.mod_ && a.basis_ == b.basis_;
  }
  friend bool operator<(const FpLieSubalgebra& a, const FpLieSubalgebra& b);
  std::string to_string() const;

 private:
  FpLieSubalgebra(Modulus mod, std::vector<Vec3> basis) : mod_(mod), basis_(std::move(basis)) {}
  Modulus mod_;
  std::vector<Vec3> basis_;
};

/// (x - 1)^2 = 0 over F_p.
bool is_unipotent_fp(const Mat2& x);
/// y^2 = 0 over F_p.
bool is_nilpotent_fp(const Vec3& y);

std::vector<Mat2> unipotent_elements(const FpSubgroup& H);
/// Subgroup generated by the unipotent elements; checks the index is prime to p.
FpSubgroup h_plus(const FpSubgroup& H);
/// F_p-span of log^(p) over the unipotents; BracketClosureAnomaly if not a subalgebra.
FpLieSubalgebra liec_bar(const FpSubgroup& H);
/// Group generated by exp^(p)(y) over the nilpotent y in L.
FpSubgroup grpc_bar(const FpLieSubalgebra& L);

/// All H with H+ = H, by adding unipotent generators one at a time.
std::vector<FpSubgroup> enumerate_unipotent_generated(i64 p, const Budget& budget = {});
/// All subalgebras generated by nilpotent elements.
std::vector<FpLieSubalgebra> enumerate_nilpotent_generated(i64 p, const Budget& budget = {});
/// Every subgroup generated by at most two elements (all subgroups for SL(2, F_5)).
std::vector<FpSubgroup> enumerate_two_generated(i64 p, const Budget& budget = {});

struct NoriFpReport {
  i64 p = 0;
  std::size_t subgroup_count = 0;
  std::size_t algebra_count = 0;
  /// p + 3: trivial, the p + 1 Sylow subgroups, SL(2, F_p).
  std::size_t classical_count = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// grpc_bar ∘ liec_bar = id on unipotent-generated subgroups and
/// liec_bar ∘ grpc_bar = id on nilpotently generated subalgebras.
NoriFpReport roundtrip_check_fp(i64 p, const Budget& budget = {}, Exec exec = Exec::Parallel);

/// Z_p-span of log over the residually unipotent elements of the closure.
LieLattice liec_padic(std::span<const Mat2> generators, const Modulus& mod, std::size_t cap = 1'000'000);
LieLattice liec_padic(const GroupClosure& H);
/// Closure of exp over the residually nilpotent elements of L mod p^N.
GroupClosure grpc_padic(const LieLattice& L, const Budget& budget = {});

/// Elements of L + p^N g modulo p^N, in a fixed order.
std::vector<Vec3> lattice_elements(const LieLattice& L, u64 cap);

struct PadicSample {
  std::string name;
  std::vector<Mat2> generators;
};

struct PadicSampleResult {
  std::string name;
  std::size_t group_order = 0;
  std::array<int, 3> lie_divisors{};
  std::optional<int> group_level;
  std::optional<int> algebra_level;
  bool fromgroup = false;
  bool fromalgebra = false;
  bool roundtrip = false;
  bool reduction = false;
  bool level_preserved = false;
  bool ok() const { return fromgroup && fromalgebra && roundtrip && reduction && level_preserved; }
};

struct NoriPadicReport {
  i64 p = 0;
  int N = 0;
  std::vector<PadicSampleResult> samples;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Residually unipotent generated subgroups inside the preimage of the upper
/// unitriangular group mod p.
std::vector<PadicSample> default_padic_samples(const Modulus& mod);
/// `count` random subgroups: one or two generators of the form
/// [[1 + p^j a, p^j b], [p^(j+1) c, *]] conjugated by a random element of SL(2).
std::vector<PadicSample> random_padic_samples(const Modulus& mod, int count, Rng& rng);

NoriPadicReport roundtrip_check_padic(i64 p, int N, std::span<const PadicSample> samples, const Budget& budget = {});

}  // namespace congsub
