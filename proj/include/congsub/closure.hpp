#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "congsub/matrix.hpp"

namespace congsub {

/// Caps that make enumeration failures deterministic. `from_env` applies the
/// CONGSUB_CLOSURE_CAP / CONGSUB_ENUM_CAP / CONGSUB_CANDIDATE_CAP /
/// CONGSUB_GROUP_CAP overrides.
struct Budget {
  std::size_t closure_cap = 1'000'000;
  u64 enumeration_cap = 10'000'000;
  u64 candidate_cap = 2'000'000;
  /// Iterations allowed for brute-force scans of SL(2, Z/p^n).
  u64 group_cap = 100'000'000;

  static Budget from_env();
};

/// Finite subgroup of GL(2, Z/p^N) grown by adding generators. Elements are
/// kept as packed keys, so p^N must be below 2^16.
class GroupClosure {
 public:
  GroupClosure(Modulus mod, std::size_t cap);

  /// Adds g and re-closes. Returns false when g was already a member.
  bool add_generator(const Mat2& g);
  void add_generators(std::span<const Mat2> gens) {
    for (const auto& g : gens) add_generator(g);
  }

  bool contains(const Mat2& g) const { return set_.contains(g.key()); }
  std::size_t size() const { return elements_.size(); }
  const Modulus& modulus() const { return mod_; }
  const std::vector<Mat2>& generators() const { return gens_; }

  template <class F>
  void for_each(F&& f) const {
    for (u64 k : elements_) f(Mat2::from_key(mod_, k));
  }
  std::vector<Mat2> elements() const;
  /// Sorted packed keys; the canonical fingerprint used for equality.
  std::vector<u64> sorted_keys() const;

 private:
  void insert(u64 key);
  Modulus mod_;
  std::size_t cap_;
  std::vector<Mat2> gens_;
  std::vector<u64> elements_;
  std::unordered_set<u64> set_;
};

/// BFS closure of a generator list.
GroupClosure close_group(Modulus mod, std::span<const Mat2> gens, std::size_t cap);

/// |SL(2, Z/p^N)| = p^{3N-2} (p^2 - 1).
u64 sl2_order(const Modulus& mod);
/// |image of K_p(p^n) in SL(2, Z/p^N)|, with n = 0 meaning the whole group.
u64 principal_kernel_order(const Modulus& mod, int n);

/// Representatives of the layer K(p^j)/K(p^{j+1}) found inside the group.
struct LayerCertificate {
  int layer = 0;
  std::vector<Mat2> representatives;
};

struct LevelResult {
  /// Least n <= N-1 with K(p^n) inside the group; empty means ">= N".
  std::optional<int> level;
  std::size_t group_order = 0;
  /// |H ∩ K(p^n)| and |K(p^n)| at the certified n.
  u64 kernel_members = 0;
  u64 kernel_order = 0;
  /// One block per layer j = n..N-1, each hitting every class of
  /// K(p^j)/K(p^{j+1}); together they prove the containment.
  std::vector<LayerCertificate> certificate;
};

/// Level of the subgroup of SL(2, Z/p^N) generated by `generators`.
LevelResult group_level(std::span<const Mat2> generators, const Modulus& ambient, std::size_t cap = 1'000'000);
LevelResult group_level(const GroupClosure& group);

/// Element number `index` of SL(2, Z/p^N), for index < p^(3N): the first
/// column (a, c) = (index mod q, (index / q) mod q) with q = p^N, and the free
/// entry of the second column is index / q^2. Empty when (a, c) is not primitive.
std::optional<Mat2> sl2_from_index(const Modulus& mod, u64 index);
/// p^(3N), the size of the index space of sl2_from_index.
u64 sl2_index_space(const Modulus& mod);

/// Standard generators of K(p^n) mod p^N: upper/lower unipotents and a torus element.
std::vector<Mat2> principal_kernel_generators(const Modulus& mod, int n);

}  // namespace congsub
