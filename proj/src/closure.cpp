#include "congsub/closure.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>

namespace congsub {

namespace {

u64 env_or(const char* name, u64 fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0) return fallback;
  return static_cast<u64>(v);
}

u64 ipow(u64 b, int e) {
  u64 r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

Budget Budget::from_env() {
  Budget b;
  b.closure_cap = static_cast<std::size_t>(env_or("CONGSUB_CLOSURE_CAP", b.closure_cap));
  b.enumeration_cap = env_or("CONGSUB_ENUM_CAP", b.enumeration_cap);
  b.candidate_cap = env_or("CONGSUB_CANDIDATE_CAP", b.candidate_cap);
  b.group_cap = env_or("CONGSUB_GROUP_CAP", b.group_cap);
  return b;
}

GroupClosure::GroupClosure(Modulus mod, std::size_t cap) : mod_(mod), cap_(cap) {
  if (!packable(mod)) fail(ErrorKind::BudgetExceeded, "closure needs p^N < 2^16");
  insert(Mat2::identity(mod).key());
}

void GroupClosure::insert(u64 key) {
  if (set_.insert(key).second) {
    elements_.push_back(key);
    if (elements_.size() > cap_)
      fail(ErrorKind::ClosureBudgetExceeded,
           "generated subgroup exceeds the element cap of " + std::to_string(cap_));
  }
}

bool GroupClosure::add_generator(const Mat2& g) {
  if (!(g.modulus() == mod_)) fail(ErrorKind::ModulusMismatch, "generator lives in a different ring");
  if (contains(g)) return false;
  gens_.push_back(g);
  const std::size_t old_size = elements_.size();
  // Old elements are already closed under the old generators.
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    Mat2 x = Mat2::from_key(mod_, elements_[i]);
    if (i < old_size) {
      insert((x * g).key());
    } else {
      for (const auto& s : gens_) insert((x * s).key());
    }
  }
  return true;
}

std::vector<Mat2> GroupClosure::elements() const {
  std::vector<Mat2> out;
  out.reserve(elements_.size());
  for (u64 k : elements_) out.push_back(Mat2::from_key(mod_, k));
  return out;
}

std::vector<u64> GroupClosure::sorted_keys() const {
  std::vector<u64> keys = elements_;
  std::sort(keys.begin(), keys.end());
  return keys;
}

GroupClosure close_group(Modulus mod, std::span<const Mat2> gens, std::size_t cap) {
  GroupClosure g(mod, cap);
  g.add_generators(gens);
  return g;
}

u64 sl2_order(const Modulus& mod) {
  u64 p = static_cast<u64>(mod.p());
  return ipow(p, 3 * mod.N() - 2) * (p * p - 1);
}

u64 principal_kernel_order(const Modulus& mod, int n) {
  if (n <= 0) return sl2_order(mod);
  if (n >= mod.N()) return 1;
  return ipow(static_cast<u64>(mod.p()), 3 * (mod.N() - n));
}

u64 sl2_index_space(const Modulus& mod) {
  u64 q = static_cast<u64>(mod.value());
  return q * q * q;
}

std::optional<Mat2> sl2_from_index(const Modulus& mod, u64 index) {
  const u64 q = static_cast<u64>(mod.value());
  const auto a = static_cast<i64>(index % q);
  const auto c = static_cast<i64>((index / q) % q);
  const auto t = static_cast<i64>(index / (q * q));
  if (mod.is_unit(a)) return Mat2(mod, a, t, c, mod.mul(mod.add(1, mod.mul(t, c)), mod.inverse(a)));
  if (mod.is_unit(c)) return Mat2(mod, a, mod.mul(mod.sub(mod.mul(a, t), 1), mod.inverse(c)), c, t);
  return std::nullopt;
}

std::vector<Mat2> principal_kernel_generators(const Modulus& mod, int n) {
  i64 q = mod.power(n);
  i64 t = mod.reduce(1 + q);
  return {Mat2(mod, 1, q, 0, 1), Mat2(mod, 1, 0, q, 1), Mat2::diagonal(mod, t, mod.inverse(t))};
}

LevelResult group_level(std::span<const Mat2> generators, const Modulus& ambient, std::size_t cap) {
  for (const auto& g : generators) {
    if (g.det() != ambient.reduce(1))
      fail(ErrorKind::PreconditionViolation, "generator " + g.to_string() + " is not in SL(2)");
  }
  return group_level(close_group(ambient, generators, cap));
}

LevelResult group_level(const GroupClosure& group) {
  const Modulus& mod = group.modulus();
  const int N = mod.N();
  LevelResult result;
  result.group_order = group.size();

  // members[n] = |H ∩ K(p^n)|; containment holds iff it equals |K(p^n)|.
  std::vector<u64> members(static_cast<std::size_t>(N), 0);
  group.for_each([&](const Mat2& h) {
    int depth = (h - Mat2::identity(mod)).valuation();
    for (int n = 0; n < N && n <= depth; ++n) ++members[static_cast<std::size_t>(n)];
  });
  for (int n = 0; n < N; ++n) {
    if (members[static_cast<std::size_t>(n)] == principal_kernel_order(mod, n)) {
      result.level = n;
      result.kernel_members = members[static_cast<std::size_t>(n)];
      result.kernel_order = principal_kernel_order(mod, n);
      break;
    }
  }
  if (!result.level) return result;

  std::vector<u64> keys = group.sorted_keys();
  for (int j = *result.level; j < N; ++j) {
    Modulus layer_mod = mod.truncated(j + 1);
    std::map<u64, Mat2> classes;
    for (u64 k : keys) {
      Mat2 h = Mat2::from_key(mod, k);
      if ((h - Mat2::identity(mod)).valuation() < j) continue;
      classes.emplace(h.reduced(layer_mod).key(), h);
    }
    LayerCertificate layer{j, {}};
    for (auto& [key, rep] : classes) layer.representatives.push_back(rep);
    result.certificate.push_back(std::move(layer));
  }
  return result;
}

}  // namespace congsub
