#include "congsub/nori.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "congsub/explog.hpp"

namespace congsub {

namespace {

void require_fp(const Modulus& mod) {
  if (mod.N() != 1) fail(ErrorKind::PreconditionViolation, "expected arithmetic over F_p");
}

void require_nori_prime(i64 p) {
  if (p < 5) fail(ErrorKind::UnsupportedPrime, "Nori correspondence is run for p >= 5");
}

u64 vec_key(const Vec3& v) {
  return static_cast<u64>(v[0]) | (static_cast<u64>(v[1]) << 16U) | (static_cast<u64>(v[2]) << 32U);
}

std::vector<Mat2> all_sl2(const Modulus& fp) {
  std::vector<Mat2> out;
  const i64 p = fp.p();
  for (i64 a = 0; a < p; ++a)
    for (i64 b = 0; b < p; ++b)
      for (i64 c = 0; c < p; ++c)
        for (i64 d = 0; d < p; ++d) {
          Mat2 g(fp, a, b, c, d);
          if (g.det() == 1) out.push_back(g);
        }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

FpSubgroup FpSubgroup::generate(Modulus fp, std::span<const Mat2> generators, std::size_t cap) {
  require_fp(fp);
  GroupClosure g = close_group(fp, generators, cap);
  return FpSubgroup(fp, g.sorted_keys(), g.generators());
}

FpSubgroup FpSubgroup::trivial(Modulus fp) { return generate(fp, {}); }

FpSubgroup FpSubgroup::whole(Modulus fp) {
  std::array<Mat2, 2> gens{Mat2(fp, 1, 1, 0, 1), Mat2(fp, 1, 0, 1, 1)};
  return generate(fp, gens);
}

bool FpSubgroup::contains(const Mat2& g) const { return std::binary_search(keys_.begin(), keys_.end(), g.key()); }

std::vector<Mat2> FpSubgroup::elements() const {
  std::vector<Mat2> out;
  out.reserve(keys_.size());
  for (u64 k : keys_) out.push_back(Mat2::from_key(mod_, k));
  return out;
}

// ---------------------------------------------------------------------------

FpLieSubalgebra FpLieSubalgebra::span(Modulus fp, std::span<const Vec3> vectors) {
  require_fp(fp);
  std::vector<std::array<i64, 3>> rows;
  for (const auto& v : vectors) {
    if (!(v.modulus() == fp)) fail(ErrorKind::ModulusMismatch, "vector is not over F_p");
    rows.push_back(v.raw());
  }
  std::vector<Vec3> basis;
  std::size_t r = 0;
  for (int col = 0; col < 3 && r < rows.size(); ++col) {
    auto c = static_cast<std::size_t>(col);
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    i64 inv = fp.inverse(rows[r][c]);
    for (auto& x : rows[r]) x = fp.mul(x, inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      i64 q = rows[i][c];
      for (std::size_t j = 0; j < 3; ++j) rows[i][j] = fp.sub(rows[i][j], fp.mul(q, rows[r][j]));
    }
    ++r;
  }
  for (std::size_t i = 0; i < r; ++i) basis.emplace_back(fp, rows[i][0], rows[i][1], rows[i][2]);
  return FpLieSubalgebra(fp, std::move(basis));
}

FpLieSubalgebra FpLieSubalgebra::generate(Modulus fp, std::span<const Vec3> vectors) {
  FpLieSubalgebra cur = span(fp, vectors);
  for (;;) {
    std::vector<Vec3> gens = cur.basis_;
    for (std::size_t i = 0; i < cur.basis_.size(); ++i)
      for (std::size_t j = i + 1; j < cur.basis_.size(); ++j) gens.push_back(bracket(cur.basis_[i], cur.basis_[j]));
    FpLieSubalgebra next = span(fp, gens);
    if (next.dim() == cur.dim()) return cur;
    cur = next;
  }
}

bool FpLieSubalgebra::contains(const Vec3& v) const {
  std::vector<Vec3> gens = basis_;
  gens.push_back(v);
  return span(mod_, gens).dim() == dim();
}

bool FpLieSubalgebra::closed_under_bracket() const {
  for (std::size_t i = 0; i < basis_.size(); ++i)
    for (std::size_t j = i + 1; j < basis_.size(); ++j)
      if (!contains(bracket(basis_[i], basis_[j]))) return false;
  return true;
}

std::vector<Vec3> FpLieSubalgebra::elements() const {
  std::vector<Vec3> out{Vec3(mod_)};
  for (const auto& b : basis_) {
    std::vector<Vec3> next;
    next.reserve(out.size() * static_cast<std::size_t>(mod_.p()));
    for (const auto& x : out)
      for (i64 t = 0; t < mod_.p(); ++t) next.push_back(x + b.scaled(t));
    out = std::move(next);
  }
  return out;
}

bool operator<(const FpLieSubalgebra& a, const FpLieSubalgebra& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  for (std::size_t i = 0; i < a.basis_.size(); ++i)
    if (a.basis_[i].raw() != b.basis_[i].raw()) return a.basis_[i].raw() < b.basis_[i].raw();
  return false;
}

std::string FpLieSubalgebra::to_string() const {
  std::ostringstream os;
  os << "span{";
  for (std::size_t i = 0; i < basis_.size(); ++i) os << (i ? "," : "") << basis_[i].to_string();
  os << "}";
  return os.str();
}

// ---------------------------------------------------------------------------

bool is_unipotent_fp(const Mat2& x) {
  Mat2 y = x - Mat2::identity(x.modulus());
  return (y * y).is_zero();
}

bool is_nilpotent_fp(const Vec3& y) {
  Mat2 m = y.to_matrix();
  return (m * m).is_zero();
}

std::vector<Mat2> unipotent_elements(const FpSubgroup& H) {
  std::vector<Mat2> out;
  for (const auto& g : H.elements())
    if (is_unipotent_fp(g)) out.push_back(g);
  return out;
}

FpSubgroup h_plus(const FpSubgroup& H) {
  auto uni = unipotent_elements(H);
  FpSubgroup plus = FpSubgroup::generate(H.modulus(), uni);
  std::size_t index = H.size() / plus.size();
  if (H.size() % plus.size() != 0 || index % static_cast<std::size_t>(H.modulus().p()) == 0)
    fail(ErrorKind::PreconditionViolation, "H+ has index divisible by p");
  return plus;
}

FpLieSubalgebra liec_bar(const FpSubgroup& H) {
  require_nori_prime(H.modulus().p());
  std::vector<Vec3> logs;
  for (const auto& u : unipotent_elements(H)) logs.push_back(Vec3::from_matrix(log_trunc(u)));
  FpLieSubalgebra L = FpLieSubalgebra::span(H.modulus(), logs);
  if (!L.closed_under_bracket())
    fail(ErrorKind::BracketClosureAnomaly, "span of logs is not a subalgebra at p = " + std::to_string(H.modulus().p()) +
                                               " for a subgroup of order " + std::to_string(H.size()));
  return L;
}

FpSubgroup grpc_bar(const FpLieSubalgebra& L) {
  require_nori_prime(L.modulus().p());
  std::vector<Mat2> gens;
  for (const auto& y : L.elements())
    if (!y.is_zero() && is_nilpotent_fp(y)) gens.push_back(exp_trunc(y.to_matrix()));
  return FpSubgroup::generate(L.modulus(), gens);
}

std::vector<FpSubgroup> enumerate_unipotent_generated(i64 p, const Budget& budget) {
  Modulus fp = Modulus::make(p, 1);
  std::vector<Mat2> uni;
  for (const auto& g : all_sl2(fp))
    if (!g.is_identity() && is_unipotent_fp(g)) uni.push_back(g);
  std::set<FpSubgroup> seen;
  std::vector<FpSubgroup> queue{FpSubgroup::trivial(fp)};
  seen.insert(queue.front());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& u : uni) {
      if (queue[i].contains(u)) continue;
      std::vector<Mat2> gens = queue[i].generators();
      gens.push_back(u);
      FpSubgroup next = FpSubgroup::generate(fp, gens, budget.closure_cap);
      if (seen.insert(next).second) {
        queue.push_back(next);
        if (queue.size() > budget.candidate_cap) fail(ErrorKind::BudgetExceeded, "too many subgroups");
      }
    }
  }
  std::sort(queue.begin(), queue.end(),
            [](const FpSubgroup& a, const FpSubgroup& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  return queue;
}

std::vector<FpLieSubalgebra> enumerate_nilpotent_generated(i64 p, const Budget& budget) {
  Modulus fp = Modulus::make(p, 1);
  std::vector<Vec3> nil;
  for (i64 e = 0; e < p; ++e)
    for (i64 h = 0; h < p; ++h)
      for (i64 f = 0; f < p; ++f) {
        Vec3 y(fp, e, h, f);
        if (!y.is_zero() && is_nilpotent_fp(y)) nil.push_back(y);
      }
  std::set<FpLieSubalgebra> seen;
  std::vector<FpLieSubalgebra> queue{FpLieSubalgebra::span(fp, {})};
  seen.insert(queue.front());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& y : nil) {
      if (queue[i].contains(y)) continue;
      std::vector<Vec3> gens = queue[i].basis();
      gens.push_back(y);
      FpLieSubalgebra next = FpLieSubalgebra::generate(fp, gens);
      if (seen.insert(next).second) {
        queue.push_back(next);
        if (queue.size() > budget.candidate_cap) fail(ErrorKind::BudgetExceeded, "too many subalgebras");
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

std::vector<FpSubgroup> enumerate_two_generated(i64 p, const Budget& budget) {
  Modulus fp = Modulus::make(p, 1);
  auto all = all_sl2(fp);
  const u64 pairs = static_cast<u64>(all.size()) * (all.size() + 1) / 2;
  if (pairs > budget.enumeration_cap) fail(ErrorKind::BudgetExceeded, "too many generator pairs");
  std::set<FpSubgroup> seen{FpSubgroup::trivial(fp)};
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i; j < all.size(); ++j) {
      std::array<Mat2, 2> gens{all[i], all[j]};
      seen.insert(FpSubgroup::generate(fp, gens, budget.closure_cap));
    }
  return {seen.begin(), seen.end()};
}

NoriFpReport roundtrip_check_fp(i64 p, const Budget& budget, Exec exec) {
  require_nori_prime(p);
  NoriFpReport report;
  report.p = p;
  auto groups = enumerate_unipotent_generated(p, budget);
  auto algebras = enumerate_nilpotent_generated(p, budget);
  report.subgroup_count = groups.size();
  report.algebra_count = algebras.size();
  report.classical_count = static_cast<std::size_t>(p) + 3;

  const std::size_t total = groups.size() + algebras.size();
  std::vector<std::string> verdicts(total);
  auto check = [&](std::size_t i) {
    try {
      if (i < groups.size()) {
        const auto& H = groups[i];
        if (!(grpc_bar(liec_bar(H)) == H))
          verdicts[i] = "grpc(liec(H)) != H for |H| = " + std::to_string(H.size());
      } else {
        const auto& L = algebras[i - groups.size()];
        if (!(liec_bar(grpc_bar(L)) == L)) verdicts[i] = "liec(grpc(L)) != L for L = " + L.to_string();
      }
    } catch (const Error& e) {
      verdicts[i] = e.what();
    }
  };
  const auto n = static_cast<std::int64_t>(total);
  if (exec == Exec::Serial) {
    for (std::int64_t i = 0; i < n; ++i) check(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) check(static_cast<std::size_t>(i));
  }
  if (report.subgroup_count != report.classical_count)
    report.failures.push_back("subgroup count " + std::to_string(report.subgroup_count) + " differs from " +
                              std::to_string(report.classical_count));
  if (report.algebra_count != report.classical_count)
    report.failures.push_back("subalgebra count " + std::to_string(report.algebra_count) + " differs from " +
                              std::to_string(report.classical_count));
  for (auto& v : verdicts)
    if (!v.empty()) report.failures.push_back(std::move(v));
  return report;
}

// ---------------------------------------------------------------------------

LieLattice liec_padic(const GroupClosure& H) {
  const Modulus& mod = H.modulus();
  require_nori_prime(mod.p());
  std::vector<Vec3> logs;
  H.for_each([&](const Mat2& h) {
    if (residually_unipotent(h)) logs.push_back(Vec3::from_matrix(log_extended(h)));
  });
  if (logs.empty()) logs.emplace_back(mod);
  LieLattice L = LieLattice::span(mod, logs);
  if (!is_subalgebra_mod(L, mod.N() - 1))
    fail(ErrorKind::BracketClosureAnomaly, "log span is not a subalgebra: " + L.to_string());
  return L;
}

LieLattice liec_padic(std::span<const Mat2> generators, const Modulus& mod, std::size_t cap) {
  for (const auto& g : generators)
    if (g.det() != mod.reduce(1)) fail(ErrorKind::PreconditionViolation, g.to_string() + " is not in SL(2)");
  return liec_padic(close_group(mod, generators, cap));
}

std::vector<Vec3> lattice_elements(const LieLattice& L, u64 cap) {
  const Modulus& mod = L.modulus();
  auto basis = L.basis();
  std::vector<i64> range;
  u64 count = 1;
  for (int a : L.divisors()) {
    if (a >= mod.N()) continue;
    i64 r = mod.power(mod.N() - a);
    range.push_back(r);
    count *= static_cast<u64>(r);
    if (count > cap) fail(ErrorKind::BudgetExceeded, "lattice has more than " + std::to_string(cap) + " residues");
  }
  std::vector<Vec3> out{Vec3(mod)};
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::vector<Vec3> next;
    next.reserve(out.size() * static_cast<std::size_t>(range[i]));
    for (const auto& x : out)
      for (i64 t = 0; t < range[i]; ++t) next.push_back(x + basis[i].scaled(t));
    out = std::move(next);
  }
  return out;
}

GroupClosure grpc_padic(const LieLattice& L, const Budget& budget) {
  const Modulus& mod = L.modulus();
  require_nori_prime(mod.p());
  GroupClosure G(mod, budget.closure_cap);
  for (const auto& x : lattice_elements(L, budget.enumeration_cap)) {
    Mat2 m = x.to_matrix();
    if (residually_nilpotent(m)) G.add_generator(exp_extended(m));
  }
  return G;
}

std::vector<PadicSample> default_padic_samples(const Modulus& mod) {
  const i64 p = mod.p();
  Mat2 u(mod, 1, 1, 0, 1);
  Mat2 t = Mat2::diagonal(mod, 1 + p, mod.inverse(mod.reduce(1 + p)));
  auto with_u = [&](std::vector<Mat2> gens) {
    gens.insert(gens.begin(), u);
    return gens;
  };
  std::vector<PadicSample> out;
  out.push_back({"upper-unipotent", {u}});
  out.push_back({"lower-unipotent", {Mat2(mod, 1, 0, 1, 1)}});
  out.push_back({"unipotent+lower(p)", with_u({Mat2(mod, 1, 0, p, 1)})});
  out.push_back({"unipotent+torus(p)", with_u({t})});
  out.push_back({"K(p)", principal_kernel_generators(mod, 1)});
  if (mod.N() > 2) out.push_back({"unipotent+K(p^2)", with_u(principal_kernel_generators(mod, 2))});
  out.push_back({"unipotent+K(p)", with_u(principal_kernel_generators(mod, 1))});
  return out;
}

std::vector<PadicSample> random_padic_samples(const Modulus& mod, int count, Rng& rng) {
  const i64 p = mod.p();
  const u64 q = static_cast<u64>(mod.value());
  auto random_sl2 = [&] {
    for (;;)
      if (auto g = sl2_from_index(mod, rng.below(q * q * q))) return *g;
  };
  auto random_generator = [&] {
    const int depth = static_cast<int>(rng.below(static_cast<u64>(mod.N())));
    const i64 pj = mod.power(depth);
    for (;;) {
      i64 a = mod.mul(pj, mod.mul(p, static_cast<i64>(rng.below(q))));
      i64 b = mod.mul(pj, static_cast<i64>(rng.below(q)));
      i64 c = mod.mul(pj, mod.mul(p, static_cast<i64>(rng.below(q))));
      i64 top = mod.add(1, a);
      // d = (1 + b c) / (1 + a)
      i64 d = mod.mul(mod.add(1, mod.mul(b, c)), mod.inverse(top));
      Mat2 g(mod, top, b, c, d);
      if (!g.is_identity()) return g;
    }
  };
  std::vector<PadicSample> out;
  for (int i = 0; i < count; ++i) {
    Mat2 k = random_sl2();
    Mat2 kinv = k.inverse();
    PadicSample s;
    s.name = "random-" + std::to_string(i);
    const int gens = 1 + static_cast<int>(rng.below(2));
    for (int j = 0; j < gens; ++j) s.generators.push_back(k * random_generator() * kinv);
    out.push_back(std::move(s));
  }
  return out;
}

NoriPadicReport roundtrip_check_padic(i64 p, int N, std::span<const PadicSample> samples, const Budget& budget) {
  require_nori_prime(p);
  if (N < 2 || N > 4) fail(ErrorKind::UnsupportedPrecision, "p-adic round trip runs at 2 <= N <= 4");
  Modulus mod = Modulus::make(p, N);
  Modulus fp = mod.truncated(1);
  NoriPadicReport report;
  report.p = p;
  report.N = N;
  for (const auto& s : samples) {
    PadicSampleResult r;
    r.name = s.name;
    GroupClosure H = close_group(mod, s.generators, budget.closure_cap);
    r.group_order = H.size();
    LieLattice L = liec_padic(H);
    r.lie_divisors = L.divisors();
    GroupClosure G = grpc_padic(L, budget);
    r.roundtrip = G.sorted_keys() == H.sorted_keys();

    auto elems = lattice_elements(L, budget.enumeration_cap);
    std::set<u64> deep_lattice, deep_logs, exp_deep, group_deep;
    for (const auto& x : elems)
      if (x.valuation() >= 1) {
        deep_lattice.insert(vec_key(x));
        exp_deep.insert(exp_congruence(x.to_matrix()).key());
      }
    H.for_each([&](const Mat2& h) {
      if (in_principal_congruence(h, 1)) deep_logs.insert(vec_key(Vec3::from_matrix(log_congruence(h))));
    });
    G.for_each([&](const Mat2& g) {
      if (in_principal_congruence(g, 1)) group_deep.insert(g.key());
    });
    r.fromgroup = deep_lattice == deep_logs;
    r.fromalgebra = group_deep == exp_deep;

    r.group_level = group_level(H).level;
    if (L.full_rank()) r.algebra_level = L.divisors()[2];
    r.level_preserved = r.group_level == r.algebra_level;

    std::vector<Vec3> bar;
    for (const auto& b : L.basis()) bar.push_back(b.reduced(fp));
    FpSubgroup expected = grpc_bar(FpLieSubalgebra::span(fp, bar));
    std::set<u64> reduced;
    G.for_each([&](const Mat2& g) { reduced.insert(g.reduced(fp).key()); });
    r.reduction = std::vector<u64>(reduced.begin(), reduced.end()) == expected.keys();

    if (!r.ok()) {
      std::string what = s.name + ":";
      if (!r.fromgroup) what += " fromgroup";
      if (!r.fromalgebra) what += " fromalgebra";
      if (!r.roundtrip) what += " roundtrip";
      if (!r.reduction) what += " reduction";
      if (!r.level_preserved) what += " level";
      report.failures.push_back(what);
    }
    report.samples.push_back(std::move(r));
  }
  return report;
}

}  // namespace congsub
