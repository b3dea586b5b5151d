#include "congsub/approx.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "congsub/explog.hpp"

namespace congsub {

namespace {

/// Index of the first unit coordinate in the order (f, e, h), or -1.
int leading_unit(const Vec3& w) {
  const Modulus& mod = w.modulus();
  for (int i : {2, 0, 1})
    if (mod.is_unit(w[i])) return i;
  return -1;
}

Vec3 with_coord(const Modulus& mod, int i, i64 value) {
  std::array<i64, 3> c{0, 0, 0};
  c[static_cast<std::size_t>(i)] = value;
  return {mod, c[0], c[1], c[2]};
}

/// Basis of ker(w) for a primitive functional: for the pivot k and each other
/// index i, unit_i - (w_i / w_k) unit_k.
std::array<Vec3, 2> functional_kernel(const Vec3& w) {
  const Modulus& mod = w.modulus();
  int k = leading_unit(w);
  if (k < 0) fail(ErrorKind::DegenerateSpan, "functional " + w.to_string() + " is not primitive");
  i64 inv = mod.inverse(w[k]);
  std::array<Vec3, 2> out{Vec3(mod), Vec3(mod)};
  int t = 0;
  for (int i = 0; i < 3; ++i) {
    if (i == k) continue;
    out[static_cast<std::size_t>(t++)] = Vec3::unit(mod, i) - with_coord(mod, k, mod.mul(w[i], inv));
  }
  return out;
}

}  // namespace

AnnihilatorPoint AnnihilatorPoint::from_functional(const Vec3& w) {
  if (!w.is_primitive()) fail(ErrorKind::DegenerateSpan, "annihilator " + w.to_string() + " is not primitive");
  return AnnihilatorPoint(w);
}

AnnihilatorPoint AnnihilatorPoint::from_c(Modulus mod, i64 c1, i64 c2, i64 c3) {
  return from_functional(Vec3(mod, c3, mod.mul(2, mod.reduce(c1)), c2));
}

AnnihilatorPoint AnnihilatorPoint::canonical() const {
  const Modulus& mod = modulus();
  for (int i : {2, 0})
    if (mod.is_unit(w_[i])) return AnnihilatorPoint(w_.scaled(mod.inverse(w_[i])));
  // Only 2c1 is a unit: scale so c1 = 1 (odd p) or 2c1 = 1 (p = 2).
  i64 target = mod.p() == 2 ? 1 : 2;
  return AnnihilatorPoint(w_.scaled(mod.mul(target, mod.inverse(w_[1]))));
}

LieLattice AnnihilatorPoint::kernel() const {
  auto b = kernel_basis();
  return LieLattice::span(modulus(), b);
}

std::array<Vec3, 2> AnnihilatorPoint::kernel_basis() const { return functional_kernel(w_); }

std::string AnnihilatorPoint::to_string() const {
  std::ostringstream os;
  os << "w=" << w_.to_string();
  return os.str();
}

i64 quadric_residual(const AnnihilatorPoint& c) {
  const Modulus& mod = c.modulus();
  const Vec3& w = c.functional();
  return mod.add(mod.mul(w[1], w[1]), mod.mul(4, mod.mul(w[0], w[2])));
}

AnnihilatorPoint annihilator_of_plane(const Vec3& x1, const Vec3& x2) {
  const Modulus& mod = x1.modulus();
  if (!(mod == x2.modulus())) fail(ErrorKind::ModulusMismatch, "plane generators live in different rings");
  auto cr = [&](int a, int b) { return mod.sub(mod.mul(x1[a], x2[b]), mod.mul(x1[b], x2[a])); };
  Vec3 w(mod, cr(1, 2), cr(2, 0), cr(0, 1));
  if (!w.is_primitive())
    fail(ErrorKind::DegenerateSpan, x1.to_string() + " and " + x2.to_string() + " are dependent mod p");
  return AnnihilatorPoint::from_functional(w);
}

AnnihilatorPoint lift_quadric(const AnnihilatorPoint& c, int m) {
  const Modulus& mod = c.modulus();
  const i64 p = mod.p();
  if (p == 2 ? m < 3 : m < 1)
    fail(ErrorKind::UnsupportedPrecision, "quadric lift needs m >= " + std::string(p == 2 ? "3" : "1"));
  i64 r = quadric_residual(c);
  if (mod.valuation(r) < std::min(m, mod.N()))
    fail(ErrorKind::PreconditionViolation, "point is not on the quadric mod p^" + std::to_string(m));
  if (r == 0) return c;
  const Vec3& w = c.functional();
  // square of c1, well defined mod p^N in both cases
  i64 c1sq;
  if (p == 2) {
    if (w[1] % 2 != 0) fail(ErrorKind::NoUnitDerivative, "2c1 is odd; no lift exists");
    i64 c1 = w[1] / 2;
    c1sq = mod.mul(c1, c1);
  } else {
    i64 c1 = mod.mul(w[1], mod.inverse(2));
    c1sq = mod.mul(c1, c1);
  }
  // c1^2 + c2 c3 = 0: solve for whichever of c2, c3 is paired with a unit.
  if (mod.is_unit(w[2])) {
    i64 c3 = mod.neg(mod.mul(c1sq, mod.inverse(w[2])));
    return AnnihilatorPoint::from_functional(Vec3(mod, c3, w[1], w[2]));
  }
  if (mod.is_unit(w[0])) {
    i64 c2 = mod.neg(mod.mul(c1sq, mod.inverse(w[0])));
    return AnnihilatorPoint::from_functional(Vec3(mod, w[0], w[1], c2));
  }
  fail(ErrorKind::NoUnitDerivative, "neither c2 nor c3 is a unit");
}

RSelection select_r(const std::array<int, 3>& alpha, Rational c) {
  if (!(c > 0 && c < Rational(1, 2))) fail(ErrorKind::PreconditionViolation, "c must lie in (0, 1/2)");
  if (!std::is_sorted(alpha.begin(), alpha.end())) fail(ErrorKind::PreconditionViolation, "divisors must be sorted");
  const int d = 3;
  const i64 n = alpha[2];
  if (n < 1) fail(ErrorKind::PreconditionViolation, "level exponent must be positive");
  RSelection out;
  out.c = c;
  for (int r = 1; r < d; ++r)
    if (Rational(alpha[static_cast<std::size_t>(r - 1)]) < c * alpha[static_cast<std::size_t>(r)]) out.r = r;
  Rational cp = 1;
  for (int i = 0; i < d - out.r - 1; ++i) cp *= c;
  Rational nu = (Rational(1) - 2 * c) * cp * n;
  out.nu = static_cast<int>(ceil_div(nu.numerator(), nu.denominator()));
  if (Rational(alpha[static_cast<std::size_t>(out.r)]) < cp * n)
    fail(ErrorKind::AssertionFailure, "divisor chain violates alpha_{r+1} >= c^(d-r-1) n");
  return out;
}

std::string to_string(ApproxBranch b) { return b == ApproxBranch::Rank1 ? "rank1" : "rank2-lifted"; }

ApproxResult approximate_sl2(const LieLattice& M, const ApproxOptions& options) {
  const Modulus& mod = M.modulus();
  const i64 p = mod.p();
  const int N = mod.N();
  if (p == 2 && !options.allow_p2) fail(ErrorKind::UnsupportedPrime, "p = 2 needs the explicit p2 option");
  if (!M.full_rank()) fail(ErrorKind::PrecisionExhausted, "M must have full rank at precision N");
  const auto alpha = M.divisors();
  const int n = alpha[2];
  if (n < 1) fail(ErrorKind::PreconditionViolation, "M has level 1; there is nothing to approximate");
  if (N < n + 2) fail(ErrorKind::UnsupportedPrecision, "need N >= n + 2");
  if (p == 2 && n < 3) fail(ErrorKind::UnsupportedPrecision, "p = 2 variant needs n >= 3");
  if (!is_subalgebra_mod(M, N)) fail(ErrorKind::Degenerate, "M is not closed under the bracket");

  const int loss = p == 2 ? 2 : 0;
  RSelection rsel = select_r(alpha, options.c);
  std::optional<LieLattice> I;
  std::optional<AnnihilatorPoint> annihilator;
  int m = 0;
  ApproxBranch branch;
  if (2 * alpha[1] >= n - loss) {
    branch = ApproxBranch::Rank1;
    std::array<Vec3, 1> g{M.adapted(0)};
    I = LieLattice::span(mod, g);
    m = alpha[1];
  } else {
    branch = ApproxBranch::Rank2Lifted;
    AnnihilatorPoint c = annihilator_of_plane(M.adapted(0), M.adapted(1));
    const int mq = n - alpha[0] - alpha[1];
    if (mod.valuation(quadric_residual(c)) < mq)
      fail(ErrorKind::Degenerate, "plane annihilator is off the quadric mod p^" + std::to_string(mq));
    AnnihilatorPoint lifted = lift_quadric(c, mq).canonical();
    I = lifted.kernel();
    annihilator = lifted;
    m = n - alpha[1] - loss;
  }
  const int floor_m = (n + 1) / 2 - (p == 2 ? 1 : 0);
  if (m < floor_m) fail(ErrorKind::AssertionFailure, "approximation exponent below ceil(n/2)");
  if (!I->contains(M, m)) fail(ErrorKind::AssertionFailure, "M is not inside I + p^m g");
  if (!(saturate(*I) == *I)) fail(ErrorKind::AssertionFailure, "I is not isolated");
  if (!is_subalgebra_mod(*I, N)) fail(ErrorKind::AssertionFailure, "I is not a subalgebra");
  return ApproxResult{*I, m, branch, rsel, n, alpha, annihilator};
}

LieLattice worst_case_subalgebra(i64 p, int n, int precision, const Vec3& functional) {
  if (n < 2 || n % 2 != 0) fail(ErrorKind::PreconditionViolation, "worst case needs even n >= 2");
  Modulus mod = Modulus::make(p, precision);
  if (precision <= n) fail(ErrorKind::UnsupportedPrecision, "need precision > n");
  Vec3 w(mod, functional[0], functional[1], functional[2]);
  if (leading_unit(w) < 0) fail(ErrorKind::NotSurjective, "functional " + w.to_string() + " vanishes mod p");
  const int k = n / 2;
  auto ker = functional_kernel(w);
  int u = leading_unit(w);
  Vec3 complement = with_coord(mod, u, mod.inverse(w[u]));
  const i64 pk = mod.power(k);
  std::array<Vec3, 3> gens{ker[0].scaled(pk), ker[1].scaled(pk), complement.scaled(mod.power(n))};
  return LieLattice::from_columns(mod, gens);
}

namespace {

/// Canonical projective representatives mod p^m with a leading 1 at position
/// order[b] for block b; earlier positions are multiples of p, later ones free.
struct ProjectiveBlocks {
  i64 p;
  int m;
  i64 pm;
  std::array<int, 3> order;
  std::array<u64, 3> size{};
  u64 total = 0;

  ProjectiveBlocks(i64 p_, int m_, std::array<int, 3> order_) : p(p_), m(m_), pm(1), order(order_) {
    for (int i = 0; i < m; ++i) pm *= p;
    for (int b = 0; b < 3; ++b) {
      u64 s = 1;
      for (int j = 0; j < b; ++j) s *= static_cast<u64>(pm / p);
      for (int j = b + 1; j < 3; ++j) s *= static_cast<u64>(pm);
      size[static_cast<std::size_t>(b)] = s;
      total += s;
    }
  }

  std::array<i64, 3> decode(u64 idx) const {
    int b = 0;
    while (idx >= size[static_cast<std::size_t>(b)]) idx -= size[static_cast<std::size_t>(b++)];
    std::array<i64, 3> c{0, 0, 0};
    for (int j = 2; j >= 0; --j) {
      auto pos = static_cast<std::size_t>(order[static_cast<std::size_t>(j)]);
      if (j == b) {
        c[pos] = 1;
      } else if (j < b) {
        u64 base = static_cast<u64>(pm / p);
        c[pos] = p * static_cast<i64>(idx % base);
        idx /= base;
      } else {
        c[pos] = static_cast<i64>(idx % static_cast<u64>(pm));
        idx /= static_cast<u64>(pm);
      }
    }
    return c;
  }
};

struct CandidateCheck {
  const Modulus& mod;
  const std::vector<Vec3>& gens;
  const ProjectiveBlocks& rank1;
  const ProjectiveBlocks& rank2;

  /// 0 = not a candidate, 1 = candidate not containing M, 2 = witness.
  int operator()(u64 idx) const {
    if (idx < rank1.total) {
      auto v = rank1.decode(idx);
      int lead = 0;
      for (int l = 0; l < 3; ++l)
        if (mod.is_unit(v[static_cast<std::size_t>(l)])) {
          lead = l;
          break;
        }
      for (const auto& b : gens) {
        i64 t = b[lead];
        for (int i = 0; i < 3; ++i)
          if (mod.sub(b[i], mod.mul(t, v[static_cast<std::size_t>(i)])) != 0) return 1;
      }
      return 2;
    }
    auto w = rank2.decode(idx - rank1.total);
    i64 r = mod.add(mod.mul(w[1], w[1]), mod.mul(4, mod.mul(w[0], w[2])));
    if (r != 0) return 0;
    for (const auto& b : gens) {
      i64 s = mod.add(mod.add(mod.mul(w[0], b[0]), mod.mul(w[1], b[1])), mod.mul(w[2], b[2]));
      if (s != 0) return 1;
    }
    return 2;
  }
};

}  // namespace

OptimalityResult optimality_search_detailed(const LieLattice& M, int m, const Budget& budget, Exec exec) {
  const Modulus& full = M.modulus();
  if (full.p() == 2) fail(ErrorKind::UnsupportedPrime, "optimality search covers odd p");
  if (m < 1 || m > full.N() - 1) fail(ErrorKind::PrecisionExceeded, "need 1 <= m <= N - 1");
  Modulus mod = full.truncated(m);
  std::vector<Vec3> gens;
  for (const auto& b : M.basis()) {
    Vec3 r = b.reduced(mod);
    if (!r.is_zero()) gens.push_back(r);
  }
  ProjectiveBlocks rank1(mod.p(), m, {0, 1, 2});
  ProjectiveBlocks rank2(mod.p(), m, {2, 0, 1});
  const u64 total = rank1.total + rank2.total;
  if (total > budget.candidate_cap)
    fail(ErrorKind::BudgetExceeded, "optimality search needs " + std::to_string(total) +
                                        " candidates; cap is " + std::to_string(budget.candidate_cap));
  CandidateCheck check{mod, gens, rank1, rank2};

  u64 first = std::numeric_limits<u64>::max();
  u64 r2 = 0;
  const auto count = static_cast<std::int64_t>(total);
  const auto r1_end = static_cast<std::int64_t>(rank1.total);
  if (exec == Exec::Serial) {
    for (std::int64_t i = 0; i < count; ++i) {
      int s = check(static_cast<u64>(i));
      if (s > 0 && i >= r1_end) ++r2;
      if (s == 2 && static_cast<u64>(i) < first) first = static_cast<u64>(i);
    }
  } else {
#pragma omp parallel for schedule(static) reduction(min : first) reduction(+ : r2)
    for (std::int64_t i = 0; i < count; ++i) {
      int s = check(static_cast<u64>(i));
      if (s > 0 && i >= r1_end) ++r2;
      if (s == 2 && static_cast<u64>(i) < first) first = static_cast<u64>(i);
    }
  }

  OptimalityResult out;
  out.rank1_candidates = rank1.total;
  out.rank2_candidates = r2;
  out.candidates = rank1.total + r2;
  out.found = first != std::numeric_limits<u64>::max();
  if (out.found) {
    if (first < rank1.total) {
      auto v = rank1.decode(first);
      out.witness = "rank1 span" + Vec3(mod, v[0], v[1], v[2]).to_string();
    } else {
      auto w = rank2.decode(first - rank1.total);
      out.witness = "rank2 J(" + AnnihilatorPoint::from_functional(Vec3(mod, w[0], w[1], w[2])).canonical().to_string() + ")";
    }
  }
  return out;
}

bool optimality_search(const LieLattice& M, int m, const Budget& budget, Exec exec) {
  return optimality_search_detailed(M, m, budget, exec).found;
}

GroupCertificate group_certificate_detailed(std::span<const Mat2> generators, const LieLattice& I, int m,
                                            std::size_t cap) {
  const Modulus& mod = I.modulus();
  if (mod.p() == 2) fail(ErrorKind::UnsupportedPrime, "group certificate covers odd p");
  if (m < 0 || m > mod.N() - 1) fail(ErrorKind::PrecisionExceeded, "need m <= N - 1");
  const int eps = epsilon_p(mod.p());
  for (const auto& g : generators) {
    if (!(g.modulus() == mod)) fail(ErrorKind::ModulusMismatch, "generator lives in a different ring");
    if (g.det() != mod.reduce(1) || !in_principal_congruence(g, eps))
      fail(ErrorKind::PreconditionViolation, g.to_string() + " is not in the first congruence subgroup");
  }
  GroupClosure H = close_group(mod, generators, cap);
  LieLattice pI = I.scaled(1);
  GroupCertificate out;
  out.group_order = H.size();
  out.holds = true;
  H.for_each([&](const Mat2& h) {
    if (!out.holds) return;
    Vec3 v = Vec3::from_matrix(log_congruence(h));
    if (!pI.contains(v, m)) {
      out.holds = false;
      out.counterexample = h;
    }
  });
  return out;
}

bool group_certificate(std::span<const Mat2> generators, const LieLattice& I, int m, std::size_t cap) {
  return group_certificate_detailed(generators, I, m, cap).holds;
}

LieLattice borel_family(const Modulus& mod, int a, int n) {
  if (a < 0 || a > n || n >= mod.N()) fail(ErrorKind::PreconditionViolation, "need 0 <= a <= n < N");
  std::array<Vec3, 3> gens{Vec3::h(mod), Vec3::e(mod).scaled(mod.power(a)), Vec3::f(mod).scaled(mod.power(n))};
  return LieLattice::span(mod, gens);
}

namespace {

Mat2 random_sl2(const Modulus& mod, Rng& rng) {
  for (;;)
    if (auto g = sl2_from_index(mod, rng.below(sl2_index_space(mod)))) return *g;
}

Vec3 random_vec(const Modulus& mod, Rng& rng) {
  const auto q = static_cast<u64>(mod.value());
  return {mod, static_cast<i64>(rng.below(q)), static_cast<i64>(rng.below(q)), static_cast<i64>(rng.below(q))};
}

}  // namespace

LieLattice random_exact_subalgebra(const Modulus& mod, int n, Rng& rng) {
  if (n < 1 || n >= mod.N()) fail(ErrorKind::PreconditionViolation, "need 1 <= n < N");
  if (rng.coin()) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::vector<Vec3> gens{Vec3::e(mod).scaled(mod.power(n)), Vec3::h(mod).scaled(mod.power(n)),
                             Vec3::f(mod).scaled(mod.power(n))};
      for (int i = 0; i < 2; ++i)
        gens.push_back(random_vec(mod, rng).scaled(mod.power(static_cast<int>(rng.below(static_cast<u64>(n) + 1)))));
      LieLattice L = LieLattice::span(mod, gens).lie_closure();
      if (lattice_level(L) == n) return L;
    }
  }
  const int a = static_cast<int>(rng.below(static_cast<u64>(n) + 1));
  const Mat2 g = random_sl2(mod, rng);
  const Mat2 ginv = g.inverse();
  std::vector<Vec3> gens;
  for (const Vec3& v : borel_family(mod, a, n).basis()) gens.push_back(Vec3::from_matrix(g * v.to_matrix() * ginv));
  return LieLattice::span(mod, gens);
}

LieLattice reduce_lattice(const LieLattice& L, const Modulus& target) {
  std::vector<Vec3> gens;
  for (const auto& b : L.basis()) gens.push_back(b.reduced(target));
  if (gens.empty()) gens.push_back(Vec3(target));
  return LieLattice::span(target, gens);
}

}  // namespace congsub
