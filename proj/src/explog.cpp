#include "congsub/explog.hpp"

#include <algorithm>
#include <string>

#include "congsub/closure.hpp"
#include "congsub/random.hpp"

namespace congsub {

int epsilon_p(i64 p) { return p == 2 ? 2 : 1; }

NilpotentResidue NilpotentResidue::make(const Mat2& x) {
  if (!residually_nilpotent(x)) fail(ErrorKind::DomainViolation, x.to_string() + " is not residually nilpotent");
  return NilpotentResidue(x);
}

UnipotentResidue UnipotentResidue::make(const Mat2& g) {
  if (!residually_nilpotent(g - Mat2::identity(g.modulus())))
    fail(ErrorKind::DomainViolation, g.to_string() + " is not residually unipotent");
  return UnipotentResidue(g);
}

SeriesPlan series_plan(i64 p, int precision, SeriesKind kind, SeriesDomain domain) {
  // Continuous lower bound for v(y^k / D_k) with v(D_k) <= (k-1)/(p-1); it is
  // increasing in k on both domains, so the first k meeting N is a cutoff.
  const i64 N = precision;
  const i64 eps = epsilon_p(p);
  auto vanishes = [&](i64 k) {
    if (domain == SeriesDomain::Congruence) return eps * k * (p - 1) - (k - 1) >= N * (p - 1);
    return (k - 1) * (p - 3) >= 2 * N * (p - 1);
  };
  if (domain == SeriesDomain::Residual && p < 5)
    fail(ErrorKind::UnsupportedPrime, "residual-domain series need p >= 5");
  i64 k = 1;
  while (!vanishes(k)) ++k;
  SeriesPlan plan;
  plan.terms = static_cast<int>(k - 1);
  for (i64 j = 1; j <= plan.terms; ++j) {
    int v = kind == SeriesKind::Exp ? factorial_valuation(j, p) : integer_valuation(j, p);
    plan.guard = std::max(plan.guard, v);
  }
  return plan;
}

namespace {

/// Sum of coeff_k * y^k / D_k for k = 1..terms, computed with `guard` extra
/// digits so that each exact division leaves at least N correct digits.
Mat2 sum_series(const Mat2& y, SeriesKind kind, SeriesDomain domain) {
  const Modulus& mod = y.modulus();
  const i64 p = mod.p();
  SeriesPlan plan = series_plan(p, mod.N(), kind, domain);
  Modulus work = mod.extended(plan.guard);
  Mat2 yw = y.lifted(work);
  Mat2 power = Mat2::identity(work);
  Mat2 total(mod);
  i64 denom_acc = 1;  // k! with the p-part stripped, mod p^N
  int denom_val = 0;  // v_p(k!)
  for (int k = 1; k <= plan.terms; ++k) {
    power = power * yw;
    i64 unit_part;
    int v;
    if (kind == SeriesKind::Exp) {
      i64 kk = k;
      while (kk % p == 0) {
        kk /= p;
        ++denom_val;
      }
      denom_acc = mod.mul(denom_acc, kk);
      unit_part = denom_acc;
      v = denom_val;
    } else {
      i64 kk = k;
      v = 0;
      while (kk % p == 0) {
        kk /= p;
        ++v;
      }
      unit_part = mod.reduce(kk);
    }
    const i64 pv = work.power(v);
    Mat2 term(mod);
    std::array<i64, 4> q{};
    for (std::size_t i = 0; i < 4; ++i) {
      i64 e = power.raw()[i];
      if (e % pv != 0)
        fail(ErrorKind::DomainViolation, "series term " + std::to_string(k) + " is not integral; input off domain");
      q[i] = e / pv;
    }
    term = Mat2(mod, q[0], q[1], q[2], q[3]).scaled(mod.inverse(unit_part));
    if (kind == SeriesKind::Log && k % 2 == 0) term = -term;
    total = total + term;
  }
  return total;
}

}  // namespace

Mat2 exp_congruence(const Mat2& x) {
  const Modulus& mod = x.modulus();
  int eps = epsilon_p(mod.p());
  if (x.valuation() < eps)
    fail(ErrorKind::DomainViolation, x.to_string() + " is not in p'·gl(2) (need valuation >= " + std::to_string(eps) + ")");
  return Mat2::identity(mod) + sum_series(x, SeriesKind::Exp, SeriesDomain::Congruence);
}

Mat2 log_congruence(const Mat2& g) {
  const Modulus& mod = g.modulus();
  int eps = epsilon_p(mod.p());
  Mat2 y = g - Mat2::identity(mod);
  if (y.valuation() < eps)
    fail(ErrorKind::DomainViolation, g.to_string() + " is not congruent to 1 mod p'");
  return sum_series(y, SeriesKind::Log, SeriesDomain::Congruence);
}

Mat2 exp_congruence_classes(const Mat2& x, int n) {
  const Modulus& mod = x.modulus();
  if (n < epsilon_p(mod.p()) || n > mod.N())
    fail(ErrorKind::DomainViolation, "class exponent " + std::to_string(n) + " outside [eps_p, N]");
  return exp_congruence(x).reduced(n);
}

namespace {
void require_extended_prime(const Modulus& mod) {
  if (mod.p() < 5) fail(ErrorKind::UnsupportedPrime, "extended exp/log need p > 2·N0 = 4");
}
}  // namespace

Mat2 exp_extended(const Mat2& x) {
  require_extended_prime(x.modulus());
  NilpotentResidue::make(x);
  return Mat2::identity(x.modulus()) + sum_series(x, SeriesKind::Exp, SeriesDomain::Residual);
}

Mat2 log_extended(const Mat2& g) {
  require_extended_prime(g.modulus());
  UnipotentResidue::make(g);
  return sum_series(g - Mat2::identity(g.modulus()), SeriesKind::Log, SeriesDomain::Residual);
}

UnipotentResidue exp_extended(const NilpotentResidue& x) { return UnipotentResidue::make(exp_extended(x.matrix())); }

NilpotentResidue log_extended(const UnipotentResidue& g) { return NilpotentResidue::make(log_extended(g.matrix())); }

namespace {
void require_fp(const Mat2& m) {
  if (m.modulus().N() != 1) fail(ErrorKind::PreconditionViolation, "truncated maps act on matrices over F_p");
}
}  // namespace

Mat2 exp_trunc(const Mat2& y) {
  require_fp(y);
  const Modulus& mod = y.modulus();
  if (!(y * y).is_zero()) fail(ErrorKind::DomainViolation, y.to_string() + " is not nilpotent over F_p");
  Mat2 total = Mat2::identity(mod);
  Mat2 power = Mat2::identity(mod);
  i64 fact = 1;
  for (i64 i = 1; i < mod.p(); ++i) {
    power = power * y;
    fact = mod.mul(fact, i);
    total = total + power.scaled(mod.inverse(fact));
  }
  return total;
}

Mat2 log_trunc(const Mat2& u) {
  require_fp(u);
  const Modulus& mod = u.modulus();
  Mat2 y = u - Mat2::identity(mod);
  if (!(y * y).is_zero()) fail(ErrorKind::DomainViolation, u.to_string() + " is not unipotent over F_p");
  Mat2 total(mod);
  Mat2 power = Mat2::identity(mod);
  for (i64 i = 1; i < mod.p(); ++i) {
    power = power * y;
    Mat2 term = power.scaled(mod.inverse(i));
    total = (i % 2 == 1) ? total + term : total - term;
  }
  return total;
}

int ExplogSelftest::total_round_trips() const {
  int t = 0;
  for (const auto& [name, n] : round_trips) t += n;
  return t;
}

namespace {

Mat2 random_matrix(const Modulus& mod, Rng& rng) {
  const auto q = static_cast<u64>(mod.value());
  return {mod, static_cast<i64>(rng.below(q)), static_cast<i64>(rng.below(q)), static_cast<i64>(rng.below(q)),
          static_cast<i64>(rng.below(q))};
}

Mat2 random_sl2(const Modulus& mod, Rng& rng) {
  const u64 space = sl2_index_space(mod);
  for (;;)
    if (auto g = sl2_from_index(mod, rng.below(space))) return *g;
}

/// k [[0, t], [0, 0]] k^-1 + p y: residually nilpotent, and a unit multiple of
/// a nonzero nilpotent mod p half of the time.
Mat2 random_residually_nilpotent(const Modulus& mod, Rng& rng) {
  Mat2 k = random_sl2(mod, rng);
  Mat2 n0(mod, 0, static_cast<i64>(rng.below(static_cast<u64>(mod.p()))), 0, 0);
  return k * n0 * k.inverse() + random_matrix(mod, rng).scaled(mod.p());
}

}  // namespace

ExplogSelftest explog_selftest(i64 p, int N, std::uint64_t seed, int points, int pairs,
                               const std::vector<int>& class_exponents) {
  Modulus mod = Modulus::make(p, N);
  Rng rng(seed);
  ExplogSelftest out;
  out.p = p;
  out.N = N;
  out.seed = seed;
  out.points = points;
  const int eps = epsilon_p(p);
  const i64 pe = mod.power(eps);
  auto record = [&](const std::string& domain, const Mat2& input, const Mat2& back) {
    if (!(input == back)) out.failures.push_back(domain + ": " + input.to_string() + " -> " + back.to_string());
  };

  for (int i = 0; i < points; ++i) {
    Mat2 x = random_matrix(mod, rng).scaled(pe);
    record("congruence-log-exp", x, log_congruence(exp_congruence(x)));
  }
  out.round_trips.emplace_back("congruence-log-exp", points);
  for (int i = 0; i < points; ++i) {
    Mat2 g = Mat2::identity(mod) + random_matrix(mod, rng).scaled(pe);
    record("congruence-exp-log", g, exp_congruence(log_congruence(g)));
  }
  out.round_trips.emplace_back("congruence-exp-log", points);

  if (p >= 5) {
    for (int i = 0; i < points; ++i) {
      Mat2 x = random_residually_nilpotent(mod, rng);
      record("residual-log-exp", x, log_extended(exp_extended(x)));
    }
    out.round_trips.emplace_back("residual-log-exp", points);
    for (int i = 0; i < points; ++i) {
      Mat2 g = Mat2::identity(mod) + random_residually_nilpotent(mod, rng);
      record("residual-exp-log", g, exp_extended(log_extended(g)));
    }
    out.round_trips.emplace_back("residual-exp-log", points);
  }

  for (int n : class_exponents) {
    if (n < eps || n > N) continue;
    for (int i = 0; i < pairs; ++i) {
      Mat2 x = random_matrix(mod, rng).scaled(pe);
      Mat2 x2 = x + random_matrix(mod, rng).scaled(mod.power(n));
      Mat2 a = exp_congruence_classes(x, n), b = exp_congruence_classes(x2, n);
      if (!(a == b))
        out.failures.push_back("class n=" + std::to_string(n) + ": " + x.to_string() + " vs " + x2.to_string());
    }
    out.class_pairs.emplace_back(n, pairs);
  }
  return out;
}

}  // namespace congsub
