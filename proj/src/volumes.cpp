#include "congsub/volumes.hpp"

#include <array>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "congsub/lattice.hpp"

namespace congsub {

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

std::string IntMat2::to_string() const {
  std::ostringstream os;
  os << "[[" << a << "," << b << "],[" << c << "," << d << "]]";
  return os.str();
}

LevelFactorization factorize(i64 n) {
  if (n < 1) fail(ErrorKind::InvalidModulus, "level must be positive");
  LevelFactorization out;
  for (i64 p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  if (n > 1) ++out[n];
  return out;
}

i64 level_value(const LevelFactorization& f) {
  i64 v = 1;
  for (auto [p, e] : f)
    for (int i = 0; i < e; ++i) v *= p;
  return v;
}

namespace {

i64 ipow(i64 b, int e) {
  i64 r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void check_group_budget(const Modulus& mod, const Budget& budget, u64 factor = 1) {
  u64 space = sl2_index_space(mod) * factor;
  if (space > budget.group_cap)
    fail(ErrorKind::BudgetExceeded, "scan of SL(2, Z/" + std::to_string(mod.value()) + ") needs " +
                                        std::to_string(space) + " steps; cap is " + std::to_string(budget.group_cap));
}

/// Sum of f(k) over SL(2, Z/p^n), serial or OpenMP over the index space.
template <class F>
u64 sum_over_sl2(const Modulus& mod, Exec exec, F&& f) {
  const auto space = static_cast<std::int64_t>(sl2_index_space(mod));
  u64 total = 0;
  if (exec == Exec::Serial) {
    for (std::int64_t i = 0; i < space; ++i)
      if (auto k = sl2_from_index(mod, static_cast<u64>(i))) total += f(*k);
  } else {
#pragma omp parallel for schedule(static) reduction(+ : total)
    for (std::int64_t i = 0; i < space; ++i)
      if (auto k = sl2_from_index(mod, static_cast<u64>(i))) total += f(*k);
  }
  return total;
}

}  // namespace

Valuation lambda_p(const Mat2& x) {
  const Modulus& mod = x.modulus();
  Mat2 xinv = x.inverse();
  int v = mod.N();
  for (const Vec3& b : {Vec3::e(mod), Vec3::h(mod), Vec3::f(mod)}) {
    Mat2 m = b.to_matrix();
    v = std::min(v, (x * m * xinv - m).valuation());
  }
  return {v, mod.N()};
}

std::string SubgroupSpec::to_string() const {
  std::string name;
  switch (kind) {
    case SubgroupKind::Whole: name = "whole"; break;
    case SubgroupKind::Gamma0: name = "gamma0"; break;
    case SubgroupKind::Gamma1: name = "gamma1"; break;
    case SubgroupKind::Principal: name = "principal"; break;
    case SubgroupKind::Trivial: name = "trivial"; break;
  }
  if (level) name += "(" + std::to_string(*level) + ")";
  return name;
}

Membership membership(const SubgroupSpec& spec, const Modulus& mod) {
  const int j = spec.level.value_or(mod.N());
  if (j < 0 || j > mod.N()) fail(ErrorKind::PrecisionExceeded, "subgroup level exceeds precision");
  const i64 q = mod.power(j);
  switch (spec.kind) {
    case SubgroupKind::Whole:
      return [](const Mat2&) { return true; };
    case SubgroupKind::Gamma0:
      return [q](const Mat2& g) { return g(1, 0) % q == 0; };
    case SubgroupKind::Gamma1:
      return [q](const Mat2& g) { return g(1, 0) % q == 0 && (g(1, 1) - 1) % q == 0; };
    case SubgroupKind::Principal:
      return [j](const Mat2& g) { return in_principal_congruence(g, j); };
    case SubgroupKind::Trivial:
      return [](const Mat2& g) { return g.is_identity(); };
  }
  fail(ErrorKind::PreconditionViolation, "unknown subgroup kind");
}

Membership membership(const GroupClosure& group) {
  return [&group](const Mat2& g) { return group.contains(g); };
}

VolumeCount phi_brute(const Membership& K, const Mat2& x, const Modulus& mod, const Budget& budget, Exec exec) {
  if (x.modulus().p() != mod.p()) fail(ErrorKind::ModulusMismatch, "x lives over a different prime");
  check_group_budget(mod, budget);
  Mat2 xr = x.reduced(mod);
  Mat2 xinv = xr.inverse();
  VolumeCount out;
  out.total = sl2_order(mod);
  out.count = sum_over_sl2(mod, exec, [&](const Mat2& k) -> u64 { return K(k * xr * k.inverse() * xinv) ? 1 : 0; });
  return out;
}

u64 p1_size(i64 p, int n) {
  if (n < 1) fail(ErrorKind::PreconditionViolation, "P^1(Z/p^n) needs n >= 1");
  return static_cast<u64>(ipow(p, n) + ipow(p, n - 1));
}

u64 fixed_points_P1(const Mat2& x, int n) {
  const Modulus mod = x.modulus().truncated(n);
  Mat2 g = x.reduced(mod);
  const i64 q = mod.value();
  const i64 p = mod.p();
  u64 count = 0;
  // [1 : y]
  for (i64 y = 0; y < q; ++y) {
    i64 det = mod.sub(mod.add(g(1, 0), mod.mul(g(1, 1), y)), mod.mul(y, mod.add(g(0, 0), mod.mul(g(0, 1), y))));
    if (det == 0) ++count;
  }
  // [x : 1] with p | x
  for (i64 t = 0; t < q; t += p) {
    i64 det = mod.sub(mod.mul(t, mod.add(mod.mul(g(1, 0), t), g(1, 1))), mod.add(mod.mul(g(0, 0), t), g(0, 1)));
    if (det == 0) ++count;
  }
  return count;
}

Rational phi_gamma0(const Mat2& x, int n) {
  const Modulus mod = x.modulus().truncated(n);
  Mat2 g = x.reduced(mod);
  const i64 p = mod.p();
  if (g(1, 0) != 0) fail(ErrorKind::PreconditionViolation, "x must be upper triangular mod p^n");
  const int vda = mod.valuation(mod.sub(g(1, 1), g(0, 0)));
  const int r = std::min(vda, mod.valuation(g(0, 1)));
  if (r >= n) fail(ErrorKind::PreconditionViolation, "r = min(v(d-a), v(b)) must be below n");
  const Rational base(p, p + 1);
  if (2 * vda < n + r) return 2 * base / ipow(p, n - vda);
  return base / ipow(p, static_cast<int>(ceil_div(n - r, 2)));
}

// ---------------------------------------------------------------------------

u64 index_gamma0(i64 M) {
  Rational idx(M);
  for (auto [p, e] : factorize(M)) idx *= Rational(p + 1, p);
  return static_cast<u64>(idx.numerator());
}

u64 index_gamma_full(i64 M) {
  Rational idx(M * M * M);
  for (auto [p, e] : factorize(M)) idx *= Rational(p * p - 1, p * p);
  return static_cast<u64>(idx.numerator());
}

CDeltaResult c_delta(const IntMat2& gamma, DeltaKind kind, i64 M, Exec exec) {
  if (M < 2) fail(ErrorKind::InvalidModulus, "M must be at least 2");
  if (gamma.det() != 1) fail(ErrorKind::PreconditionViolation, "gamma must lie in SL(2, Z)");
  auto red = [M](i64 v) {
    i64 r = v % M;
    return r < 0 ? r + M : r;
  };
  const i64 a = red(gamma.a), b = red(gamma.b), c = red(gamma.c), d = red(gamma.d);
  CDeltaResult out;
  const auto m64 = static_cast<std::int64_t>(M);
  if (kind == DeltaKind::Gamma0) {
    if (M > 500) fail(ErrorKind::BudgetExceeded, "Gamma0(M) scan is capped at M <= 500");
    // Primitive pairs v; v is fixed iff det[v, gamma v] = 0. Each class has
    // phi(M) representatives.
    u64 fixed = 0, primitive = 0;
    auto row = [&](std::int64_t x, u64& f, u64& prim) {
      for (i64 y = 0; y < M; ++y) {
        if (std::gcd(std::gcd(x, y), M) != 1) continue;
        ++prim;
        i64 gx = (a * x + b * y) % M, gy = (c * x + d * y) % M;
        if (red(x * gy - y * gx) == 0) ++f;
      }
    };
    if (exec == Exec::Serial) {
      for (std::int64_t x = 0; x < m64; ++x) row(x, fixed, primitive);
    } else {
#pragma omp parallel for schedule(static) reduction(+ : fixed, primitive)
      for (std::int64_t x = 0; x < m64; ++x) row(x, fixed, primitive);
    }
    u64 units = 0;
    for (i64 u = 1; u < M; ++u)
      if (std::gcd(u, M) == 1) ++units;
    out.count = fixed / units;
    out.index = primitive / units;
    if (out.index != index_gamma0(M) || fixed % units != 0)
      fail(ErrorKind::AssertionFailure, "P^1(Z/M) enumeration disagrees with the index formula");
    return out;
  }
  if (M > 50) fail(ErrorKind::BudgetExceeded, "Gamma(M) scan is capped at M <= 50");
  // delta^-1 gamma delta in Gamma(M)  <=>  gamma delta = delta mod M.
  u64 fixed = 0, order = 0;
  auto row = [&](std::int64_t x, u64& f, u64& ord) {
    for (i64 y = 0; y < M; ++y)
      for (i64 z = 0; z < M; ++z)
        for (i64 w = 0; w < M; ++w) {
          if (red(x * w - y * z) != 1) continue;
          ++ord;
          if (red(a * x + b * z) == x && red(a * y + b * w) == y && red(c * x + d * z) == z && red(c * y + d * w) == w) ++f;
        }
  };
  if (exec == Exec::Serial) {
    for (std::int64_t x = 0; x < m64; ++x) row(x, fixed, order);
  } else {
#pragma omp parallel for schedule(static) reduction(+ : fixed, order)
    for (std::int64_t x = 0; x < m64; ++x) row(x, fixed, order);
  }
  out.count = fixed;
  out.index = order;
  if (order != index_gamma_full(M)) fail(ErrorKind::AssertionFailure, "SL(2, Z/M) scan disagrees with the index formula");
  return out;
}

BetaResult beta(const LevelFactorization& N, const IntMat2& x, Rational delta) {
  if (delta <= 0) fail(ErrorKind::PreconditionViolation, "delta must be positive");
  BetaResult out;
  for (auto [p, n] : N) {
    if (n < 1) fail(ErrorKind::PreconditionViolation, "exponents must be at least 1");
    // enough digits to decide lambda < delta n
    Rational bound = delta * n;
    int precision = static_cast<int>(ceil_div(bound.numerator(), bound.denominator())) + 1;
    Modulus mod = Modulus::make(p, precision);
    int lam = lambda_p(x.reduce(mod)).value;
    out.lambda[p] = lam;
    if (Rational(lam) < bound) out.value *= ipow(p, n);
  }
  return out;
}

VolumeCount unipotent_orbital_volume(const Membership& K, const Modulus& mod, const Budget& budget, Exec exec) {
  const i64 q = mod.value();
  check_group_budget(mod, budget, static_cast<u64>(q));
  VolumeCount out;
  out.total = sl2_order(mod) * static_cast<u64>(q);
  out.count = sum_over_sl2(mod, exec, [&](const Mat2& k) -> u64 {
    Mat2 kinv = k.inverse();
    u64 row = 0;
    for (i64 t = 0; t < q; ++t)
      if (K(kinv * Mat2(mod, 1, t, 0, 1) * k)) ++row;
    return row;
  });
  return out;
}

VolumeCount unipotent_orbital_volume_by_unipotent(const Membership& K, const Modulus& mod, const Budget& budget) {
  const i64 q = mod.value();
  check_group_budget(mod, budget, static_cast<u64>(q));
  VolumeCount out;
  out.total = sl2_order(mod) * static_cast<u64>(q);
  for (i64 t = 0; t < q; ++t) {
    Mat2 u(mod, 1, t, 0, 1);
    out.count += sum_over_sl2(mod, Exec::Serial, [&](const Mat2& k) -> u64 { return K(k.inverse() * u * k) ? 1 : 0; });
  }
  return out;
}

Rational gamma0_unipotent_ratio(i64 p, int n) {
  return Rational(p, p + 1) / ipow(p, static_cast<int>(ceil_div(n, 2)));
}

bool decay_bound_holds(Rational ratio, u64 index) {
  using boost::multiprecision::cpp_int;
  cpp_int num = ratio.numerator(), den = ratio.denominator();
  return num * num * num * cpp_int(index) <= den * den * den;
}

}  // namespace congsub
