#include "congsub/congcount.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace congsub {

using boost::multiprecision::cpp_int;

IntPolynomial IntPolynomial::constant(int vars, i64 c) {
  IntPolynomial f(vars);
  f.add_term({0, 0, 0, 0}, c);
  return f;
}

IntPolynomial IntPolynomial::variable(int vars, int i) {
  if (i < 0 || i >= kMaxVars) fail(ErrorKind::ParseError, "variable index out of range");
  IntPolynomial f(std::max(vars, i + 1));
  Exponent e{0, 0, 0, 0};
  e[static_cast<std::size_t>(i)] = 1;
  f.add_term(e, 1);
  return f;
}

void IntPolynomial::add_term(const Exponent& e, i64 c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int IntPolynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
  return d;
}

int IntPolynomial::degree_mod(i64 p) const {
  int d = -1;
  for (const auto& [e, c] : terms_)
    if (c % p != 0) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
  return d;
}

IntPolynomial IntPolynomial::with_vars(int vars) const {
  for (const auto& [e, c] : terms_)
    for (int i = vars; i < kMaxVars; ++i)
      if (e[static_cast<std::size_t>(i)] != 0) fail(ErrorKind::ParseError, "polynomial uses more variables");
  IntPolynomial f = *this;
  f.vars_ = vars;
  return f;
}

IntPolynomial IntPolynomial::operator+(const IntPolynomial& o) const {
  IntPolynomial f(std::max(vars_, o.vars_));
  f.terms_ = terms_;
  for (const auto& [e, c] : o.terms_) f.add_term(e, c);
  return f;
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& o) const {
  IntPolynomial f(std::max(vars_, o.vars_));
  f.terms_ = terms_;
  for (const auto& [e, c] : o.terms_) f.add_term(e, -c);
  return f;
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& o) const {
  IntPolynomial f(std::max(vars_, o.vars_));
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exponent e;
      for (std::size_t i = 0; i < kMaxVars; ++i) e[i] = e1[i] + e2[i];
      f.add_term(e, c1 * c2);
    }
  return f;
}

IntPolynomial IntPolynomial::pow(int e) const {
  if (e < 0) fail(ErrorKind::ParseError, "negative exponent");
  IntPolynomial r = constant(vars_, 1);
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

i64 IntPolynomial::eval_mod(const std::array<i64, kMaxVars>& x, i64 q) const {
  __int128 total = 0;
  for (const auto& [e, c] : terms_) {
    __int128 t = c % q;
    for (std::size_t i = 0; i < kMaxVars; ++i)
      for (int k = 0; k < e[i]; ++k) t = t * x[i] % q;
    total = (total + t) % q;
  }
  auto r = static_cast<i64>(total % q);
  return r < 0 ? r + q : r;
}

std::string IntPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // highest degree first, then lexicographic
  std::vector<std::pair<Exponent, i64>> sorted(terms_.begin(), terms_.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    int da = a.first[0] + a.first[1] + a.first[2] + a.first[3];
    int db = b.first[0] + b.first[1] + b.first[2] + b.first[3];
    return da != db ? da > db : a.first > b.first;
  });
  for (const auto& [e, c] : sorted) {
    i64 mag = c < 0 ? -c : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool constant_term = e == Exponent{0, 0, 0, 0};
    if (mag != 1 || constant_term) os << mag;
    bool need_star = mag != 1;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (e[i] == 0) continue;
      if (need_star) os << "*";
      os << "x" << i;
      if (e[i] > 1) os << "^" << e[i];
      need_star = true;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  IntPolynomial parse_all() {
    IntPolynomial f = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::ParseError, "polynomial \"" + s_ + "\" at offset " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool starts_primary() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || std::isalpha(static_cast<unsigned char>(c)) || c == '(';
  }

  i64 integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("expected an integer");
    std::string digits = s_.substr(start, pos_ - start);
    if (digits.size() > 15) error("integer too large");
    return std::stoll(digits);
  }

  IntPolynomial expr() {
    IntPolynomial f = term();
    for (;;) {
      if (peek('+')) {
        ++pos_;
        f = f + term();
      } else if (peek('-')) {
        ++pos_;
        f = f - term();
      } else {
        return f;
      }
    }
  }

  IntPolynomial term() {
    IntPolynomial f = factor();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        f = f * factor();
      } else if (starts_primary()) {
        f = f * factor();  // implicit product, e.g. "3x0"
      } else {
        return f;
      }
    }
  }

  IntPolynomial factor() {
    if (peek('-')) {
      ++pos_;
      return IntPolynomial::constant(1, 0) - factor();
    }
    IntPolynomial base = primary();
    if (peek('^')) {
      ++pos_;
      i64 e = integer();
      if (e > 64) error("exponent too large");
      return base.pow(static_cast<int>(e));
    }
    return base;
  }

  IntPolynomial primary() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      IntPolynomial f = expr();
      if (!peek(')')) error("expected ')'");
      ++pos_;
      return f;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return IntPolynomial::constant(1, integer());
    ++pos_;
    switch (c) {
      case 'x':
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          i64 i = integer();
          if (i >= IntPolynomial::kMaxVars) error("at most four variables are supported");
          return IntPolynomial::variable(1, static_cast<int>(i));
        }
        return IntPolynomial::variable(1, 0);
      case 'y': return IntPolynomial::variable(1, 1);
      case 'z': return IntPolynomial::variable(1, 2);
      case 'w': return IntPolynomial::variable(1, 3);
      case 'a': return IntPolynomial::variable(1, 0);
      case 'b': return IntPolynomial::variable(1, 1);
      case 'c': return IntPolynomial::variable(1, 2);
      case 'd': return IntPolynomial::variable(1, 3);
      default: --pos_; error("unknown symbol");
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

i64 ipow(i64 b, int e) {
  i64 r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

IntPolynomial IntPolynomial::parse(const std::string& text, int min_vars) {
  IntPolynomial f = Parser(text).parse_all();
  int used = 0;
  for (const auto& [e, c] : f.terms())
    for (int i = 0; i < kMaxVars; ++i)
      if (e[static_cast<std::size_t>(i)] != 0) used = std::max(used, i + 1);
  f.vars_ = std::max({min_vars, used, 1});
  return f;
}

IntPolynomial random_polynomial(Rng& rng, int vars, int d, i64 p, i64 bound) {
  if (vars < 1 || vars > IntPolynomial::kMaxVars) fail(ErrorKind::PreconditionViolation, "1..4 variables");
  for (;;) {
    IntPolynomial f(vars);
    const int terms = 1 + static_cast<int>(rng.below(6));
    for (int t = 0; t < terms; ++t) {
      IntPolynomial::Exponent e{0, 0, 0, 0};
      int total = static_cast<int>(rng.below(static_cast<u64>(d) + 1));
      for (int k = 0; k < total; ++k) ++e[static_cast<std::size_t>(rng.below(static_cast<u64>(vars)))];
      f.add_term(e, rng.range(-bound, bound));
    }
    if (!f.is_zero_mod(p)) return f;
  }
}

// ---------------------------------------------------------------------------

u64 count_affine(const IntPolynomial& f, i64 p, int n, const Budget& budget, Exec exec) {
  if (!is_prime(p) || n < 1) fail(ErrorKind::InvalidModulus, "need prime p and n >= 1");
  if (f.is_zero_mod(p)) fail(ErrorKind::ZeroModP, "f vanishes identically mod p");
  const int s = f.vars();
  const i64 q = ipow(p, n);
  cpp_int space = 1;
  for (int i = 0; i < s; ++i) space *= q;
  if (space > cpp_int(budget.enumeration_cap))
    fail(ErrorKind::BudgetExceeded, "(Z/p^n)^s has " + space.str() + " points; cap is " +
                                        std::to_string(budget.enumeration_cap));
  // f = sum_k g_k(x0..x_{s-2}) x_{s-1}^k: evaluate the g_k per prefix, then Horner.
  const int last = s - 1;
  int top = 0;
  for (const auto& [e, c] : f.terms()) top = std::max(top, e[static_cast<std::size_t>(last)]);
  std::vector<IntPolynomial> g(static_cast<std::size_t>(top) + 1, IntPolynomial(s));
  for (const auto& [e, c] : f.terms()) {
    auto e2 = e;
    e2[static_cast<std::size_t>(last)] = 0;
    g[static_cast<std::size_t>(e[static_cast<std::size_t>(last)])].add_term(e2, c);
  }
  i64 prefixes = 1;
  for (int i = 0; i < last; ++i) prefixes *= q;

  auto count_prefix = [&](i64 idx) -> u64 {
    std::array<i64, IntPolynomial::kMaxVars> x{0, 0, 0, 0};
    for (int i = 0; i < last; ++i) {
      x[static_cast<std::size_t>(i)] = idx % q;
      idx /= q;
    }
    std::vector<i64> coeff(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) coeff[k] = g[k].eval_mod(x, q);
    u64 zeros = 0;
    for (i64 y = 0; y < q; ++y) {
      __int128 acc = 0;
      for (std::size_t k = coeff.size(); k-- > 0;) acc = (acc * y + coeff[k]) % q;
      if (acc == 0) ++zeros;
    }
    return zeros;
  };

  u64 total = 0;
  const auto np = static_cast<std::int64_t>(prefixes);
  if (exec == Exec::Serial || np == 1) {
    for (std::int64_t i = 0; i < np; ++i) total += count_prefix(i);
  } else {
#pragma omp parallel for schedule(static) reduction(+ : total)
    for (std::int64_t i = 0; i < np; ++i) total += count_prefix(i);
  }
  return total;
}

CongruenceBound congruence_bound(u64 count, int d, int s, i64 p, int n) {
  if (d < 1 || s < 1 || n < 1) fail(ErrorKind::PreconditionViolation, "need d, s, n >= 1");
  CongruenceBound out;
  out.count = count;
  out.d = d;
  out.s = s;
  out.p = p;
  out.n = n;
  cpp_int binom = 1;
  for (int i = 1; i <= s - 1; ++i) binom = binom * (n + i) / i;  // C(n+s-1, s-1)
  cpp_int base = binom;
  for (int i = 0; i < s; ++i) base *= d;
  cpp_int rhs = boost::multiprecision::pow(base, static_cast<unsigned>(d)) *
                boost::multiprecision::pow(cpp_int(p), static_cast<unsigned>(n * (s * d - 1)));
  cpp_int lhs = boost::multiprecision::pow(cpp_int(count), static_cast<unsigned>(d));
  out.lhs = lhs.str();
  out.rhs = rhs.str();
  out.pass = lhs <= rhs;
  return out;
}

CongruenceBound check_congruence_bound(const IntPolynomial& f, i64 p, int n, const Budget& budget, Exec exec) {
  u64 count = count_affine(f, p, n, budget, exec);
  return congruence_bound(count, std::max(f.degree_mod(p), 1), f.vars(), p, n);
}

SchmidtCheck schmidt_check(const IntPolynomial& g, i64 p, const Budget& budget, Exec exec) {
  if (g.is_zero_mod(p)) fail(ErrorKind::ZeroPolynomial, "g is zero over F_p");
  SchmidtCheck out;
  out.degree = g.degree_mod(p);
  out.count = count_affine(g, p, 1, budget, exec);
  out.bound = static_cast<u64>(out.degree) * static_cast<u64>(ipow(p, g.vars() - 1));
  out.pass = out.count <= out.bound;
  return out;
}

Sl2Count count_mod_p_on_sl2(const IntPolynomial& f, i64 p, Exec exec) {
  if (!is_prime(p)) fail(ErrorKind::InvalidModulus, "p must be prime");
  if (p > 101) fail(ErrorKind::BudgetExceeded, "SL(2, F_p) scan is capped at p <= 101");
  IntPolynomial g = f.with_vars(4);
  Modulus fp = Modulus::make(p, 1);
  Sl2Count out;
  out.points = sl2_order(fp);
  out.degree = g.degree_mod(p);
  const auto space = static_cast<std::int64_t>(sl2_index_space(fp));
  auto zero_at = [&](std::int64_t i) -> u64 {
    auto m = sl2_from_index(fp, static_cast<u64>(i));
    if (!m) return 0;
    return g.eval_mod({(*m)(0, 0), (*m)(0, 1), (*m)(1, 0), (*m)(1, 1)}, p) == 0 ? 1 : 0;
  };
  u64 count = 0;
  if (exec == Exec::Serial) {
    for (std::int64_t i = 0; i < space; ++i) count += zero_at(i);
  } else {
#pragma omp parallel for schedule(static) reduction(+ : count)
    for (std::int64_t i = 0; i < space; ++i) count += zero_at(i);
  }
  out.count = count;
  if (count == out.points) fail(ErrorKind::IdenticallyZeroOnV, f.to_string() + " vanishes on SL(2, F_p)");
  out.ratio = out.degree <= 0 ? Rational(0) : Rational(static_cast<i64>(count), out.degree * p * p);
  return out;
}

Sl2Sweep sl2_ratio_sweep(std::uint64_t seed, const std::vector<i64>& primes, int per_prime, int max_degree, Exec exec) {
  static const char* fixed[] = {"a - 1", "b", "c", "a + d - 2", "a*d", "b*c", "a^2 - 1", "a^3 - b", "a - d", "b - c"};
  Rng rng(seed);
  Sl2Sweep out;
  auto visit = [&](const IntPolynomial& f, i64 p) {
    try {
      Sl2Count c = count_mod_p_on_sl2(f, p, exec);
      ++out.cases;
      if (c.ratio > out.max_ratio) {
        out.max_ratio = c.ratio;
        out.argmax = "p=" + std::to_string(p) + " f=" + f.to_string();
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IdenticallyZeroOnV) throw;
      ++out.skipped;
    }
  };
  for (i64 p : primes) {
    for (const char* text : fixed) visit(IntPolynomial::parse(text, 4), p);
    for (int i = 0; i < per_prime; ++i) {
      int d = 1 + static_cast<int>(rng.below(static_cast<u64>(max_degree)));
      visit(random_polynomial(rng, 4, d, p), p);
    }
  }
  return out;
}

// Measured by sl2_ratio_sweep with Sl2SweepDefaults (attained by a - d at p = 3).
Rational recorded_sl2_constant() { return Rational(4, 3); }

}  // namespace congsub
