#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "congsub/closure.hpp"
#include "congsub/exec.hpp"
#include "congsub/random.hpp"
#include "congsub/rational.hpp"

namespace congsub {

/// Sparse integer polynomial in at most four variables x0..x3 (a, b, c, d
/// are aliases, used for the entries of a 2x2 matrix).
class IntPolynomial {
 public:
  static constexpr int kMaxVars = 4;
  using Exponent = std::array<int, kMaxVars>;

  IntPolynomial() = default;
  explicit IntPolynomial(int vars) : vars_(vars) {}
  static IntPolynomial constant(int vars, i64 c);
  static IntPolynomial variable(int vars, int i);
  /// Parses e.g. "x0^2 + 3*x1 - 1" or "a*d - b*c - 1". Variables count is the
  /// larger of `min_vars` and the highest index used plus one.
  static IntPolynomial parse(const std::string& text, int min_vars = 1);

  int vars() const { return vars_; }
  const std::map<Exponent, i64>& terms() const { return terms_; }
  /// Total degree over Z (-1 for the zero polynomial).
  int degree() const;
  /// Total degree after dropping coefficients divisible by p (-1 if f = 0 mod p).
  int degree_mod(i64 p) const;
  bool is_zero() const { return terms_.empty(); }
  bool is_zero_mod(i64 p) const { return degree_mod(p) < 0; }

  void add_term(const Exponent& e, i64 c);
  IntPolynomial operator+(const IntPolynomial& o) const;
  IntPolynomial operator-(const IntPolynomial& o) const;
  IntPolynomial operator*(const IntPolynomial& o) const;
  IntPolynomial pow(int e) const;
  IntPolynomial with_vars(int vars) const;

  /// Value at a point, reduced into [0, q).
  i64 eval_mod(const std::array<i64, kMaxVars>& x, i64 q) const;
  std::string to_string() const;
  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  int vars_ = 1;
  std::map<Exponent, i64> terms_;
};

/// Random polynomial with total degree <= d and coefficients in [-bound, bound],
/// redrawn until it is nonzero mod p.
IntPolynomial random_polynomial(Rng& rng, int vars, int d, i64 p, i64 bound = 10);

/// Number of zeros of f in (Z/p^n)^s by exhaustive evaluation.
u64 count_affine(const IntPolynomial& f, i64 p, int n, const Budget& budget = {}, Exec exec = Exec::Parallel);

struct CongruenceBound {
  u64 count = 0;
  int d = 0, s = 0, n = 0;
  i64 p = 0;
  /// count^d and (d^s C(n+s-1, s-1))^d p^(n(sd-1)) as decimal strings.
  std::string lhs, rhs;
  bool pass = false;
};
/// count <= d^s C(n+s-1, s-1) p^(ns - n/d), compared after raising to the d-th power.
CongruenceBound congruence_bound(u64 count, int d, int s, i64 p, int n);
/// Counts f and checks the bound with d = deg(f mod p).
CongruenceBound check_congruence_bound(const IntPolynomial& f, i64 p, int n, const Budget& budget = {}, Exec exec = Exec::Parallel);

struct SchmidtCheck {
  u64 count = 0;
  u64 bound = 0;
  int degree = 0;
  bool pass = false;
};
/// Zeros of g in F_p^s against deg(g) p^(s-1).
SchmidtCheck schmidt_check(const IntPolynomial& g, i64 p, const Budget& budget = {}, Exec exec = Exec::Parallel);

struct Sl2Count {
  u64 count = 0;
  u64 points = 0;
  int degree = 0;
  /// count / (deg f · p^2); 0 for nonzero constants.
  Rational ratio;
};
/// Zeros of f(a, b, c, d) on SL(2, F_p).
Sl2Count count_mod_p_on_sl2(const IntPolynomial& f, i64 p, Exec exec = Exec::Parallel);

struct Sl2Sweep {
  Rational max_ratio{0};
  std::string argmax;
  u64 cases = 0;
  u64 skipped = 0;  ///< polynomials vanishing on SL(2, F_p)
};
/// Fixed list plus `per_prime` random polynomials of degree <= max_degree for
/// each prime, all drawn from one seeded generator.
Sl2Sweep sl2_ratio_sweep(std::uint64_t seed, const std::vector<i64>& primes, int per_prime, int max_degree,
                         Exec exec = Exec::Parallel);

/// Largest count/(deg·p^2) measured by the default sweep; acceptance checks
/// that reruns reproduce it and never exceed it.
Rational recorded_sl2_constant();
/// Parameters of the default sweep.
struct Sl2SweepDefaults {
  static constexpr std::uint64_t seed = 20240611;
  static constexpr int per_prime = 200;
  static constexpr int max_degree = 3;
  static std::vector<i64> primes() { return {3, 5, 7, 11}; }
};

}  // namespace congsub
