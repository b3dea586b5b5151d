#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "congsub/matrix.hpp"

namespace congsub {

/// epsilon_p: 1 for odd p, 2 for p = 2. The congruence domain is p^eps * gl(2).
int epsilon_p(i64 p);

/// Matrix tagged as residually nilpotent: (x mod p)^2 = 0.
class NilpotentResidue {
 public:
  static NilpotentResidue make(const Mat2& x);
  const Mat2& matrix() const { return x_; }

 private:
  explicit NilpotentResidue(Mat2 x) : x_(x) {}
  Mat2 x_;
};

/// Matrix tagged as residually unipotent: g^p = 1 mod p.
class UnipotentResidue {
 public:
  static UnipotentResidue make(const Mat2& g);
  const Mat2& matrix() const { return g_; }

 private:
  explicit UnipotentResidue(Mat2 g) : g_(g) {}
  Mat2 g_;
};

/// exp on p'·gl(2, Z/p^N); exact mod p^N. DomainViolation off the domain.
Mat2 exp_congruence(const Mat2& x);
/// log on Γ(2, p'); exact mod p^N and inverse to exp_congruence.
Mat2 log_congruence(const Mat2& g);

/// exp(x) reduced mod p^n; the class depends only on x mod p^n (eps_p <= n <= N).
Mat2 exp_congruence_classes(const Mat2& x, int n);

/// exp / log on the residually nilpotent / unipotent domains. Require p >= 5.
UnipotentResidue exp_extended(const NilpotentResidue& x);
NilpotentResidue log_extended(const UnipotentResidue& g);
Mat2 exp_extended(const Mat2& x);
Mat2 log_extended(const Mat2& g);

/// Truncated exp^(p) y = sum_{i<p} y^i / i! over F_p (the matrix must live mod p).
Mat2 exp_trunc(const Mat2& y);
/// Truncated log^(p) u = sum_{0<i<p} (-1)^{i+1} (u-1)^i / i over F_p.
Mat2 log_trunc(const Mat2& u);

/// Number of series terms and extra p-adic digits used for a given domain;
/// exposed for tests of the exactness contract.
struct SeriesPlan {
  int terms = 0;  ///< terms k = 1 .. terms are summed; later ones vanish mod p^N
  int guard = 0;  ///< extra digits carried to absorb the denominators
};
enum class SeriesKind { Exp, Log };
enum class SeriesDomain { Congruence, Residual };
SeriesPlan series_plan(i64 p, int precision, SeriesKind kind, SeriesDomain domain);

/// Seeded round trips on every domain plus the class-congruence check.
struct ExplogSelftest {
  i64 p = 0;
  int N = 0;
  std::uint64_t seed = 0;
  int points = 0;
  /// Round trips performed per domain name (congruence-exp-log, ...).
  std::vector<std::pair<std::string, int>> round_trips;
  /// Pairs checked per n for the class congruence.
  std::vector<std::pair<int, int>> class_pairs;
  std::vector<std::string> failures;
  int total_round_trips() const;
  bool passed() const { return failures.empty(); }
};
/// `points` random inputs per domain; extended domains only for p >= 5.
/// `pairs` random pairs x = x' mod p^n for each n in class_exponents.
ExplogSelftest explog_selftest(i64 p, int N, std::uint64_t seed, int points = 500, int pairs = 200,
                               const std::vector<int>& class_exponents = {2, 3});

}  // namespace congsub
