#include "congsub/explog.hpp"

#include "congsub/random.hpp"
#include "support.hpp"

namespace congsub {
namespace {

Mat2 random_in_domain(const Modulus& m, Rng& rng) {
  const i64 s = m.power(epsilon_p(m.p()));
  auto r = [&] { return static_cast<i64>(rng.below(static_cast<u64>(m.value()))) * s; };
  return {m, r(), r(), r(), r()};
}

TEST(Explog, NilpotentSeriesTerminate) {
  Modulus m = Modulus::make(3, 5);
  Mat2 x(m, 0, 3, 0, 0);
  EXPECT_EQ(exp_congruence(x), Mat2(m, 1, 3, 0, 1));
  EXPECT_EQ(log_congruence(Mat2(m, 1, 3, 0, 1)), x);
  EXPECT_TRUE(exp_congruence(Mat2(m)).is_identity());
}

TEST(Explog, RoundTripsOnCongruenceDomain) {
  for (i64 p : {2, 3, 5, 7}) {
    Modulus m = Modulus::make(p, 6);
    Rng rng(static_cast<u64>(p));
    for (int i = 0; i < 100; ++i) {
      Mat2 x = random_in_domain(m, rng);
      Mat2 g = exp_congruence(x);
      EXPECT_EQ(log_congruence(g), x) << "p=" << p << " x=" << x.to_string();
      EXPECT_EQ(exp_congruence(log_congruence(g)), g);
    }
  }
}

TEST(Explog, ClassDependsOnlyOnResidue) {
  Modulus m = Modulus::make(5, 6);
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    Mat2 x = random_in_domain(m, rng);
    Mat2 d = random_in_domain(m, rng).scaled(m.power(2));  // d = 0 mod p^3
    EXPECT_EQ(exp_congruence_classes(x, 3), exp_congruence_classes(x + d, 3));
  }
}

TEST(Explog, DomainViolations) {
  Modulus m = Modulus::make(3, 4);
  EXPECT_ERROR_KIND(exp_congruence(Mat2(m, 1, 0, 0, 0)), ErrorKind::DomainViolation);
  EXPECT_ERROR_KIND(log_congruence(Mat2(m, 2, 0, 0, 2)), ErrorKind::DomainViolation);
  Modulus m2 = Modulus::make(2, 6);
  EXPECT_ERROR_KIND(exp_congruence(Mat2(m2, 2, 0, 0, 0)), ErrorKind::DomainViolation);
  EXPECT_ERROR_KIND(exp_extended(Mat2(m, 0, 1, 0, 0)), ErrorKind::UnsupportedPrime);
}

TEST(Explog, ExtendedDomainAtFive) {
  Modulus m = Modulus::make(5, 4);
  Mat2 x(m, 0, 1, 0, 0);
  EXPECT_EQ(exp_extended(x), Mat2(m, 1, 1, 0, 1));
  Mat2 y(m, 5, 1, 25, -5);  // residually nilpotent, not in p·gl(2)
  EXPECT_EQ(log_extended(exp_extended(y)), y);
  EXPECT_ERROR_KIND(exp_extended(Mat2(m, 1, 0, 0, 0)), ErrorKind::DomainViolation);
}

TEST(Explog, TruncatedMapsInvertOverFp) {
  for (i64 p : {5, 7, 11}) {
    Modulus fp = Modulus::make(p, 1);
    for (i64 a = 0; a < p; ++a)
      for (i64 b = 0; b < p; ++b) {
        // nilpotent y = [[a, b], [c, -a]] with a^2 + bc = 0
        for (i64 c = 0; c < p; ++c) {
          Mat2 y(fp, a, b, c, -a);
          if (!(y * y).is_zero()) continue;
          Mat2 u = exp_trunc(y);
          EXPECT_TRUE(((u - Mat2::identity(fp)) * (u - Mat2::identity(fp))).is_zero());
          EXPECT_EQ(log_trunc(u), y);
        }
      }
  }
}

TEST(Explog, SeriesPlanIsFinite) {
  for (i64 p : {2, 3, 5}) {
    SeriesPlan e = series_plan(p, 6, SeriesKind::Exp, SeriesDomain::Congruence);
    SeriesPlan l = series_plan(p, 6, SeriesKind::Log, SeriesDomain::Congruence);
    EXPECT_GT(e.terms, 0);
    EXPECT_GT(l.terms, 0);
    EXPECT_GE(e.guard, 0);
  }
}

TEST(Explog, SelftestPassesAndIsSeeded) {
  ExplogSelftest a = explog_selftest(5, 6, 7, 100, 40);
  ExplogSelftest b = explog_selftest(5, 6, 7, 100, 40);
  EXPECT_TRUE(a.passed());
  EXPECT_EQ(a.total_round_trips(), 400);
  EXPECT_EQ(a.round_trips, b.round_trips);
  ExplogSelftest c = explog_selftest(3, 6, 7, 100, 40);
  EXPECT_TRUE(c.passed());
  EXPECT_EQ(c.round_trips.size(), 2U);
}

}  // namespace
}  // namespace congsub
