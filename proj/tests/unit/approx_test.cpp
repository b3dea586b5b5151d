#include "congsub/approx.hpp"

#include "congsub/explog.hpp"
#include "support.hpp"

namespace congsub {
namespace {

LieLattice worst(i64 p, int n, int N) {
  Modulus mod = Modulus::make(p, N);
  return worst_case_subalgebra(p, n, N, Vec3(mod, 0, 2, 0));
}

void expect_valid(const LieLattice& M, const ApproxResult& r) {
  const int n = lattice_level(M);
  EXPECT_EQ(r.level, n);
  EXPECT_GE(r.m, ceil_div(n, 2));
  EXPECT_LT(r.subalgebra.rank(), 3);
  EXPECT_EQ(saturate(r.subalgebra), r.subalgebra);
  EXPECT_TRUE(is_subalgebra_mod(r.subalgebra, M.modulus().N()));
  EXPECT_TRUE(r.subalgebra.contains(M, r.m));
}

TEST(Approx, WorstCaseShape) {
  LieLattice M = worst(3, 4, 7);
  EXPECT_EQ(M.divisors(), (std::array<int, 3>{2, 2, 4}));
  EXPECT_TRUE(is_subalgebra_mod(M, 7));
  ApproxResult r = approximate_sl2(M);
  EXPECT_EQ(r.m, 2);
  EXPECT_EQ(r.branch, ApproxBranch::Rank1);
  expect_valid(M, r);
}

TEST(Approx, WorstCaseRequiresEvenLevel) {
  Modulus mod = Modulus::make(3, 7);
  EXPECT_ERROR_KIND(worst_case_subalgebra(3, 3, 7, Vec3(mod, 0, 2, 0)), ErrorKind::PreconditionViolation);
  EXPECT_ERROR_KIND(worst_case_subalgebra(3, 4, 7, Vec3(mod, 0, 3, 0)), ErrorKind::NotSurjective);
}

TEST(Approx, OptimalityThreshold) {
  LieLattice M = worst(3, 4, 7);
  EXPECT_TRUE(optimality_search(M, 1));
  EXPECT_TRUE(optimality_search(M, 2));
  EXPECT_FALSE(optimality_search(M, 3));
}

TEST(Approx, OptimalitySerialMatchesParallel) {
  for (i64 p : {3, 5}) {
    LieLattice M = worst(p, 4, 6);
    for (int m = 1; m <= 3; ++m) {
      OptimalityResult s = optimality_search_detailed(M, m, {}, Exec::Serial);
      OptimalityResult q = optimality_search_detailed(M, m, {}, Exec::Parallel);
      EXPECT_EQ(s.found, q.found);
      EXPECT_EQ(s.candidates, q.candidates);
      EXPECT_EQ(s.witness, q.witness);
    }
  }
}

TEST(Approx, OptimalityCandidateCap) {
  Budget tiny;
  tiny.candidate_cap = 10;
  EXPECT_ERROR_KIND(optimality_search(worst(3, 4, 7), 3, tiny), ErrorKind::BudgetExceeded);
}

TEST(Approx, SelectR) {
  RSelection s = select_r({0, 1, 3});
  EXPECT_EQ(s.r, 1);
  EXPECT_EQ(s.nu, 1);
  EXPECT_EQ(select_r({4, 4, 4}).r, 0);
  EXPECT_ERROR_KIND(select_r({0, 1, 3}, Rational(1, 2)), ErrorKind::PreconditionViolation);
}

TEST(Approx, AnnihilatorBasics) {
  Modulus mod = Modulus::make(5, 4);
  AnnihilatorPoint c = annihilator_of_plane(Vec3::e(mod), Vec3::h(mod));
  EXPECT_EQ(quadric_residual(c), 0);
  EXPECT_TRUE(c.annihilates(Vec3::e(mod)));
  EXPECT_TRUE(c.annihilates(Vec3::h(mod)));
  EXPECT_FALSE(c.annihilates(Vec3::f(mod)));
  EXPECT_TRUE(is_subalgebra_mod(c.kernel(), 4));
  AnnihilatorPoint d = AnnihilatorPoint::from_c(mod, 1, 0, 0);
  EXPECT_NE(quadric_residual(d), 0);
  EXPECT_FALSE(is_subalgebra_mod(d.kernel(), 4));
  EXPECT_ERROR_KIND(annihilator_of_plane(Vec3::e(mod), Vec3::e(mod).scaled(2)), ErrorKind::DegenerateSpan);
}

TEST(Approx, QuadricLiftIsExactAndIdempotent) {
  for (i64 p : {3, 5, 7}) {
    Modulus mod = Modulus::make(p, 8);
    Rng rng(static_cast<u64>(p) * 17);
    for (int i = 0; i < 200; ++i) {
      const int m = 1 + static_cast<int>(rng.below(6));
      const i64 c1 = static_cast<i64>(rng.below(static_cast<u64>(mod.value())));
      const i64 t = static_cast<i64>(rng.below(static_cast<u64>(mod.value())));
      // c2 = 1 and c3 = -c1^2 + p^m t lies on the quadric mod p^m only
      const i64 c3 = mod.add(mod.neg(mod.mul(c1, c1)), mod.mul(mod.power(m), t));
      AnnihilatorPoint c = AnnihilatorPoint::from_c(mod, c1, 1, c3);
      AnnihilatorPoint lifted = lift_quadric(c, m);
      EXPECT_EQ(quadric_residual(lifted), 0);
      EXPECT_EQ(lifted.functional().reduced(mod.truncated(m)), c.functional().reduced(mod.truncated(m)));
      EXPECT_EQ(lift_quadric(lifted, mod.N()), lifted);
    }
  }
}

TEST(Approx, QuadricLiftRejectsOffQuadric) {
  Modulus mod = Modulus::make(5, 6);
  EXPECT_ERROR_KIND(lift_quadric(AnnihilatorPoint::from_c(mod, 1, 1, 1), 1), ErrorKind::PreconditionViolation);
}

TEST(Approx, BorelFamily) {
  for (i64 p : {3, 5}) {
    for (int n = 1; n <= 5; ++n) {
      Modulus mod = Modulus::make(p, n + 3);
      for (int a = 0; a <= n; ++a) {
        LieLattice M = borel_family(mod, a, n);
        ApproxResult r = approximate_sl2(M);
        expect_valid(M, r);
      }
    }
  }
}

TEST(Approx, RandomExactSubalgebras) {
  Rng rng(99);
  for (i64 p : {3, 5, 7}) {
    for (int n = 1; n <= 5; ++n) {
      Modulus mod = Modulus::make(p, n + 3);
      for (int i = 0; i < 20; ++i) {
        LieLattice M = random_exact_subalgebra(mod, n, rng);
        ASSERT_EQ(lattice_level(M), n);
        ASSERT_TRUE(is_subalgebra_mod(M, mod.N()));
        expect_valid(M, approximate_sl2(M));
      }
    }
  }
}

TEST(Approx, RankTwoBranch) {
  // Borel subalgebra plus a deep f direction: the rank-2 branch wins.
  Modulus mod = Modulus::make(3, 10);
  LieLattice M = borel_family(mod, 0, 8);
  ApproxResult r = approximate_sl2(M);
  EXPECT_EQ(r.branch, ApproxBranch::Rank2Lifted);
  ASSERT_TRUE(r.annihilator.has_value());
  EXPECT_EQ(quadric_residual(*r.annihilator), 0);
  EXPECT_EQ(r.subalgebra.rank(), 2);
  EXPECT_GE(r.m, 4);
  expect_valid(M, r);
}

TEST(Approx, Preconditions) {
  Modulus mod = Modulus::make(3, 6);
  std::vector<Vec3> bad{Vec3::e(mod), Vec3::f(mod), Vec3::h(mod).scaled(27)};
  EXPECT_ERROR_KIND(approximate_sl2(LieLattice::from_columns(mod, bad)), ErrorKind::Degenerate);
  Modulus tight = Modulus::make(3, 5);
  EXPECT_ERROR_KIND(approximate_sl2(borel_family(tight, 1, 4)), ErrorKind::UnsupportedPrecision);
  Modulus two = Modulus::make(2, 8);
  EXPECT_ERROR_KIND(approximate_sl2(borel_family(two, 1, 4)), ErrorKind::UnsupportedPrime);
  ApproxOptions o;
  o.allow_p2 = true;
  LieLattice M2 = borel_family(two, 2, 4);
  ApproxResult r = approximate_sl2(M2, o);
  EXPECT_TRUE(r.subalgebra.contains(M2, r.m));
}

TEST(Approx, GroupCertificateOnExponentiatedLattice) {
  Modulus mod = Modulus::make(3, 6);
  LieLattice M = worst(3, 4, 6);
  ApproxResult r = approximate_sl2(M);
  std::vector<Mat2> gens;
  for (const Vec3& b : M.basis()) gens.push_back(exp_congruence(b.scaled(3).to_matrix()));
  GroupCertificate cert = group_certificate_detailed(gens, r.subalgebra, r.m);
  EXPECT_TRUE(cert.holds);
  EXPECT_GT(cert.group_order, 1U);
  // logs reach p^3 e, which span{h} + p^4 g misses
  std::vector<Vec3> h{Vec3::h(mod)};
  EXPECT_FALSE(group_certificate(gens, saturate(mod, h), 4));
}

}  // namespace
}  // namespace congsub
