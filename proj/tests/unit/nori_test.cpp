#include "congsub/nori.hpp"

#include "support.hpp"

namespace congsub {
namespace {

TEST(Nori, ClassicalCounts) {
  for (i64 p : {5, 7}) {
    EXPECT_EQ(enumerate_unipotent_generated(p).size(), static_cast<std::size_t>(p + 3));
    EXPECT_EQ(enumerate_nilpotent_generated(p).size(), static_cast<std::size_t>(p + 3));
  }
}

TEST(Nori, RoundTripAtFive) {
  NoriFpReport serial = roundtrip_check_fp(5, {}, Exec::Serial);
  NoriFpReport parallel = roundtrip_check_fp(5, {}, Exec::Parallel);
  EXPECT_TRUE(serial.passed());
  EXPECT_EQ(serial.subgroup_count, 8U);
  EXPECT_EQ(serial.failures, parallel.failures);
  EXPECT_EQ(serial.algebra_count, parallel.algebra_count);
}

TEST(Nori, SmallPrimesAreRejected) {
  EXPECT_ERROR_KIND(roundtrip_check_fp(3), ErrorKind::UnsupportedPrime);
  EXPECT_ERROR_KIND(liec_bar(FpSubgroup::whole(Modulus::make(3, 1))), ErrorKind::UnsupportedPrime);
}

TEST(Nori, GrpcExamples) {
  Modulus fp = Modulus::make(5, 1);
  std::vector<Vec3> e{Vec3::e(fp)}, h{Vec3::h(fp)};
  EXPECT_EQ(grpc_bar(FpLieSubalgebra::span(fp, e)).size(), 5U);
  EXPECT_EQ(grpc_bar(FpLieSubalgebra::span(fp, h)).size(), 1U);
  std::vector<Vec3> all{Vec3::e(fp), Vec3::h(fp), Vec3::f(fp)};
  EXPECT_EQ(grpc_bar(FpLieSubalgebra::span(fp, all)).size(), 120U);
}

TEST(Nori, LiecExamples) {
  Modulus fp = Modulus::make(5, 1);
  std::vector<Mat2> u{Mat2(fp, 1, 1, 0, 1)};
  FpLieSubalgebra L = liec_bar(FpSubgroup::generate(fp, u));
  EXPECT_EQ(L.dim(), 1);
  EXPECT_TRUE(L.contains(Vec3::e(fp)));
  EXPECT_EQ(liec_bar(FpSubgroup::whole(fp)).dim(), 3);
  EXPECT_EQ(liec_bar(FpSubgroup::trivial(fp)).dim(), 0);
}

TEST(Nori, LiecSeesOnlyTheUnipotentPart) {
  Modulus fp = Modulus::make(5, 1);
  auto groups = enumerate_two_generated(5);
  EXPECT_EQ(groups.size(), 76U);
  for (const auto& H : groups) {
    FpSubgroup plus = h_plus(H);
    EXPECT_EQ(liec_bar(H), liec_bar(plus)) << "|H| = " << H.size();
    EXPECT_EQ(h_plus(plus), plus);
  }
}

TEST(Nori, UnipotentAndNilpotentPredicates) {
  Modulus fp = Modulus::make(7, 1);
  EXPECT_TRUE(is_unipotent_fp(Mat2(fp, 1, 3, 0, 1)));
  EXPECT_TRUE(is_unipotent_fp(Mat2::identity(fp)));
  EXPECT_FALSE(is_unipotent_fp(Mat2(fp, 2, 0, 0, 4)));
  EXPECT_TRUE(is_nilpotent_fp(Vec3(fp, 1, 0, 0)));
  EXPECT_FALSE(is_nilpotent_fp(Vec3(fp, 0, 1, 0)));
  EXPECT_EQ(unipotent_elements(FpSubgroup::whole(fp)).size(), 49U);  // p^2 unipotents
}

TEST(Nori, SubalgebraSpans) {
  Modulus fp = Modulus::make(5, 1);
  std::vector<Vec3> ef{Vec3::e(fp), Vec3::f(fp)};
  FpLieSubalgebra S = FpLieSubalgebra::span(fp, ef);
  EXPECT_EQ(S.dim(), 2);
  EXPECT_FALSE(S.closed_under_bracket());
  EXPECT_EQ(FpLieSubalgebra::generate(fp, ef).dim(), 3);
  EXPECT_EQ(S.elements().size(), 25U);
}

TEST(Nori, PadicDefaultSamples) {
  Modulus mod = Modulus::make(5, 3);
  auto samples = default_padic_samples(mod);
  NoriPadicReport r = roundtrip_check_padic(5, 3, samples);
  EXPECT_TRUE(r.passed());
  for (const auto& s : r.samples) EXPECT_TRUE(s.ok()) << s.name;
}

TEST(Nori, PadicRandomSamplesAreSeeded) {
  Modulus mod = Modulus::make(5, 3);
  Rng a(4), b(4);
  auto sa = random_padic_samples(mod, 10, a);
  auto sb = random_padic_samples(mod, 10, b);
  ASSERT_EQ(sa.size(), sb.size());
  for (std::size_t i = 0; i < sa.size(); ++i) EXPECT_EQ(sa[i].generators, sb[i].generators);
  EXPECT_TRUE(roundtrip_check_padic(5, 3, sa).passed());
}

TEST(Nori, PadicLiecOfUnipotent) {
  Modulus mod = Modulus::make(5, 3);
  std::vector<Mat2> u{Mat2(mod, 1, 1, 0, 1)};
  LieLattice L = liec_padic(u, mod);
  EXPECT_EQ(L.rank(), 1);
  EXPECT_TRUE(L.contains(Vec3::e(mod)));
  GroupClosure G = grpc_padic(L);
  EXPECT_EQ(G.size(), 125U);
}

TEST(Nori, PadicPrecisionRange) {
  std::vector<PadicSample> none;
  EXPECT_ERROR_KIND(roundtrip_check_padic(5, 5, none), ErrorKind::UnsupportedPrecision);
}

}  // namespace
}  // namespace congsub
