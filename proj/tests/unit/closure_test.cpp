#include "congsub/closure.hpp"

#include <set>

#include "support.hpp"

namespace congsub {
namespace {

TEST(Mat2, InverseAndKeyRoundTrip) {
  Modulus m = Modulus::make(3, 3);
  Mat2 g(m, 2, 5, 7, 20);
  ASSERT_TRUE(m.is_unit(g.det()));
  EXPECT_TRUE((g * g.inverse()).is_identity());
  EXPECT_EQ(Mat2::from_key(m, g.key()), g);
  EXPECT_ERROR_KIND(Mat2(m, 3, 0, 0, 3).inverse(), ErrorKind::NonUnit);
}

TEST(Mat2, ReductionIsARingMap) {
  Modulus m = Modulus::make(5, 4), low = Modulus::make(5, 2);
  Mat2 x(m, 17, 300, 41, 9), y(m, 123, 4, 77, 610);
  EXPECT_EQ((x * y).reduced(low), x.reduced(low) * y.reduced(low));
  EXPECT_EQ((x + y).reduced(low), x.reduced(low) + y.reduced(low));
}

TEST(Closure, WholeGroupOrders) {
  for (i64 p : {2, 3, 5}) {
    Modulus fp = Modulus::make(p, 1);
    std::vector<Mat2> gens{Mat2(fp, 1, 1, 0, 1), Mat2(fp, 1, 0, 1, 1)};
    EXPECT_EQ(close_group(fp, gens, 100000).size(), sl2_order(fp)) << "p=" << p;
  }
  Modulus m = Modulus::make(3, 2);
  std::vector<Mat2> gens{Mat2(m, 1, 1, 0, 1), Mat2(m, 1, 0, 1, 1)};
  EXPECT_EQ(close_group(m, gens, 100000).size(), 648U);
}

TEST(Closure, CapIsEnforced) {
  Modulus m = Modulus::make(5, 2);
  std::vector<Mat2> gens{Mat2(m, 1, 1, 0, 1), Mat2(m, 1, 0, 1, 1)};
  EXPECT_ERROR_KIND(close_group(m, gens, 100), ErrorKind::ClosureBudgetExceeded);
}

TEST(Closure, IndexScanEnumeratesTheGroupOnce) {
  Modulus m = Modulus::make(3, 2);
  std::set<u64> seen;
  for (u64 i = 0; i < sl2_index_space(m); ++i)
    if (auto g = sl2_from_index(m, i)) {
      EXPECT_EQ(g->det(), 1);
      EXPECT_TRUE(seen.insert(g->key()).second);
    }
  EXPECT_EQ(seen.size(), sl2_order(m));
}

TEST(Closure, PrincipalKernelLevels) {
  Modulus m = Modulus::make(3, 3);
  for (int n = 1; n < 3; ++n) {
    auto gens = principal_kernel_generators(m, n);
    LevelResult r = group_level(gens, m);
    ASSERT_TRUE(r.level.has_value());
    EXPECT_EQ(*r.level, n);
    EXPECT_EQ(r.group_order, principal_kernel_order(m, n));
  }
}

TEST(Closure, UnipotentHasNoLevel) {
  Modulus m = Modulus::make(3, 3);
  std::vector<Mat2> gens{Mat2(m, 1, 1, 0, 1)};
  LevelResult r = group_level(gens, m);
  EXPECT_FALSE(r.level.has_value());
  EXPECT_EQ(r.group_order, 27U);
}

}  // namespace
}  // namespace congsub
