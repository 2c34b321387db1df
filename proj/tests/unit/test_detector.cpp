#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "immunoscan/detector.hpp"

using namespace immunoscan;

namespace {

FeaturePanel one_series(std::vector<double> v) {
  std::vector<int> years;
  for (std::size_t i = 0; i < v.size(); ++i) years.push_back(2005 + static_cast<int>(i));
  return FeaturePanel({"A"}, years, {"f"}, std::move(v));
}

FeatureStats stats_of(double mu, double sd, double g) {
  FeatureStats s;
  s.mean = {mu};
  s.stddev = {sd};
  s.growth = {g};
  return s;
}

}  // namespace

TEST(MeanGrowthRate, FootnoteFormula) {
  const double s1[] = {100, 110, 121, 133.1};
  EXPECT_NEAR(mean_growth_rate(s1).rate, 0.10, 1e-12);
  const double s2[] = {5, 5, 5};
  EXPECT_EQ(mean_growth_rate(s2).rate, 0.0);
  const double s3[] = {0, 3, 6};
  auto g = mean_growth_rate(s3);
  EXPECT_DOUBLE_EQ(g.rate, 1.0);
  EXPECT_EQ(g.skipped, 1u);
  EXPECT_EQ(g.used, 1u);
  const double s4[] = {0, 0, 0};
  EXPECT_EQ(mean_growth_rate(s4).rate, 0.0);
  EXPECT_EQ(mean_growth_rate(s4).used, 0u);
  const double s5[] = {1};
  EXPECT_THROW(mean_growth_rate(s5), Error);
}

TEST(FeatureStats, PopulationStddev) {
  auto p = one_series({0, 1, 0.5, 0.5});
  auto s = feature_stats(p, p, GrowthBasis::normalized);
  EXPECT_DOUBLE_EQ(s.mean[0], 0.5);
  EXPECT_NEAR(s.stddev[0], 0.353553, 1e-6);
  EXPECT_NEAR(s.stddev[0], std::sqrt(0.125), 1e-15);

  auto c = one_series({0, 0, 0, 0});
  auto sc = feature_stats(c, c, GrowthBasis::normalized);
  EXPECT_EQ(sc.mean[0], 0.0);
  EXPECT_EQ(sc.stddev[0], 0.0);
  EXPECT_EQ(sc.warnings.size(), 1u);

  auto two = one_series({0, 1});
  auto s2 = feature_stats(two, two, GrowthBasis::normalized);
  EXPECT_DOUBLE_EQ(s2.mean[0], 0.5);
  EXPECT_DOUBLE_EQ(s2.stddev[0], 0.5);

  auto short_panel = one_series({1});
  EXPECT_THROW(feature_stats(short_panel, short_panel, GrowthBasis::normalized), Error);
}

TEST(FeatureStats, GrowthBasisSelectsSeries) {
  auto norm = one_series({0, 0.5, 1});
  auto raw = one_series({100, 110, 121});
  EXPECT_NEAR(feature_stats(norm, raw, GrowthBasis::raw).growth[0], 0.1, 1e-12);
  EXPECT_DOUBLE_EQ(feature_stats(norm, raw, GrowthBasis::normalized).growth[0], 1.0);
}

TEST(DetectorRanges, SpanAndChange) {
  const double u0[] = {0.0};
  auto d = detector_ranges(stats_of(0.5, std::sqrt(0.125), 0.0), 0.45, u0);
  EXPECT_NEAR(d.lower[0], 0.340901, 1e-6);
  EXPECT_NEAR(d.upper[0], 0.659099, 1e-6);

  auto deg = detector_ranges(stats_of(0.3, 0.2, 0.5), 0.0, u0);
  EXPECT_EQ(deg.lower[0], 0.3);
  EXPECT_EQ(deg.upper[0], 0.3);

  const double um1[] = {-1.0};
  auto inv = detector_ranges(stats_of(0.5, 0.1, 0.2), 0.45, um1);
  EXPECT_NEAR(inv.change[0], -0.2, 1e-15);
  EXPECT_NEAR(inv.lower[0], 0.655, 1e-12);
  EXPECT_NEAR(inv.upper[0], 0.345, 1e-12);
  EXPECT_TRUE(inv.empty(0));
}

TEST(DetectorRanges, InvalidParameters) {
  const double u0[] = {0.0};
  const double u_big[] = {1.5};
  EXPECT_THROW(detector_ranges(stats_of(0.5, 0.1, 0.0), -0.1, u0), Error);
  EXPECT_THROW(detector_ranges(stats_of(0.5, 0.1, 0.0), 0.45, u_big), Error);
  EXPECT_THROW(detector_ranges(stats_of(0.5, 0.1, 0.0), 0.45, std::span<const double>{}), Error);
}

TEST(DetectorRanges, SpanBoundIsAdvisory) {
  const double u0[] = {0.0};
  auto d = detector_ranges(stats_of(0.05, 0.4, 0.0), 0.45, u0);
  EXPECT_EQ(d.warnings.size(), 1u);
  auto ok = detector_ranges(stats_of(0.5, 0.4, 0.0), 0.45, u0);
  EXPECT_TRUE(ok.warnings.empty());
}

TEST(ApplyMask, MasksInsideRange) {
  auto p = one_series({0, 1, 0.5, 0.5});
  DetectorSet d;
  d.lower = {0.340901};
  d.upper = {0.659099};
  auto a = apply_mask(p, d);
  EXPECT_EQ(a.feature_column(0), (std::vector<double>{0, 1, 0, 0}));
  EXPECT_EQ(a.kept, (std::vector<bool>{true, true, false, false}));

  d.lower = {0.6};
  d.upper = {0.4};
  auto none = apply_mask(p, d);
  EXPECT_EQ(none.kept, (std::vector<bool>{true, true, true, true}));
  EXPECT_EQ(none.feature_column(0), (std::vector<double>{0, 1, 0.5, 0.5}));

  d.lower = {-10};
  d.upper = {10};
  auto all = apply_mask(p, d);
  EXPECT_EQ(all.kept, (std::vector<bool>{false, false, false, false}));
  EXPECT_EQ(all.feature_column(0), (std::vector<double>{0, 0, 0, 0}));
}

TEST(ApplyMask, BoundsAreInclusive) {
  auto p = one_series({0.25, 0.75, 0.5, 0.9});
  DetectorSet d;
  d.lower = {0.25};
  d.upper = {0.75};
  auto a = apply_mask(p, d);
  EXPECT_EQ(a.kept, (std::vector<bool>{false, false, false, true}));
}

TEST(ApplyMask, ShapeMismatch) {
  auto p = one_series({0, 1});
  DetectorSet d;
  d.lower = {0, 0};
  d.upper = {1, 1};
  EXPECT_THROW(apply_mask(p, d), Error);
}

TEST(ApplyMask, ZeroSpanMasksOnlyTheMean) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    auto p = testgen::lumpy_panel(rng, 1, testgen::pick(rng, 2, 5), testgen::pick(rng, 1, 4));
    auto s = feature_stats(p, p, GrowthBasis::normalized);
    std::vector<double> u(s.size(), 0.0);
    auto a = apply_mask(p, detector_ranges(s, 0.0, u));
    for (std::size_t y = 0; y < a.years; ++y)
      for (std::size_t f = 0; f < a.features; ++f) {
        if (s.stddev[f] > 0.0) {
          ASSERT_EQ(a.is_kept(y, f), p.at(0, y, f) != s.mean[f]);
        }
        ASSERT_TRUE(a.value(y, f) == 0.0 || a.is_kept(y, f));
        ASSERT_TRUE(!a.is_kept(y, f) || a.value(y, f) == p.at(0, y, f));
      }
  }
}

TEST(ApplyMask, MonotoneInSpan) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> span(0.0, 3.0);
  for (int i = 0; i < 300; ++i) {
    auto p = testgen::random_panel(rng, 1, testgen::pick(rng, 2, 6), testgen::pick(rng, 1, 5), 0.0, 1.0);
    auto s = feature_stats(p, p, GrowthBasis::normalized);
    std::vector<double> u(s.size(), 0.0);
    double n1 = span(rng), n2 = span(rng);
    if (n1 > n2) std::swap(n1, n2);
    auto a1 = apply_mask(p, detector_ranges(s, n1, u));
    auto a2 = apply_mask(p, detector_ranges(s, n2, u));
    for (std::size_t k = 0; k < a1.kept.size(); ++k)
      ASSERT_TRUE(a1.kept[k] || !a2.kept[k]);
  }
}
