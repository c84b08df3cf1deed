#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "vnqp/min_norm.hpp"

using vnqp::MinNormState;
using vnqp::QpStatus;
using vnqp::StepStatus;
using vnqp::Vector;
using Points = std::vector<Vector>;

namespace {

void expect_certificate(const MinNormState<double>& s, double tol = 1e-9) {
  double sum = 0;
  Vector y(s.ambient_dim(), 0.0);
  for (std::size_t j = 0; j < s.size(); ++j) {
    EXPECT_GE(s.lambda()[j], 0.0);
    sum += s.lambda()[j];
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += s.lambda()[j] * s.point(j)[i];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(y[i], s.y()[i], tol);
}

void expect_vi(const MinNormState<double>& s, const Points& pts) {
  const double ny2 = oracle::dot(s.y(), s.y());
  double scale = 0;
  for (const auto& p : pts) scale = std::max(scale, oracle::dot(p, p));
  for (const auto& p : pts) EXPECT_GE(oracle::dot(s.y(), p), ny2 - 1e-8 * std::max(1.0, scale));
}

}  // namespace

TEST(AffineProjection, SinglePoint) {
  vnqp::QrUpdater<double> qr(2);
  const auto r = vnqp::project_affine_hull<double>({{3, 4}}, qr);
  EXPECT_EQ(r.y, (Vector{3, 4}));
  EXPECT_EQ(r.lambda, (Vector{1}));
}

TEST(AffineProjection, SymmetricPairs) {
  for (double scale : {1.0, 2.0}) {
    Points pts{{scale, 0}, {0, scale}};
    vnqp::QrUpdater<double> qr(2);
    qr.insert_column(vnqp::subtract(pts[1], pts[0]));
    const auto r = vnqp::project_affine_hull<double>(pts, qr);
    EXPECT_NEAR(r.y[0], scale / 2, 1e-15);
    EXPECT_NEAR(r.y[1], scale / 2, 1e-15);
    EXPECT_NEAR(r.lambda[0], 0.5, 1e-15);
    EXPECT_NEAR(r.lambda[1], 0.5, 1e-15);
  }
}

TEST(AffineProjection, OrthogonalToDifferences) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 2 + rng() % 6;
    const std::size_t k = 1 + rng() % m;
    const Points pts = oracle::random_points(rng, m, k);
    vnqp::QrUpdater<double> qr(m);
    for (std::size_t j = 1; j < k; ++j) qr.insert_column(vnqp::subtract(pts[j], pts[0]));
    if (qr.size() != k - 1) continue;
    const auto r = vnqp::project_affine_hull<double>(pts, qr);
    double sum = 0;
    for (double l : r.lambda) sum += l;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    for (std::size_t j = 1; j < k; ++j) EXPECT_NEAR(oracle::dot(r.y, vnqp::subtract(pts[j], pts[0])), 0.0, 1e-9);
  }
}

TEST(RatioTest, Examples) {
  auto r = vnqp::ratio_test(Vector{1, 0}, Vector{0.5, 0.5});
  EXPECT_EQ(r.t_bar, 1.0);
  EXPECT_FALSE(r.leaving);
  r = vnqp::ratio_test(Vector{0.5, 0.5, 0}, Vector{-0.5, 1, 0.5});
  EXPECT_DOUBLE_EQ(r.t_bar, 0.5);
  ASSERT_TRUE(r.leaving);
  EXPECT_EQ(*r.leaving, 0u);
  r = vnqp::ratio_test(Vector{0.3, 0.7}, Vector{0.3, 0.7});
  EXPECT_EQ(r.t_bar, 1.0);
  EXPECT_FALSE(r.leaving);
}

TEST(RatioTest, SmallestIndexOnTies) {
  const auto r = vnqp::ratio_test(Vector{0.25, 0.25, 0.5}, Vector{-0.25, -0.25, 1.5});
  EXPECT_DOUBLE_EQ(r.t_bar, 0.5);
  EXPECT_EQ(*r.leaving, 0u);
}

TEST(MinNormPoint, Examples) {
  auto r = vnqp::min_norm_point<double>({{3, 4}});
  EXPECT_EQ(r.status, QpStatus::Optimal);
  EXPECT_EQ(r.state.y(), (Vector{3, 4}));

  r = vnqp::min_norm_point<double>({{1, 1}, {-1, 1}});
  EXPECT_NEAR(r.state.y()[0], 0.0, 1e-15);
  EXPECT_NEAR(r.state.y()[1], 1.0, 1e-15);
  EXPECT_NEAR(r.state.lambda()[0], 0.5, 1e-15);

  r = vnqp::min_norm_point<double>({{2, 0}, {0, 2}, {2, 2}});
  EXPECT_NEAR(r.state.y()[0], 1.0, 1e-14);
  EXPECT_NEAR(r.state.y()[1], 1.0, 1e-14);
  EXPECT_NEAR(r.state.lambda()[0], 0.5, 1e-14);
  EXPECT_NEAR(r.state.lambda()[1], 0.5, 1e-14);
  EXPECT_EQ(r.state.lambda()[2], 0.0);

  r = vnqp::min_norm_point<double>({{1, 0}, {-1, 0}, {0, 1}});
  EXPECT_LT(vnqp::norm(r.state.y()), 1e-15);
}

TEST(MinNormPoint, DimensionMismatch) {
  EXPECT_THROW(vnqp::min_norm_point<double>({{1, 0}, {1}}), vnqp::DimensionMismatch);
}

TEST(QpStep, OneExchange) {
  MinNormState<double> s(2);
  s.add_point({1, 1});
  s.add_point({-1, 1});
  s.reset_to_vertex(0);
  const auto rec = s.step();
  EXPECT_EQ(rec.status, StepStatus::Progress);
  EXPECT_EQ(rec.entering, 1u);
  EXPECT_NEAR(s.y()[0], 0.0, 1e-15);
  EXPECT_NEAR(s.y()[1], 1.0, 1e-15);
  const auto before = s.y();
  EXPECT_EQ(s.step().status, StepStatus::AlreadyOptimal);
  EXPECT_EQ(s.y(), before);
}

TEST(QpStep, HandTraceFromCorner) {
  // Start (2,2): most violated is index 0 (tie with 1, smallest wins), giving
  // the segment [(2,0),(2,2)] with y = (2,0)... then index 1 enters and
  // (2,2) leaves.
  MinNormState<double> s(2);
  for (const Vector& p : Points{{2, 0}, {0, 2}, {2, 2}}) s.add_point(p);
  s.reset_to_vertex(2);
  auto rec = s.step();
  ASSERT_EQ(rec.status, StepStatus::Progress);
  EXPECT_EQ(rec.entering, 0u);
  EXPECT_NEAR(s.y()[0], 2.0, 1e-14);
  EXPECT_NEAR(s.y()[1], 0.0, 1e-14);
  EXPECT_EQ(s.sorted_active(), (std::vector<std::size_t>{0}));
  rec = s.step();
  ASSERT_EQ(rec.status, StepStatus::Progress);
  EXPECT_EQ(rec.entering, 1u);
  EXPECT_NEAR(s.y()[0], 1.0, 1e-14);
  EXPECT_NEAR(s.y()[1], 1.0, 1e-14);
  EXPECT_EQ(s.sorted_active(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(s.step().status, StepStatus::AlreadyOptimal);
  const auto oracle_result = oracle::face_enumeration({{2, 0}, {0, 2}, {2, 2}});
  EXPECT_NEAR(vnqp::norm(s.y()), oracle_result.distance, 1e-12);
}

TEST(MinNormProperty, MatchesFaceEnumeration) {
  std::mt19937_64 rng(99);
  int violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 1 + rng() % 4;
    const std::size_t k = 1 + rng() % 6;
    const Points pts = oracle::random_points(rng, m, k);
    auto result = vnqp::min_norm_point<double>(pts, std::nullopt, {},
                                               [&](const MinNormState<double>&, const vnqp::StepRecord& rec) {
                                                 if (!(rec.norm_after < rec.norm_before)) ++violations;
                                               });
    ASSERT_EQ(result.status, QpStatus::Optimal);
    const auto ref = oracle::face_enumeration(pts);
    EXPECT_NEAR(vnqp::norm(result.state.y()), ref.distance, 1e-8) << "trial " << trial;
    expect_certificate(result.state);
    expect_vi(result.state, pts);
    EXPECT_LE(result.state.active().size(), m + 1);
  }
  EXPECT_EQ(violations, 0);
}

TEST(MinNormProperty, ActiveSetLaw) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + rng() % 6;
    const std::size_t k = 2 + rng() % 40;
    const Points pts = oracle::random_points(rng, m, k);
    vnqp::min_norm_point<double>(pts, std::nullopt, {}, [&](const MinNormState<double>& s, const vnqp::StepRecord& rec) {
      const auto& after = rec.active_after;
      EXPECT_TRUE(std::binary_search(after.begin(), after.end(), rec.entering));
      for (std::size_t j : after) {
        EXPECT_TRUE(j == rec.entering || std::binary_search(rec.active_before.begin(), rec.active_before.end(), j));
        EXPECT_GT(s.lambda()[j], 0.0);
      }
      // face optimality: equal inner products over the active set
      const double ref = oracle::dot(s.y(), s.point(after.front()));
      for (std::size_t j : after) EXPECT_NEAR(oracle::dot(s.y(), s.point(j)), ref, 1e-8);
      expect_certificate(s);
    });
  }
}

TEST(MinNormProperty, TerminatesOnLargeInstances) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t m = 10 + rng() % 41;
    const Points pts = oracle::random_points(rng, m, 2000);
    auto r = vnqp::min_norm_point<double>(pts);
    EXPECT_EQ(r.status, QpStatus::Optimal);
    expect_vi(r.state, pts);
    std::size_t support = 0;
    for (double l : r.state.lambda()) support += l > 0;
    EXPECT_LE(support, m + 1);
  }
}

TEST(MinNormState, BudgetExhaustedStillImproves) {
  std::mt19937_64 rng(21);
  const Points pts = oracle::random_points(rng, 6, 30);
  vnqp::QpConfig cfg;
  cfg.max_outer = 1;
  MinNormState<double> s(6, cfg);
  for (const auto& p : pts) s.add_point(p);
  s.reset_to_vertex(s.min_norm_vertex());
  const double before = vnqp::norm(s.y());
  const auto status = s.solve();
  if (status == QpStatus::InnerBudgetExhausted) {
    EXPECT_LT(vnqp::norm(s.y()), before);
    expect_certificate(s);
  }
  s.solve();
}

TEST(MinNormState, WarmStartAfterAddingPoints) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    Points pts = oracle::random_points(rng, 4, 5);
    auto r = vnqp::min_norm_point<double>(pts);
    for (int extra = 0; extra < 5; ++extra) {
      pts.push_back(oracle::random_vec(rng, 4));
      r.state.add_point(pts.back());
      r.state.solve();
    }
    EXPECT_NEAR(vnqp::norm(r.state.y()), oracle::face_enumeration(pts).distance, 1e-8);
  }
}

TEST(MinNormState, CompactAndSetWeights) {
  MinNormState<double> s(2);
  for (const Vector& p : Points{{2, 0}, {0, 2}, {2, 2}}) s.add_point(p);
  s.reset_to_vertex(0);
  s.solve();
  s.compact({true, true, false});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_NEAR(s.y()[0], 1.0, 1e-14);
  EXPECT_THROW(s.compact({false, true}), vnqp::InvalidArgument);
  s.set_weights({0.25, 0.75});
  EXPECT_NEAR(s.y()[0], 0.5, 1e-15);
  EXPECT_NEAR(s.y()[1], 1.5, 1e-15);
  EXPECT_EQ(s.active().size(), 2u);
}
