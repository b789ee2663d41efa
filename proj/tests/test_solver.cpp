#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rarp/solver.hpp"
#include "rarp/verifier.hpp"
#include "test_support.hpp"

namespace rarp {
namespace {

using testing::item;

// Hand-built fixtures often share a coordinate between anchors, which the
// input rules reject; only the packing itself is judged here.
bool verifies(const Instance& inst, const ScaleSolution& sol) {
  const VerificationReport r = verify(inst, sol, trim(inst, sol));
  return r.overlap_violations.empty() && r.protrusion_violations.empty() && r.anchoring_violations.empty();
}

TEST(PairScale, WorkedValues) {
  EXPECT_DOUBLE_EQ(pair_scale(item(0, 2, 2, 2, 2), item(1, 2, 2, 6, 2)), 2.0);
  EXPECT_DOUBLE_EQ(pair_scale(item(0, 2, 4, 3, 3), item(1, 4, 2, 6, 7)), 4.0 / 3.0);
  EXPECT_THROW(pair_scale(item(0, 2, 2, 3, 3), item(1, 1, 1, 3, 3)), CoincidentAnchorError);
}

// Largest common scale by bisection on an overlap test written out directly:
// two anchored boxes overlap iff both center gaps are below the half-sum of
// their extents.
double bisect_touching_scale(const ItemSpec& a, const ItemSpec& b) {
  const double dx = std::abs(a.anchor.x - b.anchor.x), dy = std::abs(a.anchor.y - b.anchor.y);
  const auto overlaps = [&](double s) {
    return dx < (a.base_width + b.base_width) * s / 2 && dy < (a.base_height + b.base_height) * s / 2;
  };
  double lo = 0.0, hi = 1.0;
  while (!overlaps(hi)) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (overlaps(mid) ? hi : lo) = mid;
  }
  return lo;
}

TEST(PairScale, MatchesBisectionOnRandomPairs) {
  Rng rng(4242);
  for (int trial = 0; trial < 1000; ++trial) {
    const ItemSpec a = item(0, rng.uniform(1, 80), rng.uniform(1, 80), rng.uniform(0, 500), rng.uniform(0, 500));
    const ItemSpec b = item(1, rng.uniform(1, 80), rng.uniform(1, 80), rng.uniform(0, 500), rng.uniform(0, 500));
    const double s = pair_scale(a, b);
    const double ref = bisect_touching_scale(a, b);
    ASSERT_NEAR(s, ref, 1e-9 * std::max(1.0, ref));
    const AxisBox ba = a.box_at(s), bb = b.box_at(s);
    const double gap_x = std::abs(a.anchor.x - b.anchor.x) - (ba.width + bb.width) / 2;
    const double gap_y = std::abs(a.anchor.y - b.anchor.y) - (ba.height + bb.height) / 2;
    EXPECT_NEAR(std::max(gap_x, gap_y), 0.0, 1e-9 * std::max(1.0, s * 100));
    const AxisBox sa = a.box_at(s * (1 - 1e-9)), sb = b.box_at(s * (1 - 1e-9));
    EXPECT_GT(std::max(std::abs(a.anchor.x - b.anchor.x) - (sa.width + sb.width) / 2,
                       std::abs(a.anchor.y - b.anchor.y) - (sa.height + sb.height) / 2),
              0.0);
  }
}

TEST(GreedySolve, SingletonBoundaryFit) {
  const Instance inst{{20, 10}, {item(0, 4, 2, 10, 5)}, {}};
  const SolveResult r = greedy_solve(inst);
  EXPECT_DOUBLE_EQ(r.solution.scales[0], 5.0);
  const auto packed = trim(inst, r.solution);
  EXPECT_EQ(packed[0].rect, (AxisBox{{10, 5}, 20, 10}));
  EXPECT_FALSE(packed[0].trimmed);

  SolveOptions plain;
  plain.boundary_cap_singletons = false;
  EXPECT_DOUBLE_EQ(greedy_solve(inst, plain).solution.scales[0], 1.0);
}

TEST(GreedySolve, TouchingPair) {
  const Instance inst{{10, 10}, {item(0, 2, 2, 2, 2), item(1, 2, 2, 6, 2)}, {}};
  const SolveResult r = greedy_solve(inst);
  EXPECT_EQ(r.solution.scales, (std::vector<double>{2.0, 2.0}));
  const auto packed = trim(inst, r.solution);
  EXPECT_DOUBLE_EQ(packed[0].rect.x_max(), 4.0);
  EXPECT_DOUBLE_EQ(packed[1].rect.x_min(), 4.0);
  EXPECT_FALSE(packed[0].trimmed);
  EXPECT_FALSE(packed[1].trimmed);
  EXPECT_TRUE(verifies(inst, r.solution));
  EXPECT_EQ(classify_overlap(packed[0].rect, packed[1].rect).tag, OverlapTag::Touching);
}

TEST(GreedySolve, ClipsSuccessorAfterShrink) {
  // First pair forces 0.5, the next pair alone would allow 5.
  const Instance inst{{200, 50}, {item(0, 4, 4, 10, 25), item(1, 4, 4, 12, 26), item(2, 4, 4, 32, 10)}, {}};
  const SolveResult r = greedy_solve(inst);
  EXPECT_TRUE(r.solution.flags[2].clipped);
  EXPECT_FALSE(r.solution.flags[1].clipped);
  EXPECT_TRUE(verifies(inst, r.solution));
  bool saw_clip = false;
  for (const TraceEvent& e : r.trace.events) saw_clip |= e.step == TraceStep::Clip;
  EXPECT_TRUE(saw_clip);
}

TEST(GreedySolve, OrderFollowsMajorAxis) {
  const Instance wide{{100, 50}, {item(0, 1, 1, 30, 5), item(1, 1, 1, 10, 40), item(2, 1, 1, 10, 20)}, {}};
  EXPECT_EQ(greedy_order(wide), (std::vector<int>{2, 1, 0}));
  const Instance tall{{50, 100}, {item(0, 1, 1, 30, 5), item(1, 1, 1, 10, 40), item(2, 1, 1, 20, 40)}, {}};
  EXPECT_EQ(greedy_order(tall), (std::vector<int>{0, 1, 2}));
}

TEST(PairShrink, WorkedValues) {
  const AxisBox a{{5, 5}, 6, 6}, b{{8, 5}, 6, 6};
  const double k = pair_shrink(a, b);
  EXPECT_DOUBLE_EQ(k, 0.5);
  EXPECT_DOUBLE_EQ(a.scaled(k).x_max(), 6.5);
  EXPECT_DOUBLE_EQ(b.scaled(k).x_min(), 6.5);

  const AxisBox c{{5, 5}, 10, 2}, d{{6, 5}, 2, 10};
  const double kc = pair_shrink(c, d);
  EXPECT_DOUBLE_EQ(kc, 1.0 / 6.0);
  EXPECT_EQ(classify_overlap(c.scaled(kc), d.scaled(kc)).tag, OverlapTag::Touching);
}

TEST(PairShrink, Preconditions) {
  EXPECT_THROW(pair_shrink({{0, 0}, 2, 2}, {{2, 0}, 2, 2}), std::invalid_argument);
  EXPECT_THROW(pair_shrink({{1, 1}, 2, 2}, {{1, 1}, 4, 4}), DegenerateOverlapError);
}

TEST(PostProcess, DisjointInputIsFixedPoint) {
  const Instance inst{{100, 100}, {item(0, 4, 4, 10, 10), item(1, 4, 4, 50, 50)}, {}};
  SolveTrace trace;
  const ScaleSolution in{{1.0, 2.0}, {}};
  const ScaleSolution out = post_process(inst, in, 0, &trace);
  EXPECT_EQ(out.scales, in.scales);
  EXPECT_EQ(trace.post_process_passes, 1);
  EXPECT_TRUE(trace.events.empty());
}

TEST(PostProcess, CirclePerimeterLayout) {
  Instance inst{{400, 400}, {}, {}};
  for (int i = 0; i < 8; ++i) {
    const double t = 2 * std::numbers::pi * i / 8 + 0.1;
    inst.items.push_back(item(i, 30 + 7 * i, 60 - 5 * i, 200 + 120 * std::cos(t), 200 + 120 * std::sin(t)));
  }
  const SolveResult r = greedy_solve(inst);
  EXPECT_TRUE(verifies(inst, r.solution));
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j)
      EXPECT_TRUE(interiors_disjoint(inst.items[i].box_at(r.solution.scales[i]), inst.items[j].box_at(r.solution.scales[j])));
}

TEST(PostProcess, RepairsUpscaledMiddleOfChain) {
  // Taking the successor's scale for the shared item (5 instead of 2.5)
  // makes the middle box swallow its predecessor.
  const Instance inst{{100, 100}, {item(0, 4, 4, 10, 50), item(1, 4, 4, 20, 50), item(2, 4, 4, 40, 50)}, {}};
  const ScaleSolution naive{{2.5, 5.0, 5.0}, {}};
  EXPECT_FALSE(verifies(inst, naive));
  const ScaleSolution fixed = post_process(inst, naive);
  EXPECT_TRUE(verifies(inst, fixed));
  EXPECT_TRUE(fixed.flags[1].post_shrunk);
  EXPECT_TRUE(fixed.flags[0].post_shrunk);
  EXPECT_FALSE(fixed.flags[2].post_shrunk);
  EXPECT_DOUBLE_EQ(fixed.scales[2], 5.0);
}

TEST(PostProcess, PassCapIsEnforced) {
  const Instance inst{{100, 100}, {item(0, 4, 4, 10, 50), item(1, 4, 4, 20, 50)}, {}};
  EXPECT_THROW(post_process(inst, {{5.0, 5.0}, {}}, 1), PassCapExceeded);
  EXPECT_NO_THROW(post_process(inst, {{5.0, 5.0}, {}}, 2));
}

TEST(PostProcess, NeverIncreasesAndAlwaysSeparates) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(13);
    const Instance inst = testing::random_instance(rng.next(), n, {500, 300}, {2, 0}, 5, 60);
    ScaleSolution in;
    for (std::size_t i = 0; i < n; ++i) in.scales.push_back(rng.uniform(0.1, 6.0));
    SolveTrace trace;
    trace.order = greedy_order(inst);
    const ScaleSolution out = post_process(inst, in, 0, &trace);
    for (std::size_t i = 0; i < n; ++i) ASSERT_LE(out.scales[i], in.scales[i]);
    for (const TraceEvent& e : trace.events)
      for (std::size_t k = 0; k < e.items.size(); ++k) ASSERT_LE(e.after[k], e.before[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        ASSERT_TRUE(interiors_disjoint(inst.items[i].box_at(out.scales[i]), inst.items[j].box_at(out.scales[j])));
    ASSERT_LE(trace.post_process_passes, static_cast<int>(n));
  }
}

TEST(PostProcess, LargeSparseInstanceDoesNotCollapse) {
  // Sorting on x leaves consecutive items far apart on y, so the greedy pass
  // hands out scales in the hundreds and nearly every pair overlaps.
  const Instance inst = testing::random_instance(3, 1600, {16000, 12000}, {1, 0}, 20, 200);
  const SolveResult r = greedy_solve(inst);
  EXPECT_EQ(r.trace.post_process_passes, 2);
  EXPECT_GT(*std::min_element(r.solution.scales.begin(), r.solution.scales.end()), 1e-6);
  EXPECT_TRUE(verify(inst, r.solution, trim(inst, r.solution)).pass);
}

TEST(Trim, ClipsOneSide) {
  const Instance inst{{10, 10}, {item(0, 1, 1, 1, 5), item(1, 1, 1, 7, 5)}, {}};
  const auto packed = trim(inst, {{4.0, 2.0}, {}});
  EXPECT_TRUE(packed[0].trimmed);
  EXPECT_DOUBLE_EQ(packed[0].rect.x_min(), 0.0);
  EXPECT_DOUBLE_EQ(packed[0].rect.x_max(), 3.0);
  EXPECT_DOUBLE_EQ(packed[0].rect.y_min(), 3.0);
  EXPECT_DOUBLE_EQ(packed[0].rect.y_max(), 7.0);
  EXPECT_FALSE(packed[1].trimmed);
  EXPECT_EQ(packed[1].rect, (AxisBox{{7, 5}, 2, 2}));
}

TEST(Trim, BoundaryFitSingletonStaysWhole) {
  const Instance inst{{30, 12}, {item(0, 3, 5, 9, 7)}, {}};
  const auto packed = trim(inst, greedy_solve(inst).solution);
  EXPECT_FALSE(packed[0].trimmed);
}

TEST(RandomDownscale, FixedFactors) {
  const Instance inst = testing::random_instance(3, 8, {400, 300}, {2, 0}, 5, 40);
  const ScaleSolution base = greedy_solve(inst).solution;
  SolveOptions unit;
  unit.downscale_lo = unit.downscale_hi = 1.0;
  EXPECT_EQ(random_downscale(base, unit).scales, base.scales);

  SolveOptions half;
  half.downscale_lo = half.downscale_hi = 0.5;
  const ScaleSolution halved = random_downscale(base, half);
  for (std::size_t i = 0; i < base.size(); ++i) {
    EXPECT_EQ(halved.scales[i], base.scales[i] * 0.5);
    EXPECT_TRUE(halved.flags[i].downscaled);
  }
  EXPECT_TRUE(verifies(inst, halved));

  SolveOptions bad;
  bad.downscale_lo = 0.8;
  bad.downscale_hi = 0.4;
  EXPECT_THROW(random_downscale(base, bad), std::invalid_argument);
}

TEST(RandomDownscale, SeededRerunsAreByteIdentical) {
  const Instance inst = testing::random_instance(11, 12, {640, 480}, {3, 0}, 5, 40);
  SolveOptions opt;
  opt.enable_random_downscale = true;
  opt.seed = 1234;
  const auto a = greedy_solve(inst, opt).solution;
  const auto b = greedy_solve(inst, opt).solution;
  EXPECT_EQ(serialize_solution(make_solution_file(inst, a)), serialize_solution(make_solution_file(inst, b)));
  opt.seed = 1235;
  EXPECT_NE(greedy_solve(inst, opt).solution.scales, a.scales);
  EXPECT_TRUE(verifies(inst, a));
}

TEST(Objective, WorkedValues) {
  const Instance one{{10, 10}, {item(0, 3, 2, 5, 5)}, {}};
  const Objective o = objective(one, {{2.0}, {}});
  EXPECT_DOUBLE_EQ(o.linear, 12.0);
  EXPECT_DOUBLE_EQ(o.covered_area, 24.0);

  const Instance two{{10, 10}, {item(0, 3, 2, 2, 2), item(1, 1, 5, 7, 7)}, {}};
  const Objective u = objective(two, {{1.0, 1.0}, {}});
  EXPECT_DOUBLE_EQ(u.linear, 11.0);
  EXPECT_DOUBLE_EQ(u.covered_area, 11.0);
}

TEST(Objective, TouchingPairMatchesOracle) {
  const Instance inst{{10, 10}, {item(0, 2, 2, 2, 2), item(1, 2, 2, 6, 2)}, {}};
  const ScaleSolution sol = greedy_solve(inst).solution;
  const OracleResult oracle = oracle_max(inst, 0.01, 10.0);
  ASSERT_TRUE(oracle.found());
  EXPECT_NEAR(objective(inst, sol).linear, oracle.best_objective, 1e-9);
}

TEST(Solver, ShrinkingAFeasibleSolutionStaysFeasible) {
  Rng rng(606);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = testing::random_instance(rng.next(), 2 + rng.below(13), {rng.uniform(200, 900), rng.uniform(200, 900)},
                                                   {2, 0}, 3, 80);
    const ScaleSolution sol = greedy_solve(inst).solution;
    ASSERT_TRUE(verify(inst, sol, trim(inst, sol)).pass);
    const double k = rng.uniform(1e-6, 1.0);
    ScaleSolution shrunk = sol;
    for (double& s : shrunk.scales) s *= k;
    ASSERT_TRUE(verify(inst, shrunk, trim(inst, shrunk)).pass) << "k=" << k;
  }
}

TEST(Solver, DeterministicWithReplayableTrace) {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = testing::random_instance(rng.next(), 2 + rng.below(13), {800, 600}, {2, 0}, 3, 120);
    SolveOptions opt;
    opt.enable_random_downscale = trial % 2 == 0;
    opt.seed = rng.next();
    const SolveResult a = greedy_solve(inst, opt);
    const SolveResult b = greedy_solve(inst, opt);
    ASSERT_EQ(a.solution, b.solution);
    ASSERT_EQ(a.trace.order, b.trace.order);
    ASSERT_EQ(a.trace.events.size(), b.trace.events.size());
    const std::vector<double> replayed = replay(a.trace, inst.size());
    ASSERT_EQ(replayed, a.solution.scales);
  }
}

TEST(SolutionIo, RoundTrip) {
  const Instance inst = testing::random_instance(21, 9, {700, 500}, {3, 0}, 5, 120);
  SolveOptions opt;
  opt.enable_random_downscale = true;
  const SolutionFile file = make_solution_file(inst, greedy_solve(inst, opt).solution);
  const SolutionFile back = parse_solution(serialize_solution(file));
  EXPECT_EQ(back.solution, file.solution);
  EXPECT_EQ(back.packed, file.packed);
  EXPECT_EQ(serialize_solution(back), serialize_solution(file));
  EXPECT_THROW(parse_solution("{\"scales\": [1, 2]"), ParseError);
}

}  // namespace
}  // namespace rarp
