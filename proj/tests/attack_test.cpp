#include "dtp/attack.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dtp/criteria.hpp"
#include "dtp/error.hpp"
#include "dtp/metrics.hpp"
#include "dtp/types.hpp"
#include "test_support.hpp"
#include "toys.hpp"

namespace dtp {
namespace {

Trajectory from_flat(const std::vector<double>& flat, double dt = 0.5) {
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i + 1 < flat.size(); i += 2) {
    pts.emplace_back(flat[i], flat[i + 1]);
  }
  return make_trajectory(pts, dt);
}

Trajectory random_trajectory(std::mt19937_64& rng, std::size_t length) {
  std::uniform_real_distribution<double> coord(-20.0, 20.0);
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < length; ++i) pts.emplace_back(coord(rng), coord(rng));
  return make_trajectory(pts, 0.5);
}

// --- orthogonal_step ---

TEST(OrthogonalStep, PreservesDistanceToOriginal) {
  std::mt19937_64 seeds(7);
  for (int trial = 0; trial < 1000; ++trial) {
    std::mt19937_64 rng(seeds());
    std::size_t length = 1 + trial % 12;
    Trajectory original = random_trajectory(rng, length);
    Trajectory current = random_trajectory(rng, length);
    double before = trajectory_distance(original, current);
    Trajectory stepped = orthogonal_step(original, current, 0.5, rng);
    double after = trajectory_distance(original, stepped);
    ASSERT_LT(std::abs(after - before), 1e-9)
        << "trial " << trial << " length " << length;
  }
}

TEST(OrthogonalStep, RawDirectionIsOrthogonalBeforeReprojection) {
  // The construction removes the radial component with one Gram-Schmidt
  // pass; verify that identity at the precision the step relies on.
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> coord(-20.0, 20.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 2 + trial % 24;
    std::vector<double> g(n), d(n);
    double gd = 0.0;
    double dd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = normal(rng);
      d[i] = coord(rng);
      gd += g[i] * d[i];
      dd += d[i] * d[i];
    }
    if (dd == 0.0) continue;
    double dot = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double perp = g[i] - (gd / dd) * d[i];
      dot += perp * d[i];
      scale += std::abs(perp * d[i]);
    }
    ASSERT_LT(std::abs(dot), 1e-12 * std::max(1.0, scale));
  }
}

TEST(OrthogonalStep, MoveSizeTracksDelta) {
  // |candidate - current| is delta * distance up to the sphere
  // re-projection, which for small delta contributes O(delta^2 * distance).
  std::mt19937_64 rng(23);
  Trajectory original = random_trajectory(rng, 6);
  Trajectory current = random_trajectory(rng, 6);
  double radius = trajectory_distance(original, current);
  double delta = 1e-3;
  Trajectory stepped = orthogonal_step(original, current, delta, rng);
  double moved = trajectory_distance(current, stepped);
  EXPECT_NEAR(moved, delta * radius, delta * delta * radius);
}

TEST(OrthogonalStep, ThrowsWhenCurrentEqualsOriginal) {
  std::mt19937_64 rng(3);
  Trajectory original = random_trajectory(rng, 4);
  EXPECT_THROW(orthogonal_step(original, original, 0.5, rng), NoDirectionError);
}

// --- forward_step ---

TEST(ForwardStep, ReducesDistanceByEpsilon) {
  Trajectory original = from_flat({0.0, 0.0});
  Trajectory point = from_flat({2.0, 0.0});
  Trajectory stepped = forward_step(original, point, 0.5);
  EXPECT_NEAR(trajectory_distance(original, stepped), 1.5, 1e-12);
}

TEST(ForwardStep, ClampLandsExactlyOnOriginal) {
  std::mt19937_64 rng(5);
  Trajectory original = random_trajectory(rng, 5);
  Trajectory point = orthogonal_step(original, random_trajectory(rng, 5), 0.1, rng);
  double d = trajectory_distance(original, point);
  Trajectory stepped = forward_step(original, point, d + 0.25);
  for (std::size_t i = 0; i < original.size(); ++i) {
    EXPECT_EQ(stepped.position(i).x(), original.position(i).x());
    EXPECT_EQ(stepped.position(i).y(), original.position(i).y());
  }
}

TEST(ForwardStep, RandomConfigurationsReduceByExactlyEpsilon) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t length = 1 + trial % 12;
    Trajectory original = random_trajectory(rng, length);
    Trajectory point = random_trajectory(rng, length);
    double d = trajectory_distance(original, point);
    if (d < 1e-6) continue;
    double epsilon = frac(rng) * d;
    Trajectory stepped = forward_step(original, point, epsilon);
    ASSERT_NEAR(trajectory_distance(original, stepped), d - epsilon,
                1e-9 * std::max(1.0, d));
    // The move is along the segment toward the original.
    double moved = trajectory_distance(point, stepped);
    ASSERT_NEAR(moved, epsilon, 1e-9 * std::max(1.0, d));
  }
}

TEST(ForwardStep, ThrowsWhenPointEqualsOriginal) {
  Trajectory original = from_flat({1.0, 2.0, 3.0, 4.0});
  EXPECT_THROW(forward_step(original, original, 0.1), NoDirectionError);
  EXPECT_THROW(forward_step(original, original, 0.0), NoDirectionError);
}

// --- initialize_adversarial ---

TEST(InitializeAdversarial, ReturnedSampleSatisfiesCriterion) {
  toys::Geometry toy = toys::halfplane(2);
  FunctionDecisionOracle oracle(toy.criterion, 1000);
  AttackParams params;
  std::mt19937_64 rng(1);
  Trajectory adv = initialize_adversarial(toy.scene, oracle, params, rng);
  FunctionDecisionOracle check(toy.criterion, 1);
  EXPECT_TRUE(check.query(adv, toy.scene));
}

TEST(InitializeAdversarial, OriginalAdversarialShortCircuitsAtOneQuery) {
  Scene scene = toys::origin_scene(3);
  FunctionDecisionOracle oracle(
      [](const Trajectory&, const Scene&) { return true; }, 1000);
  AttackParams params;
  std::mt19937_64 rng(1);
  Trajectory adv = initialize_adversarial(scene, oracle, params, rng);
  EXPECT_EQ(oracle.queries_used(), 1);
  EXPECT_EQ(trajectory_distance(scene.target_history(), adv), 0.0);
}

TEST(InitializeAdversarial, UnsatisfiableThrowsAfterExactlySampleBudget) {
  Scene scene = toys::origin_scene(2);
  FunctionDecisionOracle oracle(
      [](const Trajectory&, const Scene&) { return false; }, 1000);
  AttackParams params;
  params.init_sample_budget = 37;
  std::mt19937_64 rng(9);
  EXPECT_THROW(initialize_adversarial(scene, oracle, params, rng), InitFailedError);
  EXPECT_EQ(oracle.queries_used(), 37);
}

TEST(InitializeAdversarial, EscalatingDeviationReachesDistantRegions) {
  // The disk at distance ~3 needs deviations past the first rung; a fixed
  // sigma of 0.5 would almost never hit it.
  toys::Geometry toy = toys::disk(1);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    FunctionDecisionOracle oracle(toy.criterion, 100000);
    AttackParams params;
    params.init_sample_budget = 400;
    std::mt19937_64 rng(seed);
    try {
      initialize_adversarial(toy.scene, oracle, params, rng);
      ++hits;
    } catch (const InitFailedError&) {
    }
  }
  EXPECT_GE(hits, 45);
}

// --- forward_initialize ---

TEST(ForwardInitialize, BisectionTightensToBoundary) {
  // Adversarial start at distance 4, boundary at distance 1: twenty
  // bisections bracket the crossing within 2^-20 of the segment, landing
  // in [1, 1 + 4 * 2^-20].
  toys::Geometry toy = toys::halfplane(1);
  Trajectory adv = from_flat({4.0, 0.0});
  FunctionDecisionOracle oracle(toy.criterion, 1000);
  AttackParams params;
  Trajectory out = forward_initialize(toy.scene.target_history(), adv, oracle,
                                      toy.scene, params);
  double d = trajectory_distance(toy.scene.target_history(), out);
  EXPECT_GE(d, 1.0);
  EXPECT_LE(d, 1.0 + 4.0 * std::ldexp(1.0, -20));
  EXPECT_EQ(oracle.queries_used(), 20);
}

TEST(ForwardInitialize, ZeroDistanceStartReturnsImmediately) {
  toys::Geometry toy = toys::halfplane(1, 0.0);
  Trajectory adv = toy.scene.target_history();
  FunctionDecisionOracle oracle(toy.criterion, 1000);
  AttackParams params;
  Trajectory out = forward_initialize(toy.scene.target_history(), adv, oracle,
                                      toy.scene, params);
  EXPECT_EQ(oracle.queries_used(), 0);
  EXPECT_EQ(trajectory_distance(adv, out), 0.0);
}

TEST(ForwardInitialize, NoInteriorProgressKeepsStart) {
  // Criterion holds only at the start itself: every midpoint is rejected
  // and the adversarial endpoint never moves.
  Scene scene = toys::origin_scene(1);
  auto criterion = [](const Trajectory& cand, const Scene&) {
    return cand.position(0).x() >= 4.0;
  };
  Trajectory adv = from_flat({4.0, 0.0});
  FunctionDecisionOracle oracle(criterion, 1000);
  AttackParams params;
  Trajectory out =
      forward_initialize(scene.target_history(), adv, oracle, scene, params);
  EXPECT_EQ(trajectory_distance(adv, out), 0.0);
  EXPECT_EQ(oracle.queries_used(), 20);
}

TEST(ForwardInitialize, BudgetExhaustionReturnsBestSoFar) {
  toys::Geometry toy = toys::halfplane(1);
  Trajectory adv = from_flat({4.0, 0.0});
  FunctionDecisionOracle oracle(toy.criterion, 5);
  AttackParams params;
  Trajectory out = forward_initialize(toy.scene.target_history(), adv, oracle,
                                      toy.scene, params);
  double d = trajectory_distance(toy.scene.target_history(), out);
  EXPECT_GE(d, 1.0);
  EXPECT_LE(d, 4.0);
  EXPECT_EQ(oracle.remaining(), 0);
  // Five bisections halve the bracket five times: within 4 * 2^-5 above 1.
  EXPECT_LE(d, 1.0 + 4.0 * std::ldexp(1.0, -5));
}

// --- run_attack on toy geometries ---

TEST(RunAttack, HalfplaneConvergesNearOptimum) {
  toys::Geometry toy = toys::halfplane(4);  // flattened dimension 8
  FunctionDecisionOracle oracle(toy.criterion, 1000);
  AttackParams params;
  params.rng_seed = 42;
  AttackResult result = run_attack(toy.scene, oracle, params);
  EXPECT_TRUE(result.success);
  EXPECT_LE(result.final_distance, 1.05 * toy.optimum_rms);
  EXPECT_LE(result.queries_used, 1000);
  FunctionDecisionOracle check(toy.criterion, 1);
  EXPECT_TRUE(check.query(result.adversarial, toy.scene));
}

TEST(RunAttack, DiskConvergesNearOptimum) {
  toys::Geometry toy = toys::disk(1);
  FunctionDecisionOracle oracle(toy.criterion, 1000);
  AttackParams params;
  params.rng_seed = 3;
  params.init_sample_budget = 400;
  AttackResult result = run_attack(toy.scene, oracle, params);
  EXPECT_TRUE(result.success);
  EXPECT_LE(result.final_distance, 1.05 * toy.optimum_rms);
  FunctionDecisionOracle check(toy.criterion, 1);
  EXPECT_TRUE(check.query(result.adversarial, toy.scene));
}

TEST(RunAttack, BudgetOfOneEndsInInitFailureOrExhaustion) {
  toys::Geometry toy = toys::halfplane(2);
  FunctionDecisionOracle oracle(toy.criterion, 1);
  AttackParams params;
  params.rng_seed = 7;
  AttackResult result = run_attack(toy.scene, oracle, params);
  EXPECT_LE(oracle.queries_used(), 1);
  EXPECT_TRUE(result.termination_reason == TerminationReason::BudgetExhausted ||
              result.termination_reason == TerminationReason::InitFailed)
      << to_string(result.termination_reason);
  EXPECT_FALSE(result.success);
}

TEST(RunAttack, InitFailureReportsCleanly) {
  Scene scene = toys::origin_scene(2);
  FunctionDecisionOracle oracle(
      [](const Trajectory&, const Scene&) { return false; }, 1000);
  AttackParams params;
  AttackResult result = run_attack(scene, oracle, params);
  EXPECT_FALSE(result.success);
  EXPECT_EQ(result.termination_reason, TerminationReason::InitFailed);
  EXPECT_EQ(result.queries_used, params.init_sample_budget);
  EXPECT_TRUE(result.trace.empty());
}

TEST(RunAttack, TraceDistancesAreMonotoneNonIncreasing) {
  toys::Geometry toy = toys::halfplane(3);
  FunctionDecisionOracle oracle(toy.criterion, 1000);
  AttackParams params;
  params.rng_seed = 11;
  AttackResult result = run_attack(toy.scene, oracle, params);
  ASSERT_FALSE(result.trace.empty());
  for (std::size_t i = 1; i < result.trace.size(); ++i) {
    ASSERT_LE(result.trace[i].distance, result.trace[i - 1].distance);
    ASSERT_GE(result.trace[i].query, result.trace[i - 1].query);
  }
  EXPECT_EQ(result.trace.back().distance, result.final_distance);
  EXPECT_LE(result.trace.back().query, result.queries_used);
}

TEST(RunAttack, SameSeedReproducesExactly) {
  toys::Geometry toy = toys::disk(2);
  AttackParams params;
  params.rng_seed = 99;
  params.init_sample_budget = 400;
  FunctionDecisionOracle a(toy.criterion, 1000);
  FunctionDecisionOracle b(toy.criterion, 1000);
  AttackResult ra = run_attack(toy.scene, a, params);
  AttackResult rb = run_attack(toy.scene, b, params);
  EXPECT_EQ(ra.success, rb.success);
  EXPECT_EQ(ra.queries_used, rb.queries_used);
  EXPECT_EQ(ra.final_distance, rb.final_distance);
  ASSERT_EQ(ra.trace.size(), rb.trace.size());
  for (std::size_t i = 0; i < ra.trace.size(); ++i) {
    EXPECT_EQ(ra.trace[i].query, rb.trace[i].query);
    EXPECT_EQ(ra.trace[i].distance, rb.trace[i].distance);
  }
  ASSERT_EQ(ra.adversarial.size(), rb.adversarial.size());
  for (std::size_t i = 0; i < ra.adversarial.size(); ++i) {
    EXPECT_EQ(ra.adversarial.position(i).x(), rb.adversarial.position(i).x());
    EXPECT_EQ(ra.adversarial.position(i).y(), rb.adversarial.position(i).y());
  }
}

TEST(RunAttack, DifferentSeedsExploreDifferently) {
  toys::Geometry toy = toys::halfplane(3);
  AttackParams pa;
  pa.rng_seed = 1;
  AttackParams pb;
  pb.rng_seed = 2;
  FunctionDecisionOracle a(toy.criterion, 1000);
  FunctionDecisionOracle b(toy.criterion, 1000);
  AttackResult ra = run_attack(toy.scene, a, pa);
  AttackResult rb = run_attack(toy.scene, b, pb);
  bool identical = ra.queries_used == rb.queries_used &&
                   ra.final_distance == rb.final_distance;
  EXPECT_FALSE(identical);
}

TEST(RunAttack, EveryAcceptedIterateSatisfiesCriterion) {
  // Wrap the criterion to capture every candidate the oracle accepted;
  // each trace entry must correspond to one of them (or the start).
  toys::Geometry toy = toys::halfplane(2);
  std::vector<Trajectory> accepted;
  auto recording = [&](const Trajectory& cand, const Scene& scene) {
    bool ok = toy.criterion(cand, scene);
    if (ok) accepted.push_back(cand);
    return ok;
  };
  FunctionDecisionOracle oracle(recording, 1000);
  AttackParams params;
  params.rng_seed = 5;
  AttackResult result = run_attack(toy.scene, oracle, params);
  ASSERT_TRUE(result.success);
  Trajectory original = toy.scene.target_history();
  for (const TracePoint& tp : result.trace) {
    bool matched = false;
    for (const Trajectory& cand : accepted) {
      if (trajectory_distance(original, cand) == tp.distance) {
        matched = true;
        break;
      }
    }
    ASSERT_TRUE(matched) << "trace distance " << tp.distance
                         << " does not match any accepted candidate";
  }
}

TEST(RunAttack, TightEpsilonToleranceStopsEarly) {
  toys::Geometry toy = toys::halfplane(2);
  FunctionDecisionOracle oracle(toy.criterion, 100000);
  AttackParams params;
  params.rng_seed = 13;
  params.epsilon_tolerance = 0.2;  // larger than epsilon0 * decay^k for small k
  AttackResult result = run_attack(toy.scene, oracle, params);
  EXPECT_TRUE(result.success);
  EXPECT_EQ(result.termination_reason, TerminationReason::EpsilonTolerance);
}

TEST(RunAttack, ValidatesParameters) {
  toys::Geometry toy = toys::halfplane(2);
  FunctionDecisionOracle oracle(toy.criterion, 1000);
  AttackParams params;
  params.delta0 = -1.0;
  EXPECT_THROW(run_attack(toy.scene, oracle, params), Error);
}

TEST(AttackParams, ValidateRejectsBadValues) {
  AttackParams good;
  EXPECT_NO_THROW(good.validate());
  AttackParams p = good;
  p.epsilon0 = 0.0;
  EXPECT_THROW(p.validate(), Error);
  p = good;
  p.delta_decay = 1.0;
  EXPECT_THROW(p.validate(), Error);
  p = good;
  p.epsilon_decay = 0.0;
  EXPECT_THROW(p.validate(), Error);
  p = good;
  p.max_iter = 0;
  EXPECT_THROW(p.validate(), Error);
  p = good;
  p.init_sample_budget = 0;
  EXPECT_THROW(p.validate(), Error);
  p = good;
  p.success_window = 0;
  EXPECT_THROW(p.validate(), Error);
}

TEST(TerminationReason, NamesAreStable) {
  EXPECT_STREQ(to_string(TerminationReason::EpsilonTolerance), "epsilon_tolerance");
  EXPECT_STREQ(to_string(TerminationReason::MaxIter), "max_iter");
  EXPECT_STREQ(to_string(TerminationReason::BudgetExhausted), "budget_exhausted");
  EXPECT_STREQ(to_string(TerminationReason::Stalled), "stalled");
  EXPECT_STREQ(to_string(TerminationReason::InitFailed), "init_failed");
}

}  // namespace
}  // namespace dtp
