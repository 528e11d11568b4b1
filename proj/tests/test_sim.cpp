#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracle.hpp"
#include "qcms/sim.hpp"

using namespace qcms;

namespace {

const ChannelSet kFig7A = ChannelSet::range(1, 6);
const ChannelSet kFig7B{1, 7, 8, 9};

}  // namespace

TEST_CASE("sample_scenario sizes and overlap") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    auto sc = sample_scenario(200, 0.3, 0.4, 5, rng);
    CHECK(sc.n_a() == 60);
    CHECK(sc.n_b() == 80);
    CHECK(sc.overlap() == 5);
    CHECK(sc.a.front() >= 1);
    CHECK(sc.b.back() <= 200);
  }
  auto tiny = sample_scenario(10, 0.1, 0.1, 1, rng);
  CHECK(tiny.a.size() == 1);
  CHECK(tiny.a == tiny.b);

  CHECK_THROWS_AS(sample_scenario(200, 0.3, 0.4, 0, rng), std::domain_error);
  CHECK_THROWS_AS(sample_scenario(200, 0.3, 0.4, 61, rng), std::domain_error);
  CHECK_THROWS_AS(sample_scenario(10, 0.8, 0.8, 1, rng), std::domain_error);
  CHECK_THROWS_AS(sample_scenario(200, 0.001, 0.4, 1, rng), std::domain_error);
}

TEST_CASE("sample_scenario draws every channel with roughly equal frequency") {
  Rng rng(5);
  std::vector<int> hits(21, 0);
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    auto sc = sample_scenario(20, 0.25, 0.25, 2, rng);
    for (Channel c : sc.a) ++hits[c];
  }
  // each channel lands in A with probability 5/20
  for (Channel c = 1; c <= 20; ++c) CHECK(std::abs(hits[c] / double(draws) - 0.25) < 0.02);
}

TEST_CASE("make_scenario rejects disjoint or out-of-range sets") {
  CHECK_THROWS_AS(make_scenario(200, {1, 2}, {3, 4}), std::domain_error);
  CHECK_THROWS_AS(make_scenario(5, {1, 6}, {1}), std::domain_error);
  CHECK_THROWS_AS(make_scenario(5, ChannelSet{}, {1}), std::domain_error);
  CHECK(make_scenario(200, kFig7A, kFig7B).overlap() == 1);
}

TEST_CASE("run_trial: single shared channel meets in the first slot") {
  auto a = HopSchedule::build(10, {4}, 4);
  auto b = HopSchedule::build(10, {4}, 4);
  auto r = run_trial(a, b, 0, WildcardPolicy::no_match(), 10);
  REQUIRE(r);
  CHECK(r->ttr == 1);
  CHECK(r->channel == 4);
}

TEST_CASE("run_trial on the worked example agrees with the explicit-matrix oracle") {
  auto a = HopSchedule::build(200, kFig7A, 5);
  auto b = HopSchedule::build(200, kFig7B, 1);
  auto sa = oracle::materialize(a, 800);
  auto sb = oracle::materialize(b, 800);
  for (std::uint64_t drift : {0, 1, 2, 5, 17, 34, 35, 100, 4409}) {
    auto expect = oracle::first_meeting(sa, sb, drift, 847);
    auto got = run_trial(a, b, drift, WildcardPolicy::no_match(), 847);
    REQUIRE(expect);
    REQUIRE(got);
    CHECK(got->ttr == expect->first);
    CHECK(got->channel == 1);
  }
  // frozen from the oracle above: under ascending order both 0-columns open on channel 1 in slot 2
  CHECK(run_trial(a, b, 0, WildcardPolicy::no_match(), 847)->ttr == 2);
}

TEST_CASE("run_trial with random wildcards stays within the bound") {
  auto a = HopSchedule::build(200, kFig7A, 5);
  auto b = HopSchedule::build(200, kFig7B, 1);
  for (std::uint64_t drift : {0, 2, 5})
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Rng rng(seed);
      auto r = run_trial(a, b, drift, WildcardPolicy::random_fill(rng), 847);
      REQUIRE(r);
      CHECK(r->ttr <= 847);
      CHECK(r->channel == 1);
    }
}

TEST_CASE("run_trial rejects schedules for different networks") {
  auto a = HopSchedule::build(200, kFig7A, 5);
  auto b = HopSchedule::build(100, kFig7B, 1);
  CHECK_THROWS_AS(run_trial(a, b, 0, WildcardPolicy::no_match(), 10), std::domain_error);
}

TEST_CASE("swapping users at zero drift gives the same TTR") {
  const ChannelSet ca{2, 3, 5, 8, 9};
  const ChannelSet cb{1, 3, 8, 12};
  for (Channel ra : ca)
    for (Channel rb : cb) {
      auto a = HopSchedule::build(16, ca, ra);
      auto b = HopSchedule::build(16, cb, rb);
      auto ab = run_trial(a, b, 0, WildcardPolicy::no_match(), 10000);
      auto ba = run_trial(b, a, 0, WildcardPolicy::no_match(), 10000);
      REQUIRE(ab);
      REQUIRE(ba);
      CHECK(ab->ttr == ba->ttr);
      CHECK(ab->channel == ba->channel);
      CHECK(intersection(ca, cb).contains(ab->channel));
    }
}

TEST_CASE("bitset drift sweep agrees with run_trial for every drift") {
  struct Case {
    int n;
    ChannelSet a, b;
  };
  const std::vector<Case> cases{
      {200, kFig7A, kFig7B}, {4, {1, 2}, {1, 2}}, {16, {16}, {16}}, {25, {3, 9, 20}, {9, 11}}, {12, {1, 2, 3, 4, 5, 6, 7}, {7}}};
  for (const auto& c : cases)
    for (Channel ra : c.a)
      for (Channel rb : c.b) {
        auto a = HopSchedule::build(c.n, c.a, ra);
        auto b = HopSchedule::build(c.n, c.b, rb);
        const std::uint64_t drifts = std::min<std::uint64_t>(a.transient_length() + a.full_period(), 3000);
        const std::uint64_t t_max = mttr_bound(c.a.size(), c.b.size(), c.n);
        auto fast = ttr_by_drift(a, b, drifts, t_max);
        for (std::uint64_t d = 0; d < drifts; ++d) {
          auto slow = run_trial(a, b, d, WildcardPolicy::no_match(), t_max);
          const std::uint32_t expect = slow ? static_cast<std::uint32_t>(slow->ttr) : 0;
          if (fast[d] != expect) FAIL("N=" << c.n << " R_A=" << ra << " R_B=" << rb << " drift=" << d);
        }
      }
}

TEST_CASE("ttr_by_drift reports misses as zero") {
  auto a = HopSchedule::build(200, kFig7A, 5);
  auto b = HopSchedule::build(200, kFig7B, 1);
  auto ttr = ttr_by_drift(a, b, 100, 3);
  for (std::uint64_t d = 0; d < 100; ++d) {
    auto slow = run_trial(a, b, d, WildcardPolicy::no_match(), 3);
    CHECK(ttr[d] == (slow ? slow->ttr : 0));
  }
}

TEST_CASE("verify_bound on the worked example") {
  auto report = verify_bound(make_scenario(200, kFig7A, kFig7B));
  CHECK(report.pass());
  CHECK(report.bound == 847);
  CHECK(report.max_ttr_found <= 847);
  CHECK(report.exhaustive);
  std::uint64_t expected_trials = 0;
  for (Channel ra : kFig7A) {
    auto a = HopSchedule::build(200, kFig7A, ra);
    expected_trials += (a.transient_length() + a.full_period()) * kFig7B.size();
  }
  CHECK(report.trials == expected_trials);
  // user A with R=5 has period 4410, so its pairs alone cover 4 x 4445 drifts
  CHECK(HopSchedule::build(200, kFig7A, 5).transient_length() + HopSchedule::build(200, kFig7A, 5).full_period() == 4445);
}

TEST_CASE("verify_bound on toy and power-of-4 scenarios") {
  auto toy = verify_bound(make_scenario(4, {1, 2}, {1, 2}));
  CHECK(toy.pass());
  CHECK(toy.bound == 495);
  auto pow4 = verify_bound(make_scenario(16, {16}, {16}));
  CHECK(pow4.pass());

  auto capped = verify_bound(make_scenario(200, kFig7A, kFig7B), VerifyOptions{PermutationPolicy::ascending(), 10});
  CHECK_FALSE(capped.exhaustive);
  CHECK(capped.trials == 10 * 24);

  Scenario disjoint{200, {1, 2}, {3, 4}};
  CHECK_THROWS_AS(verify_bound(disjoint), std::domain_error);
}

TEST_CASE("verify_bound flags a budget too small to be a bound") {
  // Sanity check that the checker can fail: a schedule pair that needs more than one slot.
  auto a = HopSchedule::build(200, kFig7A, 5);
  auto b = HopSchedule::build(200, kFig7B, 1);
  auto ttr = ttr_by_drift(a, b, 4445, 1);
  CHECK(std::count(ttr.begin(), ttr.end(), 0u) > 0);
}

TEST_CASE("random baseline") {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    auto r = run_baseline_trial({7}, {7}, rng, 10);
    REQUIRE(r);
    CHECK(r->ttr == 1);
  }
  // geometric with success probability G/(a*b) = 1/4
  auto s = baseline_monte_carlo({1, 2}, {2, 3}, 40000, 9);
  CHECK(s.trials == 40000);
  CHECK(std::abs(s.ettr - 4.0) / 4.0 < 0.03);
  CHECK_THROWS_AS(random_baseline_channel(ChannelSet{}, rng), std::domain_error);
}

TEST_CASE("accumulator statistics match direct computation") {
  const std::vector<std::uint64_t> values{1, 4, 4, 9, 30, 2};
  TtrAccumulator left, right;
  for (std::size_t i = 0; i < values.size(); ++i) (i % 2 ? left : right).add(values[i]);
  left.merge(right);
  auto s = left.summary();
  double mean = 0;
  for (auto v : values) mean += v;
  mean /= values.size();
  double var = 0;
  for (auto v : values) var += (v - mean) * (v - mean);
  var /= values.size() - 1;
  CHECK(s.trials == 6);
  CHECK(s.ettr == doctest::Approx(mean));
  CHECK(s.mttr_observed == 30);
  CHECK(s.ttr_stddev == doctest::Approx(std::sqrt(var)));
  CHECK(s.ci95_halfwidth == doctest::Approx(1.96 * std::sqrt(var) / std::sqrt(6.0)));
}

TEST_CASE("monte_carlo is reproducible and independent of the thread count") {
  MonteCarloConfig cfg;
  cfg.n_channels = 60;
  cfg.theta_a = 0.2;
  cfg.theta_b = 0.3;
  cfg.overlap = 2;
  cfg.trials = 400;
  cfg.threads = 1;
  auto one = monte_carlo(cfg, 42);
  cfg.threads = 3;
  auto three = monte_carlo(cfg, 42);
  CHECK(one.ettr == three.ettr);
  CHECK(one.mttr_observed == three.mttr_observed);
  CHECK(one.ttr_stddev == three.ttr_stddev);
  CHECK(one.trials == 400);
  CHECK(one.budget_exceeded == 0);
  CHECK(one.mttr_observed <= mttr_bound(12, 18, 60));
  auto other = monte_carlo(cfg, 43);
  CHECK(other.ettr != one.ettr);
  CHECK(one.mttr_observed >= one.ettr);
  CHECK(one.ettr >= 1);
}

TEST_CASE("monte_carlo with adversarial wildcards still meets within the bound") {
  MonteCarloConfig cfg;
  cfg.n_channels = 40;
  cfg.theta_a = 0.15;
  cfg.theta_b = 0.2;
  cfg.overlap = 1;
  cfg.trials = 300;
  cfg.wildcard = WildcardMode::NoMatch;
  auto s = monte_carlo(cfg, 8);
  CHECK(s.budget_exceeded == 0);
  CHECK(s.trials == 300);
}

TEST_CASE("monte_carlo validates its parameters") {
  MonteCarloConfig cfg;
  cfg.overlap = 0;
  CHECK_THROWS_AS(monte_carlo(cfg, 1), std::domain_error);
  cfg.overlap = 1;
  cfg.trials = 0;
  CHECK_THROWS_AS(monte_carlo(cfg, 1), std::domain_error);
}
