#include <doctest.h>

#include <stdexcept>
#include <tuple>

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "coact/explore.hpp"
#include "coact/mdp.hpp"
#include "coact/tabular.hpp"

using namespace coact;

namespace {

constexpr int kDraws = 100000;

bool within_4sigma(int count, double p, int n = kDraws) {
  const double sd = std::sqrt(p * (1 - p) / n);
  return std::abs(count / double(n) - p) < 4 * sd;
}

QTable row_table(std::vector<double> row) {
  QTable q(1, row.size());
  for (std::size_t a = 0; a < row.size(); ++a) q(0, a) = row[a];
  return q;
}

}  // namespace

TEST_CASE("strategy names round trip") {
  for (auto k : {StrategyKind::EpsilonGreedy, StrategyKind::CoAct, StrategyKind::Ucb,
                 StrategyKind::Greedy})
    CHECK(parse_strategy_kind(to_string(k)) == k);
  CHECK(to_string(StrategyKind::EpsilonGreedy) == "eps-greedy");
  CHECK_THROWS_AS(parse_strategy_kind("softmax"), std::invalid_argument);
}

TEST_CASE("epsilon-greedy frequencies") {
  const QTable q = row_table({0.1, 0.7, -0.3, 0.2});
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) CHECK(select_epsilon_greedy(q, 0, 0.0, rng) == 1);

  std::array<int, 4> counts{};
  for (int i = 0; i < kDraws; ++i) ++counts[select_epsilon_greedy(q, 0, 1.0, rng)];
  for (int c : counts) CHECK(within_4sigma(c, 0.25));

  counts = {};
  for (int i = 0; i < kDraws; ++i) ++counts[select_epsilon_greedy(q, 0, 0.2, rng)];
  CHECK(within_4sigma(counts[1], 0.85));
  for (int a : {0, 2, 3}) CHECK(counts[a] > 0);
}

TEST_CASE("coact examples") {
  const QTable q = row_table({4, 1, 2, 3});
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) CHECK(select_coact(q, 0, 1.0, rng) == 1);

  std::array<int, 4> counts{};
  for (int i = 0; i < kDraws; ++i) ++counts[select_coact(q, 0, 0.2, rng)];
  CHECK(counts[2] == 0);
  CHECK(counts[3] == 0);
  CHECK(counts[0] + counts[1] == kDraws);
  CHECK(within_4sigma(counts[1], 0.2));
}

TEST_CASE("coact and epsilon-greedy agree at epsilon 0, draw for draw") {
  Rng init(3);
  const QTable q = init_qtable(8, 4, 0.0, 1.0, init);
  Rng a(10), b(10);
  for (int i = 0; i < 2000; ++i) {
    const StateIndex s = i % 8;
    CHECK(select_coact(q, s, 0.0, a) == select_epsilon_greedy(q, s, 0.0, b));
    CHECK(select_coact(q, s, 0.0, a) == greedy_action(q, s));
    b.discard(1);
  }
  CHECK(a == b);
}

TEST_CASE("coact support and affine invariance") {
  Rng init(4);
  const QTable q = init_qtable(6, 5, 0.0, 1.0, init);
  QTable shifted = q;
  for (double& v : shifted.data()) v = 3.0 * v - 7.0;
  Rng a(5), b(5);
  for (StateIndex s = 0; s < 6; ++s) {
    std::set<ActionIndex> seen;
    for (int i = 0; i < 5000; ++i) {
      const ActionIndex x = select_coact(q, s, 0.3, a);
      CHECK(x == select_coact(shifted, s, 0.3, b));
      seen.insert(x);
    }
    CHECK(seen == std::set<ActionIndex>{min_action(q, s), greedy_action(q, s)});
  }
}

TEST_CASE("ucb examples") {
  Rng rng(6);
  {
    const QTable q(1, 4);
    const VisitCounts counts(1, 4);
    std::array<int, 4> freq{};
    for (int i = 0; i < kDraws; ++i) ++freq[select_ucb(q, 0, counts, rng)];
    for (int c : freq) CHECK(within_4sigma(c, 0.25));
  }
  {
    const QTable q(1, 2);
    VisitCounts counts(1, 2);
    counts.set(0, 0, 1, 101);
    counts.set(0, 1, 100, 101);
    // bonuses 2 sqrt(log 101) ~ 4.30 and 2 sqrt(log 101 / 100) ~ 0.43
    CHECK(2 * std::sqrt(std::log(101.0)) == doctest::Approx(4.30).epsilon(0.01));
    CHECK(select_ucb(q, 0, counts, rng) == 0);
  }
  {
    const QTable q(1, 3, 1.0);
    VisitCounts counts(1, 3);
    for (ActionIndex a = 0; a < 3; ++a) counts.set(0, a, 5, 15);
    CHECK(select_ucb(q, 0, counts, rng) == 0);
  }
  {
    // a zero-count action wins whatever its value
    QTable q = row_table({10, -10, 10});
    VisitCounts counts(1, 3);
    counts.set(0, 0, 5, 10);
    counts.set(0, 2, 5, 10);
    for (int i = 0; i < 100; ++i) CHECK(select_ucb(q, 0, counts, rng) == 1);
  }
  CHECK_THROWS_AS(VisitCounts(1, 2).set(0, 0, 5, 3), std::invalid_argument);
}

TEST_CASE("collect_step") {
  const Mdp chain = build_chain_mdp({10}, 0.99);
  {
    QTable q(10, 4);
    q(9, static_cast<ActionIndex>(ChainAction::Reset)) = 1.0;
    VisitCounts counts(10, 4);
    Rng rng(7);
    const Transition t = collect_step({StrategyKind::Greedy}, q, chain, 9, counts, rng);
    CHECK(t == Transition{9, static_cast<ActionIndex>(ChainAction::Reset), 1.0, 0});
    CHECK(counts.count(9, 3) == 1);
    CHECK(counts.total_steps() == 1);
    for (int i = 0; i < 10; ++i) CHECK(collect_step({StrategyKind::Greedy}, q, chain, 9, counts, rng) == t);
  }
  {
    Rng init(8);
    const QTable q = init_qtable(10, 4, 0.0, 0.1, init);
    VisitCounts counts(10, 4);
    Rng rng(9);
    StrategyConfig coact{StrategyKind::CoAct, 1.0};
    for (StateIndex s = 0; s < 10; ++s)
      CHECK(collect_step(coact, q, chain, s, counts, rng).a == min_action(q, s));
  }
}

TEST_CASE("every strategy at epsilon 0 except ucb is greedy") {
  Rng init(10);
  const QTable q = init_qtable(5, 4, 0.0, 1.0, init);
  const VisitCounts counts(5, 4);
  Rng rng(11);
  for (auto k : {StrategyKind::EpsilonGreedy, StrategyKind::CoAct, StrategyKind::Greedy})
    for (StateIndex s = 0; s < 5; ++s)
      CHECK(select_action({k, 0.0}, q.action_values(s), s, counts, 0, rng) == greedy_action(q, s));
}

TEST_CASE("uniform mix and schedule") {
  const QTable q = row_table({4, 1, 2, 3});
  const VisitCounts counts(1, 4);
  StrategyConfig cfg{StrategyKind::CoAct, 0.0};
  cfg.uniform_mix = 0.4;
  Rng rng(12);
  std::array<int, 4> freq{};
  for (int i = 0; i < kDraws; ++i) ++freq[select_action(cfg, q.action_values(0), 0, counts, 0, rng)];
  CHECK(within_4sigma(freq[0], 0.6 + 0.1));
  CHECK(within_4sigma(freq[2], 0.1));

  const EpsilonSchedule sched{1.0, 0.2, 100};
  CHECK(sched.at(0) == 1.0);
  CHECK(sched.at(50) == doctest::Approx(0.6));
  CHECK(sched.at(100) == doctest::Approx(0.2));
  CHECK(sched.at(1000) == doctest::Approx(0.2));
  StrategyConfig annealed{StrategyKind::EpsilonGreedy, 0.2};
  annealed.schedule = sched;
  CHECK(annealed.epsilon_at(50) == doctest::Approx(0.6));

  CHECK_THROWS(StrategyConfig{StrategyKind::CoAct, 1.5}.validate());
  StrategyConfig bad_mix;
  bad_mix.uniform_mix = -0.1;
  CHECK_THROWS(bad_mix.validate());
}
