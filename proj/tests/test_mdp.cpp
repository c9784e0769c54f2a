#include <doctest.h>

#include <stdexcept>
#include <tuple>

#include <algorithm>
#include <cmath>
#include <vector>

#include "coact/mdp.hpp"
#include "coact/tabular.hpp"
#include "oracles.hpp"

using namespace coact;


TEST_CASE("chain_step transitions") {
  CHECK(chain_step(5, ChainAction::Up, 10) == ChainStep{6, 0.0});
  CHECK(chain_step(7, ChainAction::Reset, 10) == ChainStep{1, 0.0});
  CHECK(chain_step(10, ChainAction::Reset, 10) == ChainStep{1, 1.0});
  CHECK(chain_step(1, ChainAction::Jump3, 10) == ChainStep{3, 0.0});
  CHECK(chain_step(8, ChainAction::Jump2, 10) == ChainStep{2, 0.0});
  CHECK(chain_step(10, ChainAction::Up, 10) == ChainStep{10, 0.0});
  CHECK_THROWS_AS(chain_step(0, ChainAction::Up, 10), std::invalid_argument);
  CHECK_THROWS_AS(chain_step(11, ChainAction::Up, 10), std::invalid_argument);
  CHECK_THROWS_AS(chain_step(1, ChainAction::Up, 3), std::invalid_argument);
}

TEST_CASE("chain mdp has a single rewarding pair") {
  for (std::size_t n : {4u, 10u, 17u}) {
    const Mdp m = build_chain_mdp({n}, 0.99);
    CHECK(m.num_states() == n);
    CHECK(m.num_actions() == 4);
    CHECK(m.initial_state() == 0);
    CHECK(m.is_deterministic());
    int nonzero = 0;
    for (StateIndex s = 0; s < n; ++s)
      for (ActionIndex a = 0; a < 4; ++a) {
        const auto st = chain_step(s + 1, static_cast<ChainAction>(a), n);
        CHECK(m.deterministic_next(s, a) == st.next_state - 1);
        CHECK(m.reward(s, a) == st.reward);
        if (m.reward(s, a) != 0.0) {
          ++nonzero;
          CHECK(s == n - 1);
          CHECK(a == static_cast<ActionIndex>(ChainAction::Reset));
        }
      }
    CHECK(nonzero == 1);
  }
  CHECK_THROWS_AS(build_chain_mdp({3}, 0.99), std::invalid_argument);
}

TEST_CASE("mdp constructor rejects bad input") {
  // 1 state, 1 action
  CHECK_NOTHROW(Mdp(1, 1, {1.0}, {0.0}, 0.9, 0));
  CHECK_THROWS_AS(Mdp(1, 1, {0.9}, {0.0}, 0.9, 0), std::invalid_argument);
  CHECK_THROWS_AS(Mdp(2, 1, {1.2, -0.2, 0.0, 1.0}, {0.0, 0.0}, 0.9, 0), std::invalid_argument);
  CHECK_THROWS_AS(Mdp(1, 1, {1.0}, {NAN}, 0.9, 0), std::invalid_argument);
  CHECK_THROWS_AS(Mdp(1, 1, {1.0}, {0.0}, 0.9, 1), std::invalid_argument);
  CHECK_THROWS_AS(Mdp(1, 1, {1.0}, {0.0}, 0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(Mdp(1, 1, {1.0, 0.0}, {0.0}, 0.9, 0), std::invalid_argument);
  // rounding well inside 1e-9 is fine
  CHECK_NOTHROW(Mdp(2, 1, {0.5 + 1e-12, 0.5, 0.0, 1.0}, {0.0, 0.0}, 0.9, 0));
}

TEST_CASE("random_mdp is seeded and normalized") {
  Rng a(7), b(7);
  const Mdp x = random_mdp(20, 4, a);
  const Mdp y = random_mdp(20, 4, b);
  for (StateIndex s = 0; s < 20; ++s)
    for (ActionIndex act = 0; act < 4; ++act) {
      const auto row = x.transition_row(s, act);
      const auto other = y.transition_row(s, act);
      CHECK(std::equal(row.begin(), row.end(), other.begin()));
      CHECK(x.reward(s, act) == y.reward(s, act));
      double sum = 0.0;
      for (double p : row) {
        CHECK(p >= 0.0);
        sum += p;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }

  Rng c(0);
  const Mdp small = random_mdp(2, 2, c);
  CHECK(small.num_states() == 2);
  CHECK(small.num_actions() == 2);
  for (StateIndex s = 0; s < 2; ++s)
    for (ActionIndex act = 0; act < 2; ++act) {
      CHECK(small.reward(s, act) >= 0.0);
      CHECK(small.reward(s, act) <= 1.0);
      CHECK(small.transition_row(s, act).size() == 2);
    }
}

TEST_CASE("stochastic sampling follows the kernel") {
  Mdp m(2, 1, {0.3, 0.7, 1.0, 0.0}, {0.0, 0.0}, 0.9, 0);
  CHECK_FALSE(m.is_deterministic());
  Rng rng(3);
  const int n = 100000;
  int ones = 0;
  for (int i = 0; i < n; ++i) ones += m.sample_next(0, 0, rng) == 1;
  const double sd = std::sqrt(0.7 * 0.3 / n);
  CHECK(std::abs(ones / double(n) - 0.7) < 4 * sd);

  // point-mass rows leave the generator alone
  Rng before(9);
  Rng after = before;
  CHECK(m.sample_next(1, 0, after) == 0);
  CHECK(before == after);
}

TEST_CASE("optimal_return examples and floor(h/9)") {
  const Mdp m = build_chain_mdp({10}, 0.99);
  CHECK(optimal_return(m, 100) == 11.0);
  CHECK(optimal_return(m, 8) == 0.0);
  CHECK(optimal_return(m, 9) == 1.0);
  CHECK(optimal_return(m, 0) == 0.0);
  double prev = 0.0;
  for (std::size_t h = 0; h <= 200; ++h) {
    const double v = optimal_return(m, h);
    CHECK(v == oracle::chain_dp(10, h));
    CHECK(v == static_cast<double>(h / 9));
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("optimal_return on a random mdp is monotone") {
  Rng rng(11);
  const Mdp m = random_mdp(6, 3, rng);
  double prev = 0.0;
  for (std::size_t h = 0; h < 50; ++h) {
    const double v = optimal_return(m, h);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("evaluate_greedy") {
  const Mdp m = build_chain_mdp({10}, 0.99);
  QTable opt(10, 4, 0.0);
  // 1 -> JUMP3 -> 3, UP to 10, RESET
  opt(0, static_cast<ActionIndex>(ChainAction::Jump3)) = 1.0;
  for (StateIndex s = 2; s < 9; ++s) opt(s, static_cast<ActionIndex>(ChainAction::Up)) = 1.0;
  opt(9, static_cast<ActionIndex>(ChainAction::Reset)) = 1.0;
  CHECK(evaluate_greedy(m, opt, 100) == 11.0);
  CHECK(evaluate_greedy(m, QTable(10, 4), 100) == 0.0);
  CHECK(evaluate_greedy(m, opt, 0) == 0.0);
  CHECK_THROWS_AS(evaluate_greedy(m, QTable(9, 4), 10), std::invalid_argument);
}
