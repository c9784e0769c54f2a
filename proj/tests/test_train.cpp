#include <doctest.h>

#include <stdexcept>
#include <tuple>

#include <cmath>

#include "coact/train.hpp"

using namespace coact;

namespace {

TabularTrainConfig chain_tabular(TabularKind kind = TabularKind::QLearning) {
  TabularTrainConfig cfg;
  cfg.protocol.iterations = 300;
  cfg.learner = {1.0, 0.99, 0.0, 0.1};
  cfg.kind = kind;
  cfg.init_seed = 17;
  return cfg;
}

TrainConfig small_network(std::size_t iterations) {
  TrainConfig cfg;
  cfg.protocol.iterations = iterations;
  cfg.alpha = 0.1;
  cfg.init.seed = 5;
  return cfg;
}

void check_record_shape(const RunRecord& rec, std::size_t iterations, std::size_t train_steps,
                        double max_return) {
  REQUIRE(rec.iterations.size() == iterations);
  for (std::size_t i = 0; i < iterations; ++i) {
    CHECK(rec.iterations[i].iteration == i + 1);
    CHECK(rec.iterations[i].env_steps == (i + 1) * train_steps);
    CHECK(rec.iterations[i].eval_return >= 0.0);
    CHECK(rec.iterations[i].eval_return <= max_return);
  }
}

}  // namespace

TEST_CASE("tabular training on the chain") {
  const Mdp chain = build_chain_mdp({10}, 0.99);
  for (auto kind : {TabularKind::QLearning, TabularKind::DoubleQ, TabularKind::Quantile}) {
    CAPTURE(static_cast<int>(kind));
    Rng rng(1);
    const auto rec = train_tabular(chain, chain_tabular(kind), {StrategyKind::CoAct, 0.2}, rng);
    check_record_shape(rec, 300, 100, 11.0);
    for (const auto& it : rec.iterations) CHECK(std::isfinite(it.mean_td));
    Rng again(1);
    CHECK(rec == train_tabular(chain, chain_tabular(kind), {StrategyKind::CoAct, 0.2}, again));
  }
  Rng rng(1);
  const auto q = train_tabular(chain, chain_tabular(), {StrategyKind::CoAct, 0.2}, rng);
  CHECK(q.final_return() == 11.0);
  CHECK(q.first_iteration_reaching(11.0).has_value());
}

TEST_CASE("tabular coact and epsilon-greedy coincide at epsilon 0") {
  const Mdp chain = build_chain_mdp({10}, 0.99);
  auto cfg = chain_tabular();
  cfg.protocol.iterations = 40;
  Rng a(3), b(3);
  CHECK(train_tabular(chain, cfg, {StrategyKind::CoAct, 0.0}, a) ==
        train_tabular(chain, cfg, {StrategyKind::EpsilonGreedy, 0.0}, b));
}

TEST_CASE("protocol and config validation") {
  const Mdp chain = build_chain_mdp({10}, 0.99);
  auto cfg = chain_tabular();
  cfg.protocol.iterations = 0;
  Rng rng(0);
  CHECK_THROWS(train_tabular(chain, cfg, {}, rng));
  TrainConfig net;
  net.batch_size = 0;
  CHECK_THROWS(net.validate());
  net = TrainConfig{};
  net.buffer_capacity = 8;
  CHECK_THROWS(net.validate());
  CHECK_NOTHROW(TrainConfig{}.validate());
}

TEST_CASE("network training is deterministic and bounded") {
  const Mdp chain = build_chain_mdp({10}, 0.99);
  const auto cfg = small_network(20);
  Rng a(9), b(9);
  const auto x = coact_train(chain, cfg, {StrategyKind::CoAct, 0.2}, a);
  const auto y = coact_train(chain, cfg, {StrategyKind::CoAct, 0.2}, b);
  CHECK(x.record == y.record);
  CHECK(x.online == y.online);
  CHECK(x.online.all_finite());
  check_record_shape(x.record, 20, 100, 11.0);
  // the first 31 steps only fill the buffer
  CHECK(std::isfinite(x.record.iterations[0].mean_td));
}

TEST_CASE("network coact and epsilon-greedy coincide at epsilon 0") {
  const Mdp chain = build_chain_mdp({10}, 0.99);
  const auto cfg = small_network(15);
  Rng a(4), b(4);
  const auto x = coact_train(chain, cfg, {StrategyKind::CoAct, 0.0}, a);
  const auto y = coact_train(chain, cfg, {StrategyKind::EpsilonGreedy, 0.0}, b);
  CHECK(x.record == y.record);
  CHECK(x.online == y.online);
}

TEST_CASE("no learning steps leaves the initialization") {
  const Mdp chain = build_chain_mdp({10}, 0.99);
  auto cfg = small_network(3);
  cfg.learning_steps = 0;
  Rng rng(2);
  const auto r = coact_train(chain, cfg, {StrategyKind::CoAct, 0.2}, rng);
  CHECK(r.online == init_network(cfg.init, {10, cfg.hidden, 4}));
  for (const auto& it : r.record.iterations) CHECK(std::isnan(it.mean_td));
}

TEST_CASE("coact at epsilon 1 always stores the argmin of the acting network") {
  const Mdp chain = build_chain_mdp({10}, 0.99);
  const auto cfg = small_network(5);
  Rng rng(6);
  std::size_t seen = 0;
  coact_train(chain, cfg, {StrategyKind::CoAct, 1.0}, rng,
              [&](const Transition& t, const QNetwork& net) {
                CHECK(t.a == argmin_action(forward(net, t.s)));
                ++seen;
              });
  CHECK(seen == 500);
}

TEST_CASE("double-q network variant") {
  const Mdp chain = build_chain_mdp({10}, 0.99);
  auto cfg = small_network(30);
  cfg.double_q = true;
  cfg.target_sync_period = 50;
  Rng a(8), b(8);
  const auto x = coact_train(chain, cfg, {StrategyKind::CoAct, 0.2}, a);
  CHECK(x.online.all_finite());
  CHECK(x.record == coact_train(chain, cfg, {StrategyKind::CoAct, 0.2}, b).record);
  cfg.double_q = false;
  Rng c(8);
  CHECK_FALSE(x.record == coact_train(chain, cfg, {StrategyKind::CoAct, 0.2}, c).record);
}

TEST_CASE("network coact solves the chain") {
  const Mdp chain = build_chain_mdp({10}, 0.99);
  Rng rng(11);
  const auto r = coact_train(chain, small_network(300), {StrategyKind::CoAct, 0.2}, rng);
  CHECK(r.record.first_iteration_reaching(11.0).has_value());
}

TEST_CASE("tabular training on a stochastic mdp") {
  Rng env(3);
  const Mdp m = random_mdp(8, 3, env);
  auto cfg = chain_tabular();
  cfg.protocol.iterations = 30;
  cfg.learner.alpha = 0.3;
  Rng rng(4);
  const auto rec = train_tabular(m, cfg, {StrategyKind::EpsilonGreedy, 0.2}, rng);
  check_record_shape(rec, 30, 100, 100.0);
  for (const auto& it : rec.iterations) CHECK(std::isfinite(it.mean_td));
}
