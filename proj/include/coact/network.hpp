#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "coact/random.hpp"
#include "coact/transition.hpp"

namespace coact {

enum class InitFamily { Normal, Uniform };

/// Distribution of initial weights. Normal draws N(0, scale^2); Uniform draws
/// U(-scale, scale). Every output head gets the same distribution, optionally
/// shifted by a per-action constant; unequal shifts break exchangeability.
struct InitSpec {
  InitFamily family = InitFamily::Normal;
  double hidden_scale = 1.0;  // input -> hidden weights
  double output_scale = 0.1;  // hidden -> output weights; sole scale for tables
  double bias_scale = 0.0;    // both bias vectors
  std::vector<double> head_offsets;  // empty = none
  std::uint64_t seed = 0;

  bool exchangeable() const;
  /// Throws std::invalid_argument on non-finite or negative scales.
  void validate() const;
};

/// Draws one value from the spec's family at the given scale.
double draw_init(InitFamily family, double scale, Rng& rng);

/// one-hot(S) -> ReLU(H) -> linear(A).
class QNetwork {
 public:
  QNetwork() = default;
  QNetwork(std::size_t num_states, std::size_t hidden, std::size_t num_actions);

  std::size_t num_states() const noexcept { return static_cast<std::size_t>(w1_.cols()); }
  std::size_t hidden() const noexcept { return static_cast<std::size_t>(w1_.rows()); }
  std::size_t num_actions() const noexcept { return static_cast<std::size_t>(w2_.rows()); }
  std::size_t num_parameters() const noexcept;

  Eigen::MatrixXd& w1() { return w1_; }
  Eigen::VectorXd& b1() { return b1_; }
  Eigen::MatrixXd& w2() { return w2_; }
  Eigen::VectorXd& b2() { return b2_; }
  const Eigen::MatrixXd& w1() const { return w1_; }
  const Eigen::VectorXd& b1() const { return b1_; }
  const Eigen::MatrixXd& w2() const { return w2_; }
  const Eigen::VectorXd& b2() const { return b2_; }

  /// Action values at state s.
  std::vector<double> action_values(StateIndex s) const;

  /// All parameters as one vector: w1, b1, w2, b2, each column-major.
  Eigen::VectorXd flatten() const;
  void assign_flat(const Eigen::VectorXd& flat);

  /// this += scale * other (same shapes).
  void add_scaled(const QNetwork& other, double scale);
  void set_zero();

  bool all_finite() const;
  friend bool operator==(const QNetwork& x, const QNetwork& y);

 private:
  Eigen::MatrixXd w1_;  // H x S
  Eigen::VectorXd b1_;  // H
  Eigen::MatrixXd w2_;  // A x H
  Eigen::VectorXd b2_;  // A
};

struct NetworkDims {
  std::size_t num_states;
  std::size_t hidden;
  std::size_t num_actions;
};

/// Draws parameters per `spec` using spec.seed. Throws std::invalid_argument
/// for specs whose output heads are not exchangeable.
QNetwork init_network(const InitSpec& spec, const NetworkDims& dims);

/// Same, without the exchangeability check. For constructing counterexamples.
QNetwork init_network_unchecked(const InitSpec& spec, const NetworkDims& dims);

std::vector<double> forward(const QNetwork& params, StateIndex s);

/// TD targets, treated as constants by the gradient. Single-Q:
/// r + gamma * max_a Q(s', a). With `evaluator`: r + gamma * Q_eval(s', argmax_a Q(s', a)).
std::vector<double> td_targets(const QNetwork& params, const Batch& batch, double gamma,
                               const QNetwork* evaluator = nullptr);

/// (1 / 2B) * sum_k (y_k - Q(s_k, a_k))^2.
double squared_td_loss(const QNetwork& params, const Batch& batch,
                       const std::vector<double>& targets);

/// Gradient of squared_td_loss with respect to every parameter.
QNetwork squared_td_loss_gradient(const QNetwork& params, const Batch& batch,
                                  const std::vector<double>& targets);

/// One semi-gradient step: params -= alpha * grad. Returns the batch-mean TD
/// measured before the step. Throws on an empty batch.
double td_gradient_step(QNetwork& params, const Batch& batch, double gamma, double alpha,
                        const QNetwork* evaluator = nullptr);

}  // namespace coact
