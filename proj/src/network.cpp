#include "coact/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coact/action_values.hpp"

namespace coact {

bool InitSpec::exchangeable() const {
  if (head_offsets.empty()) return true;
  return std::all_of(head_offsets.begin(), head_offsets.end(),
                     [&](double v) { return v == head_offsets.front(); });
}

void InitSpec::validate() const {
  for (double s : {hidden_scale, output_scale, bias_scale})
    if (!std::isfinite(s) || s < 0.0) throw std::invalid_argument("InitSpec: scales must be >= 0");
  for (double v : head_offsets)
    if (!std::isfinite(v)) throw std::invalid_argument("InitSpec: non-finite head offset");
}

double draw_init(InitFamily family, double scale, Rng& rng) {
  if (scale == 0.0) return 0.0;
  if (family == InitFamily::Normal) return std::normal_distribution<double>(0.0, scale)(rng);
  return std::uniform_real_distribution<double>(-scale, scale)(rng);
}

QNetwork::QNetwork(std::size_t num_states, std::size_t hidden, std::size_t num_actions)
    : w1_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(hidden),
                                static_cast<Eigen::Index>(num_states))),
      b1_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(hidden))),
      w2_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(num_actions),
                                static_cast<Eigen::Index>(hidden))),
      b2_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_actions))) {
  if (num_states == 0 || hidden == 0 || num_actions == 0)
    throw std::invalid_argument("QNetwork: dimensions must be positive");
}

std::size_t QNetwork::num_parameters() const noexcept {
  return static_cast<std::size_t>(w1_.size() + b1_.size() + w2_.size() + b2_.size());
}

std::vector<double> QNetwork::action_values(StateIndex s) const {
  const Eigen::VectorXd h = (w1_.col(static_cast<Eigen::Index>(s)) + b1_).cwiseMax(0.0);
  const Eigen::VectorXd out = w2_ * h + b2_;
  return {out.data(), out.data() + out.size()};
}

Eigen::VectorXd QNetwork::flatten() const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(num_parameters()));
  Eigen::Index k = 0;
  flat.segment(k, w1_.size()) = w1_.reshaped();
  k += w1_.size();
  flat.segment(k, b1_.size()) = b1_;
  k += b1_.size();
  flat.segment(k, w2_.size()) = w2_.reshaped();
  k += w2_.size();
  flat.segment(k, b2_.size()) = b2_;
  return flat;
}

void QNetwork::assign_flat(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != num_parameters())
    throw std::invalid_argument("QNetwork: flat parameter vector has wrong size");
  Eigen::Index k = 0;
  w1_.reshaped() = flat.segment(k, w1_.size());
  k += w1_.size();
  b1_ = flat.segment(k, b1_.size());
  k += b1_.size();
  w2_.reshaped() = flat.segment(k, w2_.size());
  k += w2_.size();
  b2_ = flat.segment(k, b2_.size());
}

void QNetwork::add_scaled(const QNetwork& other, double scale) {
  w1_ += scale * other.w1_;
  b1_ += scale * other.b1_;
  w2_ += scale * other.w2_;
  b2_ += scale * other.b2_;
}

void QNetwork::set_zero() {
  w1_.setZero();
  b1_.setZero();
  w2_.setZero();
  b2_.setZero();
}

bool QNetwork::all_finite() const {
  return w1_.allFinite() && b1_.allFinite() && w2_.allFinite() && b2_.allFinite();
}

bool operator==(const QNetwork& x, const QNetwork& y) {
  auto same = [](const auto& a, const auto& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
  };
  return same(x.w1_, y.w1_) && same(x.b1_, y.b1_) && same(x.w2_, y.w2_) && same(x.b2_, y.b2_);
}

QNetwork init_network_unchecked(const InitSpec& spec, const NetworkDims& dims) {
  spec.validate();
  if (!spec.head_offsets.empty() && spec.head_offsets.size() != dims.num_actions)
    throw std::invalid_argument("InitSpec: one head offset per action required");
  QNetwork net(dims.num_states, dims.hidden, dims.num_actions);
  Rng rng(spec.seed);
  for (Eigen::Index j = 0; j < net.w1().cols(); ++j)
    for (Eigen::Index i = 0; i < net.w1().rows(); ++i)
      net.w1()(i, j) = draw_init(spec.family, spec.hidden_scale, rng);
  for (Eigen::Index i = 0; i < net.b1().size(); ++i)
    net.b1()(i) = draw_init(spec.family, spec.bias_scale, rng);
  // Head rows are drawn i.i.d. one after another, so any permutation of the
  // rows has the same joint distribution.
  for (Eigen::Index a = 0; a < net.w2().rows(); ++a)
    for (Eigen::Index i = 0; i < net.w2().cols(); ++i)
      net.w2()(a, i) = draw_init(spec.family, spec.output_scale, rng);
  for (Eigen::Index a = 0; a < net.b2().size(); ++a) {
    net.b2()(a) = draw_init(spec.family, spec.bias_scale, rng);
    if (!spec.head_offsets.empty()) net.b2()(a) += spec.head_offsets[static_cast<std::size_t>(a)];
  }
  return net;
}

QNetwork init_network(const InitSpec& spec, const NetworkDims& dims) {
  if (!spec.exchangeable())
    throw std::invalid_argument("init_network: output heads must be exchangeable");
  return init_network_unchecked(spec, dims);
}

std::vector<double> forward(const QNetwork& params, StateIndex s) {
  if (s >= params.num_states()) throw std::invalid_argument("forward: state out of range");
  return params.action_values(s);
}

std::vector<double> td_targets(const QNetwork& params, const Batch& batch, double gamma,
                               const QNetwork* evaluator) {
  std::vector<double> targets;
  targets.reserve(batch.size());
  for (const Transition& t : batch) {
    const auto next = params.action_values(t.s_next);
    double bootstrap;
    if (evaluator) {
      bootstrap = evaluator->action_values(t.s_next)[argmax_action(next)];
    } else {
      bootstrap = max_value(next);
    }
    targets.push_back(t.r + gamma * bootstrap);
  }
  return targets;
}

double squared_td_loss(const QNetwork& params, const Batch& batch,
                       const std::vector<double>& targets) {
  double loss = 0.0;
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const double err = targets[k] - params.action_values(batch[k].s)[batch[k].a];
    loss += err * err;
  }
  return loss / (2.0 * static_cast<double>(batch.size()));
}

QNetwork squared_td_loss_gradient(const QNetwork& params, const Batch& batch,
                                  const std::vector<double>& targets) {
  if (batch.empty()) throw std::invalid_argument("squared_td_loss_gradient: empty batch");
  if (targets.size() != batch.size())
    throw std::invalid_argument("squared_td_loss_gradient: one target per transition required");
  QNetwork grad(params.num_states(), params.hidden(), params.num_actions());
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const auto s = static_cast<Eigen::Index>(batch[k].s);
    const auto a = static_cast<Eigen::Index>(batch[k].a);
    const Eigen::VectorXd pre = params.w1().col(s) + params.b1();
    const Eigen::VectorXd h = pre.cwiseMax(0.0);
    const double q = params.w2().row(a).dot(h) + params.b2()(a);
    // dL/dq for this element.
    const double g = -(targets[k] - q) * inv_b;
    grad.w2().row(a) += g * h.transpose();
    grad.b2()(a) += g;
    const Eigen::VectorXd dpre =
        (g * params.w2().row(a).transpose()).cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
    grad.w1().col(s) += dpre;
    grad.b1() += dpre;
  }
  return grad;
}

double td_gradient_step(QNetwork& params, const Batch& batch, double gamma, double alpha,
                        const QNetwork* evaluator) {
  if (batch.empty()) throw std::invalid_argument("td_gradient_step: empty batch");
  const auto targets = td_targets(params, batch, gamma, evaluator);
  double td_sum = 0.0;
  for (std::size_t k = 0; k < batch.size(); ++k)
    td_sum += targets[k] - params.action_values(batch[k].s)[batch[k].a];
  const QNetwork grad = squared_td_loss_gradient(params, batch, targets);
  params.add_scaled(grad, -alpha);
  return td_sum / static_cast<double>(batch.size());
}

}  // namespace coact
