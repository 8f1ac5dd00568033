#include "lobench/mlp.hpp"

#include <cmath>

#include "lobench/errors.hpp"

namespace lobench {

Mlp::Mlp(const std::vector<int>& sizes, std::uint64_t seed) {
  if (sizes.size() < 2) throw_error(ErrorCode::invalid_argument, "network needs >= 2 layer sizes");
  for (int s : sizes)
    if (s < 1) throw_error(ErrorCode::invalid_argument, "layer sizes must be positive");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  layers_.resize(sizes.size() - 1);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    Layer& layer = layers_[l];
    const int fan_in = sizes[l];
    const int fan_out = sizes[l + 1];
    const double scale = std::sqrt(2.0 / static_cast<double>(fan_in));
    layer.w.resize(fan_in, fan_out);
    for (int i = 0; i < fan_in; ++i)
      for (int j = 0; j < fan_out; ++j) layer.w(i, j) = scale * normal(rng.engine());
    layer.b = Eigen::RowVectorXd::Zero(fan_out);
    layer.relu = l + 2 < sizes.size();  // hidden layers only
  }
}

std::vector<int> Mlp::sizes() const {
  std::vector<int> s;
  if (layers_.empty()) return s;
  s.push_back(static_cast<int>(layers_.front().w.rows()));
  for (const Layer& l : layers_) s.push_back(static_cast<int>(l.w.cols()));
  return s;
}

std::size_t Mlp::parameter_count() const {
  std::size_t count = 0;
  for (const Layer& l : layers_)
    count += static_cast<std::size_t>(l.w.size()) + static_cast<std::size_t>(l.b.size());
  return count;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd a = x;
  for (const Layer& l : layers_) {
    a = (a * l.w).rowwise() + l.b;
    if (l.relu) a = a.cwiseMax(0.0);
  }
  return a;
}

const Eigen::MatrixXd& Mlp::forward(const Eigen::MatrixXd& x, Workspace& ws) const {
  ws.acts.resize(layers_.size() + 1);
  ws.acts[0] = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    ws.acts[l + 1] = (ws.acts[l] * layer.w).rowwise() + layer.b;
    if (layer.relu) ws.acts[l + 1] = ws.acts[l + 1].cwiseMax(0.0);
  }
  return ws.acts.back();
}

void Mlp::zero_like(Gradients& grads) const {
  grads.w.resize(layers_.size());
  grads.b.resize(layers_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    grads.w[l] = Eigen::MatrixXd::Zero(layers_[l].w.rows(), layers_[l].w.cols());
    grads.b[l] = Eigen::RowVectorXd::Zero(layers_[l].b.size());
  }
}

void Mlp::backward(const Workspace& ws, const Eigen::MatrixXd& dy, Gradients& grads) const {
  if (ws.acts.size() != layers_.size() + 1)
    throw_error(ErrorCode::invalid_argument, "workspace does not match a forward pass");
  grads.w.resize(layers_.size());
  grads.b.resize(layers_.size());
  Eigen::MatrixXd delta = dy;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Layer& layer = layers_[l];
    if (layer.relu)
      delta = delta.cwiseProduct((ws.acts[l + 1].array() > 0.0).cast<double>().matrix());
    grads.w[l] = ws.acts[l].transpose() * delta;
    grads.b[l] = delta.colwise().sum();
    if (l > 0) delta = delta * layer.w.transpose();
  }
}

AdamOptimizer::AdamOptimizer(double learning_rate, double beta1, double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {}

void AdamOptimizer::step(Mlp& net, const Mlp::Gradients& grads) {
  if (m_.w.empty()) {
    net.zero_like(m_);
    net.zero_like(v_);
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto& layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    m_.w[l] = beta1_ * m_.w[l] + (1.0 - beta1_) * grads.w[l];
    v_.w[l] = beta2_ * v_.w[l] + (1.0 - beta2_) * grads.w[l].cwiseProduct(grads.w[l]);
    layers[l].w -=
        (lr_ * (m_.w[l] / c1).array() / ((v_.w[l] / c2).array().sqrt() + eps_)).matrix();
    m_.b[l] = beta1_ * m_.b[l] + (1.0 - beta1_) * grads.b[l];
    v_.b[l] = beta2_ * v_.b[l] + (1.0 - beta2_) * grads.b[l].cwiseProduct(grads.b[l]);
    layers[l].b -=
        (lr_ * (m_.b[l] / c1).array() / ((v_.b[l] / c2).array().sqrt() + eps_)).matrix();
  }
}

}  // namespace lobench
