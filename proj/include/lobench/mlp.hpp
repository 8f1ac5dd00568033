#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lobench/rng.hpp"

namespace lobench {

/// Fully connected feed-forward network in double precision: rectifier on the
/// hidden layers, identity on the output layer. Inputs and outputs are rows.
class Mlp {
 public:
  struct Layer {
    Eigen::MatrixXd w;     // fan_in x fan_out
    Eigen::RowVectorXd b;  // fan_out
    bool relu = false;
  };

  struct Workspace {
    std::vector<Eigen::MatrixXd> acts;  // acts[0] = input, acts[i] = output of layer i
  };

  struct Gradients {
    std::vector<Eigen::MatrixXd> w;
    std::vector<Eigen::RowVectorXd> b;
  };

  Mlp() = default;

  /// He-initialized network over the given layer widths (at least two).
  Mlp(const std::vector<int>& sizes, std::uint64_t seed);

  int input_size() const { return layers_.empty() ? 0 : static_cast<int>(layers_.front().w.rows()); }
  int output_size() const { return layers_.empty() ? 0 : static_cast<int>(layers_.back().w.cols()); }
  std::vector<int> sizes() const;
  std::size_t parameter_count() const;

  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& layers() { return layers_; }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;

  /// Forward pass keeping activations for backward(); returns the output.
  const Eigen::MatrixXd& forward(const Eigen::MatrixXd& x, Workspace& ws) const;

  /// Exact gradients of a batch loss whose per-output derivative is dy
  /// (same shape as the output of the stored forward pass).
  void backward(const Workspace& ws, const Eigen::MatrixXd& dy, Gradients& grads) const;

  void zero_like(Gradients& grads) const;

 private:
  std::vector<Layer> layers_;
};

/// Adaptive-moment gradient descent with bias correction.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(double learning_rate = 1e-3, double beta1 = 0.9, double beta2 = 0.999,
                         double epsilon = 1e-8);

  void step(Mlp& net, const Mlp::Gradients& grads);

  double learning_rate() const { return lr_; }
  long long step_count() const { return t_; }

  // Serialization access: the raw moment buffers and step counter.
  Mlp::Gradients& first_moment() { return m_; }
  Mlp::Gradients& second_moment() { return v_; }
  const Mlp::Gradients& first_moment() const { return m_; }
  const Mlp::Gradients& second_moment() const { return v_; }
  long long& step_count_mutable() { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  long long t_ = 0;
  Mlp::Gradients m_, v_;  // lazily shaped on the first step
};

}  // namespace lobench
