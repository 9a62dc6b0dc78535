#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "beampinn/errors.hpp"
#include "beampinn/jet.hpp"
#include "beampinn/taylor.hpp"

namespace beampinn {

/// Fully connected tanh network shape. Output is always a single scalar.
struct Architecture {
  int hidden_layers = 1;
  int neurons = 20;
  int inputs = 2;  // (x, t); the delta-fit regression uses 1

  void validate() const;

  /// inputs, neurons x hidden_layers, 1
  std::vector<int> layer_sizes() const;

  /// Weights and biases only (the trainable load is extra).
  std::size_t parameter_count() const;

  bool operator==(const Architecture&) const = default;
};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Network parameters stored as one flat vector so the optimizer and the
/// gradient share a single layout: per layer, the row-major weight matrix
/// (out x in) followed by the bias vector; the optional trainable load is
/// the last entry.
class MlpParams {
 public:
  explicit MlpParams(Architecture arch);

  static MlpParams from_flat(Architecture arch, std::span<const double> flat, bool has_load);

  const Architecture& arch() const noexcept { return arch_; }
  int layer_count() const noexcept { return static_cast<int>(offsets_.size()); }

  std::span<const double> flat() const noexcept { return data_; }
  std::span<double> flat() noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t network_size() const noexcept { return arch_.parameter_count(); }

  Eigen::Map<const RowMatrix> weights(int layer) const;
  Eigen::Map<RowMatrix> weights(int layer);
  Eigen::Map<const Eigen::VectorXd> bias(int layer) const;
  Eigen::Map<Eigen::VectorXd> bias(int layer);

  std::size_t weight_offset(int layer) const { return offsets_.at(static_cast<std::size_t>(layer)); }
  std::size_t bias_offset(int layer) const;

  bool has_load() const noexcept { return has_load_; }
  double load() const;
  void set_load(double value);
  /// Appends the trainable load scalar (inverse mode).
  void enable_load(double initial);
  std::size_t load_index() const;

  bool operator==(const MlpParams& other) const {
    return arch_ == other.arch_ && has_load_ == other.has_load_ && data_ == other.data_;
  }

 private:
  Architecture arch_;
  std::vector<double> data_;
  std::vector<std::size_t> offsets_;
  bool has_load_ = false;
};

/// Xavier/Glorot-uniform weights, zero biases, counter-based draws keyed by seed.
MlpParams init_params(const Architecture& arch, std::uint64_t seed);

/// Network evaluation on a flat parameter span. P is the parameter scalar
/// (double or Var) and S the input kind (P or Jet<P>).
template <class P, class S>
S forward_flat(const Architecture& arch, std::span<const P> theta, const S& x, const S& t) {
  using std::tanh;
  const std::vector<int> sizes = arch.layer_sizes();
  std::vector<S> act;
  act.push_back(x);
  if (arch.inputs == 2) act.push_back(t);
  std::size_t off = 0;
  const std::size_t n_layers = sizes.size() - 1;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const int in = sizes[l];
    const int out = sizes[l + 1];
    const std::size_t b_off = off + static_cast<std::size_t>(in) * static_cast<std::size_t>(out);
    std::vector<S> next;
    next.reserve(static_cast<std::size_t>(out));
    for (int i = 0; i < out; ++i) {
      const std::size_t row = off + static_cast<std::size_t>(i) * static_cast<std::size_t>(in);
      S z = act[0] * theta[row];
      for (int j = 1; j < in; ++j) z = z + act[static_cast<std::size_t>(j)] * theta[row + static_cast<std::size_t>(j)];
      z = z + theta[b_off + static_cast<std::size_t>(i)];
      next.push_back(l + 1 < n_layers ? S(tanh(z)) : z);
    }
    act = std::move(next);
    off = b_off + static_cast<std::size_t>(out);
  }
  return act[0];
}

double forward(const MlpParams& params, double x, double t = 0.0);
Jet<double> forward(const MlpParams& params, const Jet<double>& x, const Jet<double>& t);

/// All input derivatives the beam equation and its side conditions use.
struct DerivBundle {
  double u = 0.0;
  double u_t = 0.0;
  double u_tt = 0.0;
  double u_x = 0.0;
  double u_xx = 0.0;
  double u_xxxx = 0.0;
};

/// Order-4 jet along x (t fixed) and order-2 jet along t (x fixed).
DerivBundle forward_with_derivs(const MlpParams& params, double x, double t);

enum class Axis { kX = 0, kT = 1 };

/// Batched jet evaluation with a hand-written reverse pass.
///
/// forward() seeds every point's jet along one input axis up to `order`
/// (0..4) and keeps the per-layer Taylor coefficients; backward() takes
/// adjoints of the output coefficients and accumulates the parameter
/// gradient. Results are identical to forward_flat on Jet<double> and the
/// reverse pass matches the Var tape route.
class JetBatch {
 public:
  void forward(const MlpParams& params, std::span<const double> xs, std::span<const double> ts,
               Axis axis, int order);

  int order() const noexcept { return order_; }
  Eigen::Index batch() const noexcept { return batch_; }

  /// Output Taylor coefficient k for every point.
  const Eigen::ArrayXd& output(int k) const { return out_[static_cast<std::size_t>(k)]; }

  /// Accumulates sum_k <out_adj[k], d out[k] / d theta> into grad[0..network_size).
  void backward(const MlpParams& params, const taylor::Coeffs<Eigen::ArrayXd>& out_adj,
                std::span<double> grad) const;

 private:
  struct Layer {
    taylor::Coeffs<Eigen::ArrayXXd> s;  // pre-activation
    taylor::Coeffs<Eigen::ArrayXXd> u;  // tanh(s)
    taylor::Coeffs<Eigen::ArrayXXd> w;  // 1 - u^2
  };

  Axis axis_ = Axis::kX;
  int order_ = 0;
  Eigen::Index batch_ = 0;
  Eigen::MatrixXd input_;  // inputs x batch
  std::vector<Layer> hidden_;
  taylor::Coeffs<Eigen::ArrayXd> out_;
};

/// Binary checkpoint (see docs/checkpoint_format.md).
void save_checkpoint(const std::string& path, const MlpParams& params);
MlpParams load_checkpoint(const std::string& path);

}  // namespace beampinn
