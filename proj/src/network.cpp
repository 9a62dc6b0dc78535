#include "beampinn/network.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "beampinn/rng.hpp"

namespace beampinn {

void Architecture::validate() const {
  if (hidden_layers < 1) throw ConfigError("hidden_layers must be >= 1");
  if (neurons < 1) throw ConfigError("neurons per layer must be >= 1");
  if (inputs != 1 && inputs != 2) throw ConfigError("network inputs must be 1 or 2");
}

std::vector<int> Architecture::layer_sizes() const {
  std::vector<int> sizes{inputs};
  for (int i = 0; i < hidden_layers; ++i) sizes.push_back(neurons);
  sizes.push_back(1);
  return sizes;
}

std::size_t Architecture::parameter_count() const {
  const std::vector<int> sizes = layer_sizes();
  std::size_t count = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
    count += static_cast<std::size_t>(sizes[l] + 1) * static_cast<std::size_t>(sizes[l + 1]);
  return count;
}

MlpParams::MlpParams(Architecture arch) : arch_(arch) {
  arch_.validate();
  data_.assign(arch_.parameter_count(), 0.0);
  const std::vector<int> sizes = arch_.layer_sizes();
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    offsets_.push_back(off);
    off += static_cast<std::size_t>(sizes[l] + 1) * static_cast<std::size_t>(sizes[l + 1]);
  }
}

MlpParams MlpParams::from_flat(Architecture arch, std::span<const double> flat, bool has_load) {
  MlpParams p(arch);
  const std::size_t want = p.data_.size() + (has_load ? 1 : 0);
  if (flat.size() != want)
    throw UsageError("flat parameter vector has " + std::to_string(flat.size()) +
                     " entries, architecture needs " + std::to_string(want));
  p.data_.assign(flat.begin(), flat.end());
  p.has_load_ = has_load;
  return p;
}

Eigen::Map<const RowMatrix> MlpParams::weights(int layer) const {
  const std::vector<int> sizes = arch_.layer_sizes();
  const auto l = static_cast<std::size_t>(layer);
  return {data_.data() + offsets_.at(l), sizes[l + 1], sizes[l]};
}

Eigen::Map<RowMatrix> MlpParams::weights(int layer) {
  const std::vector<int> sizes = arch_.layer_sizes();
  const auto l = static_cast<std::size_t>(layer);
  return {data_.data() + offsets_.at(l), sizes[l + 1], sizes[l]};
}

std::size_t MlpParams::bias_offset(int layer) const {
  const std::vector<int> sizes = arch_.layer_sizes();
  const auto l = static_cast<std::size_t>(layer);
  return offsets_.at(l) + static_cast<std::size_t>(sizes[l]) * static_cast<std::size_t>(sizes[l + 1]);
}

Eigen::Map<const Eigen::VectorXd> MlpParams::bias(int layer) const {
  const std::vector<int> sizes = arch_.layer_sizes();
  return {data_.data() + bias_offset(layer), sizes[static_cast<std::size_t>(layer) + 1]};
}

Eigen::Map<Eigen::VectorXd> MlpParams::bias(int layer) {
  const std::vector<int> sizes = arch_.layer_sizes();
  return {data_.data() + bias_offset(layer), sizes[static_cast<std::size_t>(layer) + 1]};
}

double MlpParams::load() const {
  if (!has_load_) throw UsageError("parameters carry no trainable load");
  return data_.back();
}

void MlpParams::set_load(double value) {
  if (!has_load_) throw UsageError("parameters carry no trainable load");
  data_.back() = value;
}

void MlpParams::enable_load(double initial) {
  if (has_load_) {
    data_.back() = initial;
    return;
  }
  data_.push_back(initial);
  has_load_ = true;
}

std::size_t MlpParams::load_index() const {
  if (!has_load_) throw UsageError("parameters carry no trainable load");
  return data_.size() - 1;
}

MlpParams init_params(const Architecture& arch, std::uint64_t seed) {
  MlpParams params(arch);
  const std::vector<int> sizes = arch.layer_sizes();
  for (int l = 0; l < params.layer_count(); ++l) {
    const int fan_in = sizes[static_cast<std::size_t>(l)];
    const int fan_out = sizes[static_cast<std::size_t>(l) + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    CounterRng rng(seed, streams::kInitWeights + static_cast<std::uint64_t>(l));
    auto w = params.weights(l);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = rng.uniform(-bound, bound);
  }
  return params;
}

double forward(const MlpParams& params, double x, double t) {
  const auto theta = params.flat().first(params.network_size());
  return forward_flat<double, double>(params.arch(), theta, x, t);
}

Jet<double> forward(const MlpParams& params, const Jet<double>& x, const Jet<double>& t) {
  if (x.order() != t.order()) throw UsageError("forward: x and t jets differ in order");
  const auto theta = params.flat().first(params.network_size());
  return forward_flat<double, Jet<double>>(params.arch(), theta, x, t);
}

DerivBundle forward_with_derivs(const MlpParams& params, double x, double t) {
  if (params.arch().inputs != 2) throw UsageError("forward_with_derivs needs a 2-input network");
  const Jet<double> ux = forward(params, Jet<double>::variable(x, 4), Jet<double>::constant(t, 4));
  const Jet<double> ut = forward(params, Jet<double>::constant(x, 2), Jet<double>::variable(t, 2));
  DerivBundle d;
  d.u = ux.value();
  d.u_x = ux.derivative(1);
  d.u_xx = ux.derivative(2);
  d.u_xxxx = ux.derivative(4);
  d.u_t = ut.derivative(1);
  d.u_tt = ut.derivative(2);
  for (double v : {d.u, d.u_x, d.u_xx, d.u_xxxx, d.u_t, d.u_tt, ut.value()})
    if (!std::isfinite(v)) throw TrainingError("non-finite network derivative");
  return d;
}

// ---------------------------------------------------------------------------
// Batched jet pass

void JetBatch::forward(const MlpParams& params, std::span<const double> xs,
                       std::span<const double> ts, Axis axis, int order) {
  const Architecture& arch = params.arch();
  if (order < 0 || order > taylor::kMaxOrder) throw UsageError("batch jet order out of range");
  if (arch.inputs == 2 && xs.size() != ts.size()) throw UsageError("x and t batch sizes differ");
  if (arch.inputs == 1 && axis == Axis::kT) throw UsageError("1-input network has no t axis");
  axis_ = axis;
  order_ = order;
  batch_ = static_cast<Eigen::Index>(xs.size());

  input_.resize(arch.inputs, batch_);
  for (Eigen::Index i = 0; i < batch_; ++i) {
    input_(0, i) = xs[static_cast<std::size_t>(i)];
    if (arch.inputs == 2) input_(1, i) = ts[static_cast<std::size_t>(i)];
  }

  hidden_.assign(static_cast<std::size_t>(arch.hidden_layers), Layer{});
  const int n_layers = params.layer_count();
  for (int l = 0; l < n_layers; ++l) {
    const auto w = params.weights(l);
    const auto b = params.bias(l);
    taylor::Coeffs<Eigen::ArrayXXd> s;
    if (l == 0) {
      s[0] = ((w * input_).colwise() + b).array();
      if (order >= 1)
        s[1] = w.col(static_cast<Eigen::Index>(axis)).replicate(1, batch_).array();
      for (int k = 2; k <= order; ++k) s[static_cast<std::size_t>(k)].setZero(w.rows(), batch_);
    } else {
      const Layer& prev = hidden_[static_cast<std::size_t>(l - 1)];
      for (int k = 0; k <= order; ++k)
        s[static_cast<std::size_t>(k)] = (w * prev.u[static_cast<std::size_t>(k)].matrix()).array();
      s[0].colwise() += b.array();
    }
    if (l + 1 < n_layers) {
      Layer& layer = hidden_[static_cast<std::size_t>(l)];
      layer.s = std::move(s);
      taylor::tanh_forward(layer.s.data(), layer.u.data(), layer.w.data(), order);
    } else {
      for (int k = 0; k <= order; ++k)
        out_[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k)].row(0).transpose();
    }
  }
}

void JetBatch::backward(const MlpParams& params, const taylor::Coeffs<Eigen::ArrayXd>& out_adj,
                        std::span<double> grad) const {
  const int n_layers = params.layer_count();
  const std::vector<int> sizes = params.arch().layer_sizes();
  auto grad_w = [&](int l) {
    const auto ul = static_cast<std::size_t>(l);
    return Eigen::Map<RowMatrix>(grad.data() + params.weight_offset(l), sizes[ul + 1], sizes[ul]);
  };
  auto grad_b = [&](int l) {
    return Eigen::Map<Eigen::VectorXd>(grad.data() + params.bias_offset(l),
                                       sizes[static_cast<std::size_t>(l) + 1]);
  };

  // Output layer: s_out[k] = W_L u[k] (+ b for k = 0).
  taylor::Coeffs<Eigen::ArrayXXd> ub;
  {
    const int l = n_layers - 1;
    const Layer& last = hidden_.back();
    auto gw = grad_w(l);
    const auto w = params.weights(l);
    for (int k = 0; k <= order_; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      const Eigen::RowVectorXd adj = out_adj[uk].matrix().transpose();
      gw.noalias() += adj * last.u[uk].matrix().transpose();
      ub[uk] = (w.transpose() * adj).array();
    }
    grad_b(l)(0) += out_adj[0].sum();
  }

  for (int l = n_layers - 2; l >= 0; --l) {
    const Layer& layer = hidden_[static_cast<std::size_t>(l)];
    taylor::Coeffs<Eigen::ArrayXXd> sb;
    for (int k = 0; k <= order_; ++k) sb[static_cast<std::size_t>(k)].setZero(layer.s[0].rows(), batch_);
    taylor::tanh_pullback(layer.s.data(), layer.u.data(), layer.w.data(), ub.data(), sb.data(), order_);

    auto gw = grad_w(l);
    grad_b(l) += sb[0].rowwise().sum().matrix();
    if (l == 0) {
      gw.noalias() += sb[0].matrix() * input_.transpose();
      if (order_ >= 1) gw.col(static_cast<Eigen::Index>(axis_)) += sb[1].rowwise().sum().matrix();
    } else {
      const Layer& prev = hidden_[static_cast<std::size_t>(l - 1)];
      const auto w = params.weights(l);
      for (int k = 0; k <= order_; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        gw.noalias() += sb[uk].matrix() * prev.u[uk].matrix().transpose();
        ub[uk] = (w.transpose() * sb[uk].matrix()).array();
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

constexpr char kMagic[4] = {'B', 'P', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put_le(std::ostream& os, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw IoError("truncated checkpoint");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void save_checkpoint(const std::string& path, const MlpParams& params) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open checkpoint for writing: " + path);
  os.write(kMagic, 4);
  put_le<std::uint32_t>(os, kVersion);
  const std::vector<int> sizes = params.arch().layer_sizes();
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(sizes.size()));
  for (int s : sizes) put_le<std::uint32_t>(os, static_cast<std::uint32_t>(s));
  put_le<std::uint32_t>(os, params.has_load() ? 1U : 0U);
  for (double v : params.flat()) put_le<double>(os, v);
  if (!os) throw IoError("failed writing checkpoint: " + path);
}

MlpParams load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint: " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("not a checkpoint file: " + path);
  if (get_le<std::uint32_t>(is) != kVersion) throw IoError("unsupported checkpoint version");
  const auto n = get_le<std::uint32_t>(is);
  if (n < 3) throw IoError("checkpoint shape header too short");
  std::vector<int> sizes;
  for (std::uint32_t i = 0; i < n; ++i) sizes.push_back(static_cast<int>(get_le<std::uint32_t>(is)));
  Architecture arch;
  arch.inputs = sizes.front();
  arch.hidden_layers = static_cast<int>(n) - 2;
  arch.neurons = sizes[1];
  if (sizes.back() != 1 || arch.inputs < 1 || arch.neurons < 1 || arch.layer_sizes() != sizes)
    throw IoError("checkpoint layer sizes do not describe a uniform-width network");
  const bool has_load = get_le<std::uint32_t>(is) != 0;
  std::vector<double> flat(arch.parameter_count() + (has_load ? 1 : 0));
  for (double& v : flat) v = get_le<double>(is);
  if (is.peek() != std::char_traits<char>::eof()) throw IoError("trailing bytes in checkpoint: " + path);
  return MlpParams::from_flat(arch, flat, has_load);
}

}  // namespace beampinn
