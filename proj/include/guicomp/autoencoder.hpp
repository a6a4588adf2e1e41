#pragma once

// Stacked autoencoder used to embed wireframe rasters. Default geometry is
// 13500 -> 2048 -> 256 -> 64 with a mirrored decoder; hidden layers use ReLU,
// the 64-d code and the reconstruction are linear. Trained end-to-end on
// per-element MSE with Adadelta.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "guicomp/binio.hpp"
#include "guicomp/errors.hpp"
#include "guicomp/raster.hpp"

namespace guicomp {

inline constexpr std::size_t kEmbeddingDim = 64;

struct EmbeddingVector {
  std::vector<float> values = std::vector<float>(kEmbeddingDim, 0.0f);

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

inline const std::vector<std::size_t>& default_encoder_dims() {
  static const std::vector<std::size_t> dims{kRasterSize, 2048, 256, kEmbeddingDim};
  return dims;
}

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using RowVec = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

// y = x * weights + bias, with weights stored (inputs x outputs).
template <typename Scalar>
struct DenseLayer {
  RowMatrix<Scalar> weights;
  RowVec<Scalar> bias;

  std::size_t inputs() const { return static_cast<std::size_t>(weights.rows()); }
  std::size_t outputs() const { return static_cast<std::size_t>(weights.cols()); }
};

template <typename Scalar = float>
struct AutoencoderWeights {
  std::vector<DenseLayer<Scalar>> layers;  // encoder layers, then decoder layers
  std::uint64_t seed = 0;
  std::uint32_t epochs_trained = 0;
  double final_train_loss = std::numeric_limits<double>::quiet_NaN();
  double final_val_loss = std::numeric_limits<double>::quiet_NaN();

  std::size_t encoder_depth() const { return layers.size() / 2; }
  std::size_t input_dim() const { return layers.front().inputs(); }
  std::size_t embedding_dim() const { return layers[encoder_depth() - 1].outputs(); }

  // The code layer and the reconstruction layer are linear.
  bool relu_after(std::size_t layer) const {
    return layer + 1 != encoder_depth() && layer + 1 != layers.size();
  }

  std::string layer_name(std::size_t layer) const {
    const bool enc = layer < encoder_depth();
    const std::size_t idx = enc ? layer + 1 : layer - encoder_depth() + 1;
    return std::string(enc ? "encoder" : "decoder") + " layer " + std::to_string(idx) + " (" +
           std::to_string(layers[layer].inputs()) + "->" +
           std::to_string(layers[layer].outputs()) + ")";
  }
};

namespace ae {

// Portable uniform in [0, 1) from a 64-bit engine.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

inline void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace ae

// Glorot-uniform weights and zero biases. `encoder_dims` lists the encoder
// widths from input to code; the decoder mirrors them.
template <typename Scalar = float>
AutoencoderWeights<Scalar> glorot_init(const std::vector<std::size_t>& encoder_dims,
                                       std::uint64_t seed) {
  if (encoder_dims.size() < 2) throw ArgumentError("autoencoder needs at least two widths");
  std::vector<std::size_t> chain = encoder_dims;
  chain.insert(chain.end(), encoder_dims.rbegin() + 1, encoder_dims.rend());
  std::mt19937_64 rng(seed);
  AutoencoderWeights<Scalar> w;
  w.seed = seed;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const auto in = chain[i], out = chain[i + 1];
    if (in == 0 || out == 0) throw ArgumentError("autoencoder widths must be positive");
    DenseLayer<Scalar> layer{RowMatrix<Scalar>(in, out), RowVec<Scalar>::Zero(out)};
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    Scalar* p = layer.weights.data();
    for (Eigen::Index k = 0; k < layer.weights.size(); ++k)
      p[k] = static_cast<Scalar>((2.0 * ae::unit_uniform(rng) - 1.0) * limit);
    w.layers.push_back(std::move(layer));
  }
  return w;
}

// Post-activation outputs of every layer for one batch.
template <typename Scalar>
struct ForwardTrace {
  std::vector<RowMatrix<Scalar>> outputs;

  const RowMatrix<Scalar>& embedding(const AutoencoderWeights<Scalar>& w) const {
    return outputs[w.encoder_depth() - 1];
  }
  const RowMatrix<Scalar>& reconstruction() const { return outputs.back(); }
};

template <typename Scalar>
ForwardTrace<Scalar> forward_batch(const RowMatrix<Scalar>& batch,
                                   const AutoencoderWeights<Scalar>& w,
                                   std::size_t stop_after = std::numeric_limits<std::size_t>::max(),
                                   bool check_finite = true) {
  if (static_cast<std::size_t>(batch.cols()) != w.input_dim())
    throw ArgumentError("forward: input width " + std::to_string(batch.cols()) +
                        " does not match the network (" + std::to_string(w.input_dim()) + ")");
  ForwardTrace<Scalar> t;
  const std::size_t n = std::min(stop_after, w.layers.size());
  t.outputs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& in = i == 0 ? batch : t.outputs.back();
    RowMatrix<Scalar> z = in * w.layers[i].weights;
    z.rowwise() += w.layers[i].bias;
    if (w.relu_after(i)) z = z.cwiseMax(Scalar(0));
    if (check_finite && !z.allFinite())
      throw NumericError("non-finite activation in " + w.layer_name(i));
    t.outputs.push_back(std::move(z));
  }
  return t;
}

struct AutoencoderOutput {
  EmbeddingVector embedding;
  std::vector<float> reconstruction;
};

template <typename Scalar>
RowMatrix<Scalar> raster_row(const RasterTensor& raster) {
  RowMatrix<Scalar> x(1, static_cast<Eigen::Index>(raster.values.size()));
  for (std::size_t i = 0; i < raster.values.size(); ++i) x(0, i) = static_cast<Scalar>(raster.values[i]);
  return x;
}

// Embedding (encoder output) and reconstruction (decoder output) of one raster.
inline AutoencoderOutput forward(const RasterTensor& raster, const AutoencoderWeights<float>& w) {
  const auto trace = forward_batch<float>(raster_row<float>(raster), w);
  AutoencoderOutput out;
  const auto& code = trace.embedding(w);
  out.embedding.values.assign(code.data(), code.data() + code.size());
  const auto& rec = trace.reconstruction();
  out.reconstruction.assign(rec.data(), rec.data() + rec.size());
  return out;
}

// Encoder-only pass over many rows.
template <typename Scalar>
RowMatrix<Scalar> encode_batch(const RowMatrix<Scalar>& batch, const AutoencoderWeights<Scalar>& w) {
  auto t = forward_batch<Scalar>(batch, w, w.encoder_depth());
  return std::move(t.outputs.back());
}

inline EmbeddingVector embed(const RasterTensor& raster, const AutoencoderWeights<float>& w) {
  const auto code = encode_batch<float>(raster_row<float>(raster), w);
  EmbeddingVector e;
  e.values.assign(code.data(), code.data() + code.size());
  return e;
}

template <typename Scalar>
struct LayerGradient {
  RowMatrix<Scalar> weights;
  RowVec<Scalar> bias;
};

template <typename Scalar>
Scalar mean_squared_error(const RowMatrix<Scalar>& a, const RowMatrix<Scalar>& b) {
  return (a - b).squaredNorm() / static_cast<Scalar>(a.size());
}

// Per-element MSE of reconstructing `batch`, with analytic gradients for
// every layer written to `grads` (resized as needed).
template <typename Scalar>
Scalar loss_and_gradients(const RowMatrix<Scalar>& batch, const AutoencoderWeights<Scalar>& w,
                          std::vector<LayerGradient<Scalar>>& grads) {
  const auto trace = forward_batch<Scalar>(batch, w, std::numeric_limits<std::size_t>::max(), false);
  const auto& y = trace.reconstruction();
  const Scalar loss = mean_squared_error<Scalar>(y, batch);

  grads.resize(w.layers.size());
  RowMatrix<Scalar> delta = (y - batch) * (Scalar(2) / static_cast<Scalar>(batch.size()));
  for (std::size_t i = w.layers.size(); i-- > 0;) {
    const auto& in = i == 0 ? batch : trace.outputs[i - 1];
    grads[i].weights.noalias() = in.transpose() * delta;
    grads[i].bias = delta.colwise().sum();
    if (i == 0) break;
    RowMatrix<Scalar> up = delta * w.layers[i].weights.transpose();
    if (w.relu_after(i - 1))
      up = up.cwiseProduct((in.array() > Scalar(0)).template cast<Scalar>().matrix());
    delta = std::move(up);
  }
  return loss;
}

struct AdadeltaConfig {
  double rho = 0.95;
  double epsilon = 1e-6;
  double learning_rate = 1.0;
};

template <typename Scalar>
class Adadelta {
 public:
  Adadelta(const AutoencoderWeights<Scalar>& w, AdadeltaConfig cfg) : cfg_(cfg) {
    for (const auto& l : w.layers) {
      Slot s;
      s.grad_sq_w = RowMatrix<Scalar>::Zero(l.weights.rows(), l.weights.cols());
      s.step_sq_w = s.grad_sq_w;
      s.grad_sq_b = RowVec<Scalar>::Zero(l.bias.size());
      s.step_sq_b = s.grad_sq_b;
      slots_.push_back(std::move(s));
    }
  }

  void step(AutoencoderWeights<Scalar>& w, const std::vector<LayerGradient<Scalar>>& grads) {
    for (std::size_t i = 0; i < w.layers.size(); ++i) {
      update(w.layers[i].weights.data(), grads[i].weights.data(), slots_[i].grad_sq_w.data(),
             slots_[i].step_sq_w.data(), static_cast<std::size_t>(grads[i].weights.size()));
      update(w.layers[i].bias.data(), grads[i].bias.data(), slots_[i].grad_sq_b.data(),
             slots_[i].step_sq_b.data(), static_cast<std::size_t>(grads[i].bias.size()));
    }
  }

 private:
  struct Slot {
    RowMatrix<Scalar> grad_sq_w, step_sq_w;
    RowVec<Scalar> grad_sq_b, step_sq_b;
  };

  void update(Scalar* param, const Scalar* grad, Scalar* grad_sq, Scalar* step_sq,
              std::size_t n) const {
    const Scalar rho = static_cast<Scalar>(cfg_.rho);
    const Scalar one_minus = Scalar(1) - rho;
    const Scalar eps = static_cast<Scalar>(cfg_.epsilon);
    const Scalar lr = static_cast<Scalar>(cfg_.learning_rate);
    for (std::size_t k = 0; k < n; ++k) {
      const Scalar g = grad[k];
      grad_sq[k] = rho * grad_sq[k] + one_minus * g * g;
      const Scalar d = -std::sqrt(step_sq[k] + eps) / std::sqrt(grad_sq[k] + eps) * g;
      step_sq[k] = rho * step_sq[k] + one_minus * d * d;
      param[k] += lr * d;
    }
  }

  AdadeltaConfig cfg_;
  std::vector<Slot> slots_;
};

struct TrainConfig {
  std::size_t batch_size = 512;
  double validation_fraction = 0.1;
  std::size_t max_epochs = 100;
  std::uint64_t seed = 0;
  AdadeltaConfig optimizer;
  std::vector<std::size_t> encoder_dims = default_encoder_dims();

  void validate() const {
    if (batch_size < 1) throw ArgumentError("batch_size must be >= 1");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
      throw ArgumentError("validation_fraction must lie strictly between 0 and 1");
    if (max_epochs < 1) throw ArgumentError("max_epochs must be >= 1");
  }
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_mse = 0.0;
  double val_mse = 0.0;
  double seconds = 0.0;
};

inline nlohmann::json to_json(const EpochRecord& r) {
  return {{"epoch", r.epoch}, {"train_mse", r.train_mse}, {"val_mse", r.val_mse},
          {"seconds", r.seconds}};
}

struct TrainReport {
  std::size_t train_count = 0;
  std::size_t validation_count = 0;
  std::vector<EpochRecord> epochs;

  // One JSON object per epoch, newline-terminated.
  std::string to_json_lines() const {
    std::string out;
    for (const auto& e : epochs) out += to_json(e).dump() + "\n";
    return out;
  }
};

inline constexpr std::size_t kMinTrainingRasters = 10;

template <typename Scalar = float>
struct TrainResult {
  AutoencoderWeights<Scalar> weights;
  TrainReport report;
};

// Trains on the rows of `data` (one flattened raster per row). The run is a
// pure function of (data, config): the split, the per-epoch shuffles, and the
// initialization all derive from config.seed. `on_epoch` sees each record as
// soon as the epoch finishes.
template <typename Scalar = float>
TrainResult<Scalar> train_autoencoder(const RowMatrix<Scalar>& data, const TrainConfig& config,
                                      const std::function<void(const EpochRecord&)>& on_epoch = {}) {
  config.validate();
  const std::size_t n = static_cast<std::size_t>(data.rows());
  if (n < kMinTrainingRasters)
    throw ArgumentError("train_autoencoder: need at least " + std::to_string(kMinTrainingRasters) +
                        " rasters, got " + std::to_string(n));
  if (config.encoder_dims.empty() || config.encoder_dims.front() != static_cast<std::size_t>(data.cols()))
    throw ArgumentError("train_autoencoder: data width does not match encoder input");

  TrainResult<Scalar> result;
  result.weights = glorot_init<Scalar>(config.encoder_dims, config.seed);
  std::mt19937_64 rng(config.seed ^ 0x9E3779B97F4A7C15ULL);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  ae::shuffle(order, rng);
  std::size_t n_val = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * config.validation_fraction));
  n_val = std::clamp<std::size_t>(n_val, 1, n - 1);
  const std::vector<std::size_t> val_idx(order.begin(), order.begin() + n_val);
  std::vector<std::size_t> train_idx(order.begin() + n_val, order.end());
  result.report.train_count = train_idx.size();
  result.report.validation_count = val_idx.size();

  auto gather = [&data](const std::size_t* idx, std::size_t count) {
    RowMatrix<Scalar> m(count, data.cols());
    for (std::size_t r = 0; r < count; ++r) m.row(r) = data.row(idx[r]);
    return m;
  };
  const RowMatrix<Scalar> val = gather(val_idx.data(), val_idx.size());

  Adadelta<Scalar> opt(result.weights, config.optimizer);
  std::vector<LayerGradient<Scalar>> grads;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    ae::shuffle(train_idx, rng);
    double weighted = 0.0;
    for (std::size_t start = 0; start < train_idx.size(); start += config.batch_size) {
      const std::size_t count = std::min(config.batch_size, train_idx.size() - start);
      const RowMatrix<Scalar> batch = gather(train_idx.data() + start, count);
      const Scalar loss = loss_and_gradients<Scalar>(batch, result.weights, grads);
      if (!std::isfinite(static_cast<double>(loss)))
        throw TrainingError("training diverged (non-finite loss) in epoch " + std::to_string(epoch),
                            epoch);
      weighted += static_cast<double>(loss) * static_cast<double>(count);
      opt.step(result.weights, grads);
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_mse = weighted / static_cast<double>(train_idx.size());
    const auto trace = forward_batch<Scalar>(val, result.weights,
                                             std::numeric_limits<std::size_t>::max(), false);
    rec.val_mse = static_cast<double>(mean_squared_error<Scalar>(trace.reconstruction(), val));
    if (!std::isfinite(rec.val_mse))
      throw TrainingError("training diverged (non-finite validation loss) in epoch " +
                              std::to_string(epoch), epoch);
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.report.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  result.weights.epochs_trained = static_cast<std::uint32_t>(config.max_epochs);
  result.weights.final_train_loss = result.report.epochs.back().train_mse;
  result.weights.final_val_loss = result.report.epochs.back().val_mse;
  return result;
}

inline RowMatrix<float> stack_rasters(const std::vector<RasterTensor>& rasters) {
  RowMatrix<float> m(static_cast<Eigen::Index>(rasters.size()), static_cast<Eigen::Index>(kRasterSize));
  for (std::size_t r = 0; r < rasters.size(); ++r)
    for (std::size_t c = 0; c < kRasterSize; ++c) m(r, c) = rasters[r].values[c];
  return m;
}

inline TrainResult<float> train_autoencoder(const std::vector<RasterTensor>& rasters,
                                            const TrainConfig& config,
                                            const std::function<void(const EpochRecord&)>& on_epoch = {}) {
  if (rasters.size() < kMinTrainingRasters)
    throw ArgumentError("train_autoencoder: need at least " + std::to_string(kMinTrainingRasters) +
                        " rasters, got " + std::to_string(rasters.size()));
  return train_autoencoder<float>(stack_rasters(rasters), config, on_epoch);
}

// ---- weights container: "GCAE" | version | layer count | layers | metadata

inline constexpr char kWeightsMagic[4] = {'G', 'C', 'A', 'E'};
inline constexpr std::uint32_t kWeightsVersion = 1;

inline std::string save_weights(const AutoencoderWeights<float>& w) {
  binio::Writer out;
  out.bytes(std::string_view(kWeightsMagic, 4));
  out.u32(kWeightsVersion);
  out.u32(static_cast<std::uint32_t>(w.layers.size()));
  for (const auto& l : w.layers) {
    out.u32(static_cast<std::uint32_t>(l.weights.rows()));
    out.u32(static_cast<std::uint32_t>(l.weights.cols()));
    const float* p = l.weights.data();
    for (Eigen::Index k = 0; k < l.weights.size(); ++k) out.f32(p[k]);
    for (Eigen::Index k = 0; k < l.bias.size(); ++k) out.f32(l.bias[k]);
  }
  out.u64(w.seed);
  out.u32(w.epochs_trained);
  out.f64(w.final_train_loss);
  out.f64(w.final_val_loss);
  return out.take();
}

inline AutoencoderWeights<float> load_weights(std::string_view bytes) {
  binio::Reader in(bytes);
  if (in.remaining() < 4 || in.bytes(4) != std::string_view(kWeightsMagic, 4))
    throw FormatError("not an autoencoder weights file (bad magic)");
  const auto version = in.u32();
  if (version != kWeightsVersion)
    throw FormatError("unsupported weights version " + std::to_string(version));
  const auto count = in.u32();
  if (count < 2 || count % 2 != 0) throw CorruptionError("weights: invalid layer count");
  AutoencoderWeights<float> w;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto rows = in.u32(), cols = in.u32();
    if (std::uint64_t{rows} * cols * 4 > in.remaining())
      throw CorruptionError("weights: layer exceeds file size");
    DenseLayer<float> l{RowMatrix<float>(rows, cols), RowVec<float>(cols)};
    float* p = l.weights.data();
    for (std::uint64_t k = 0; k < std::uint64_t{rows} * cols; ++k) p[k] = in.f32();
    for (std::uint32_t k = 0; k < cols; ++k) l.bias[k] = in.f32();
    if (!w.layers.empty() && w.layers.back().outputs() != rows)
      throw CorruptionError("weights: layer widths do not chain");
    if (!l.weights.allFinite() || !l.bias.allFinite())
      throw CorruptionError("weights: non-finite parameter in layer " + std::to_string(i + 1));
    w.layers.push_back(std::move(l));
  }
  for (std::size_t i = 0; i < w.encoder_depth(); ++i) {
    if (w.layers[i].inputs() != w.layers[count - 1 - i].outputs())
      throw CorruptionError("weights: decoder does not mirror the encoder");
  }
  w.seed = in.u64();
  w.epochs_trained = in.u32();
  w.final_train_loss = in.f64();
  w.final_val_loss = in.f64();
  if (in.remaining() != 0) throw CorruptionError("weights: trailing bytes");
  return w;
}

}  // namespace guicomp
