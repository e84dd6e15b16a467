#include "kdiff/mlp.hpp"

#include "binio.hpp"

#include <cmath>
#include <fstream>
#include <iterator>

namespace kdiff {

namespace {

constexpr char kMagic[4] = {'M', 'L', 'P', 'S'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kMaxLayers = 1024;
constexpr std::uint64_t kMaxParams = std::uint64_t{1} << 28;

using Kind = MlpLoadError::Kind;

} // namespace

void validate_mlp(const MlpScoreWeights &w) {
  if (w.layers.empty()) throw MlpLoadError(Kind::DimensionMismatch, "network has no layers");
  for (std::size_t l = 0; l < w.layers.size(); ++l) {
    const auto &layer = w.layers[l];
    if (layer.in_dim == 0 || layer.out_dim == 0)
      throw MlpLoadError(Kind::DimensionMismatch, "layer " + std::to_string(l) + " has a zero dimension");
    if (l > 0 && w.layers[l - 1].out_dim != layer.in_dim)
      throw MlpLoadError(Kind::DimensionMismatch, "layer " + std::to_string(l) + " input " +
                                                      std::to_string(layer.in_dim) + " does not chain from " +
                                                      std::to_string(w.layers[l - 1].out_dim));
    if (layer.weights.size() != std::size_t{layer.in_dim} * layer.out_dim || layer.bias.size() != layer.out_dim)
      throw MlpLoadError(Kind::DimensionMismatch, "layer " + std::to_string(l) + " parameter count mismatch");
    for (float v : layer.weights)
      if (!std::isfinite(v)) throw MlpLoadError(Kind::NonFinite, "layer " + std::to_string(l) + " weight non-finite");
    for (float v : layer.bias)
      if (!std::isfinite(v)) throw MlpLoadError(Kind::NonFinite, "layer " + std::to_string(l) + " bias non-finite");
  }
  const std::size_t out = w.output_dim();
  if (out % 2 != 0) throw MlpLoadError(Kind::DimensionMismatch, "output dimension must be 2*H*W (even)");
  if (w.input_dim() != out + 1)
    throw MlpLoadError(Kind::DimensionMismatch, "input dimension " + std::to_string(w.input_dim()) +
                                                    " must equal output dimension + 1 (log sigma)");
}

MlpScoreWeights read_mlp(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MlpLoadError(Kind::Io, "cannot open " + path.string());
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  binio::Reader rd(bytes);

  if (!rd.can_read(12)) throw MlpLoadError(Kind::Truncated, "header truncated");
  if (rd.chars(4) != std::string(kMagic, 4)) throw MlpLoadError(Kind::BadMagic, "bad magic, expected MLPS");
  if (const auto v = rd.u32(); v != kVersion)
    throw MlpLoadError(Kind::BadVersion, "unsupported version " + std::to_string(v));
  const std::uint32_t count = rd.u32();
  if (count == 0 || count > kMaxLayers)
    throw MlpLoadError(Kind::DimensionMismatch, "layer count " + std::to_string(count) + " out of range");

  MlpScoreWeights w;
  w.layers.resize(count);
  std::uint64_t params = 0;
  for (auto &layer : w.layers) {
    if (!rd.can_read(9)) throw MlpLoadError(Kind::Truncated, "layer table truncated");
    layer.in_dim = rd.u32();
    layer.out_dim = rd.u32();
    const std::uint8_t act = rd.u8();
    if (act > 2) throw MlpLoadError(Kind::BadActivation, "unknown activation code " + std::to_string(act));
    layer.activation = static_cast<Activation>(act);
    params += std::uint64_t{layer.in_dim} * layer.out_dim + layer.out_dim;
    if (params > kMaxParams) throw MlpLoadError(Kind::DimensionMismatch, "parameter count exceeds limit");
  }
  if (rd.remaining() != params * 4)
    throw MlpLoadError(rd.remaining() < params * 4 ? Kind::Truncated : Kind::DimensionMismatch,
                       "payload holds " + std::to_string(rd.remaining()) + " bytes, expected " +
                           std::to_string(params * 4));
  for (auto &layer : w.layers) {
    layer.weights.resize(std::size_t{layer.in_dim} * layer.out_dim);
    for (auto &v : layer.weights) v = rd.f32();
  }
  for (auto &layer : w.layers) {
    layer.bias.resize(layer.out_dim);
    for (auto &v : layer.bias) v = rd.f32();
  }
  validate_mlp(w);
  return w;
}

void write_mlp(const MlpScoreWeights &w, const std::filesystem::path &path) {
  validate_mlp(w);
  std::string out(kMagic, 4);
  binio::put_u32(out, kVersion);
  binio::put_u32(out, static_cast<std::uint32_t>(w.layers.size()));
  for (const auto &layer : w.layers) {
    binio::put_u32(out, layer.in_dim);
    binio::put_u32(out, layer.out_dim);
    binio::put_u8(out, static_cast<std::uint8_t>(layer.activation));
  }
  for (const auto &layer : w.layers)
    for (float v : layer.weights) binio::put_f32(out, v);
  for (const auto &layer : w.layers)
    for (float v : layer.bias) binio::put_f32(out, v);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !f.write(out.data(), static_cast<std::streamsize>(out.size())))
    throw Error("sde-score", "weights_file", "cannot write " + path.string());
}

std::vector<double> mlp_forward(const MlpScoreWeights &w, std::span<const double> input) {
  if (input.size() != w.input_dim())
    throw Error("sde-score", "input", "expected " + std::to_string(w.input_dim()) + " values, got " +
                                          std::to_string(input.size()));
  std::vector<double> act(input.begin(), input.end());
  std::vector<double> next;
  for (const auto &layer : w.layers) {
    next.assign(layer.out_dim, 0.0);
    for (std::size_t o = 0; o < layer.out_dim; ++o) {
      const float *row = layer.weights.data() + o * layer.in_dim;
      double acc = layer.bias[o];
      for (std::size_t i = 0; i < layer.in_dim; ++i) acc += static_cast<double>(row[i]) * act[i];
      switch (layer.activation) {
      case Activation::Relu: acc = acc > 0.0 ? acc : 0.0; break;
      case Activation::Tanh: acc = std::tanh(acc); break;
      case Activation::None: break;
      }
      next[o] = acc;
    }
    act.swap(next);
  }
  return act;
}

MlpScore::MlpScore(MlpScoreWeights weights, std::string label)
    : ScoreProvider(std::move(label)), weights_(std::move(weights)) {
  validate_mlp(weights_);
}

ComplexGrid MlpScore::score(const ComplexGrid &x, double sigma) const {
  const std::size_t n = x.size();
  if (2 * n != weights_.output_dim())
    throw Error("sde-score", label(), "grid " + to_string(x.shape()) + " does not match network output " +
                                          std::to_string(weights_.output_dim()));
  if (!(sigma > 0.0)) throw Error("sde-score", "sigma", "MLP providers need sigma > 0 (log sigma input)");
  std::vector<double> input(2 * n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    input[i] = x[i].real();
    input[n + i] = x[i].imag();
  }
  input[2 * n] = std::log(sigma);
  const auto out = mlp_forward(weights_, input);
  ComplexGrid s(x.shape(), x.domain());
  for (std::size_t i = 0; i < n; ++i) s[i] = {out[i], out[n + i]};
  return s;
}

ScoreProviderPtr load_mlp(const std::filesystem::path &path, std::string label) {
  return std::make_shared<MlpScore>(read_mlp(path), std::move(label));
}

} // namespace kdiff
