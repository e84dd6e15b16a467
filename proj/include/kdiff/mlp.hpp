#pragma once

#include "kdiff/error.hpp"
#include "kdiff/score.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace kdiff {

// MLP score weights shared with the external trainer. Little-endian layout:
//   "MLPS" | u32 version=1 | u32 layer_count
//   layer_count x { u32 in_dim | u32 out_dim | u8 activation (0 relu, 1 tanh, 2 none) }
//   all weight matrices, float32, each out_dim x in_dim row-major (y = W x + b)
//   all bias vectors, float32
// Input is [Re(x) row-major, Im(x) row-major, log(sigma)], output 2*H*W.

enum class Activation : std::uint8_t { Relu = 0, Tanh = 1, None = 2 };

struct MlpLayer {
  std::uint32_t in_dim = 0;
  std::uint32_t out_dim = 0;
  Activation activation = Activation::None;
  std::vector<float> weights; // out_dim * in_dim
  std::vector<float> bias;    // out_dim
};

struct MlpScoreWeights {
  std::vector<MlpLayer> layers;

  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().in_dim; }
  std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().out_dim; }
};

class MlpLoadError : public Error {
public:
  enum class Kind { Io, BadMagic, BadVersion, Truncated, BadActivation, DimensionMismatch, NonFinite };

  MlpLoadError(Kind kind, const std::string &message)
      : Error("sde-score", "weights_file", message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

/// Checks the dimension chain, output = 2*H*W, input = 2*H*W + 1, finite values.
void validate_mlp(const MlpScoreWeights &w);

MlpScoreWeights read_mlp(const std::filesystem::path &path);
void write_mlp(const MlpScoreWeights &w, const std::filesystem::path &path);

/// Forward pass on one flattened input vector, in double precision.
std::vector<double> mlp_forward(const MlpScoreWeights &w, std::span<const double> input);

class MlpScore final : public ScoreProvider {
public:
  MlpScore(MlpScoreWeights weights, std::string label = "mlp");
  ComplexGrid score(const ComplexGrid &x, double sigma) const override;
  const MlpScoreWeights &weights() const { return weights_; }

private:
  MlpScoreWeights weights_;
};

ScoreProviderPtr load_mlp(const std::filesystem::path &path, std::string label = "mlp");

} // namespace kdiff
