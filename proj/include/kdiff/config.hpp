#pragma once

#include "kdiff/grid.hpp"
#include "kdiff/mask.hpp"
#include "kdiff/recon.hpp"
#include "kdiff/sampling.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kdiff {

/// Provider spec for one slot: "zero", "gaussian:<prior-file>" or "mlp:<weights-file>".
struct ProviderSpec {
  enum class Kind { Zero, Gaussian, Mlp } kind = Kind::Zero;
  std::filesystem::path path; // resolved against the config file's directory
};

enum class TransformKind { Auto, Identity, Weighted, Masked };

/// Plain-text key=value run configuration. Unknown keys are rejected.
struct RunConfig {
  // schedule
  double sigma_min = NoiseSchedule::kDefaultSigmaMin;
  double sigma_max = NoiseSchedule::kDefaultSigmaMax;
  int levels = NoiseSchedule::kDefaultLevels;
  // sampler
  int corrector_steps = 1;
  double snr = CorrectorParams::kDefaultSnr;
  DataConsistency dc = DataConsistency::Hard();
  MaskWriteBack write_back = MaskWriteBack::Replace;
  // weighting
  double weight_r = WeightMatrix::kDefaultR;
  double weight_p = WeightMatrix::kDefaultP;
  double weight_eps = WeightMatrix::kDefaultEps;
  // virtual masks, one list entry per detail slot
  MaskShape mask_shape = MaskShape::Circle;
  std::vector<double> mask_a{16.0, 8.0};
  int mask_spokes = 8;
  double mask_spoke_width = 2.0;
  double mask_spoke_length = 0.0; // 0 means spokes span the grid
  std::vector<double> mask_inner{8.0, 4.0};
  std::vector<double> mask_coverage{0.3, 0.2};
  int mask_block = 4;
  std::uint64_t mask_seed = 0;
  bool mask_complement = false;
  // undersampling
  PatternKind pattern_kind = PatternKind::Poisson2D;
  double pattern_r = 4.0;
  int pattern_acs = 0;
  std::uint64_t pattern_seed = 0;
  int pattern_offset = 0;
  bool pattern_transpose = false;
  double noise_sd = 0.0;
  // grid for commands without an input file
  std::size_t grid_height = 256;
  std::size_t grid_width = 256;
  // reconstruction
  std::vector<ProviderSpec> slots{ProviderSpec{}};
  std::vector<TransformKind> transforms; // empty: automatic roster
  Combination combination = Combination::Cascade;
  std::uint64_t seed = 0;
  std::size_t samples = 1;
  int entropy_bins = 256;

  static RunConfig parse(std::istream &in, const std::filesystem::path &base_dir = {});
  static RunConfig load(const std::filesystem::path &path);

  /// Documented keys with defaults, one per line, for --help.
  static std::string describe_keys();
};

/// Detail-slot virtual masks in slot order (random masks are mutually disjoint).
std::vector<VirtualMask> build_detail_masks(const RunConfig &cfg, Shape shape, std::size_t count);

WeightMatrix build_weight(const RunConfig &cfg, Shape shape);

SamplingPattern build_pattern(const RunConfig &cfg, Shape shape);

/// Resolved slot transforms for `cfg.slots.size()` slots.
std::vector<TransformKind> resolve_transforms(const RunConfig &cfg);

/// A Gaussian prior file holds two records: complex k-space mean, real variance.
GaussianPrior read_prior(const std::filesystem::path &path);
void write_prior(const GaussianPrior &prior, const std::filesystem::path &path);

/// Full sampler configuration with providers loaded and transforms built.
/// Gaussian providers are mapped into their slot's coordinates automatically.
ReconConfig build_recon_config(const RunConfig &cfg, Shape shape);

} // namespace kdiff
