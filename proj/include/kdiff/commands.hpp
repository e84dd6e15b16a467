#pragma once

#include "kdiff/config.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace kdiff {

// Command implementations behind the kdiff executable. Each writes its
// artifacts and a key=value report.txt into `out_dir` and returns the report.

struct MaskCommand {
  std::filesystem::path out_dir;
};
std::string cmd_mask(const RunConfig &cfg, const MaskCommand &cmd);

struct UndersampleCommand {
  std::filesystem::path input; // fully sampled k-space or image grid, one record per coil
  std::filesystem::path out_dir;
};
std::string cmd_undersample(const RunConfig &cfg, const UndersampleCommand &cmd);

struct ReconstructCommand {
  std::filesystem::path measurement; // measurement.grid from undersample
  std::filesystem::path pattern;     // pattern.grid; pattern.grid.meta is read when present
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> reference; // ground truth for PSNR/SSIM
  std::size_t threads = 1;
};
std::string cmd_reconstruct(const RunConfig &cfg, const ReconstructCommand &cmd);

struct EvaluateCommand {
  std::filesystem::path reference;
  std::filesystem::path test;
  std::optional<double> data_range;
  std::optional<std::filesystem::path> out_dir;
};
std::string cmd_evaluate(const EvaluateCommand &cmd);

struct EntropyCommand {
  std::filesystem::path input; // k-space (or image) grid
  std::optional<std::filesystem::path> mask1, mask2; // default: the first two configured detail masks
  std::optional<std::filesystem::path> out_dir;
};
std::string cmd_entropy(const RunConfig &cfg, const EntropyCommand &cmd);

/// Magnitude image of a grid file: real grids as-is, complex records are
/// brought to image domain and root-sum-of-squares combined.
RealGrid load_magnitude_image(const std::filesystem::path &path);

/// Fixed-point formatting used in reports ("inf" for infinities).
std::string format_number(double v);

} // namespace kdiff
