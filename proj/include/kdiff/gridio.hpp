#pragma once

#include "kdiff/error.hpp"
#include "kdiff/grid.hpp"

#include <filesystem>
#include <variant>
#include <vector>

namespace kdiff {

// Grid file, little-endian:
//   "KSP1" | u32 version=1 | u8 tag (0 image, 1 kspace, 2 real mask/weight) | u32 H | u32 W
//   payload float32: interleaved (re, im) row-major for complex, row-major for real.
// A file may hold several records back to back (coil stacks, priors).

enum class GridTag : std::uint8_t { Image = 0, KSpace = 1, Real = 2 };

using AnyGrid = std::variant<ComplexGrid, RealGrid>;

class GridFileError : public Error {
public:
  enum class Kind { Io, BadMagic, BadVersion, BadTag, Truncated, DimensionOverflow, TrailingData, WrongType, NotRepresentable };

  GridFileError(Kind kind, const std::string &path, const std::string &message)
      : Error("cli-io", path, message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

/// Largest accepted H*W per record.
inline constexpr std::uint64_t kMaxGridPixels = std::uint64_t{1} << 26;

void write_grid(const ComplexGrid &g, const std::filesystem::path &path);
void write_grid(const RealGrid &g, const std::filesystem::path &path);
void write_grid_records(const std::vector<AnyGrid> &records, const std::filesystem::path &path);

/// Exactly one record; trailing bytes are an error.
AnyGrid read_grid(const std::filesystem::path &path);
/// One or more records until end of file.
std::vector<AnyGrid> read_grid_records(const std::filesystem::path &path);

ComplexGrid read_complex_grid(const std::filesystem::path &path);
RealGrid read_real_grid(const std::filesystem::path &path);

} // namespace kdiff
