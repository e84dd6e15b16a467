#include "kdiff/gridio.hpp"

#include "binio.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace kdiff {

namespace {

constexpr char kMagic[4] = {'K', 'S', 'P', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 17;

using Kind = GridFileError::Kind;

float to_f32(double v, const std::string &path) {
  if (!std::isfinite(v) || std::abs(v) > std::numeric_limits<float>::max())
    throw GridFileError(Kind::NotRepresentable, path, "value " + std::to_string(v) + " is not a finite float32");
  return static_cast<float>(v);
}

void encode(const AnyGrid &rec, std::string &out, const std::string &path) {
  const Shape shape = std::visit([](const auto &g) { return g.shape(); }, rec);
  if (shape.height > std::numeric_limits<std::uint32_t>::max() || shape.width > std::numeric_limits<std::uint32_t>::max() ||
      std::uint64_t{shape.height} * shape.width > kMaxGridPixels)
    throw GridFileError(Kind::DimensionOverflow, path, "grid " + to_string(shape) + " too large for the file format");
  out.append(kMagic, 4);
  binio::put_u32(out, kVersion);
  std::visit(
      [&](const auto &g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, ComplexGrid>) {
          binio::put_u8(out, static_cast<std::uint8_t>(g.domain() == Domain::Image ? GridTag::Image : GridTag::KSpace));
          binio::put_u32(out, static_cast<std::uint32_t>(g.height()));
          binio::put_u32(out, static_cast<std::uint32_t>(g.width()));
          for (const auto &v : g.data()) {
            binio::put_f32(out, to_f32(v.real(), path));
            binio::put_f32(out, to_f32(v.imag(), path));
          }
        } else {
          binio::put_u8(out, static_cast<std::uint8_t>(GridTag::Real));
          binio::put_u32(out, static_cast<std::uint32_t>(g.height()));
          binio::put_u32(out, static_cast<std::uint32_t>(g.width()));
          for (double v : g.data()) binio::put_f32(out, to_f32(v, path));
        }
      },
      rec);
}

// Reads one record from `in`; `remaining` is the byte count left in the file.
AnyGrid decode(std::ifstream &in, std::uint64_t &remaining, const std::string &path) {
  if (remaining < kHeaderBytes) throw GridFileError(Kind::Truncated, path, "header truncated");
  char header[kHeaderBytes];
  if (!in.read(header, kHeaderBytes)) throw GridFileError(Kind::Io, path, "read failed");
  remaining -= kHeaderBytes;
  binio::Reader rd(std::span<const char>(header, kHeaderBytes));
  if (rd.chars(4) != std::string(kMagic, 4)) throw GridFileError(Kind::BadMagic, path, "bad magic, expected KSP1");
  if (const auto v = rd.u32(); v != kVersion)
    throw GridFileError(Kind::BadVersion, path, "unsupported version " + std::to_string(v));
  const std::uint8_t tag = rd.u8();
  if (tag > 2) throw GridFileError(Kind::BadTag, path, "unknown domain tag " + std::to_string(tag));
  const std::uint64_t h = rd.u32(), w = rd.u32();
  if (h == 0 || w == 0 || h * w > kMaxGridPixels)
    throw GridFileError(Kind::DimensionOverflow, path,
                        "dimensions " + std::to_string(h) + "x" + std::to_string(w) + " out of range");

  const std::uint64_t components = tag == static_cast<std::uint8_t>(GridTag::Real) ? 1 : 2;
  const std::uint64_t need = h * w * components * 4;
  if (remaining < need)
    throw GridFileError(Kind::Truncated, path,
                        "payload has " + std::to_string(remaining) + " bytes, header requires " + std::to_string(need));
  std::vector<char> payload(need);
  if (!in.read(payload.data(), static_cast<std::streamsize>(need))) throw GridFileError(Kind::Io, path, "read failed");
  remaining -= need;

  binio::Reader body(payload);
  const Shape shape{h, w};
  if (components == 1) {
    std::vector<double> data(h * w);
    for (auto &v : data) v = body.f32();
    return RealGrid(shape, std::move(data));
  }
  std::vector<cdouble> data(h * w);
  for (auto &v : data) {
    const float re = body.f32();
    const float im = body.f32();
    v = {re, im};
  }
  ComplexGrid g(shape, tag == 0 ? Domain::Image : Domain::KSpace, std::move(data));
  if (!g.all_finite()) throw GridFileError(Kind::NotRepresentable, path, "payload contains non-finite values");
  return g;
}

std::ifstream open_for_read(const std::filesystem::path &path, std::uint64_t &size) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw GridFileError(Kind::Io, path.string(), "cannot open for reading");
  size = static_cast<std::uint64_t>(in.tellg());
  in.seekg(0);
  return in;
}

} // namespace

void write_grid_records(const std::vector<AnyGrid> &records, const std::filesystem::path &path) {
  std::string bytes;
  for (const auto &rec : records) encode(rec, bytes, path.string());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size())))
    throw GridFileError(Kind::Io, path.string(), "cannot write");
}

void write_grid(const ComplexGrid &g, const std::filesystem::path &path) { write_grid_records({g}, path); }
void write_grid(const RealGrid &g, const std::filesystem::path &path) { write_grid_records({g}, path); }

AnyGrid read_grid(const std::filesystem::path &path) {
  std::uint64_t remaining = 0;
  auto in = open_for_read(path, remaining);
  AnyGrid g = decode(in, remaining, path.string());
  if (remaining != 0)
    throw GridFileError(Kind::TrailingData, path.string(), std::to_string(remaining) + " trailing bytes after record");
  return g;
}

std::vector<AnyGrid> read_grid_records(const std::filesystem::path &path) {
  std::uint64_t remaining = 0;
  auto in = open_for_read(path, remaining);
  std::vector<AnyGrid> out;
  do {
    out.push_back(decode(in, remaining, path.string()));
  } while (remaining > 0);
  return out;
}

ComplexGrid read_complex_grid(const std::filesystem::path &path) {
  AnyGrid g = read_grid(path);
  if (auto *c = std::get_if<ComplexGrid>(&g)) return std::move(*c);
  throw GridFileError(Kind::WrongType, path.string(), "expected a complex grid, found a real one");
}

RealGrid read_real_grid(const std::filesystem::path &path) {
  AnyGrid g = read_grid(path);
  if (auto *r = std::get_if<RealGrid>(&g)) return std::move(*r);
  throw GridFileError(Kind::WrongType, path.string(), "expected a real grid, found a complex one");
}

} // namespace kdiff
