#include "kdiff/commands.hpp"

#include "kdiff/coil.hpp"
#include "kdiff/entropy.hpp"
#include "kdiff/error.hpp"
#include "kdiff/fft.hpp"
#include "kdiff/gridio.hpp"
#include "kdiff/metrics.hpp"
#include "kdiff/posterior.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace kdiff {

namespace {

constexpr const char *kModule = "cli-io";
constexpr std::uint64_t kNoiseTag = 0x6e6f697365ULL;

class Report {
public:
  void add(const std::string &key, const std::string &value) { out_ << key << '=' << value << '\n'; }
  void add(const std::string &key, double value) { add(key, format_number(value)); }
  void add(const std::string &key, std::size_t value) { add(key, std::to_string(value)); }
  void add(const std::string &key, bool value) { add(key, std::string(value ? "true" : "false")); }
  std::string str() const { return out_.str(); }

private:
  std::ostringstream out_;
};

void ensure_dir(const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(kModule, dir.string(), "cannot create output directory: " + ec.message());
}

void write_text(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out || !(out << text)) throw Error(kModule, path.string(), "cannot write");
}

std::string finish(const Report &r, const std::optional<std::filesystem::path> &dir) {
  const std::string text = r.str();
  if (dir) {
    ensure_dir(*dir);
    write_text(*dir / "report.txt", text);
  }
  return text;
}

// All records as k-space grids; image records are transformed.
std::vector<ComplexGrid> load_kspace_records(const std::filesystem::path &path) {
  std::vector<ComplexGrid> out;
  for (auto &rec : read_grid_records(path)) {
    auto *g = std::get_if<ComplexGrid>(&rec);
    if (!g) throw Error(kModule, path.string(), "expected complex records, found a real grid");
    out.push_back(g->domain() == Domain::KSpace ? std::move(*g) : fft2c(*g));
  }
  for (const auto &g : out) require_shape(out.front().shape(), g.shape(), kModule, "records");
  return out;
}

std::vector<AnyGrid> as_records(const std::vector<ComplexGrid> &grids) {
  return {grids.begin(), grids.end()};
}

std::map<std::string, std::string> read_meta(const std::filesystem::path &path) {
  std::map<std::string, std::string> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

std::string slot_summary(const RunConfig &cfg) {
  const auto kinds = resolve_transforms(cfg);
  std::string out;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (i) out += ',';
    const auto &s = cfg.slots[i];
    out += s.kind == ProviderSpec::Kind::Zero ? "zero" : s.kind == ProviderSpec::Kind::Gaussian ? "gaussian" : "mlp";
    out += kinds[i] == TransformKind::Weighted ? "/weighted" : kinds[i] == TransformKind::Masked ? "/masked" : "/identity";
  }
  return out;
}

// The prior shared by every slot, when all slots are Gaussian on the same file.
std::optional<GaussianPrior> shared_gaussian_prior(const RunConfig &cfg) {
  for (const auto &s : cfg.slots)
    if (s.kind != ProviderSpec::Kind::Gaussian || s.path != cfg.slots.front().path) return std::nullopt;
  return read_prior(cfg.slots.front().path);
}

} // namespace

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

RealGrid load_magnitude_image(const std::filesystem::path &path) {
  auto records = read_grid_records(path);
  if (records.size() == 1)
    if (auto *r = std::get_if<RealGrid>(&records.front())) return std::move(*r);
  std::vector<ComplexGrid> images;
  for (auto &rec : records) {
    auto *g = std::get_if<ComplexGrid>(&rec);
    if (!g) throw Error(kModule, path.string(), "cannot mix real and complex records");
    images.push_back(g->domain() == Domain::Image ? std::move(*g) : ifft2c(*g));
  }
  return sos_combine(CoilStack(std::move(images)));
}

std::string cmd_mask(const RunConfig &cfg, const MaskCommand &cmd) {
  const Shape shape{cfg.grid_height, cfg.grid_width};
  ensure_dir(cmd.out_dir);
  Report r;
  r.add("shape", to_string(shape));

  const auto w = build_weight(cfg, shape);
  write_grid(w.values, cmd.out_dir / "weight.grid");
  r.add("weight_min", w.values.min());
  r.add("weight_max", w.values.max());

  std::size_t count = cfg.mask_a.size();
  if (cfg.mask_shape == MaskShape::Radial) count = cfg.mask_inner.size();
  if (cfg.mask_shape == MaskShape::Random) count = cfg.mask_coverage.size();
  const auto masks = build_detail_masks(cfg, shape, count);
  r.add("mask_shape", std::string(to_string(cfg.mask_shape)));
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const std::string name = "mask_" + std::to_string(i + 1);
    write_grid(masks[i].bits.to_real(), cmd.out_dir / (name + ".grid"));
    r.add(name + "_pixels", masks[i].bits.popcount());
  }
  for (std::size_t i = 0; i + 1 < masks.size(); ++i)
    r.add("relationship_" + std::to_string(i + 1) + "_" + std::to_string(i + 2),
          std::string(to_string(relationship(masks[i], masks[i + 1]))));
  return finish(r, cmd.out_dir);
}

std::string cmd_undersample(const RunConfig &cfg, const UndersampleCommand &cmd) {
  const auto coils = load_kspace_records(cmd.input);
  const Shape shape = coils.front().shape();
  const auto pattern = build_pattern(cfg, shape);

  std::vector<ComplexGrid> ys;
  for (std::size_t c = 0; c < coils.size(); ++c) {
    Rng rng = derive_stream(cfg.seed, {kNoiseTag, c});
    ys.push_back(apply_forward(coils[c], pattern, cfg.noise_sd, rng).y);
  }

  ensure_dir(cmd.out_dir);
  write_grid_records(as_records(ys), cmd.out_dir / "measurement.grid");
  write_grid(pattern.mask.to_real(), cmd.out_dir / "pattern.grid");

  Report r;
  r.add("shape", to_string(shape));
  r.add("coils", coils.size());
  r.add("kind", std::string(to_string(pattern.kind)));
  r.add("target_R", pattern.target_r);
  r.add("achieved_R", pattern.achieved_r);
  r.add("sampled", pattern.mask.popcount());
  r.add("acs", static_cast<std::size_t>(pattern.acs));
  r.add("seed", std::to_string(pattern.seed));
  r.add("within_tolerance", pattern.within_tolerance);
  if (pattern.kind == PatternKind::Uniform) r.add("stride", pattern.stride);
  if (pattern.kind == PatternKind::Poisson2D) r.add("radius_scale", pattern.radius_scale);
  r.add("noise_sd", cfg.noise_sd);
  if (!pattern.note.empty()) r.add("note", pattern.note);
  write_text(cmd.out_dir / "pattern.grid.meta", r.str());
  return finish(r, cmd.out_dir);
}

std::string cmd_reconstruct(const RunConfig &cfg, const ReconstructCommand &cmd) {
  const auto ys = load_kspace_records(cmd.measurement);
  const Shape shape = ys.front().shape();

  SamplingPattern pattern;
  pattern.mask = BinaryMask::from_real(read_real_grid(cmd.pattern));
  require_shape(shape, pattern.shape(), kModule, "pattern");
  pattern.achieved_r = achieved_acceleration(pattern.mask);
  double noise_sd = 0.0;
  auto meta_path = cmd.pattern;
  meta_path += ".meta";
  if (std::filesystem::exists(meta_path)) {
    const auto meta = read_meta(meta_path);
    if (const auto it = meta.find("noise_sd"); it != meta.end()) noise_sd = std::stod(it->second);
  }

  std::vector<Measurement> meas;
  for (const auto &y : ys) {
    for (std::size_t i = 0; i < y.size(); ++i)
      if (!pattern.mask[i] && y[i] != cdouble{})
        throw Error(kModule, cmd.measurement.string(), "measurement has data outside the sampling pattern");
    meas.push_back({y, pattern, noise_sd});
  }

  const ReconConfig rc = build_recon_config(cfg, shape);
  std::vector<ComplexGrid> kspace, images;
  std::vector<std::optional<double>> residuals;
  if (cfg.samples == 1) {
    for (auto &res : reconstruct_coils(meas, rc, cmd.threads)) {
      residuals.push_back(res.levels.empty() ? std::nullopt : res.levels.back().residual);
      kspace.push_back(std::move(res.kspace));
      images.push_back(std::move(res.image));
    }
  } else {
    for (std::size_t c = 0; c < meas.size(); ++c) {
      ReconConfig coil_cfg = rc;
      coil_cfg.coil = c;
      kspace.push_back(reconstruction_mean(meas[c], coil_cfg, cfg.samples, cmd.threads));
      images.push_back(ifft2c(kspace.back()));
    }
  }

  ensure_dir(cmd.out_dir);
  write_grid_records(as_records(kspace), cmd.out_dir / "recon_kspace.grid");
  write_grid_records(as_records(images), cmd.out_dir / "recon_image.grid");
  const RealGrid sos = sos_combine(CoilStack(images));
  write_grid(sos, cmd.out_dir / "recon_sos.grid");

  Report r;
  r.add("shape", to_string(shape));
  r.add("coils", meas.size());
  r.add("slots", slot_summary(cfg));
  r.add("combination", std::string(cfg.combination == Combination::Cascade ? "cascade" : "parallel"));
  r.add("levels", static_cast<std::size_t>(cfg.levels));
  r.add("corrector_steps", static_cast<std::size_t>(cfg.corrector_steps));
  r.add("seed", std::to_string(cfg.seed));
  r.add("samples", cfg.samples);
  r.add("achieved_R", pattern.achieved_r);
  for (std::size_t c = 0; c < residuals.size(); ++c)
    if (residuals[c]) r.add("coil" + std::to_string(c) + "_residual", *residuals[c]);
  if (const auto prior = shared_gaussian_prior(cfg)) {
    for (std::size_t c = 0; c < meas.size(); ++c)
      r.add("coil" + std::to_string(c) + "_posterior_mean_rel_error",
            relative_error(kspace[c], gaussian_posterior_mean(*prior, meas[c])));
  }
  if (cmd.reference) {
    const auto m = evaluate(load_magnitude_image(*cmd.reference), sos);
    r.add("psnr", m.psnr);
    r.add("ssim", m.ssim);
    r.add("data_range", m.data_range);
  }
  return finish(r, cmd.out_dir);
}

std::string cmd_evaluate(const EvaluateCommand &cmd) {
  const auto ref = load_magnitude_image(cmd.reference);
  const auto test = load_magnitude_image(cmd.test);
  const auto m = evaluate(ref, test, cmd.data_range);
  Report r;
  r.add("psnr", m.psnr);
  r.add("ssim", m.ssim);
  r.add("data_range", m.data_range);
  return finish(r, cmd.out_dir);
}

std::string cmd_entropy(const RunConfig &cfg, const EntropyCommand &cmd) {
  const auto records = load_kspace_records(cmd.input);
  if (records.size() != 1) throw Error(kModule, cmd.input.string(), "entropy expects a single k-space record");
  const ComplexGrid &x = records.front();

  VirtualMask m1, m2;
  if (cmd.mask1 || cmd.mask2) {
    if (!cmd.mask1 || !cmd.mask2) throw Error(kModule, "mask", "give both masks or neither");
    m1.bits = BinaryMask::from_real(read_real_grid(*cmd.mask1));
    m2.bits = BinaryMask::from_real(read_real_grid(*cmd.mask2));
  } else {
    auto masks = build_detail_masks(cfg, x.shape(), 2);
    m1 = std::move(masks[0]);
    m2 = std::move(masks[1]);
  }
  const auto rep = entropy_report(x, m1, m2, cfg.entropy_bins);
  Report r;
  r.add("e1", rep.e1);
  r.add("e2", rep.e2);
  r.add("total", rep.total);
  r.add("bins", static_cast<std::size_t>(rep.bins));
  r.add("relationship", std::string(to_string(rep.relationship)));
  return finish(r, cmd.out_dir);
}

} // namespace kdiff
