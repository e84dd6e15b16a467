#include "kdiff/config.hpp"

#include "kdiff/error.hpp"
#include "kdiff/gridio.hpp"
#include "kdiff/mlp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace kdiff {

namespace {

constexpr const char *kModule = "cli-io";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string &key, const std::string &v) {
  double out = 0.0;
  const auto *end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end || !std::isfinite(out)) throw Error(kModule, key, "expected a number, got '" + v + "'");
  return out;
}

std::int64_t to_int(const std::string &key, const std::string &v) {
  std::int64_t out = 0;
  const auto *end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end) throw Error(kModule, key, "expected an integer, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string &key, const std::string &v) {
  std::uint64_t out = 0;
  const auto *end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end) throw Error(kModule, key, "expected a non-negative integer, got '" + v + "'");
  return out;
}

int to_positive_int(const std::string &key, const std::string &v, int min = 1) {
  const auto n = to_int(key, v);
  if (n < min || n > std::numeric_limits<int>::max())
    throw Error(kModule, key, "must be an integer >= " + std::to_string(min) + ", got '" + v + "'");
  return static_cast<int>(n);
}

bool to_bool(const std::string &key, const std::string &v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(kModule, key, "expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string &key, const std::string &v) {
  std::vector<double> out;
  for (const auto &item : split(v, ',')) out.push_back(to_double(key, item));
  if (out.empty()) throw Error(kModule, key, "empty list");
  return out;
}

ProviderSpec to_provider(const std::string &key, const std::string &v, const std::filesystem::path &base) {
  if (v == "zero") return {};
  const auto colon = v.find(':');
  if (colon == std::string::npos || colon + 1 == v.size())
    throw Error(kModule, key, "expected zero, gaussian:<file> or mlp:<file>, got '" + v + "'");
  const std::string kind = v.substr(0, colon);
  std::filesystem::path path = v.substr(colon + 1);
  if (path.is_relative() && !base.empty()) path = base / path;
  if (kind == "gaussian") return {ProviderSpec::Kind::Gaussian, path};
  if (kind == "mlp") return {ProviderSpec::Kind::Mlp, path};
  throw Error(kModule, key, "unknown provider kind '" + kind + "'");
}

TransformKind to_transform(const std::string &key, const std::string &v) {
  if (v == "identity") return TransformKind::Identity;
  if (v == "weighted") return TransformKind::Weighted;
  if (v == "masked") return TransformKind::Masked;
  throw Error(kModule, key, "expected identity, weighted or masked, got '" + v + "'");
}

struct KeySpec {
  const char *name;
  const char *fallback;
  const char *help;
  std::function<void(RunConfig &, const std::string &, const std::filesystem::path &)> set;
};

const std::vector<KeySpec> &key_table() {
  using P = const std::filesystem::path &;
  using S = const std::string &;
  static const std::vector<KeySpec> table = {
      {"schedule.sigma_min", "0.01", "smallest noise level",
       [](RunConfig &c, S v, P) { c.sigma_min = to_double("schedule.sigma_min", v); }},
      {"schedule.sigma_max", "378", "largest noise level",
       [](RunConfig &c, S v, P) { c.sigma_max = to_double("schedule.sigma_max", v); }},
      {"schedule.N", "1000", "number of reverse-diffusion levels",
       [](RunConfig &c, S v, P) { c.levels = to_positive_int("schedule.N", v); }},
      {"sampler.M", "1", "corrector steps per level (0 disables)",
       [](RunConfig &c, S v, P) { c.corrector_steps = to_positive_int("sampler.M", v, 0); }},
      {"sampler.snr", "0.16", "corrector signal-to-noise ratio",
       [](RunConfig &c, S v, P) {
         c.snr = to_double("sampler.snr", v);
         if (!(c.snr > 0.0)) throw Error(kModule, "sampler.snr", "must be positive");
       }},
      {"sampler.dc", "hard", "data consistency: hard, or a soft weight lambda > 0",
       [](RunConfig &c, S v, P) {
         if (v == "hard") {
           c.dc = DataConsistency::Hard();
           return;
         }
         const double lambda = to_double("sampler.dc", v);
         if (!(lambda > 0.0)) throw Error(kModule, "sampler.dc", "soft lambda must be positive");
         c.dc = DataConsistency::Soft(lambda);
       }},
      {"sampler.writeback", "replace", "masked-slot write-back: replace or literal",
       [](RunConfig &c, S v, P) {
         if (v == "replace") c.write_back = MaskWriteBack::Replace;
         else if (v == "literal") c.write_back = MaskWriteBack::LiteralSign;
         else throw Error(kModule, "sampler.writeback", "expected replace or literal, got '" + v + "'");
       }},
      {"weight.r", "0.075", "weighting scale r", [](RunConfig &c, S v, P) { c.weight_r = to_double("weight.r", v); }},
      {"weight.p", "0.5", "weighting exponent p", [](RunConfig &c, S v, P) { c.weight_p = to_double("weight.p", v); }},
      {"weight.eps", "1e-6", "weighting floor",
       [](RunConfig &c, S v, P) { c.weight_eps = to_double("weight.eps", v); }},
      {"mask.shape", "circle", "detail mask shape: circle, radial or random",
       [](RunConfig &c, S v, P) {
         if (v == "circle") c.mask_shape = MaskShape::Circle;
         else if (v == "radial") c.mask_shape = MaskShape::Radial;
         else if (v == "random") c.mask_shape = MaskShape::Random;
         else throw Error(kModule, "mask.shape", "expected circle, radial or random, got '" + v + "'");
       }},
      {"mask.a", "16,8", "circle diameters, one per detail slot",
       [](RunConfig &c, S v, P) { c.mask_a = to_list("mask.a", v); }},
      {"mask.spokes", "8", "radial spoke count",
       [](RunConfig &c, S v, P) { c.mask_spokes = to_positive_int("mask.spokes", v); }},
      {"mask.spoke_width", "2", "radial spoke width in pixels",
       [](RunConfig &c, S v, P) { c.mask_spoke_width = to_double("mask.spoke_width", v); }},
      {"mask.spoke_length", "0", "radial spoke length in pixels (0 spans the grid)",
       [](RunConfig &c, S v, P) { c.mask_spoke_length = to_double("mask.spoke_length", v); }},
      {"mask.inner_diameter", "8,4", "radial inner disc diameters, one per detail slot",
       [](RunConfig &c, S v, P) { c.mask_inner = to_list("mask.inner_diameter", v); }},
      {"mask.coverage", "0.3,0.2", "random mask coverage fractions, one per detail slot",
       [](RunConfig &c, S v, P) { c.mask_coverage = to_list("mask.coverage", v); }},
      {"mask.block", "4", "random mask tile size",
       [](RunConfig &c, S v, P) { c.mask_block = to_positive_int("mask.block", v); }},
      {"mask.seed", "0", "random mask seed", [](RunConfig &c, S v, P) { c.mask_seed = to_u64("mask.seed", v); }},
      {"mask.complement", "false", "use the complement of every detail mask",
       [](RunConfig &c, S v, P) { c.mask_complement = to_bool("mask.complement", v); }},
      {"pattern.kind", "poisson", "undersampling pattern: poisson, random or uniform",
       [](RunConfig &c, S v, P) {
         if (v == "poisson") c.pattern_kind = PatternKind::Poisson2D;
         else if (v == "random") c.pattern_kind = PatternKind::Random2D;
         else if (v == "uniform") c.pattern_kind = PatternKind::Uniform;
         else throw Error(kModule, "pattern.kind", "expected poisson, random or uniform, got '" + v + "'");
       }},
      {"pattern.R", "4", "target acceleration", [](RunConfig &c, S v, P) { c.pattern_r = to_double("pattern.R", v); }},
      {"pattern.acs", "0", "side of the fully sampled center block",
       [](RunConfig &c, S v, P) { c.pattern_acs = to_positive_int("pattern.acs", v, 0); }},
      {"pattern.seed", "0", "pattern seed", [](RunConfig &c, S v, P) { c.pattern_seed = to_u64("pattern.seed", v); }},
      {"pattern.offset", "0", "uniform pattern first line",
       [](RunConfig &c, S v, P) { c.pattern_offset = to_positive_int("pattern.offset", v, 0); }},
      {"pattern.transpose", "false", "uniform pattern samples columns instead of rows",
       [](RunConfig &c, S v, P) { c.pattern_transpose = to_bool("pattern.transpose", v); }},
      {"pattern.noise_sd", "0", "measurement noise std per real component",
       [](RunConfig &c, S v, P) {
         c.noise_sd = to_double("pattern.noise_sd", v);
         if (c.noise_sd < 0.0) throw Error(kModule, "pattern.noise_sd", "must be non-negative");
       }},
      {"grid.height", "256", "grid height for commands without an input grid",
       [](RunConfig &c, S v, P) { c.grid_height = static_cast<std::size_t>(to_positive_int("grid.height", v)); }},
      {"grid.width", "256", "grid width for commands without an input grid",
       [](RunConfig &c, S v, P) { c.grid_width = static_cast<std::size_t>(to_positive_int("grid.width", v)); }},
      {"slots", "zero", "comma list of providers: zero, gaussian:<prior file>, mlp:<weights file>",
       [](RunConfig &c, S v, P base) {
         c.slots.clear();
         for (const auto &item : split(v, ',')) c.slots.push_back(to_provider("slots", item, base));
         if (c.slots.empty()) throw Error(kModule, "slots", "at least one slot is required");
       }},
      {"slot.transforms", "auto", "comma list of identity/weighted/masked; auto = weighted then masked",
       [](RunConfig &c, S v, P) {
         c.transforms.clear();
         if (v == "auto") return;
         for (const auto &item : split(v, ',')) c.transforms.push_back(to_transform("slot.transforms", item));
       }},
      {"combination", "cascade", "cascade or parallel",
       [](RunConfig &c, S v, P) {
         if (v == "cascade") c.combination = Combination::Cascade;
         else if (v == "parallel") c.combination = Combination::Parallel;
         else throw Error(kModule, "combination", "expected cascade or parallel, got '" + v + "'");
       }},
      {"seed", "0", "sampler seed", [](RunConfig &c, S v, P) { c.seed = to_u64("seed", v); }},
      {"samples", "1", "independent reconstructions averaged into the output",
       [](RunConfig &c, S v, P) { c.samples = static_cast<std::size_t>(to_positive_int("samples", v)); }},
      {"entropy.bins", "256", "histogram bins for mask entropy",
       [](RunConfig &c, S v, P) { c.entropy_bins = to_positive_int("entropy.bins", v, 2); }},
  };
  return table;
}

} // namespace

RunConfig RunConfig::parse(std::istream &in, const std::filesystem::path &base_dir) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(kModule, "line " + std::to_string(lineno), "expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto &table = key_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const KeySpec &k) { return key == k.name; });
    if (it == table.end()) throw Error(kModule, key, "unknown configuration key");
    if (!seen.insert(key).second) throw Error(kModule, key, "key given twice");
    it->set(cfg, value, base_dir);
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(kModule, path.string(), "cannot open config file");
  return parse(in, path.parent_path());
}

std::string RunConfig::describe_keys() {
  std::ostringstream out;
  for (const auto &k : key_table()) {
    std::string lhs = std::string(k.name) + " = " + k.fallback;
    lhs.resize(std::max<std::size_t>(lhs.size() + 1, 34), ' ');
    out << "  " << lhs << "# " << k.help << "\n";
  }
  return out.str();
}

std::vector<VirtualMask> build_detail_masks(const RunConfig &cfg, Shape shape, std::size_t count) {
  std::vector<VirtualMask> out;
  out.reserve(count);
  const auto need = [&](const std::vector<double> &list, const char *key) {
    if (list.size() < count)
      throw Error("masks-weights", key,
                  "needs " + std::to_string(count) + " entries for the detail slots, got " + std::to_string(list.size()));
  };
  std::optional<BinaryMask> taken;
  for (std::size_t i = 0; i < count; ++i) {
    VirtualMask m;
    switch (cfg.mask_shape) {
    case MaskShape::Circle:
      need(cfg.mask_a, "mask.a");
      m = make_circle_mask(shape, cfg.mask_a[i]);
      break;
    case MaskShape::Radial:
      need(cfg.mask_inner, "mask.inner_diameter");
      m = make_radial_mask(shape, cfg.mask_spokes, cfg.mask_spoke_width, cfg.mask_inner[i],
                           cfg.mask_spoke_length > 0.0 ? cfg.mask_spoke_length
                                                       : std::numeric_limits<double>::infinity());
      break;
    case MaskShape::Random:
      need(cfg.mask_coverage, "mask.coverage");
      m = make_random_mask(shape, cfg.mask_coverage[i], cfg.mask_block, cfg.mask_seed + i,
                           taken ? &*taken : nullptr);
      taken = taken ? (*taken | m.bits) : m.bits;
      break;
    }
    out.push_back(cfg.mask_complement ? complement(m) : std::move(m));
  }
  return out;
}

WeightMatrix build_weight(const RunConfig &cfg, Shape shape) {
  return make_weight(shape, cfg.weight_r, cfg.weight_p, cfg.weight_eps);
}

SamplingPattern build_pattern(const RunConfig &cfg, Shape shape) {
  switch (cfg.pattern_kind) {
  case PatternKind::Uniform:
    return gen_uniform(shape, cfg.pattern_r, cfg.pattern_acs, cfg.pattern_offset, cfg.pattern_transpose);
  case PatternKind::Random2D:
    return gen_random2d(shape, cfg.pattern_r, cfg.pattern_acs, cfg.pattern_seed);
  case PatternKind::Poisson2D:
    break;
  }
  return gen_poisson2d(shape, cfg.pattern_r, cfg.pattern_acs, cfg.pattern_seed);
}

std::vector<TransformKind> resolve_transforms(const RunConfig &cfg) {
  const std::size_t n = cfg.slots.size();
  if (!cfg.transforms.empty()) {
    if (cfg.transforms.size() != n)
      throw Error(kModule, "slot.transforms",
                  "lists " + std::to_string(cfg.transforms.size()) + " transforms for " + std::to_string(n) + " slots");
    return cfg.transforms;
  }
  if (n == 1) return {TransformKind::Identity};
  std::vector<TransformKind> out(n, TransformKind::Masked);
  out.front() = TransformKind::Weighted;
  return out;
}

GaussianPrior read_prior(const std::filesystem::path &path) {
  auto records = read_grid_records(path);
  if (records.size() != 2)
    throw Error(kModule, path.string(), "prior file needs 2 records (mean, variance), found " + std::to_string(records.size()));
  auto *mean = std::get_if<ComplexGrid>(&records[0]);
  auto *var = std::get_if<RealGrid>(&records[1]);
  if (!mean || !var) throw Error(kModule, path.string(), "prior file must hold a complex mean then a real variance");
  if (mean->domain() != Domain::KSpace) throw Error(kModule, path.string(), "prior mean must be a k-space grid");
  return GaussianPrior(std::move(*mean), std::move(*var));
}

void write_prior(const GaussianPrior &prior, const std::filesystem::path &path) {
  write_grid_records({prior.mean, prior.variance}, path);
}

ReconConfig build_recon_config(const RunConfig &cfg, Shape shape) {
  ReconConfig rc;
  rc.schedule = NoiseSchedule(cfg.sigma_min, cfg.sigma_max, cfg.levels);
  rc.corrector_steps = cfg.corrector_steps;
  rc.corrector.snr = cfg.snr;
  rc.dc = cfg.dc;
  rc.combination = cfg.combination;
  rc.write_back = cfg.write_back;
  rc.seed = cfg.seed;

  const auto kinds = resolve_transforms(cfg);
  const auto masked = static_cast<std::size_t>(std::count(kinds.begin(), kinds.end(), TransformKind::Masked));
  const auto masks = build_detail_masks(cfg, shape, masked);
  std::size_t next_mask = 0;

  for (std::size_t i = 0; i < cfg.slots.size(); ++i) {
    const auto &spec = cfg.slots[i];
    const std::string label = "slot" + std::to_string(i);
    SlotTransform transform = IdentityTransform{};
    if (kinds[i] == TransformKind::Weighted) transform = build_weight(cfg, shape);
    if (kinds[i] == TransformKind::Masked) transform = masks[next_mask++];

    ScoreProviderPtr provider;
    switch (spec.kind) {
    case ProviderSpec::Kind::Zero:
      provider = std::make_shared<ZeroScore>(label + ":zero");
      break;
    case ProviderSpec::Kind::Mlp:
      provider = load_mlp(spec.path, label + ":mlp");
      break;
    case ProviderSpec::Kind::Gaussian: {
      GaussianPrior prior = read_prior(spec.path);
      require_shape(shape, prior.mean.shape(), kModule, "slots");
      if (const auto *w = std::get_if<WeightMatrix>(&transform)) prior = weighted_prior(prior, *w);
      if (const auto *m = std::get_if<VirtualMask>(&transform)) prior = masked_prior(prior, m->bits);
      provider = std::make_shared<GaussianScore>(std::move(prior), label + ":gaussian");
      break;
    }
    }

    switch (kinds[i]) {
    case TransformKind::Auto:
    case TransformKind::Identity:
      rc.slots.push_back(ModelSlot::identity(provider));
      break;
    case TransformKind::Weighted:
      rc.slots.push_back(ModelSlot::weighted(provider, std::get<WeightMatrix>(transform)));
      break;
    case TransformKind::Masked:
      rc.slots.push_back(ModelSlot::masked(provider, std::get<VirtualMask>(transform)));
      break;
    }
  }
  validate_slots(rc.slots, shape);
  return rc;
}

} // namespace kdiff
