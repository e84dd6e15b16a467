#include "kdiff/recon.hpp"

#include "kdiff/error.hpp"
#include "kdiff/fft.hpp"
#include "kdiff/parallel.hpp"

#include <cmath>

namespace kdiff {

namespace {

constexpr const char *kModule = "sampler-recon";
constexpr std::uint64_t kInitTag = 0x696e6974ULL;
constexpr std::uint64_t kSlotTag = 0x736c6f74ULL;

template <class... Ts> struct Overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> Overloaded(Ts...) -> Overloaded<Ts...>;

const BinaryMask *support_of(const SlotTransform &t) {
  const auto *m = std::get_if<VirtualMask>(&t);
  return m ? &m->bits : nullptr;
}

ComplexGrid to_slot(const SlotTransform &t, const ComplexGrid &x) {
  return std::visit(Overloaded{[&](const IdentityTransform &) { return x; },
                               [&](const WeightMatrix &w) { return apply_weight(x, w); },
                               [&](const VirtualMask &m) { return apply_mask(x, m.bits); }},
                    t);
}

// Value a masked slot writes at a support pixel.
cdouble masked_value(MaskWriteBack mode, cdouble current, cdouble slot_out) {
  return mode == MaskWriteBack::Replace ? slot_out : current + (current - slot_out);
}

void write_back(const SlotTransform &t, MaskWriteBack mode, ComplexGrid &x, const ComplexGrid &u) {
  std::visit(Overloaded{[&](const IdentityTransform &) { x = u; },
                        [&](const WeightMatrix &w) { x = unweight(u, w); },
                        [&](const VirtualMask &m) {
                          for (std::size_t i = 0; i < x.size(); ++i)
                            if (m.bits[i]) x[i] = masked_value(mode, x[i], u[i]);
                        }},
             t);
}

struct SlotRuntime {
  const ModelSlot *slot = nullptr;
  Rng rng;
  CorrectorState corrector;
  std::optional<ComplexGrid> y; // measurement in slot coordinates
};

class Engine {
public:
  Engine(Shape shape, const Measurement *meas, const ReconConfig &cfg) : shape_(shape), meas_(meas), cfg_(cfg) {
    validate_slots(cfg.slots, shape);
    if (cfg.corrector_steps < 0) throw Error(kModule, "M", "corrector steps must be >= 0");
    if (!cfg.dc.hard && !(cfg.dc.lambda > 0.0)) throw Error(kModule, "dc_lambda", "must be positive");
    if (meas) {
      require_shape(meas->y.shape(), shape, kModule, "measurement");
      require_shape(meas->pattern.shape(), shape, kModule, "pattern");
      require_finite(meas->y, kModule, "measurement");
    }
    for (std::size_t k = 0; k < cfg.slots.size(); ++k) {
      SlotRuntime rt;
      rt.slot = &cfg.slots[k];
      const std::uint64_t slot_tag = cfg.identical_slot_streams ? 0 : k;
      rt.rng = derive_stream(cfg.seed, {kSlotTag, cfg.coil, cfg.stream, slot_tag});
      if (meas) rt.y = to_slot(rt.slot->transform, meas->y);
      slots_.push_back(std::move(rt));
    }
  }

  ReconResult run(Combination combination) {
    Rng init = derive_stream(cfg_.seed, {kInitTag, cfg_.coil, cfg_.stream});
    ComplexGrid x = complex_normal(shape_, Domain::KSpace, init);
    x *= cfg_.schedule.sigma_max();

    ReconResult result;
    const int n = cfg_.schedule.levels();
    result.levels.reserve(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      const double lo = cfg_.schedule.sigma(static_cast<std::size_t>(i));
      const double hi = cfg_.schedule.sigma(static_cast<std::size_t>(i) + 1);
      if (combination == Combination::Cascade)
        cascade_level(x, i, lo, hi);
      else
        parallel_level(x, i, lo, hi);

      if (!x.all_finite())
        throw Error(kModule, "level", "non-finite iterate at level " + std::to_string(i));
      LevelDiagnostics diag{i, lo, std::nullopt};
      if (meas_) {
        double acc = 0.0;
        for (std::size_t p = 0; p < x.size(); ++p)
          if (meas_->pattern.mask[p]) acc += std::norm(x[p] - meas_->y[p]);
        diag.residual = std::sqrt(acc);
      }
      result.levels.push_back(diag);
    }
    result.image = ifft2c(x);
    result.kspace = std::move(x);
    return result;
  }

private:
  ComplexGrid noise(SlotRuntime &rt) {
    if (cfg_.noise == NoiseMode::Pinned) return ComplexGrid(shape_, Domain::KSpace);
    return complex_normal(shape_, Domain::KSpace, rt.rng);
  }

  void consistency(SlotRuntime &rt, ComplexGrid &u) const {
    if (meas_) u = data_consistency(u, *rt.y, meas_->pattern.mask, cfg_.dc);
  }

  // Predictor + DC, then M rounds of corrector + DC, all in slot coordinates.
  // Without final_dc the last DC is left to the caller (the parallel merge).
  ComplexGrid run_slot(SlotRuntime &rt, const ComplexGrid &x, double lo, double hi, bool final_dc = true) {
    const ScoreProvider &provider = *rt.slot->provider;
    ComplexGrid u = to_slot(rt.slot->transform, x);
    u = predictor_step(u, provider, lo, hi, noise(rt));
    if (final_dc || cfg_.corrector_steps > 0) consistency(rt, u);
    for (int j = 0; j < cfg_.corrector_steps; ++j) {
      u = corrector_step(u, provider, lo, cfg_.corrector, noise(rt), rt.corrector);
      if (final_dc || j + 1 < cfg_.corrector_steps) consistency(rt, u);
    }
    return u;
  }

  void cascade_level(ComplexGrid &x, int level, double lo, double hi) {
    for (std::size_t k = 0; k < slots_.size(); ++k) {
      SlotRuntime &rt = slots_[k];
      const ComplexGrid u = run_slot(rt, x, lo, hi);
      if (cfg_.observer) {
        const ComplexGrid before = x;
        write_back(rt.slot->transform, cfg_.write_back, x, u);
        cfg_.observer(SlotEvent{level, k, before, x});
      } else {
        write_back(rt.slot->transform, cfg_.write_back, x, u);
      }
    }
  }

  // Every slot starts from the shared iterate. Structure-slot outputs are
  // averaged everywhere; each mask support is then overwritten by the mean of
  // the masked outputs covering it. The merge takes the place of each slot's
  // final DC.
  void parallel_level(ComplexGrid &x, int level, double lo, double hi) {
    const ComplexGrid shared = x;
    ComplexGrid global_sum(shape_, Domain::KSpace);
    std::size_t global_count = 0;
    ComplexGrid detail_sum(shape_, Domain::KSpace);
    std::vector<std::size_t> detail_count(shape_.size(), 0);

    for (std::size_t k = 0; k < slots_.size(); ++k) {
      SlotRuntime &rt = slots_[k];
      const ComplexGrid u = run_slot(rt, shared, lo, hi, false);
      ComplexGrid mine = shared;
      write_back(rt.slot->transform, cfg_.write_back, mine, u);
      if (const BinaryMask *support = support_of(rt.slot->transform)) {
        for (std::size_t p = 0; p < mine.size(); ++p)
          if ((*support)[p]) {
            detail_sum[p] += mine[p];
            ++detail_count[p];
          }
      } else {
        global_sum += mine;
        ++global_count;
      }
      if (cfg_.observer) cfg_.observer(SlotEvent{level, k, shared, mine});
    }

    ComplexGrid merged = shared;
    if (global_count > 0)
      for (std::size_t p = 0; p < merged.size(); ++p) merged[p] = global_sum[p] / static_cast<double>(global_count);
    for (std::size_t p = 0; p < merged.size(); ++p)
      if (detail_count[p] > 0) merged[p] = detail_sum[p] / static_cast<double>(detail_count[p]);
    if (meas_) merged = data_consistency(merged, *meas_, cfg_.dc);
    x = std::move(merged);
  }

  Shape shape_;
  const Measurement *meas_;
  const ReconConfig &cfg_;
  std::vector<SlotRuntime> slots_;
};

} // namespace

void validate_slots(const std::vector<ModelSlot> &slots, Shape shape) {
  if (slots.empty()) throw Error(kModule, "slots", "at least one model slot is required");
  bool seen_detail = false;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const auto &s = slots[k];
    const std::string name = "slots[" + std::to_string(k) + "]";
    if (!s.provider) throw Error(kModule, name, "slot has no score provider");
    std::visit(Overloaded{[&](const IdentityTransform &) {
                            if (s.role != SlotRole::Structure)
                              throw Error(kModule, name, "identity slots act as structure models");
                          },
                          [&](const WeightMatrix &w) {
                            require_shape(w.values.shape(), shape, kModule, name.c_str());
                            if (s.role != SlotRole::Structure)
                              throw Error(kModule, name, "weighted slots must be structure models");
                          },
                          [&](const VirtualMask &m) {
                            require_shape(m.shape(), shape, kModule, name.c_str());
                            if (s.role != SlotRole::Detail)
                              throw Error(kModule, name, "masked slots must be detail models");
                          }},
               s.transform);
    if (s.role == SlotRole::Detail) seen_detail = true;
    if (s.role == SlotRole::Structure && seen_detail)
      throw Error(kModule, name, "structure slots must precede detail slots");
  }
}

ReconResult cascade_reconstruct(const Measurement &meas, const ReconConfig &cfg) {
  return Engine(meas.y.shape(), &meas, cfg).run(Combination::Cascade);
}

ReconResult parallel_reconstruct(const Measurement &meas, const ReconConfig &cfg) {
  return Engine(meas.y.shape(), &meas, cfg).run(Combination::Parallel);
}

ReconResult reconstruct(const Measurement &meas, const ReconConfig &cfg) {
  return cfg.combination == Combination::Cascade ? cascade_reconstruct(meas, cfg) : parallel_reconstruct(meas, cfg);
}

ReconResult sample_prior(Shape shape, const ReconConfig &cfg) {
  return Engine(shape, nullptr, cfg).run(cfg.combination);
}

ComplexGrid reconstruction_mean(const Measurement &meas, const ReconConfig &cfg, std::size_t count,
                                std::size_t threads) {
  if (count == 0) throw Error(kModule, "samples", "need at least one reconstruction");
  std::vector<ComplexGrid> draws(count);
  parallel_for(count, threads, [&](std::size_t s) {
    ReconConfig local = cfg;
    local.stream = s;
    local.observer = nullptr;
    draws[s] = reconstruct(meas, local).kspace;
  });
  ComplexGrid mean(meas.y.shape(), Domain::KSpace);
  for (const auto &d : draws) mean += d;
  mean *= 1.0 / static_cast<double>(count);
  return mean;
}

std::vector<ReconResult> reconstruct_coils(const std::vector<Measurement> &coils, const ReconConfig &cfg,
                                           std::size_t threads) {
  if (coils.empty()) throw Error(kModule, "coils", "need at least one coil measurement");
  std::vector<ReconResult> out(coils.size());
  parallel_for(coils.size(), threads, [&](std::size_t c) {
    ReconConfig local = cfg;
    local.coil = c;
    local.observer = nullptr;
    out[c] = reconstruct(coils[c], local);
  });
  return out;
}

} // namespace kdiff
