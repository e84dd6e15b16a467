#pragma once

#include "kdiff/grid.hpp"
#include "kdiff/mask.hpp"
#include "kdiff/sampler.hpp"
#include "kdiff/sampling.hpp"
#include "kdiff/schedule.hpp"
#include "kdiff/score.hpp"
#include "kdiff/weight.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace kdiff {

enum class SlotRole { Structure, Detail };

struct IdentityTransform {};

/// Coordinates a slot's provider works in: raw k-space, weighted k-space
/// (w * x), or masked k-space (m * x).
using SlotTransform = std::variant<IdentityTransform, WeightMatrix, VirtualMask>;

struct ModelSlot {
  ScoreProviderPtr provider;
  SlotTransform transform = IdentityTransform{};
  SlotRole role = SlotRole::Structure;

  static ModelSlot identity(ScoreProviderPtr p) { return {std::move(p), IdentityTransform{}, SlotRole::Structure}; }
  static ModelSlot weighted(ScoreProviderPtr p, WeightMatrix w) { return {std::move(p), std::move(w), SlotRole::Structure}; }
  static ModelSlot masked(ScoreProviderPtr p, VirtualMask m) { return {std::move(p), std::move(m), SlotRole::Detail}; }
};

enum class Combination { Cascade, Parallel };

/// How a masked slot's output re-enters the running estimate on its support.
///   Replace:     x <- x - m*x + m*u   (support takes the detail output)
///   LiteralSign: x <- x + m*(m*x - u) (adds the residual instead)
enum class MaskWriteBack { Replace, LiteralSign };

/// Pinned sets every predictor/corrector noise draw to zero (diagnostics and tests).
enum class NoiseMode { Sample, Pinned };

struct SlotEvent {
  int level;                 // noise level index i (sigma_i is the target)
  std::size_t slot;
  const ComplexGrid &before; // running estimate handed to the slot
  const ComplexGrid &after;  // estimate after the slot's write-back
};

struct ReconConfig {
  NoiseSchedule schedule;
  int corrector_steps = 1; // M
  CorrectorParams corrector;
  DataConsistency dc = DataConsistency::Hard();
  std::vector<ModelSlot> slots;
  Combination combination = Combination::Cascade;
  MaskWriteBack write_back = MaskWriteBack::Replace;
  std::uint64_t seed = 0;
  // Sub-stream indices so repeated runs (posterior draws, coils) are independent.
  std::uint64_t stream = 0;
  std::uint64_t coil = 0;
  NoiseMode noise = NoiseMode::Sample;
  // Every slot gets a stream seeded like slot 0's.
  bool identical_slot_streams = false;
  std::function<void(const SlotEvent &)> observer;
};

struct LevelDiagnostics {
  int level = 0;
  double sigma = 0.0;
  std::optional<double> residual; // ||mask*x - y||_2 after the level, absent without data
};

struct ReconResult {
  ComplexGrid kspace;
  ComplexGrid image; // ifft2c(kspace)
  std::vector<LevelDiagnostics> levels;
};

/// Throws when the roster is empty, transforms do not fit `shape`, or the
/// structure/detail ordering is violated.
void validate_slots(const std::vector<ModelSlot> &slots, Shape shape);

ReconResult cascade_reconstruct(const Measurement &meas, const ReconConfig &cfg);
ReconResult parallel_reconstruct(const Measurement &meas, const ReconConfig &cfg);
/// Dispatches on cfg.combination.
ReconResult reconstruct(const Measurement &meas, const ReconConfig &cfg);

/// The same sampler with no data term: draws from the slots' prior.
ReconResult sample_prior(Shape shape, const ReconConfig &cfg);

/// Mean k-space over `count` independent reconstructions (stream = 0..count-1).
/// Bit-identical regardless of the number of worker threads.
ComplexGrid reconstruction_mean(const Measurement &meas, const ReconConfig &cfg, std::size_t count,
                                std::size_t threads);

/// Per-coil reconstructions with shared providers and independent streams.
std::vector<ReconResult> reconstruct_coils(const std::vector<Measurement> &coils, const ReconConfig &cfg,
                                           std::size_t threads);

} // namespace kdiff
