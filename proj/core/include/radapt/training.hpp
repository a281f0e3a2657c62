#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "radapt/losses.hpp"
#include "radapt/model.hpp"

namespace radapt {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m, v;
  std::vector<std::uint8_t> frozen;  // 1 = no update and no moment update
  long step = 0;

  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0), frozen(n, 0) {}
};

struct nonfinite_gradient_error : std::runtime_error {
  std::size_t index;
  nonfinite_gradient_error(const std::string& msg, std::size_t i)
      : std::runtime_error(msg), index(i) {}
};

/// One bias-corrected Adam update. Frozen parameters keep their value and
/// moments untouched, so a later unfreeze resumes from zeroed moments.
void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state,
               const AdamConfig& cfg, double lr);

enum class FreezeMask { theta_only, all };

/// theta_only trains network parameters and freezes node locations;
/// all trains the joint set.
void set_freeze_mask(AdamState& state, FreezeMask mask, std::size_t theta_count);

struct TrainConfig {
  int stage1_epochs = 1000;
  int stage2_epochs = 5000;
  double lr1 = 1e-2;
  double lr2 = 1e-2;
  double lr_decay = 0.5;
  int lr_decay_every = 2000;  // applied on the global epoch counter
  AdamConfig adam;
  std::uint64_t seed = 1;
  int quad_points = 5;
  int record_every = 1;
  // A loss this far below the physical minimum flags an integration problem.
  double integration_warn_tol = 1e-4;
};

struct LossRecord {
  int epoch;
  double loss;
  double loss_error;
};

struct EpochView {
  int epoch;  // global counter across both stages
  int stage;  // 1 or 2
  double loss;
  double loss_error;
  std::span<const std::vector<double>> axis_coords;
};
using TrainObserver = std::function<void(const EpochView&)>;

struct TrainResult {
  Snapshot stage1;  // solution trained on the frozen uniform mesh
  Snapshot stage2;  // solution after joint mesh/value training
  std::vector<LossRecord> history1, history2;
  bool integration_warning = false;
  int integration_warning_epoch = -1;
  std::vector<double> theta;
  std::array<std::vector<double>, 2> psi;
};

/// Two-stage guided optimization: stage 1 trains theta on the fixed uniform
/// mesh, stage 2 unfreezes the node locations and trains the joint set.
TrainResult train_two_stage(const ProblemSpec& spec, LossKind kind,
                            std::span<const int> elements_per_axis, const Network& net,
                            const TrainConfig& cfg, const TrainObserver& observer = {});

}  // namespace radapt
