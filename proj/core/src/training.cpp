#include "radapt/training.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace radapt {

void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state,
               const AdamConfig& cfg, double lr) {
  const std::size_t n = params.size();
  if (grad.size() != n || state.m.size() != n)
    throw std::invalid_argument("adam_step: parameter/gradient/state size mismatch");
  state.step += 1;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < n; ++i) {
    if (state.frozen[i]) continue;
    const double g = grad[i];
    if (!std::isfinite(g))
      throw nonfinite_gradient_error(
          "adam_step: non-finite gradient for parameter " + std::to_string(i), i);
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + cfg.eps);
  }
}

void set_freeze_mask(AdamState& state, FreezeMask mask, std::size_t theta_count) {
  for (std::size_t i = 0; i < state.frozen.size(); ++i)
    state.frozen[i] = (mask == FreezeMask::theta_only && i >= theta_count) ? 1 : 0;
}

namespace {

struct ParamLayout {
  std::size_t theta_count = 0;
  std::array<std::size_t, 2> psi_offset{};  // into the flat parameter vector
  std::array<std::size_t, 2> psi_count{};
  int dim = 1;

  std::string name_of(std::size_t i) const {
    if (i < theta_count) return "theta[" + std::to_string(i) + "]";
    for (int d = dim - 1; d >= 0; --d) {
      const auto dd = static_cast<std::size_t>(d);
      if (i >= psi_offset[dd])
        return "psi[axis " + std::to_string(d) + "][" + std::to_string(i - psi_offset[dd]) + "]";
    }
    return "param[" + std::to_string(i) + "]";
  }
};

struct Forward {
  TensorMesh mesh;
  std::vector<ad::Var> vars;   // leaves, aligned with the flat parameter vector
  std::vector<ad::Var> nodal;  // lifted nodal values
};

Forward run_forward(ad::Tape& tape, const ProblemSpec& spec, const Network& net,
                    const ParamLayout& layout, std::span<const double> params) {
  Forward fw;
  fw.vars = tape.leaves(params);
  std::span<const ad::Var> all(fw.vars);
  std::vector<std::vector<ad::Var>> axes;
  for (int d = 0; d < layout.dim; ++d) {
    const auto dd = static_cast<std::size_t>(d);
    axes.push_back(build_axis(tape, all.subspan(layout.psi_offset[dd], layout.psi_count[dd]),
                              spec.lo[dd], spec.hi[dd], spec.fixed[dd]));
  }
  fw.mesh = build_mesh(std::move(axes));
  std::vector<ad::Var> raw = nn_at_nodes(net, all.subspan(0, layout.theta_count), fw.mesh);
  fw.nodal = apply_lift(fw.mesh, spec.phi_d, nullptr, raw);
  return fw;
}

}  // namespace

TrainResult train_two_stage(const ProblemSpec& spec, LossKind kind,
                            std::span<const int> elements_per_axis, const Network& net,
                            const TrainConfig& cfg, const TrainObserver& observer) {
  if (!spec.allows(kind))
    throw std::invalid_argument(std::string("train_two_stage: loss '") + loss_kind_name(kind) +
                                "' is not available for experiment " + std::to_string(spec.id));
  if (static_cast<int>(elements_per_axis.size()) != spec.dim)
    throw std::invalid_argument("train_two_stage: one element count per axis required");
  if (net.input_dim != spec.dim)
    throw std::invalid_argument("train_two_stage: network input width must match the dimension");
  if (cfg.stage1_epochs < 0 || cfg.stage2_epochs < 0)
    throw std::invalid_argument("train_two_stage: epoch counts must be >= 0");
  if (!(cfg.lr1 > 0.0) || !(cfg.lr2 > 0.0) || cfg.lr_decay_every < 1)
    throw std::invalid_argument("train_two_stage: learning rates must be positive");
  if (cfg.adam.beta1 < 0.0 || cfg.adam.beta1 >= 1.0 || cfg.adam.beta2 < 0.0 ||
      cfg.adam.beta2 >= 1.0)
    throw std::invalid_argument("train_two_stage: Adam betas must lie in [0, 1)");

  ParamLayout layout;
  layout.dim = spec.dim;
  layout.theta_count = net.param_count();

  std::vector<double> params = net.init_params(cfg.seed);
  for (int d = 0; d < spec.dim; ++d) {
    const auto dd = static_cast<std::size_t>(d);
    const int n_fix = static_cast<int>(spec.fixed[dd].size());
    const int n_delta = elements_per_axis[dd] - 1 - n_fix;
    if (n_delta < 0)
      throw std::invalid_argument("train_two_stage: too few elements for the fixed coordinates");
    const std::vector<double> psi = init_uniform(n_delta);
    layout.psi_offset[dd] = params.size();
    layout.psi_count[dd] = psi.size();
    params.insert(params.end(), psi.begin(), psi.end());
  }

  TrainResult res;
  AdamState state(params.size());
  set_freeze_mask(state, FreezeMask::theta_only, layout.theta_count);

  ad::Tape tape;
  const auto make_snapshot = [&] {
    tape.clear();
    Forward fw = run_forward(tape, spec, net, layout, params);
    return snapshot_from(fw.mesh, fw.nodal);
  };

  const int total_epochs = cfg.stage1_epochs + cfg.stage2_epochs;
  if (cfg.stage1_epochs == 0) res.stage1 = make_snapshot();

  std::vector<double> grad(params.size());
  std::vector<std::vector<double>> coords_now;
  for (int epoch = 1; epoch <= total_epochs; ++epoch) {
    const int stage = epoch <= cfg.stage1_epochs ? 1 : 2;
    if (epoch == cfg.stage1_epochs + 1) set_freeze_mask(state, FreezeMask::all, layout.theta_count);

    tape.clear();
    Forward fw;
    try {
      fw = run_forward(tape, spec, net, layout, params);
    } catch (const degenerate_axis_error& e) {
      throw std::runtime_error("training aborted at epoch " + std::to_string(epoch) + ": " +
                               e.what());
    }
    ad::Var loss = loss_value(kind, spec, fw.mesh, fw.nodal, cfg.quad_points);
    if (!std::isfinite(loss.value()))
      throw std::runtime_error("training aborted at epoch " + std::to_string(epoch) +
                               ": non-finite loss");
    const double le = loss_error(loss.value(), spec);
    if (le < -cfg.integration_warn_tol && !res.integration_warning) {
      res.integration_warning = true;
      res.integration_warning_epoch = epoch;
    }
    if (cfg.record_every > 0 && (epoch % cfg.record_every == 0 || epoch == total_epochs))
      (stage == 1 ? res.history1 : res.history2).push_back({epoch, loss.value(), le});

    if (observer) {
      coords_now.clear();
      for (int d = 0; d < spec.dim; ++d)
        coords_now.push_back(axis_values(fw.mesh.axes[static_cast<std::size_t>(d)]));
      observer(EpochView{epoch, stage, loss.value(), le, coords_now});
    }

    ad::Gradient adj = tape.backward(loss);
    for (std::size_t i = 0; i < params.size(); ++i) grad[i] = adj[fw.vars[i]];

    const double decay = std::pow(cfg.lr_decay, (epoch - 1) / cfg.lr_decay_every);
    const double lr = (stage == 1 ? cfg.lr1 : cfg.lr2) * decay;
    try {
      adam_step(params, grad, state, cfg.adam, lr);
    } catch (const nonfinite_gradient_error& e) {
      throw std::runtime_error("training aborted at epoch " + std::to_string(epoch) +
                               ": non-finite gradient for " + layout.name_of(e.index));
    }

    if (epoch == cfg.stage1_epochs) res.stage1 = make_snapshot();
  }
  res.stage2 = cfg.stage2_epochs == 0 && cfg.stage1_epochs == 0 ? res.stage1 : make_snapshot();

  res.theta.assign(params.begin(), params.begin() + static_cast<long>(layout.theta_count));
  for (int d = 0; d < spec.dim; ++d) {
    const auto dd = static_cast<std::size_t>(d);
    res.psi[dd].assign(params.begin() + static_cast<long>(layout.psi_offset[dd]),
                       params.begin() +
                           static_cast<long>(layout.psi_offset[dd] + layout.psi_count[dd]));
  }
  return res;
}

}  // namespace radapt
