#include "radapt/artifacts.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace radapt {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

LossKind resolved_loss(const RunConfig& cfg, const ProblemSpec& spec) {
  if (cfg.loss.empty()) return spec.defaults.loss;
  const auto kind = parse_loss_kind(cfg.loss);
  if (!kind) throw std::invalid_argument("unknown loss kind '" + cfg.loss + "'");
  return *kind;
}

}  // namespace

RunConfig resolve(const RunConfig& cfg) {
  const ProblemSpec spec = make_experiment(cfg.experiment, {cfg.beta});
  RunConfig r = cfg;
  r.loss = loss_kind_name(resolved_loss(cfg, spec));
  if (r.elements < 0) r.elements = spec.defaults.elements;
  if (r.stage1_epochs < 0) r.stage1_epochs = spec.defaults.stage1_epochs;
  if (r.stage2_epochs < 0) r.stage2_epochs = spec.defaults.stage2_epochs;
  if (r.lr <= 0.0) r.lr = spec.defaults.lr;
  if (r.quad_points < 1 || r.quad_points > 16)
    throw std::invalid_argument("quad-points must lie in [1, 16]");
  if (r.elements < 1 + static_cast<int>(spec.fixed[0].size()))
    throw std::invalid_argument("too few elements for this experiment's fixed coordinates");
  return r;
}

void emit_solution_csv(const Snapshot& s, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  if (s.dim == 1) {
    out << "x,u_pred\n";
    for (std::size_t i = 0; i < s.axes[0].size(); ++i)
      out << fmt(s.axes[0][i]) << ',' << fmt(s.nodal[i]) << '\n';
  } else {
    out << "x,y,u_pred\n";
    const std::size_t ny = s.axes[1].size();
    for (std::size_t i = 0; i < s.axes[0].size(); ++i)
      for (std::size_t j = 0; j < ny; ++j)
        out << fmt(s.axes[0][i]) << ',' << fmt(s.axes[1][j]) << ',' << fmt(s.nodal[i * ny + j])
            << '\n';
  }
}

void emit_exact_csv(const ProblemSpec& spec, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  if (spec.dim == 1) {
    out << "x,u_exact\n";
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
      const double x = spec.lo[0] + (spec.hi[0] - spec.lo[0]) * i / (n - 1);
      out << fmt(x) << ',' << fmt(spec.exact_u(x, 0.0)) << '\n';
    }
  } else {
    out << "x,y,u_exact\n";
    const int n = 32;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double x = spec.lo[0] + (spec.hi[0] - spec.lo[0]) * i / (n - 1);
        const double y = spec.lo[1] + (spec.hi[1] - spec.lo[1]) * j / (n - 1);
        out << fmt(x) << ',' << fmt(y) << ',' << fmt(spec.exact_u(x, y)) << '\n';
      }
  }
}

void emit_loss_csv(std::span<const LossRecord> history, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "epoch,lossN\n";
  for (const LossRecord& rec : history) out << rec.epoch << ',' << fmt(rec.loss_error) << '\n';
}

void emit_convergence_csv(std::span<const NormaRow> rows, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "elements,static,static_FEM,r,r_FEM\n";
  for (const NormaRow& r : rows)
    out << r.elements << ',' << fmt(r.stat) << ',' << fmt(r.stat_fem) << ',' << fmt(r.r) << ','
        << fmt(r.r_fem) << '\n';
}

void emit_mesh_csv(const Snapshot& s, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "axis,coord\n";
  for (int d = 0; d < s.dim; ++d)
    for (double x : s.axes[static_cast<std::size_t>(d)]) out << d << ',' << fmt(x) << '\n';
}

void write_manifest(const RunConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "# radapt 0.1.0 run manifest; reusable as --config\n";
  out << "experiment=" << cfg.experiment << '\n';
  out << "loss=" << cfg.loss << '\n';
  out << "elements=" << cfg.elements << '\n';
  out << "beta=" << fmt(cfg.beta) << '\n';
  out << "seed=" << cfg.seed << '\n';
  out << "stage1-epochs=" << cfg.stage1_epochs << '\n';
  out << "stage2-epochs=" << cfg.stage2_epochs << '\n';
  out << "lr=" << fmt(cfg.lr) << '\n';
  out << "quad-points=" << cfg.quad_points << '\n';
  out << "record-every=" << cfg.record_every << '\n';
  if (!cfg.convergence.empty()) out << "convergence=" << cfg.convergence << '\n';
  out << "emit-solution=" << (cfg.emit_solution ? "true" : "false") << '\n';
  out << "emit-loss=" << (cfg.emit_loss ? "true" : "false") << '\n';
  out << "emit-mesh=" << (cfg.emit_mesh ? "true" : "false") << '\n';
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  RunConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line without '=': " + line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "experiment") cfg.experiment = std::stoi(value);
    else if (key == "loss") cfg.loss = value;
    else if (key == "elements") cfg.elements = std::stoi(value);
    else if (key == "beta") cfg.beta = std::stod(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "stage1-epochs") cfg.stage1_epochs = std::stoi(value);
    else if (key == "stage2-epochs") cfg.stage2_epochs = std::stoi(value);
    else if (key == "lr") cfg.lr = std::stod(value);
    else if (key == "quad-points") cfg.quad_points = std::stoi(value);
    else if (key == "record-every") cfg.record_every = std::stoi(value);
    else if (key == "convergence") cfg.convergence = value;
    else if (key == "out") cfg.out_dir = value;
    else if (key == "emit-solution") cfg.emit_solution = value == "true" || value == "1";
    else if (key == "emit-loss") cfg.emit_loss = value == "true" || value == "1";
    else if (key == "emit-mesh") cfg.emit_mesh = value == "true" || value == "1";
    else throw std::runtime_error("unknown config key '" + key + "'");
  }
  return cfg;
}

std::vector<int> parse_count_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  return out;
}

std::string default_out_dir() {
  const char* env = std::getenv("RADAPT_OUT");
  return env && *env ? env : ".";
}

int run_experiment(const RunConfig& raw, std::ostream& log) {
  RunConfig cfg;
  ProblemSpec spec;
  LossKind kind;
  std::vector<int> conv_counts;
  try {
    cfg = resolve(raw);
    spec = make_experiment(cfg.experiment, {cfg.beta});
    kind = *parse_loss_kind(cfg.loss);
    if (!spec.allows(kind))
      throw std::invalid_argument("experiment " + std::to_string(spec.id) +
                                  " does not support the " + cfg.loss + " loss");
    conv_counts = parse_count_list(cfg.convergence);
    if (!conv_counts.empty() && (spec.dim != 1 || spec.kind != ProblemKind::elliptic))
      throw std::invalid_argument("--convergence requires a 1D elliptic experiment");
    std::filesystem::create_directories(cfg.out_dir);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }

  const std::filesystem::path out(cfg.out_dir);
  write_manifest(cfg, out / "manifest");
  if (cfg.emit_solution) emit_exact_csv(spec, out / "exact.csv");

  TrainConfig tc;
  tc.stage1_epochs = cfg.stage1_epochs;
  tc.stage2_epochs = cfg.stage2_epochs;
  tc.lr1 = tc.lr2 = cfg.lr;
  tc.seed = cfg.seed;
  tc.quad_points = cfg.quad_points;
  tc.record_every = cfg.record_every;

  const Network net = Network::dense(spec.dim, 5, 10);
  std::vector<int> elements(static_cast<std::size_t>(spec.dim), cfg.elements);

  // History mirrored through the observer so an aborted run still leaves
  // its loss curve behind.
  std::vector<LossRecord> partial1, partial2;
  const TrainObserver observer = [&](const EpochView& v) {
    (v.stage == 1 ? partial1 : partial2).push_back({v.epoch, v.loss, v.loss_error});
  };

  TrainResult result;
  try {
    result = train_two_stage(spec, kind, elements, net, tc, observer);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    if (cfg.emit_loss) {
      emit_loss_csv(partial1, out / "loss_clean0.csv");
      emit_loss_csv(partial2, out / "loss_clean1.csv");
    }
    return 2;
  }

  if (cfg.emit_solution) {
    emit_solution_csv(result.stage1, out / "partition_0.csv");
    emit_solution_csv(result.stage2, out / "partition_1.csv");
  }
  if (cfg.emit_loss) {
    emit_loss_csv(result.history1, out / "loss_clean0.csv");
    emit_loss_csv(result.history2, out / "loss_clean1.csv");
  }
  if (cfg.emit_mesh) {
    emit_mesh_csv(result.stage1, out / "mesh_0.csv");
    emit_mesh_csv(result.stage2, out / "mesh_1.csv");
  }
  if (!result.history2.empty())
    log << "final loss_error: stage 1 = " << (result.history1.empty() ? 0.0 : result.history1.back().loss_error)
        << ", stage 2 = " << result.history2.back().loss_error << '\n';
  if (result.integration_warning)
    log << "warning: loss fell below the physical minimum at epoch "
        << result.integration_warning_epoch << " (integration error)\n";

  if (!conv_counts.empty()) {
    std::vector<NormaRow> rows;
    for (int count : conv_counts) {
      log << "convergence: " << count << " elements\n";
      TrainResult tr = train_two_stage(spec, kind, std::vector<int>{count}, net, tc);
      const std::vector<double> uniform = uniform_mesh(spec, count);
      const std::vector<double> fem_uniform = fem_solve_1d(uniform, spec);
      const std::vector<double> adapted =
          collapse_duplicate_nodes(tr.stage2.axes[0], spec.lo[0], spec.hi[0]);
      NormaRow row;
      row.elements = count;
      row.stat = energy_norm_error_pwl(spec, tr.stage1.axes[0], tr.stage1.nodal);
      row.stat_fem = energy_norm_error_pwl(spec, uniform, fem_uniform);
      row.r = energy_norm_error_pwl(spec, tr.stage2.axes[0], tr.stage2.nodal);
      if (adapted.size() >= 2) {
        const std::vector<double> fem_adapted = fem_solve_1d(adapted, spec);
        row.r_fem = energy_norm_error_pwl(spec, adapted, fem_adapted);
      } else {
        row.r_fem = row.r;
      }
      rows.push_back(row);
    }
    emit_convergence_csv(rows, out / "norma.csv");
  }
  return 0;
}

}  // namespace radapt
