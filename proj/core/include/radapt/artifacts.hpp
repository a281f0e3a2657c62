#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "radapt/fem.hpp"
#include "radapt/training.hpp"

namespace radapt {

/// One CLI run. Fields set to -1 (or an empty loss string) resolve from the
/// experiment catalog; the manifest always records resolved values so a run
/// can be reproduced from it alone.
struct RunConfig {
  int experiment = 2;
  std::string loss;  // "", "collocation", "least-squares", "ritz"
  int elements = -1;
  double beta = 1e-3;
  std::uint64_t seed = 1;
  int stage1_epochs = -1;
  int stage2_epochs = -1;
  double lr = -1.0;
  int quad_points = 5;
  int record_every = 1;
  std::string out_dir = ".";
  std::string convergence;  // comma-separated element counts; empty = none
  bool emit_solution = true;
  bool emit_loss = true;
  bool emit_mesh = false;
};

/// Fills every defaulted field from the experiment catalog.
RunConfig resolve(const RunConfig& cfg);

/// Runs one experiment end to end and emits the artifact files into
/// cfg.out_dir. Returns 0 on success, 1 for invalid configs, 2 when
/// training aborts (partial artifacts are kept).
int run_experiment(const RunConfig& cfg, std::ostream& log);

/// Nodal solution rows: "x,u_pred" (1D) or "x,y,u_pred" (2D, row-major with
/// the last axis fastest), full double precision.
void emit_solution_csv(const Snapshot& s, const std::filesystem::path& path);

/// Dense exact-solution samples: 1000 uniform points in 1D ("x,u_exact"),
/// a 32x32 grid in 2D ("x,y,u_exact").
void emit_exact_csv(const ProblemSpec& spec, const std::filesystem::path& path);

/// Loss history rows "epoch,lossN" where lossN is the loss error; stage-2
/// epochs continue the stage-1 counter.
void emit_loss_csv(std::span<const LossRecord> history, const std::filesystem::path& path);

struct NormaRow {
  int elements;
  double stat, stat_fem, r, r_fem;
};
void emit_convergence_csv(std::span<const NormaRow> rows, const std::filesystem::path& path);

void emit_mesh_csv(const Snapshot& s, const std::filesystem::path& path);

/// Resolved config echo as flat key=value text, loadable both by
/// load_config_file and by the CLI's --config option.
void write_manifest(const RunConfig& cfg, const std::filesystem::path& path);

RunConfig load_config_file(const std::filesystem::path& path);

std::vector<int> parse_count_list(const std::string& csv);

/// Output directory fallback: $RADAPT_OUT if set, else ".".
std::string default_out_dir();

}  // namespace radapt
