#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ffrsim/simulator.hpp"

namespace ffrsim::experiments {

enum class Axis { threshold_T_dB, beta, alpha, power_ratio_a };

std::string axis_name(Axis a);
Axis axis_from_name(const std::string& name);

// Applies one axis value to a config (dB converted at this boundary).
void apply_axis(simulator::SimConfig& cfg, Axis axis, double value);

struct SweepSpec {
    simulator::SimConfig base{};
    Axis axis = Axis::threshold_T_dB;
    std::vector<double> grid; // non-empty, strictly increasing
    std::optional<Axis> overlay_axis;
    std::vector<double> overlay_values; // used only when overlay_axis is set
    int n_threads = 1;
    // Points run sequentially by default; when true they are distributed
    // across n_threads workers instead (each estimate single-threaded).
    bool parallel_points = false;

    void validate() const;
};

struct SweepRow {
    double axis_value = 0.0;
    double overlay_value = 0.0; // NaN when the sweep has no overlay
    double coverage = 0.0;
    double coverage_ci = 0.0;
    double ceu_density = 0.0;
    double ceu_density_ci = 0.0;
    double analytical_pe = 0.0; // NaN when the quadrature failed
    bool analytical_ok = true;
    std::uint64_t n_drops = 0;
    std::uint64_t seed = 0; // per-point seed: hash(master_seed, axis idx, overlay idx)
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;
};

// One simulator estimate plus the analytical edge-user probability per grid x
// overlay point. A quadrature failure flags the row and the sweep continues.
SweepResult run_sweep(const SweepSpec& spec);

// CSV with columns exactly:
// axis,overlay,coverage,coverage_ci,ceu_density,ceu_density_ci,analytical_pe,n_drops,seed
std::string to_csv(const SweepResult& result);
// Long-format plot data: figure,series,x,y,y_ci,analytical
std::string to_plot_csv(const SweepResult& result, const std::string& figure_label);
// JSON with a metadata header holding the full base config and artifact version.
std::string to_json_text(const SweepResult& result);
// Rebuilds a runnable spec from emitted JSON; re-running reproduces the rows.
SweepSpec spec_from_json_text(const std::string& json_text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Flat key/value config file; keys carry explicit units (threshold_T_db,
// lambda_bs_per_m2, ...). Unknown keys are errors.
simulator::SimConfig load_config_file(const std::string& path);
simulator::SimConfig config_from_text(const std::string& text);

// ---- Calibration of constants the source figures leave unstated ----

struct CalibrationTarget {
    std::string figure; // fig3 | fig4 | fig5
    std::string name;   // anchor label for reports
    double axis_value = 0.0;    // T (dB) for fig3/fig4, beta for fig5
    double overlay_value = 0.0; // beta for fig3, power ratio a for fig4, alpha for fig5
    enum class Kind { approx, at_least, at_most } kind = Kind::approx;
    double expected = 0.0;
    double tolerance = 0.05;
};

// The published anchor values the calibration can target.
std::vector<CalibrationTarget> acceptance_anchor_table();
std::vector<CalibrationTarget> anchors_for(const std::string& figure);

struct FigureFit {
    std::map<std::string, double> params; // parameter name -> calibrated value
    bool calibrated = false;              // false: defaults in force
    bool all_within = false;
    double worst_score = 0.0; // max |residual|/tolerance over targets
    std::vector<std::string> target_names;
    std::vector<double> achieved;
    std::vector<double> expected;
    std::vector<double> tolerance;
};

struct CalibrationRecord {
    std::string artifact_version;
    FigureFit fig3; // params: alpha
    FigureFit fig4; // params: alpha, beta
    FigureFit fig5; // params: power_ratio_a, threshold_T_db
};

struct CalibrationOptions {
    std::uint64_t search_drops = 15000;
    std::uint64_t refine_drops = 60000;
    int n_threads = 1;
    std::uint64_t master_seed = 777;
};

CalibrationRecord default_calibration();
// Grid-searches the unstated parameters for the figures named in `targets`;
// figures without targets keep defaults. Empty targets -> identity record.
CalibrationRecord calibrate_unstated(const std::vector<CalibrationTarget>& targets,
                                     const CalibrationOptions& opts = {});
void save_calibration(const CalibrationRecord& record, const std::string& path);
CalibrationRecord load_calibration(const std::string& path);

// ---- Canned figure sweeps (grids from the source prose) ----

SweepSpec fig3_spec(const CalibrationRecord& record, std::uint64_t n_drops = 100000,
                    int n_threads = 1, double step_db = 1.0);
SweepSpec fig4_spec(const CalibrationRecord& record, std::uint64_t n_drops = 100000,
                    int n_threads = 1, double step_db = 1.0);
SweepSpec fig5_spec(const CalibrationRecord& record, std::uint64_t n_drops = 100000,
                    int n_threads = 1, double beta_step = 0.1);

}  // namespace ffrsim::experiments
