#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ffrsim/analysis.hpp"
#include "ffrsim/experiments.hpp"
#include "ffrsim/simulator.hpp"
#include "ffrsim/stats.hpp"
#include "ffrsim/version.hpp"

namespace {

using namespace ffrsim;

std::vector<double> parse_grid_arg(const std::string& s) {
    std::vector<double> grid;
    if (s.find(':') != std::string::npos) {
        double lo = 0.0, hi = 0.0, step = 0.0;
        char c1 = 0, c2 = 0;
        std::istringstream ss(s);
        if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || hi < lo)
            throw CLI::ValidationError("--grid", "expected lo:hi:step with step > 0 and hi >= lo");
        const int n = static_cast<int>(std::lround((hi - lo) / step)) + 1;
        for (int i = 0; i < n; ++i) grid.push_back(lo + step * i);
        return grid;
    }
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            grid.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--grid", "bad numeric value '" + tok + "'");
        }
    }
    if (grid.empty()) throw CLI::ValidationError("--grid", "empty grid");
    return grid;
}

std::vector<double> parse_value_list(const std::string& s, const std::string& flag) {
    std::vector<double> values;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            values.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw CLI::ValidationError(flag, "bad numeric value '" + tok + "'");
        }
    }
    if (values.empty()) throw CLI::ValidationError(flag, "empty list");
    return values;
}

void write_outputs(const experiments::SweepResult& result, const std::string& out_csv,
                   const std::string& out_json, const std::string& out_plot,
                   const std::string& figure_label) {
    if (!out_csv.empty()) {
        experiments::write_text_file(out_csv, experiments::to_csv(result));
        std::cout << "wrote " << result.rows.size() << " rows to " << out_csv << "\n";
    }
    if (!out_json.empty()) {
        experiments::write_text_file(out_json, experiments::to_json_text(result));
        std::cout << "wrote JSON to " << out_json << "\n";
    }
    if (!out_plot.empty()) {
        experiments::write_text_file(out_plot, experiments::to_plot_csv(result, figure_label));
        std::cout << "wrote plot data to " << out_plot << "\n";
    }
}

int run_validate(std::uint64_t drops, int threads, std::uint64_t seed) {
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
        all_ok = all_ok && ok;
    };

    // Conditional classification probability against its closed form.
    {
        auto gen = rng::make_stream(seed);
        std::uniform_real_distribution<double> uL(0.02, 1.0);
        std::uniform_real_distribution<double> uT(-15.0, 15.0);
        const std::uint64_t n = 200000;
        double worst = 0.0;
        bool ok = true;
        for (int i = 0; i < 5; ++i) {
            const double L1 = uL(gen);
            const double L2 = uL(gen);
            const double T = ffr::db_to_linear(uT(gen));
            const double expected = ffr::ceu_prob_conditional(L1, L2, T);
            const double freq = stats::classification_mc_frequency(L1, L2, T, n, gen);
            const double se = std::sqrt(std::max(expected * (1.0 - expected), 1e-12) / static_cast<double>(n));
            worst = std::max(worst, std::fabs(freq - expected) / se);
            ok = ok && std::fabs(freq - expected) <= 3.0 * se;
        }
        report("classification closed form", ok,
               "max deviation " + std::to_string(worst) + " standard errors over 5 triples");
    }

    // Joint nearest-distance density normalizes to 1.
    {
        simulator::SimConfig base;
        const double lambda = base.lambda_bs;
        const auto inner = [lambda](double r1) {
            return analysis::integrate_semi_infinite(
                       [lambda, r1](double r2) { return analysis::joint_nearest_pdf(r1, r2, lambda); }, r1)
                .value;
        };
        const double total = analysis::integrate_semi_infinite(inner, 0.0).value;
        const bool ok = std::fabs(total - 1.0) <= 1e-6;
        report("joint distance density normalization", ok, "integral = " + std::to_string(total));
    }

    // Nearest-distance law of the simulated geometry.
    {
        simulator::SimConfig cfg;
        cfg.lambda_user = 0.0;
        cfg.master_seed = seed;
        const std::uint64_t n = std::min<std::uint64_t>(std::max<std::uint64_t>(drops, 2000), 20000);
        std::vector<double> r1;
        r1.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i)
            r1.push_back(simulator::generate_drop(cfg, i).typical_n2.r1);
        const double d = stats::ks_statistic(
            r1, [&](double r) { return stats::rayleigh_nearest_cdf(r, cfg.lambda_bs); });
        const double crit = stats::ks_critical_001(n);
        report("nearest-distance law (KS, alpha=0.01)", d < crit,
               "D = " + std::to_string(d) + ", critical " + std::to_string(crit));
    }

    // Simulated edge-user fraction against the analytical value.
    {
        const std::vector<std::pair<double, double>> combos{{0.0, 1.0}, {5.0, 0.5}, {-5.0, 2.0}};
        bool ok = true;
        double worst = 0.0;
        for (const auto& [t_db, beta] : combos) {
            simulator::SimConfig cfg;
            cfg.ffr.threshold_T = ffr::db_to_linear(t_db);
            cfg.pathloss.beta = beta;
            cfg.n_drops = std::max<std::uint64_t>(drops, 20000);
            cfg.master_seed = seed;
            const auto sim = simulator::estimate_ceu_fraction(cfg, threads);
            const double ana =
                analysis::average_ceu_probability(cfg.ffr.threshold_T, cfg.pathloss, cfg.lambda_bs);
            const double dev = std::fabs(sim.ceu_fraction - ana);
            worst = std::max(worst, dev);
            ok = ok && dev <= std::max(0.01, 3.0 * sim.ci);
        }
        report("edge-user probability theory vs simulation", ok,
               "max |deviation| = " + std::to_string(worst) + " over 3 parameter combos");
    }

    std::cout << (all_ok ? "validation suite: all checks passed\n"
                         : "validation suite: FAILURES present\n");
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic-geometry simulator and analysis toolkit for threshold-based FFR downlinks"};
    app.set_version_flag("--version", FFRSIM_VERSION);
    app.require_subcommand(1);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and emit CSV/JSON results");
    std::string sw_axis = "threshold_T_dB";
    std::string sw_grid;
    std::string sw_overlay;
    std::string sw_overlay_values;
    std::string sw_config;
    std::uint64_t sw_drops = 0;
    std::uint64_t sw_seed = 0;
    bool sw_seed_set = false;
    int sw_threads = 1;
    bool sw_parallel_points = false;
    std::string sw_out = "sweep.csv";
    std::string sw_json;
    std::string sw_plot;
    sweep->add_option("--axis", sw_axis, "Sweep axis: threshold_T_dB | beta | alpha | power_ratio_a");
    sweep->add_option("--grid", sw_grid, "Axis values: lo:hi:step or v1,v2,...")->required();
    sweep->add_option("--overlay", sw_overlay, "Optional overlay axis (same names as --axis)");
    sweep->add_option("--overlay-values", sw_overlay_values, "Overlay values: v1,v2,...");
    sweep->add_option("--config", sw_config, "Flat key=value config file for the base scenario");
    sweep->add_option("--drops", sw_drops, "Monte Carlo drops per grid point (default 100000)");
    sweep->add_option("--seed", sw_seed, "Master seed")->each([&](const std::string&) { sw_seed_set = true; });
    sweep->add_option("--threads", sw_threads, "Worker threads for the estimator");
    sweep->add_flag("--parallel-points", sw_parallel_points, "Distribute grid points across threads");
    sweep->add_option("--out", sw_out, "CSV output path");
    sweep->add_option("--json", sw_json, "JSON output path (includes full config metadata)");
    sweep->add_option("--emit-plot", sw_plot, "Long-format plot CSV path");

    // validate
    auto* validate = app.add_subcommand("validate", "Run the theory-vs-simulation validation suite");
    std::uint64_t va_drops = 20000;
    int va_threads = 1;
    std::uint64_t va_seed = 20260101;
    validate->add_option("--drops", va_drops, "Drops per statistical check (default 20000)");
    validate->add_option("--threads", va_threads, "Worker threads");
    validate->add_option("--seed", va_seed, "Master seed for the checks");

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "Grid-search constants the source figures leave unstated");
    std::string ca_figure = "all";
    std::uint64_t ca_drops = 15000;
    std::uint64_t ca_refine = 60000;
    int ca_threads = 1;
    std::uint64_t ca_seed = 777;
    std::string ca_record = "calibration/calibration.json";
    calibrate->add_option("--figure", ca_figure, "fig3 | fig4 | fig5 | all (default all)");
    calibrate->add_option("--drops", ca_drops, "Drops per candidate during the search");
    calibrate->add_option("--refine-drops", ca_refine, "Drops for the final report at the winner");
    calibrate->add_option("--threads", ca_threads, "Worker threads");
    calibrate->add_option("--seed", ca_seed, "Master seed for search estimates");
    calibrate->add_option("--record", ca_record, "Output path for the calibration record");

    // reproduce
    auto* reproduce = app.add_subcommand("reproduce", "Re-run a canned figure sweep from the calibration record");
    std::string rp_figure;
    std::uint64_t rp_drops = 100000;
    int rp_threads = 1;
    std::uint64_t rp_seed = 0;
    bool rp_seed_set = false;
    double rp_step = 0.0;
    std::string rp_record = "calibration/calibration.json";
    std::string rp_out;
    std::string rp_json;
    std::string rp_plot;
    reproduce->add_option("figure", rp_figure, "fig3 | fig4 | fig5")->required();
    reproduce->add_option("--drops", rp_drops, "Drops per grid point (default 100000)");
    reproduce->add_option("--threads", rp_threads, "Worker threads for the estimator");
    reproduce->add_option("--seed", rp_seed, "Master seed override")
        ->each([&](const std::string&) { rp_seed_set = true; });
    reproduce->add_option("--step", rp_step, "Grid step override (dB for fig3/fig4, beta for fig5)");
    reproduce->add_option("--record", rp_record, "Calibration record path");
    reproduce->add_option("--out", rp_out, "CSV output path (default <figure>.csv)");
    reproduce->add_option("--json", rp_json, "JSON output path");
    reproduce->add_option("--emit-plot", rp_plot, "Long-format plot CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sweep->parsed()) {
            experiments::SweepSpec spec;
            if (!sw_config.empty()) spec.base = experiments::load_config_file(sw_config);
            if (sw_drops > 0) spec.base.n_drops = sw_drops;
            if (sw_seed_set) spec.base.master_seed = sw_seed;
            spec.axis = experiments::axis_from_name(sw_axis);
            spec.grid = parse_grid_arg(sw_grid);
            if (!sw_overlay.empty()) {
                spec.overlay_axis = experiments::axis_from_name(sw_overlay);
                if (sw_overlay_values.empty())
                    throw CLI::ValidationError("--overlay-values", "required with --overlay");
                spec.overlay_values = parse_value_list(sw_overlay_values, "--overlay-values");
            }
            spec.n_threads = sw_threads;
            spec.parallel_points = sw_parallel_points;
            const auto result = experiments::run_sweep(spec);
            write_outputs(result, sw_out, sw_json, sw_plot, "sweep");
            return 0;
        }

        if (validate->parsed()) return run_validate(va_drops, va_threads, va_seed);

        if (calibrate->parsed()) {
            std::vector<experiments::CalibrationTarget> targets;
            if (ca_figure == "all")
                targets = experiments::acceptance_anchor_table();
            else
                targets = experiments::anchors_for(ca_figure);
            if (targets.empty() && ca_figure != "all")
                throw std::invalid_argument("unknown figure '" + ca_figure + "'");

            experiments::CalibrationOptions opts;
            opts.search_drops = ca_drops;
            opts.refine_drops = ca_refine;
            opts.n_threads = ca_threads;
            opts.master_seed = ca_seed;
            const auto record = experiments::calibrate_unstated(targets, opts);
            experiments::save_calibration(record, ca_record);
            std::cout << "calibration record written to " << ca_record << "\n";

            bool ok = true;
            auto print_fit = [&](const std::string& name, const experiments::FigureFit& fit) {
                if (!fit.calibrated) return;
                std::cout << name << ":";
                for (const auto& [k, v] : fit.params) std::cout << " " << k << "=" << v;
                std::cout << (fit.all_within ? "  (all anchors within tolerance)" : "  (ANCHORS MISSED)")
                          << "  worst score " << fit.worst_score << "\n";
                for (std::size_t i = 0; i < fit.target_names.size(); ++i)
                    std::cout << "  " << fit.target_names[i] << ": achieved " << fit.achieved[i]
                              << " vs expected " << fit.expected[i] << " (tol " << fit.tolerance[i]
                              << ")\n";
                ok = ok && fit.all_within;
            };
            print_fit("fig3", record.fig3);
            print_fit("fig4", record.fig4);
            print_fit("fig5", record.fig5);
            return ok ? 0 : 1;
        }

        if (reproduce->parsed()) {
            const auto record = experiments::load_calibration(rp_record);
            experiments::SweepSpec spec;
            if (rp_figure == "fig3")
                spec = experiments::fig3_spec(record, rp_drops, rp_threads,
                                              rp_step > 0.0 ? rp_step : 1.0);
            else if (rp_figure == "fig4")
                spec = experiments::fig4_spec(record, rp_drops, rp_threads,
                                              rp_step > 0.0 ? rp_step : 1.0);
            else if (rp_figure == "fig5")
                spec = experiments::fig5_spec(record, rp_drops, rp_threads,
                                              rp_step > 0.0 ? rp_step : 0.1);
            else
                throw std::invalid_argument("unknown figure '" + rp_figure + "' (expected fig3|fig4|fig5)");
            if (rp_seed_set) spec.base.master_seed = rp_seed;

            const auto result = experiments::run_sweep(spec);
            write_outputs(result, rp_out.empty() ? rp_figure + ".csv" : rp_out, rp_json, rp_plot,
                          rp_figure);
            return 0;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
