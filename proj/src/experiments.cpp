#include "ffrsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>
#include <thread>

#include <json.hpp>

#include "ffrsim/analysis.hpp"
#include "ffrsim/version.hpp"

namespace ffrsim::experiments {

namespace {

using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Shortest round-trip decimal form; locale-independent by construction.
std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value '" + s + "' for key '" + key + "'");
    }
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer value '" + s + "' for key '" + key + "'");
    }
}

bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "off" || s == "no") return false;
    throw std::invalid_argument("config: bad boolean value '" + s + "' for key '" + key + "'");
}

json config_to_json(const simulator::SimConfig& c) {
    return json{{"lambda_bs_per_m2", c.lambda_bs},
                {"lambda_user_per_m2", c.lambda_user},
                {"window_half_width_m", c.window.half_width},
                {"alpha", c.pathloss.alpha},
                {"beta", c.pathloss.beta},
                {"threshold_T_linear", c.ffr.threshold_T},
                {"power_ratio_a", c.ffr.power_ratio_a},
                {"base_power_P_w", c.ffr.base_power_P},
                {"subbands_N", c.ffr.subbands_N},
                {"coverage_threshold_That_linear", c.coverage_threshold_That},
                {"n_drops", c.n_drops},
                {"master_seed", c.master_seed},
                {"reuse_broadcast_fade", c.reuse_broadcast_fade},
                {"max_regen_attempts", c.max_regen_attempts}};
}

simulator::SimConfig config_from_json(const json& j) {
    simulator::SimConfig c;
    c.lambda_bs = j.at("lambda_bs_per_m2").get<double>();
    c.lambda_user = j.at("lambda_user_per_m2").get<double>();
    c.window.half_width = j.at("window_half_width_m").get<double>();
    c.pathloss.alpha = j.at("alpha").get<double>();
    c.pathloss.beta = j.at("beta").get<double>();
    c.ffr.threshold_T = j.at("threshold_T_linear").get<double>();
    c.ffr.power_ratio_a = j.at("power_ratio_a").get<double>();
    c.ffr.base_power_P = j.at("base_power_P_w").get<double>();
    c.ffr.subbands_N = j.at("subbands_N").get<int>();
    c.coverage_threshold_That = j.at("coverage_threshold_That_linear").get<double>();
    c.n_drops = j.at("n_drops").get<std::uint64_t>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    c.reuse_broadcast_fade = j.at("reuse_broadcast_fade").get<bool>();
    c.max_regen_attempts = j.at("max_regen_attempts").get<int>();
    return c;
}

json fit_to_json(const FigureFit& f) {
    return json{{"params", f.params},           {"calibrated", f.calibrated},
                {"all_within", f.all_within},   {"worst_score", f.worst_score},
                {"target_names", f.target_names}, {"achieved", f.achieved},
                {"expected", f.expected},       {"tolerance", f.tolerance}};
}

FigureFit fit_from_json(const json& j) {
    FigureFit f;
    f.params = j.at("params").get<std::map<std::string, double>>();
    f.calibrated = j.at("calibrated").get<bool>();
    f.all_within = j.at("all_within").get<bool>();
    f.worst_score = j.at("worst_score").get<double>();
    f.target_names = j.at("target_names").get<std::vector<std::string>>();
    f.achieved = j.at("achieved").get<std::vector<double>>();
    f.expected = j.at("expected").get<std::vector<double>>();
    f.tolerance = j.at("tolerance").get<std::vector<double>>();
    return f;
}

double target_score(const CalibrationTarget& t, double achieved) {
    switch (t.kind) {
        case CalibrationTarget::Kind::approx:
            return std::fabs(achieved - t.expected) / t.tolerance;
        case CalibrationTarget::Kind::at_least:
            return achieved >= t.expected ? 0.0 : (t.expected - achieved) / t.tolerance;
        case CalibrationTarget::Kind::at_most:
            return achieved <= t.expected ? 0.0 : (achieved - t.expected) / t.tolerance;
    }
    return std::numeric_limits<double>::infinity();
}

void fill_fit_report(FigureFit& fit, const std::vector<CalibrationTarget>& targets,
                     const std::vector<double>& achieved) {
    fit.target_names.clear();
    fit.achieved = achieved;
    fit.expected.clear();
    fit.tolerance.clear();
    double worst = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        fit.target_names.push_back(targets[i].name);
        fit.expected.push_back(targets[i].expected);
        fit.tolerance.push_back(targets[i].tolerance);
        worst = std::max(worst, target_score(targets[i], achieved[i]));
    }
    fit.worst_score = worst;
    fit.all_within = worst <= 1.0;
    fit.calibrated = true;
}

std::vector<CalibrationTarget> filter_targets(const std::vector<CalibrationTarget>& targets,
                                              const std::string& figure) {
    std::vector<CalibrationTarget> out;
    for (const auto& t : targets)
        if (t.figure == figure) out.push_back(t);
    return out;
}

// Analytical edge-user probability for one fig3-style anchor at a given alpha.
double fig3_model_value(const CalibrationTarget& t, double alpha, const simulator::SimConfig& base) {
    pathloss::PathLossParams pl{alpha, t.overlay_value};
    return analysis::average_ceu_probability(ffr::db_to_linear(t.axis_value), pl, base.lambda_bs);
}

// Simulated coverage for one fig4-style anchor at a given (alpha, beta).
double fig4_model_value(const CalibrationTarget& t, double alpha, double beta,
                        const simulator::SimConfig& base, std::uint64_t drops, int threads,
                        std::uint64_t seed) {
    simulator::SimConfig cfg = base;
    cfg.pathloss = pathloss::PathLossParams{alpha, beta};
    cfg.ffr.power_ratio_a = t.overlay_value;
    cfg.ffr.threshold_T = ffr::db_to_linear(t.axis_value);
    cfg.n_drops = drops;
    cfg.master_seed = seed;
    return simulator::estimate(cfg, threads).coverage;
}

// Simulated coverage for one fig5-style anchor at a given (a, T_db).
double fig5_model_value(const CalibrationTarget& t, double power_ratio_a, double threshold_T_db,
                        const simulator::SimConfig& base, std::uint64_t drops, int threads,
                        std::uint64_t seed) {
    simulator::SimConfig cfg = base;
    cfg.pathloss = pathloss::PathLossParams{t.overlay_value, t.axis_value};
    cfg.ffr.power_ratio_a = power_ratio_a;
    cfg.ffr.threshold_T = ffr::db_to_linear(threshold_T_db);
    cfg.n_drops = drops;
    cfg.master_seed = seed;
    return simulator::estimate(cfg, threads).coverage;
}

void calibrate_fig3(FigureFit& fit, const std::vector<CalibrationTarget>& targets,
                    const CalibrationOptions& opts) {
    simulator::SimConfig base;
    (void)opts;

    auto worst_at = [&](double alpha, std::vector<double>* achieved_out) {
        double worst = 0.0;
        std::vector<double> achieved;
        achieved.reserve(targets.size());
        for (const auto& t : targets) {
            double v = kNaN;
            try {
                v = fig3_model_value(t, alpha, base);
                worst = std::max(worst, target_score(t, v));
            } catch (const analysis::QuadratureError& e) {
                v = e.best_estimate();
                worst = std::numeric_limits<double>::infinity();
            }
            achieved.push_back(v);
        }
        if (achieved_out) *achieved_out = std::move(achieved);
        return worst;
    };

    // Coarse log-spaced pass over the published candidate range, then a linear
    // refinement around the winner.
    const double lo = 1e-3;
    const double hi = 0.5;
    const int coarse_n = 81;
    double best_alpha = lo;
    double best_worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < coarse_n; ++i) {
        const double alpha =
            lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(coarse_n - 1));
        const double w = worst_at(alpha, nullptr);
        if (w < best_worst) {
            best_worst = w;
            best_alpha = alpha;
        }
    }
    const double step = best_alpha * (std::pow(hi / lo, 1.0 / (coarse_n - 1)) - 1.0);
    for (int i = -10; i <= 10; ++i) {
        const double alpha = best_alpha + step * static_cast<double>(i) / 10.0;
        if (alpha < lo || alpha > hi) continue;
        const double w = worst_at(alpha, nullptr);
        if (w < best_worst) {
            best_worst = w;
            best_alpha = alpha;
        }
    }

    std::vector<double> achieved;
    worst_at(best_alpha, &achieved);
    fit.params["alpha"] = best_alpha;
    fill_fit_report(fit, targets, achieved);
}

void calibrate_fig4(FigureFit& fit, const std::vector<CalibrationTarget>& targets,
                    const CalibrationOptions& opts) {
    simulator::SimConfig base;

    const std::vector<double> alphas{0.06, 0.08, 0.10, 0.12, 0.14, 0.16, 0.20};
    const std::vector<double> betas{0.5, 1.0, 1.5, 2.0};

    auto worst_at = [&](double alpha, double beta, std::uint64_t drops,
                        std::vector<double>* achieved_out) {
        double worst = 0.0;
        std::vector<double> achieved;
        achieved.reserve(targets.size());
        for (const auto& t : targets) {
            const double v =
                fig4_model_value(t, alpha, beta, base, drops, opts.n_threads, opts.master_seed);
            worst = std::max(worst, target_score(t, v));
            achieved.push_back(v);
        }
        if (achieved_out) *achieved_out = std::move(achieved);
        return worst;
    };

    double best_alpha = alphas.front();
    double best_beta = betas.front();
    double best_worst = std::numeric_limits<double>::infinity();
    for (const double beta : betas) {
        for (const double alpha : alphas) {
            const double w = worst_at(alpha, beta, opts.search_drops, nullptr);
            if (w < best_worst) {
                best_worst = w;
                best_alpha = alpha;
                best_beta = beta;
            }
        }
    }

    std::vector<double> achieved;
    worst_at(best_alpha, best_beta, opts.refine_drops, &achieved);
    fit.params["alpha"] = best_alpha;
    fit.params["beta"] = best_beta;
    fill_fit_report(fit, targets, achieved);
}

void calibrate_fig5(FigureFit& fit, const std::vector<CalibrationTarget>& targets,
                    const CalibrationOptions& opts) {
    simulator::SimConfig base;

    const std::vector<double> ratios{5.0, 10.0, 15.0};
    const std::vector<double> thresholds_db{-10.0, -5.0, 0.0, 5.0, 10.0};

    auto worst_at = [&](double a, double t_db, std::uint64_t drops,
                        std::vector<double>* achieved_out) {
        double worst = 0.0;
        std::vector<double> achieved;
        achieved.reserve(targets.size());
        for (const auto& t : targets) {
            const double v = fig5_model_value(t, a, t_db, base, drops, opts.n_threads, opts.master_seed);
            worst = std::max(worst, target_score(t, v));
            achieved.push_back(v);
        }
        if (achieved_out) *achieved_out = std::move(achieved);
        return worst;
    };

    double best_a = ratios.front();
    double best_t = thresholds_db.front();
    double best_worst = std::numeric_limits<double>::infinity();
    for (const double a : ratios) {
        for (const double t_db : thresholds_db) {
            const double w = worst_at(a, t_db, opts.search_drops, nullptr);
            if (w < best_worst) {
                best_worst = w;
                best_a = a;
                best_t = t_db;
            }
        }
    }

    std::vector<double> achieved;
    worst_at(best_a, best_t, opts.refine_drops, &achieved);
    fit.params["power_ratio_a"] = best_a;
    fit.params["threshold_T_db"] = best_t;
    fill_fit_report(fit, targets, achieved);
}

}  // namespace

std::string axis_name(Axis a) {
    switch (a) {
        case Axis::threshold_T_dB: return "threshold_T_dB";
        case Axis::beta: return "beta";
        case Axis::alpha: return "alpha";
        case Axis::power_ratio_a: return "power_ratio_a";
    }
    throw std::invalid_argument("axis_name: unknown axis");
}

Axis axis_from_name(const std::string& name) {
    if (name == "threshold_T_dB") return Axis::threshold_T_dB;
    if (name == "beta") return Axis::beta;
    if (name == "alpha") return Axis::alpha;
    if (name == "power_ratio_a") return Axis::power_ratio_a;
    throw std::invalid_argument("axis_from_name: unknown axis '" + name + "'");
}

void apply_axis(simulator::SimConfig& cfg, Axis axis, double value) {
    switch (axis) {
        case Axis::threshold_T_dB: cfg.ffr.threshold_T = ffr::db_to_linear(value); return;
        case Axis::beta: cfg.pathloss.beta = value; return;
        case Axis::alpha: cfg.pathloss.alpha = value; return;
        case Axis::power_ratio_a: cfg.ffr.power_ratio_a = value; return;
    }
    throw std::invalid_argument("apply_axis: unknown axis");
}

void SweepSpec::validate() const {
    base.validate();
    if (grid.empty()) throw std::invalid_argument("SweepSpec: grid must be non-empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("SweepSpec: grid must be strictly increasing");
    if (overlay_axis && overlay_values.empty())
        throw std::invalid_argument("SweepSpec: overlay axis set but no overlay values");
    if (overlay_axis && *overlay_axis == axis)
        throw std::invalid_argument("SweepSpec: overlay axis equals the sweep axis");
    if (n_threads < 1) throw std::invalid_argument("SweepSpec: n_threads must be >= 1");
    // Axis values must produce a valid config.
    for (const double v : grid) {
        simulator::SimConfig c = base;
        apply_axis(c, axis, v);
        c.validate();
    }
    if (overlay_axis) {
        for (const double v : overlay_values) {
            simulator::SimConfig c = base;
            apply_axis(c, *overlay_axis, v);
            c.validate();
        }
    }
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();

    SweepResult out;
    out.spec = spec;

    const bool has_overlay = spec.overlay_axis.has_value();
    const std::size_t n_overlay = has_overlay ? spec.overlay_values.size() : 1;
    const std::size_t n_points = spec.grid.size() * n_overlay;
    out.rows.resize(n_points);

    auto run_point = [&](std::size_t flat, int estimate_threads) {
        const std::size_t j = flat / spec.grid.size(); // overlay index
        const std::size_t i = flat % spec.grid.size(); // axis index

        simulator::SimConfig cfg = spec.base;
        apply_axis(cfg, spec.axis, spec.grid[i]);
        if (has_overlay) apply_axis(cfg, *spec.overlay_axis, spec.overlay_values[j]);
        cfg.master_seed = rng::point_seed(spec.base.master_seed, i, j);

        SweepRow row;
        row.axis_value = spec.grid[i];
        row.overlay_value = has_overlay ? spec.overlay_values[j] : kNaN;
        row.n_drops = cfg.n_drops;
        row.seed = cfg.master_seed;

        const auto est = simulator::estimate(cfg, estimate_threads);
        row.coverage = est.coverage;
        row.coverage_ci = est.coverage_ci;
        row.ceu_density = est.ceu_density;
        row.ceu_density_ci = est.ceu_density_ci;

        try {
            row.analytical_pe =
                analysis::average_ceu_probability(cfg.ffr.threshold_T, cfg.pathloss, cfg.lambda_bs);
            row.analytical_ok = true;
        } catch (const analysis::QuadratureError&) {
            row.analytical_pe = kNaN;
            row.analytical_ok = false;
        }
        out.rows[flat] = row;
    };

    if (spec.parallel_points && spec.n_threads > 1) {
        std::atomic<std::size_t> next{0};
        const int workers = static_cast<int>(
            std::min<std::size_t>(static_cast<std::size_t>(spec.n_threads), n_points));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (;;) {
                        const std::size_t flat = next.fetch_add(1);
                        if (flat >= n_points) break;
                        run_point(flat, 1);
                    }
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    } else {
        for (std::size_t flat = 0; flat < n_points; ++flat) run_point(flat, spec.n_threads);
    }

    return out;
}

std::string to_csv(const SweepResult& result) {
    std::string out = "axis,overlay,coverage,coverage_ci,ceu_density,ceu_density_ci,analytical_pe,n_drops,seed\n";
    for (const auto& r : result.rows) {
        out += format_double(r.axis_value);
        out += ',';
        if (!std::isnan(r.overlay_value)) out += format_double(r.overlay_value);
        out += ',';
        out += format_double(r.coverage);
        out += ',';
        out += format_double(r.coverage_ci);
        out += ',';
        out += format_double(r.ceu_density);
        out += ',';
        out += format_double(r.ceu_density_ci);
        out += ',';
        out += format_double(r.analytical_pe);
        out += ',';
        out += std::to_string(r.n_drops);
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

std::string to_plot_csv(const SweepResult& result, const std::string& figure_label) {
    std::string out = "figure,series,x,y,y_ci,analytical\n";
    const bool ceu_figure = figure_label == "fig3"; // fig3 plots CEU density, the rest coverage
    for (const auto& r : result.rows) {
        const std::string series =
            std::isnan(r.overlay_value)
                ? axis_name(result.spec.axis)
                : axis_name(*result.spec.overlay_axis) + "=" + format_double(r.overlay_value);
        out += figure_label;
        out += ',';
        out += series;
        out += ',';
        out += format_double(r.axis_value);
        out += ',';
        out += format_double(ceu_figure ? r.ceu_density : r.coverage);
        out += ',';
        out += format_double(ceu_figure ? r.ceu_density_ci : r.coverage_ci);
        out += ',';
        out += format_double(r.analytical_pe);
        out += '\n';
    }
    return out;
}

std::string to_json_text(const SweepResult& result) {
    json meta;
    meta["artifact_version"] = FFRSIM_VERSION;
    meta["axis"] = axis_name(result.spec.axis);
    meta["grid"] = result.spec.grid;
    if (result.spec.overlay_axis) {
        meta["overlay_axis"] = axis_name(*result.spec.overlay_axis);
        meta["overlay_values"] = result.spec.overlay_values;
    } else {
        meta["overlay_axis"] = nullptr;
        meta["overlay_values"] = json::array();
    }
    meta["n_threads"] = result.spec.n_threads;
    meta["parallel_points"] = result.spec.parallel_points;
    meta["base_config"] = config_to_json(result.spec.base);

    json rows = json::array();
    for (const auto& r : result.rows) {
        json jr;
        jr["axis"] = r.axis_value;
        if (std::isnan(r.overlay_value))
            jr["overlay"] = nullptr;
        else
            jr["overlay"] = r.overlay_value;
        jr["coverage"] = r.coverage;
        jr["coverage_ci"] = r.coverage_ci;
        jr["ceu_density"] = r.ceu_density;
        jr["ceu_density_ci"] = r.ceu_density_ci;
        if (r.analytical_ok)
            jr["analytical_pe"] = r.analytical_pe;
        else
            jr["analytical_pe"] = nullptr;
        jr["analytical_ok"] = r.analytical_ok;
        jr["n_drops"] = r.n_drops;
        jr["seed"] = r.seed;
        rows.push_back(std::move(jr));
    }

    json doc;
    doc["metadata"] = std::move(meta);
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

SweepSpec spec_from_json_text(const std::string& json_text) {
    const json doc = json::parse(json_text);
    const json& meta = doc.at("metadata");

    SweepSpec spec;
    spec.base = config_from_json(meta.at("base_config"));
    spec.axis = axis_from_name(meta.at("axis").get<std::string>());
    spec.grid = meta.at("grid").get<std::vector<double>>();
    if (!meta.at("overlay_axis").is_null()) {
        spec.overlay_axis = axis_from_name(meta.at("overlay_axis").get<std::string>());
        spec.overlay_values = meta.at("overlay_values").get<std::vector<double>>();
    }
    spec.n_threads = meta.at("n_threads").get<int>();
    spec.parallel_points = meta.at("parallel_points").get<bool>();
    return spec;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

simulator::SimConfig config_from_text(const std::string& text) {
    simulator::SimConfig c;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') continue; // section headers are organizational
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));

        if (key == "lambda_bs_per_m2") c.lambda_bs = parse_double(value, key);
        else if (key == "lambda_user_per_m2") c.lambda_user = parse_double(value, key);
        else if (key == "window_half_width_m") c.window.half_width = parse_double(value, key);
        else if (key == "alpha") c.pathloss.alpha = parse_double(value, key);
        else if (key == "beta") c.pathloss.beta = parse_double(value, key);
        else if (key == "threshold_T_db") c.ffr.threshold_T = ffr::db_to_linear(parse_double(value, key));
        else if (key == "power_ratio_a") c.ffr.power_ratio_a = parse_double(value, key);
        else if (key == "base_power_P_w") c.ffr.base_power_P = parse_double(value, key);
        else if (key == "subbands_N") c.ffr.subbands_N = static_cast<int>(parse_u64(value, key));
        else if (key == "coverage_threshold_That_db")
            c.coverage_threshold_That = ffr::db_to_linear(parse_double(value, key));
        else if (key == "n_drops") c.n_drops = parse_u64(value, key);
        else if (key == "master_seed") c.master_seed = parse_u64(value, key);
        else if (key == "reuse_broadcast_fade") c.reuse_broadcast_fade = parse_bool(value, key);
        else if (key == "max_regen_attempts") c.max_regen_attempts = static_cast<int>(parse_u64(value, key));
        else
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

simulator::SimConfig load_config_file(const std::string& path) {
    return config_from_text(read_text_file(path));
}

std::vector<CalibrationTarget> acceptance_anchor_table() {
    using K = CalibrationTarget::Kind;
    return {
        // fig3: edge-user density anchors (x = T in dB, overlay = beta)
        {"fig3", "ceu@T0dB,beta0.5", 0.0, 0.5, K::approx, 0.45, 0.05},
        {"fig3", "ceu@T0dB,beta1.5", 0.0, 1.5, K::approx, 0.30, 0.05},
        {"fig3", "ceu@T0dB,beta2.0", 0.0, 2.0, K::approx, 0.15, 0.05},
        {"fig3", "ceu@T20dB,beta0.5", 20.0, 0.5, K::at_least, 0.93, 0.01},
        {"fig3", "ceu@T20dB,beta2.0", 20.0, 2.0, K::at_most, 0.70, 0.01},
        // fig4: coverage anchors (x = T in dB, overlay = power ratio a)
        {"fig4", "cov@T-15dB,a10", -15.0, 10.0, K::approx, 0.905, 0.05},
        {"fig4", "cov@T0dB,a10", 0.0, 10.0, K::approx, 0.808, 0.05},
        {"fig4", "cov@T+15dB,a10", 15.0, 10.0, K::approx, 0.902, 0.05},
        {"fig4", "cov@T0dB,a5", 0.0, 5.0, K::approx, 0.873, 0.05},
        {"fig4", "cov@T0dB,a15", 0.0, 15.0, K::approx, 0.744, 0.05},
        // fig5: coverage anchors at beta = 1.2 (x = beta, overlay = alpha)
        {"fig5", "cov@beta1.2,alpha0.1", 1.2, 0.1, K::approx, 0.99, 0.07},
        {"fig5", "cov@beta1.2,alpha0.01", 1.2, 0.01, K::approx, 0.71, 0.07},
        {"fig5", "cov@beta1.2,alpha0.001", 1.2, 0.001, K::approx, 0.15, 0.07},
    };
}

std::vector<CalibrationTarget> anchors_for(const std::string& figure) {
    return filter_targets(acceptance_anchor_table(), figure);
}

CalibrationRecord default_calibration() {
    CalibrationRecord rec;
    rec.artifact_version = FFRSIM_VERSION;
    simulator::SimConfig base;
    rec.fig3.params["alpha"] = base.pathloss.alpha;
    rec.fig4.params["alpha"] = base.pathloss.alpha;
    rec.fig4.params["beta"] = base.pathloss.beta;
    rec.fig5.params["power_ratio_a"] = base.ffr.power_ratio_a;
    rec.fig5.params["threshold_T_db"] = ffr::linear_to_db(base.ffr.threshold_T);
    return rec;
}

CalibrationRecord calibrate_unstated(const std::vector<CalibrationTarget>& targets,
                                     const CalibrationOptions& opts) {
    CalibrationRecord rec = default_calibration();

    const auto fig3_targets = filter_targets(targets, "fig3");
    const auto fig4_targets = filter_targets(targets, "fig4");
    const auto fig5_targets = filter_targets(targets, "fig5");

    if (!fig3_targets.empty()) calibrate_fig3(rec.fig3, fig3_targets, opts);
    if (!fig4_targets.empty()) calibrate_fig4(rec.fig4, fig4_targets, opts);
    if (!fig5_targets.empty()) calibrate_fig5(rec.fig5, fig5_targets, opts);
    return rec;
}

void save_calibration(const CalibrationRecord& record, const std::string& path) {
    json doc;
    doc["artifact_version"] = record.artifact_version.empty() ? FFRSIM_VERSION : record.artifact_version;
    doc["fig3"] = fit_to_json(record.fig3);
    doc["fig4"] = fit_to_json(record.fig4);
    doc["fig5"] = fit_to_json(record.fig5);
    write_text_file(path, doc.dump(2) + "\n");
}

CalibrationRecord load_calibration(const std::string& path) {
    const json doc = json::parse(read_text_file(path));
    CalibrationRecord rec;
    rec.artifact_version = doc.at("artifact_version").get<std::string>();
    rec.fig3 = fit_from_json(doc.at("fig3"));
    rec.fig4 = fit_from_json(doc.at("fig4"));
    rec.fig5 = fit_from_json(doc.at("fig5"));
    return rec;
}

namespace {

std::vector<double> linear_grid(double lo, double hi, double step) {
    std::vector<double> grid;
    // Round the count so accumulated FP error cannot drop the last point.
    const int n = static_cast<int>(std::lround((hi - lo) / step)) + 1;
    for (int i = 0; i < n; ++i) grid.push_back(lo + step * i);
    return grid;
}

}  // namespace

SweepSpec fig3_spec(const CalibrationRecord& record, std::uint64_t n_drops, int n_threads,
                    double step_db) {
    SweepSpec spec;
    spec.base.pathloss.alpha = record.fig3.params.at("alpha");
    spec.base.n_drops = n_drops;
    spec.axis = Axis::threshold_T_dB;
    spec.grid = linear_grid(-10.0, 20.0, step_db);
    spec.overlay_axis = Axis::beta;
    spec.overlay_values = {0.5, 1.5, 2.0};
    spec.n_threads = n_threads;
    return spec;
}

SweepSpec fig4_spec(const CalibrationRecord& record, std::uint64_t n_drops, int n_threads,
                    double step_db) {
    SweepSpec spec;
    spec.base.pathloss.alpha = record.fig4.params.at("alpha");
    spec.base.pathloss.beta = record.fig4.params.at("beta");
    spec.base.n_drops = n_drops;
    spec.axis = Axis::threshold_T_dB;
    spec.grid = linear_grid(-15.0, 15.0, step_db);
    spec.overlay_axis = Axis::power_ratio_a;
    spec.overlay_values = {5.0, 10.0, 15.0};
    spec.n_threads = n_threads;
    return spec;
}

SweepSpec fig5_spec(const CalibrationRecord& record, std::uint64_t n_drops, int n_threads,
                    double beta_step) {
    SweepSpec spec;
    spec.base.ffr.power_ratio_a = record.fig5.params.at("power_ratio_a");
    spec.base.ffr.threshold_T = ffr::db_to_linear(record.fig5.params.at("threshold_T_db"));
    spec.base.n_drops = n_drops;
    spec.axis = Axis::beta;
    spec.grid = linear_grid(0.2, 2.0, beta_step);
    spec.overlay_axis = Axis::alpha;
    spec.overlay_values = {0.1, 0.01, 0.001};
    spec.n_threads = n_threads;
    return spec;
}

}  // namespace ffrsim::experiments
