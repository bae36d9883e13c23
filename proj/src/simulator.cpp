#include "ffrsim/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace ffrsim::simulator {

namespace {

constexpr geometry::Vec2 kOrigin{0.0, 0.0};

double extent_of(const geometry::PointSet& a, const geometry::PointSet& b) {
    double e = 1e-9;
    for (const auto& p : a.positions) e = std::max({e, std::fabs(p.x), std::fabs(p.y)});
    for (const auto& p : b.positions) e = std::max({e, std::fabs(p.x), std::fabs(p.y)});
    return e;
}

void sample_bss_resampling(const SimConfig& cfg, std::mt19937_64& gen, geometry::PointSet& bss) {
    for (int attempt = 0;; ++attempt) {
        geometry::sample_ppp_into(cfg.lambda_bs, cfg.window, gen, bss);
        if (bss.size() >= 2) return;
        if (attempt + 1 >= cfg.max_regen_attempts)
            throw geometry::DegenerateScenarioError(
                "generate_drop: window repeatedly produced fewer than 2 BSs");
    }
}

double ci_half_width(double p, std::uint64_t n) {
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

// Per-worker drop builder; buffers are reused across drops and every field is
// fully overwritten, so outcomes depend only on (master_seed, drop_index).
struct DropKernel {
    Scenario sc;
    detail::SirScratch scratch;

    void generate(const SimConfig& cfg, std::uint64_t drop_index) {
        auto gen = rng::make_stream(cfg.master_seed, drop_index, rng::Stage::geometry);

        sample_bss_resampling(cfg, gen, sc.bss);
        geometry::sample_ppp_into(cfg.lambda_user, cfg.window, gen, sc.users);
        sc.users.positions.insert(sc.users.positions.begin(), kOrigin);

        sc.fading.g1 = rng::exponential_gain(gen);
        sc.fading.g2 = rng::exponential_gain(gen);
        const double data_draw = rng::exponential_gain(gen);
        sc.fading.g_data = cfg.reuse_broadcast_fade ? sc.fading.g1 : data_draw;
        sc.fading.bs_to_typical.resize(sc.bss.size());
        for (auto& g : sc.fading.bs_to_typical) g = rng::exponential_gain(gen);

        // Deterministic post-processing: no RNG below this line.
        sc.typical_n2 = geometry::nearest_two(kOrigin, sc.bss);

        scratch.grid.build(sc.bss, geometry::Window{extent_of(sc.bss, sc.users)});
        scratch.grid.associate_all(sc.users, sc.association);
        scratch.build_csr_only(sc);
    }
};

template <typename PerWorker>
void run_workers(int threads, PerWorker&& body) {
    if (threads <= 1) {
        body(0);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                body(w);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

namespace detail {

void SirScratch::build_csr_only(const Scenario& sc) {
    const std::size_t n_bs = sc.bss.size();
    user_start.assign(n_bs + 1, 0);
    user_entries.resize(sc.users.size());
    for (const std::int32_t s : sc.association.serving)
        ++user_start[static_cast<std::size_t>(s) + 1];
    for (std::size_t b = 1; b <= n_bs; ++b) user_start[b] += user_start[b - 1];
    std::vector<std::int32_t> cursor(user_start.begin(), user_start.end() - 1);
    for (std::size_t u = 0; u < sc.users.size(); ++u) {
        const auto s = static_cast<std::size_t>(sc.association.serving[u]);
        user_entries[static_cast<std::size_t>(cursor[s])] = static_cast<std::int32_t>(u);
        ++cursor[s];
    }
}

void SirScratch::build(const Scenario& sc) {
    grid.build(sc.bss, geometry::Window{extent_of(sc.bss, sc.users)});
    build_csr_only(sc);
}

double selected_power(int bs_index, const Scenario& sc, const SimConfig& cfg, const SirScratch& s,
                      std::mt19937_64& gen) {
    const std::int32_t load = sc.association.load[static_cast<std::size_t>(bs_index)];
    if (load < 1)
        throw std::invalid_argument("interferer_power_level: BS has no served users");

    std::int32_t pos = 0;
    if (load > 1) pos = std::uniform_int_distribution<std::int32_t>(0, load - 1)(gen);
    const std::int32_t u =
        s.user_entries[static_cast<std::size_t>(s.user_start[static_cast<std::size_t>(bs_index)] + pos)];

    const auto n2 = s.grid.nearest_two(sc.users[static_cast<std::size_t>(u)]);
    const double L1 = pathloss::loss(n2.r1, cfg.pathloss);
    const double L2 = pathloss::loss(n2.r2, cfg.pathloss);
    const double g1 = rng::exponential_gain(gen);
    const double g2 = rng::exponential_gain(gen);
    const auto cls = ffr::classify(g1, g2, L1, L2, cfg.ffr.threshold_T);
    return ffr::tx_power(cls, cfg.ffr);
}

DropOutcome typical_sir_with_scratch(const Scenario& sc, const SimConfig& cfg, const SirScratch& s,
                                     std::mt19937_64& gen) {
    const int serving = sc.typical_n2.index1;
    const double L1 = pathloss::loss(sc.typical_n2.r1, cfg.pathloss);
    const double L2 = pathloss::loss(sc.typical_n2.r2, cfg.pathloss);

    DropOutcome out;
    out.cls = ffr::classify(sc.fading.g1, sc.fading.g2, L1, L2, cfg.ffr.threshold_T);
    const double desired = ffr::tx_power(out.cls, cfg.ffr) * sc.fading.g_data * L1;

    const auto& typical = sc.typical();
    double interference = 0.0;
    const int n_bs = static_cast<int>(sc.bss.size());
    for (int k = 0; k < n_bs; ++k) {
        if (k == serving) continue;
        const std::int32_t load = sc.association.load[static_cast<std::size_t>(k)];
        if (!subband_active(load, cfg.ffr.subbands_N, gen)) continue;
        const double power = selected_power(k, sc, cfg, s, gen);
        const double r_k = std::sqrt(geometry::dist2(sc.bss[static_cast<std::size_t>(k)], typical));
        interference += power * sc.fading.bs_to_typical[static_cast<std::size_t>(k)] *
                        pathloss::loss(r_k, cfg.pathloss);
        ++out.interferer_count;
    }

    out.sir = interference > 0.0 ? desired / interference
                                 : std::numeric_limits<double>::infinity();
    out.covered = out.sir > cfg.coverage_threshold_That;
    return out;
}

}  // namespace detail

Scenario generate_drop(const SimConfig& cfg, std::uint64_t drop_index) {
    cfg.validate();
    DropKernel kernel;
    kernel.generate(cfg, drop_index);
    return std::move(kernel.sc);
}

bool subband_active(std::int32_t load, int N, std::mt19937_64& gen) {
    if (load < 0) throw std::invalid_argument("subband_active: load must be >= 0");
    if (N < 1) throw std::invalid_argument("subband_active: N must be >= 1");
    if (load == 0) return false;
    if (load >= N) return true;
    return std::bernoulli_distribution(static_cast<double>(load) / N)(gen);
}

double interferer_power_level(int bs_index, const Scenario& sc, const SimConfig& cfg,
                              std::mt19937_64& gen) {
    if (bs_index < 0 || static_cast<std::size_t>(bs_index) >= sc.bss.size())
        throw std::invalid_argument("interferer_power_level: bs_index out of range");
    detail::SirScratch s;
    s.build(sc);
    return detail::selected_power(bs_index, sc, cfg, s, gen);
}

DropOutcome typical_sir(const Scenario& sc, const SimConfig& cfg, std::mt19937_64& gen) {
    detail::SirScratch s;
    s.build(sc);
    return detail::typical_sir_with_scratch(sc, cfg, s, gen);
}

DropOutcome run_drop(const SimConfig& cfg, std::uint64_t drop_index) {
    cfg.validate();
    DropKernel kernel;
    kernel.generate(cfg, drop_index);
    auto gen = rng::make_stream(cfg.master_seed, drop_index, rng::Stage::sir);
    return detail::typical_sir_with_scratch(kernel.sc, cfg, kernel.scratch, gen);
}

EstimateResult estimate(const SimConfig& cfg, int n_threads) {
    cfg.validate();
    const std::uint64_t n = cfg.n_drops;
    const int threads =
        static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max(1, n_threads)), n));
    constexpr std::uint64_t kChunk = 256;

    std::atomic<std::uint64_t> next{0};
    std::vector<std::int64_t> covered_counts(static_cast<std::size_t>(threads), 0);
    std::vector<std::int64_t> ceu_counts(static_cast<std::size_t>(threads), 0);

    run_workers(threads, [&](int w) {
        DropKernel kernel;
        std::int64_t covered = 0;
        std::int64_t ceu = 0;
        for (;;) {
            const std::uint64_t i0 = next.fetch_add(kChunk, std::memory_order_relaxed);
            if (i0 >= n) break;
            const std::uint64_t i1 = std::min(i0 + kChunk, n);
            for (std::uint64_t i = i0; i < i1; ++i) {
                kernel.generate(cfg, i);
                auto gen = rng::make_stream(cfg.master_seed, i, rng::Stage::sir);
                const auto out = detail::typical_sir_with_scratch(kernel.sc, cfg, kernel.scratch, gen);
                covered += out.covered ? 1 : 0;
                ceu += out.cls == ffr::UserClass::CEU ? 1 : 0;
            }
        }
        covered_counts[static_cast<std::size_t>(w)] = covered;
        ceu_counts[static_cast<std::size_t>(w)] = ceu;
    });

    std::int64_t covered_total = 0;
    std::int64_t ceu_total = 0;
    for (int w = 0; w < threads; ++w) {
        covered_total += covered_counts[static_cast<std::size_t>(w)];
        ceu_total += ceu_counts[static_cast<std::size_t>(w)];
    }

    EstimateResult res;
    res.n_drops = n;
    res.coverage = static_cast<double>(covered_total) / static_cast<double>(n);
    res.ceu_density = static_cast<double>(ceu_total) / static_cast<double>(n);
    res.coverage_ci = ci_half_width(res.coverage, n);
    res.ceu_density_ci = ci_half_width(res.ceu_density, n);
    return res;
}

CeuFractionResult estimate_ceu_fraction(const SimConfig& cfg, int n_threads) {
    cfg.validate();
    const std::uint64_t n = cfg.n_drops;
    const int threads =
        static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max(1, n_threads)), n));
    constexpr std::uint64_t kChunk = 1024;

    std::atomic<std::uint64_t> next{0};
    std::vector<std::int64_t> ceu_counts(static_cast<std::size_t>(threads), 0);

    run_workers(threads, [&](int w) {
        geometry::PointSet bss;
        std::int64_t ceu = 0;
        for (;;) {
            const std::uint64_t i0 = next.fetch_add(kChunk, std::memory_order_relaxed);
            if (i0 >= n) break;
            const std::uint64_t i1 = std::min(i0 + kChunk, n);
            for (std::uint64_t i = i0; i < i1; ++i) {
                auto gen = rng::make_stream(cfg.master_seed, i, rng::Stage::class_only);
                sample_bss_resampling(cfg, gen, bss);
                const auto n2 = geometry::nearest_two(kOrigin, bss);
                const double g1 = rng::exponential_gain(gen);
                const double g2 = rng::exponential_gain(gen);
                const double L1 = pathloss::loss(n2.r1, cfg.pathloss);
                const double L2 = pathloss::loss(n2.r2, cfg.pathloss);
                const auto cls = ffr::classify(g1, g2, L1, L2, cfg.ffr.threshold_T);
                ceu += cls == ffr::UserClass::CEU ? 1 : 0;
            }
        }
        ceu_counts[static_cast<std::size_t>(w)] = ceu;
    });

    std::int64_t ceu_total = 0;
    for (int w = 0; w < threads; ++w) ceu_total += ceu_counts[static_cast<std::size_t>(w)];

    CeuFractionResult res;
    res.n_drops = n;
    res.ceu_fraction = static_cast<double>(ceu_total) / static_cast<double>(n);
    res.ci = ci_half_width(res.ceu_fraction, n);
    return res;
}

}  // namespace ffrsim::simulator
