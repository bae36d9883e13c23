#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ffrsim/ffr.hpp"
#include "ffrsim/geometry.hpp"
#include "ffrsim/pathloss.hpp"
#include "ffrsim/rng.hpp"

namespace ffrsim::simulator {

struct SimConfig {
    double lambda_bs = 1e-2;   // BS/m^2
    double lambda_user = 1e-1; // users/m^2 (10x the BS density by default)
    geometry::Window window{};
    ffr::FfrConfig ffr{};
    pathloss::PathLossParams pathloss{};
    double coverage_threshold_That = 1e-2; // linear SIR, -20 dB
    std::uint64_t n_drops = 100000;
    std::uint64_t master_seed = 24243;
    // Sensitivity switch: reuse the broadcast fade g1 as the data-channel fade
    // instead of drawing a fresh one.
    bool reuse_broadcast_fade = false;
    int max_regen_attempts = 10000;

    void validate() const {
        window.validate();
        ffr.validate();
        pathloss.validate();
        if (!(lambda_bs > 0.0) || !std::isfinite(lambda_bs))
            throw std::invalid_argument("SimConfig: lambda_bs must be > 0 and finite");
        if (!(lambda_user >= 0.0) || !std::isfinite(lambda_user))
            throw std::invalid_argument("SimConfig: lambda_user must be >= 0 and finite");
        if (!(coverage_threshold_That > 0.0) || !std::isfinite(coverage_threshold_That))
            throw std::invalid_argument("SimConfig: coverage_threshold_That must be > 0 (linear)");
        if (n_drops < 1) throw std::invalid_argument("SimConfig: n_drops must be >= 1");
        if (max_regen_attempts < 1)
            throw std::invalid_argument("SimConfig: max_regen_attempts must be >= 1");
    }
};

// Fades drawn at drop generation: broadcast pair (g1, g2) used for
// classification, the serving data-channel fade, and one gain per
// BS -> typical interference link.
struct Fading {
    double g1 = 0.0;
    double g2 = 0.0;
    double g_data = 0.0;
    std::vector<double> bs_to_typical;
};

// One Monte Carlo drop. users[0] is the typical user, pinned at the origin.
struct Scenario {
    geometry::PointSet bss;
    geometry::PointSet users;
    geometry::Association association;
    geometry::NearestTwo typical_n2;
    Fading fading;

    static constexpr std::size_t typical_index = 0;
    const geometry::Vec2& typical() const { return users[typical_index]; }
};

struct DropOutcome {
    double sir = 0.0;
    ffr::UserClass cls = ffr::UserClass::CCU;
    bool covered = false;
    int interferer_count = 0;
};

struct EstimateResult {
    double coverage = 0.0;
    double coverage_ci = 0.0; // 95% half-width
    double ceu_density = 0.0;
    double ceu_density_ci = 0.0;
    std::uint64_t n_drops = 0;
};

struct CeuFractionResult {
    double ceu_fraction = 0.0;
    double ci = 0.0;
    std::uint64_t n_drops = 0;
};

// Deterministic function of (cfg.master_seed, drop_index): BS and user PPPs,
// typical user inserted at index 0, nearest-BS association, link fades.
// Windows with fewer than 2 BSs are resampled from the same substream.
Scenario generate_drop(const SimConfig& cfg, std::uint64_t drop_index);

// True with probability min(load/N, 1); draws only when 0 < load < N.
bool subband_active(std::int32_t load, int N, std::mt19937_64& gen);

// Transmit power of an active interfering BS: selects one of its served users
// uniformly, classifies it from fresh (g1, g2) and its own two nearest BSs,
// and returns P (CCU) or a*P (CEU). Requires load >= 1.
double interferer_power_level(int bs_index, const Scenario& sc, const SimConfig& cfg,
                              std::mt19937_64& gen);

// Downlink SIR of the typical user: classification from the broadcast fades,
// desired power tx_power(class)*g_data*L(r1), interference summed over all
// non-serving BSs that pass subband_active. No active interferer => covered.
DropOutcome typical_sir(const Scenario& sc, const SimConfig& cfg, std::mt19937_64& gen);

// generate_drop + typical_sir with the drop's own substreams.
DropOutcome run_drop(const SimConfig& cfg, std::uint64_t drop_index);

// Coverage probability and CEU density over cfg.n_drops drops. Bit-identical
// across runs and worker counts for a fixed master seed.
EstimateResult estimate(const SimConfig& cfg, int n_threads = 1);

// Classification-only estimator (geometry + broadcast fades, no user process
// or interference); cross-validates the analytical edge-user probability.
CeuFractionResult estimate_ceu_fraction(const SimConfig& cfg, int n_threads = 1);

namespace detail {

// Per-worker scratch for the interferer loop: uniform grid over the BS set and
// a CSR listing of each BS's served users in ascending user-index order.
struct SirScratch {
    geometry::SpatialGrid grid;
    std::vector<std::int32_t> user_start;
    std::vector<std::int32_t> user_entries;

    void build(const Scenario& sc);
    void build_csr_only(const Scenario& sc);
};

double selected_power(int bs_index, const Scenario& sc, const SimConfig& cfg, const SirScratch& s,
                      std::mt19937_64& gen);

DropOutcome typical_sir_with_scratch(const Scenario& sc, const SimConfig& cfg, const SirScratch& s,
                                     std::mt19937_64& gen);

}  // namespace detail

}  // namespace ffrsim::simulator
