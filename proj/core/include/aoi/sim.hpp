#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "aoi/analytic.hpp"

namespace aoi {

struct SimConfig {
    SchemeId scheme;
    SystemParams params;
    std::uint64_t deliveries = 1'000'000;
    std::uint64_t warmup_deliveries = 1'000;
    std::uint64_t seed = 0;
    std::uint32_t batches = 30;
    /// Optional event log, one line per event: time kind packet stage.
    std::ostream* event_log = nullptr;

    SimConfig(SchemeId scheme_, SystemParams params_) : scheme(scheme_), params(params_) {}
};

struct SimResult {
    double avg_aoi = 0.0;
    double avg_peak_aoi = 0.0;
    double avg_aoi_halfwidth = 0.0;
    double peak_halfwidth = 0.0;
    std::uint64_t delivered = 0;
    std::uint64_t discarded_stage1 = 0;
    std::uint64_t discarded_stage2 = 0;
    double busy_found_frac = 0.0;
    double sim_time = 0.0;
};

/// Deterministic inputs for unit tests: absolute arrival instants plus the
/// computation and transmission durations consumed in order of use.
struct TraceInput {
    std::vector<double> arrival_times;
    std::vector<double> comp_times;
    std::vector<double> tx_times;
};

/// Event-driven run of the original two-stage system. Deterministic given
/// the config (seed included). Confidence halfwidths by batch means with
/// Student-t at 95%.
SimResult simulate(const SimConfig& config);

/// Same dynamics with injected randomness, integrated over [0, horizon].
/// No warmup; halfwidths are reported as zero.
SimResult simulate_trace(SchemeId scheme, const TraceInput& trace, double horizon,
                         std::ostream* event_log = nullptr);

/// Independent-seed replications (seed_i = seed + i), run concurrently.
/// Pooled mean; halfwidth across replication means (Student-t at 95%).
SimResult replicate(const SimConfig& config, std::uint32_t replications);

}  // namespace aoi
