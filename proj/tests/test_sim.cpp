#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "aoi/errors.hpp"
#include "aoi/sim.hpp"

using namespace aoi;

namespace {

SystemParams grid_cell(double lambda, double mean_comp, double k) {
    const double mu = 1.0 / (15.0 * std::exp(-0.1 * mean_comp));
    return SystemParams(lambda, ServiceDistribution::gamma(mean_comp, k), mu);
}

bool same_result(const SimResult& a, const SimResult& b) {
    return a.avg_aoi == b.avg_aoi && a.avg_peak_aoi == b.avg_peak_aoi &&
           a.avg_aoi_halfwidth == b.avg_aoi_halfwidth && a.peak_halfwidth == b.peak_halfwidth &&
           a.delivered == b.delivered && a.discarded_stage1 == b.discarded_stage1 &&
           a.discarded_stage2 == b.discarded_stage2 &&
           a.busy_found_frac == b.busy_found_frac && a.sim_time == b.sim_time;
}

}  // namespace

TEST_CASE("hand-walked trace") {
    // packet 1: computes over [0,2], transmits over [2,5]; the arrival at 1
    // is discarded at stage 1; the arrival at 10 is beyond the horizon
    TraceInput tr;
    tr.arrival_times = {0.0, 1.0, 10.0};
    tr.comp_times = {2.0, 2.0};
    tr.tx_times = {3.0, 3.0};
    const SimResult r = simulate_trace(SchemeId::NP_NoBuffer, tr, 5.0);
    CHECK(r.delivered == 1);
    CHECK(r.discarded_stage1 == 1);
    CHECK(r.discarded_stage2 == 0);
    CHECK(r.avg_peak_aoi == doctest::Approx(5.0));
    CHECK(r.avg_aoi == doctest::Approx(12.5 / 5.0));
    CHECK(r.sim_time == doctest::Approx(5.0));
}

TEST_CASE("two-delivery trace with age accounting") {
    TraceInput tr;
    tr.arrival_times = {0.0, 3.0};
    tr.comp_times = {2.0, 1.0};
    tr.tx_times = {1.0, 1.0};
    const SimResult r = simulate_trace(SchemeId::NP_NoBuffer, tr, 5.0);
    CHECK(r.delivered == 2);
    CHECK(r.avg_peak_aoi == doctest::Approx(4.0));  // peaks 3 and 5
    CHECK(r.avg_aoi == doctest::Approx(12.5 / 5.0));
    CHECK(r.busy_found_frac == doctest::Approx(0.0));
    // conservation on the fully observed trace
    CHECK(r.delivered + r.discarded_stage1 + r.discarded_stage2 == 2);
}

TEST_CASE("single-arrival trace") {
    TraceInput tr;
    tr.arrival_times = {0.0};
    tr.comp_times = {2.0};
    tr.tx_times = {3.0};
    const SimResult r = simulate_trace(SchemeId::NP_Buffer, tr, 10.0);
    CHECK(r.delivered == 1);
    CHECK(r.avg_peak_aoi == doctest::Approx(5.0));  // comp + tx, no earlier history
}

TEST_CASE("buffer replacement keeps the freshest waiting packet") {
    // transmitter is held busy while two computed packets queue for the
    // single slot; the older one must be displaced
    TraceInput tr;
    tr.arrival_times = {0.0, 1.0, 2.5};
    tr.comp_times = {0.5, 0.5, 0.5};
    tr.tx_times = {10.0, 1.0, 1.0};
    const SimResult r = simulate_trace(SchemeId::NP_Buffer, tr, 20.0);
    CHECK(r.delivered == 2);
    CHECK(r.discarded_stage2 == 1);  // the packet from t=1 is replaced at t=3
    CHECK(r.busy_found_frac == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("trace error handling") {
    TraceInput empty;
    CHECK_THROWS_AS(simulate_trace(SchemeId::NP_NoBuffer, empty, 5.0), ConfigError);
    TraceInput exhausted;
    exhausted.arrival_times = {0.0, 4.0};
    exhausted.comp_times = {2.0};  // second computation has no duration
    exhausted.tx_times = {10.0, 10.0};
    CHECK_THROWS_AS(simulate_trace(SchemeId::NP_NoBuffer, exhausted, 50.0), ConfigError);
    TraceInput tr;
    tr.arrival_times = {0.0};
    tr.comp_times = {1.0};
    tr.tx_times = {1.0};
    CHECK_THROWS_AS(simulate_trace(SchemeId::NP_NoBuffer, tr, -1.0), std::invalid_argument);
    // horizon before the only delivery: empty measurement window
    CHECK_THROWS_AS(simulate_trace(SchemeId::NP_NoBuffer, tr, 0.5), ConfigError);
}

TEST_CASE("event log") {
    TraceInput tr;
    tr.arrival_times = {0.0, 1.0};
    tr.comp_times = {2.0};
    tr.tx_times = {1.0};
    std::ostringstream log;
    simulate_trace(SchemeId::NP_NoBuffer, tr, 4.0, &log);
    const std::string text = log.str();
    CHECK(text.find("0 arrival 0 0") != std::string::npos);
    CHECK(text.find("discard 1 1") != std::string::npos);
    CHECK(text.find("delivery 0 2") != std::string::npos);
}

TEST_CASE("determinism") {
    SimConfig cfg(SchemeId::NP_Buffer, grid_cell(0.4, 2.0, 10.0));
    cfg.deliveries = 20'000;
    cfg.seed = 7;
    const SimResult a = simulate(cfg);
    const SimResult b = simulate(cfg);
    CHECK(same_result(a, b));
    cfg.seed = 8;
    const SimResult c = simulate(cfg);
    CHECK(c.sim_time != a.sim_time);
}

TEST_CASE("estimates agree with the closed forms") {
    for (SchemeId s : {SchemeId::NP_NoBuffer, SchemeId::Preempt_Comp}) {
        const SystemParams p = grid_cell(0.4, 2.0, 10.0);
        SimConfig cfg(s, p);
        cfg.deliveries = 100'000;
        cfg.seed = 11;
        const SimResult r = simulate(cfg);
        const AoiReport a = full_report(s, p);
        CHECK(std::fabs(r.avg_aoi - a.avg_aoi) / a.avg_aoi <= 0.02);
        CHECK(std::fabs(r.avg_peak_aoi - a.avg_peak_aoi) / a.avg_peak_aoi <= 0.02);
        CHECK(std::fabs(r.busy_found_frac - a.p_busy) <= 0.01);
        CHECK(r.delivered == cfg.deliveries);
        CHECK(r.avg_aoi_halfwidth > 0.0);
        CHECK(r.peak_halfwidth > 0.0);
    }
}

TEST_CASE("empirical effective rate") {
    const SystemParams p = grid_cell(0.4, 2.0, 10.0);
    SimConfig cfg(SchemeId::NP_NoBuffer, p);
    cfg.deliveries = 100'000;
    cfg.seed = 5;
    const SimResult r = simulate(cfg);
    // stage-1 exits are delivered plus stage-2 discards (up to in-flight slack)
    const double emp =
        static_cast<double>(r.delivered + r.discarded_stage2) / r.sim_time;
    const double analytic = effective_rate(SchemeId::NP_NoBuffer, p);
    CHECK(std::fabs(emp - analytic) / analytic <= 0.02);
}

TEST_CASE("replication pooling") {
    SimConfig cfg(SchemeId::NP_Buffer, grid_cell(0.4, 2.0, 10.0));
    cfg.deliveries = 20'000;
    cfg.seed = 3;
    const SimResult one = simulate(cfg);
    CHECK(same_result(replicate(cfg, 1), one));
    const SimResult four_a = replicate(cfg, 4);
    const SimResult four_b = replicate(cfg, 4);
    CHECK(same_result(four_a, four_b));
    const SimResult many = replicate(cfg, 16);
    CHECK(many.avg_aoi_halfwidth <= one.avg_aoi_halfwidth);
    CHECK(many.peak_halfwidth <= one.peak_halfwidth);
    CHECK(many.delivered == 16 * cfg.deliveries);
}

TEST_CASE("configuration validation") {
    SimConfig cfg(SchemeId::NP_NoBuffer, grid_cell(0.4, 2.0, 1.0));
    cfg.deliveries = 0;
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
    cfg.deliveries = 100;
    cfg.warmup_deliveries = 100;
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
    cfg.warmup_deliveries = 10;
    cfg.batches = 1;
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
    cfg.batches = 200;  // more batches than post-warmup deliveries
    CHECK_THROWS_AS(simulate(cfg), ConfigError);
    CHECK_THROWS_AS(replicate(cfg, 0), std::invalid_argument);
}
