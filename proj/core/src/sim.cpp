#include "aoi/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "aoi/errors.hpp"

namespace aoi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class EventSource {
public:
    virtual ~EventSource() = default;
    /// Absolute time of the next arrival, or +inf when there is none.
    virtual double next_arrival() = 0;
    virtual double comp_duration() = 0;
    virtual double tx_duration() = 0;
};

class RngSource final : public EventSource {
public:
    RngSource(const SystemParams& p, std::uint64_t seed)
        : comp_(p.comp),
          arrivals_(seed),
          comp_rng_(seed + 0x9E3779B97F4A7C15ULL),
          tx_rng_(seed + 0x3C6EF372FE94F82AULL),
          interarrival_(p.lambda),
          tx_(p.mu) {}

    double next_arrival() override {
        clock_ += interarrival_(arrivals_);
        return clock_;
    }
    double comp_duration() override { return comp_.sample(comp_rng_); }
    double tx_duration() override { return tx_(tx_rng_); }

private:
    ServiceDistribution comp_;
    std::mt19937_64 arrivals_, comp_rng_, tx_rng_;
    std::exponential_distribution<double> interarrival_;
    std::exponential_distribution<double> tx_;
    double clock_ = 0.0;
};

class TraceSource final : public EventSource {
public:
    explicit TraceSource(const TraceInput& trace) : trace_(trace) {}

    double next_arrival() override {
        if (ai_ >= trace_.arrival_times.size()) return kInf;
        const double t = trace_.arrival_times[ai_++];
        if (ai_ > 1 && t < trace_.arrival_times[ai_ - 2])
            throw ConfigError("trace arrival times must be ascending");
        return t;
    }
    double comp_duration() override { return take(trace_.comp_times, ci_, "computation"); }
    double tx_duration() override { return take(trace_.tx_times, ti_, "transmission"); }

private:
    static double take(const std::vector<double>& v, std::size_t& i, const char* what) {
        if (i >= v.size())
            throw ConfigError(std::string("trace exhausted: no ") + what + " duration left");
        if (!(v[i] > 0.0)) throw ConfigError("trace durations must be > 0");
        return v[i++];
    }

    const TraceInput& trace_;
    std::size_t ai_ = 0, ci_ = 0, ti_ = 0;
};

struct BatchAccum {
    std::vector<double> peak_sum;
    std::vector<double> area;
    std::vector<double> span;
};

double batch_halfwidth(const std::vector<double>& means) {
    const std::size_t n = means.size();
    if (n < 2) return 0.0;
    double m = 0.0;
    for (double x : means) m += x;
    m /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : means) ss += (x - m) * (x - m);
    const double var = ss / static_cast<double>(n - 1);
    boost::math::students_t dist(static_cast<double>(n - 1));
    const double tq = boost::math::quantile(dist, 0.975);
    return tq * std::sqrt(var / static_cast<double>(n));
}

/// One run of the original system. Terminates at `target_deliveries` when
/// horizon is infinite, otherwise at the horizon.
SimResult run_engine(SchemeId scheme, EventSource& src, std::uint64_t target_deliveries,
                     double horizon, std::uint64_t warmup, std::uint32_t batches,
                     std::ostream* log) {
    const bool timed = std::isfinite(horizon);

    // Batch layout is fixed up front; only meaningful for delivery-bounded runs.
    std::uint64_t bsize = 0, nbatched = 0;
    BatchAccum acc;
    if (!timed && batches >= 2) {
        const std::uint64_t n = target_deliveries - warmup;
        bsize = n / batches;
        if (bsize == 0)
            throw ConfigError("too few post-warmup deliveries for the requested batch count");
        nbatched = bsize * batches;
        acc.peak_sum.assign(batches, 0.0);
        acc.area.assign(batches, 0.0);
        acc.span.assign(batches, 0.0);
    }

    double t = 0.0;
    double next_arr = src.next_arrival();
    double comp_end = kInf, tx_end = kInf;
    double comp_ts = 0.0, tx_ts = 0.0;
    double buf_ts = 0.0;
    bool has_buf = false;
    std::uint64_t comp_id = 0, tx_id = 0, buf_id = 0, next_id = 0;

    std::uint64_t delivered = 0, disc1 = 0, disc2 = 0;
    std::uint64_t stage2_arrivals = 0, stage2_busy = 0;
    double last_del_ts = 0.0, last_del_t = 0.0;
    double area = 0.0, span = 0.0, peak_sum_all = 0.0;
    std::uint64_t peaks_n = 0;
    bool measuring = (warmup == 0);

    auto emit = [&](double when, const char* kind, std::uint64_t id, int stage) {
        if (log) *log << when << ' ' << kind << ' ' << id << ' ' << stage << '\n';
    };

    while (true) {
        if (!timed && delivered >= target_deliveries) break;
        const double te = std::min({next_arr, comp_end, tx_end});
        if (te == kInf || (timed && te > horizon)) break;
        t = te;
        if (te == next_arr) {
            const std::uint64_t id = next_id++;
            emit(t, "arrival", id, 0);
            if (comp_end == kInf) {
                comp_end = t + src.comp_duration();
                comp_ts = t;
                comp_id = id;
                emit(t, "comp_start", id, 1);
            } else if (scheme == SchemeId::Preempt_Comp) {
                emit(t, "discard", comp_id, 1);
                ++disc1;
                comp_end = t + src.comp_duration();
                comp_ts = t;
                comp_id = id;
                emit(t, "comp_start", id, 1);
            } else {
                emit(t, "discard", id, 1);
                ++disc1;
            }
            next_arr = src.next_arrival();
        } else if (te == comp_end) {
            const double ts = comp_ts;
            const std::uint64_t id = comp_id;
            comp_end = kInf;
            emit(t, "comp_done", id, 1);
            ++stage2_arrivals;
            const bool busy = tx_end != kInf;
            if (busy) ++stage2_busy;
            switch (scheme) {
                case SchemeId::NP_NoBuffer:
                    if (busy) {
                        emit(t, "discard", id, 2);
                        ++disc2;
                    } else {
                        tx_end = t + src.tx_duration();
                        tx_ts = ts;
                        tx_id = id;
                        emit(t, "tx_start", id, 2);
                    }
                    break;
                case SchemeId::NP_Buffer:
                case SchemeId::Preempt_Comp:
                    if (busy) {
                        if (has_buf) {
                            emit(t, "discard", buf_id, 2);
                            ++disc2;
                        }
                        buf_ts = ts;
                        buf_id = id;
                        has_buf = true;
                        emit(t, "buffer", id, 2);
                    } else {
                        tx_end = t + src.tx_duration();
                        tx_ts = ts;
                        tx_id = id;
                        emit(t, "tx_start", id, 2);
                    }
                    break;
                case SchemeId::Preempt_Tx:
                    if (busy) {
                        emit(t, "discard", tx_id, 2);
                        ++disc2;
                    }
                    tx_end = t + src.tx_duration();
                    tx_ts = ts;
                    tx_id = id;
                    emit(t, "tx_start", id, 2);
                    break;
            }
        } else {
            ++delivered;
            emit(t, "delivery", tx_id, 2);
            const double peak = t - last_del_ts;
            if (measuring) {
                const double a0 = last_del_t - last_del_ts;
                const double dt = t - last_del_t;
                const double inc = a0 * dt + 0.5 * dt * dt;
                area += inc;
                span += dt;
                peak_sum_all += peak;
                if (peaks_n < nbatched) {
                    const std::size_t b = static_cast<std::size_t>(peaks_n / bsize);
                    acc.peak_sum[b] += peak;
                    acc.area[b] += inc;
                    acc.span[b] += dt;
                }
                ++peaks_n;
            }
            last_del_ts = tx_ts;
            last_del_t = t;
            tx_end = kInf;
            if (has_buf) {
                tx_end = t + src.tx_duration();
                tx_ts = buf_ts;
                tx_id = buf_id;
                has_buf = false;
                emit(t, "tx_start", tx_id, 2);
            }
            if (!measuring && delivered == warmup) measuring = true;
        }
    }

    if (delivered == 0 || peaks_n == 0)
        throw ConfigError("no deliveries in the measurement window");

    double end_time = last_del_t;
    if (timed) {
        // tail segment from the last delivery to the horizon
        const double a0 = last_del_t - last_del_ts;
        const double dt = horizon - last_del_t;
        area += a0 * dt + 0.5 * dt * dt;
        span += dt;
        end_time = horizon;
    }

    SimResult r;
    r.avg_aoi = area / span;
    r.avg_peak_aoi = peak_sum_all / static_cast<double>(peaks_n);
    r.delivered = delivered;
    r.discarded_stage1 = disc1;
    r.discarded_stage2 = disc2;
    r.busy_found_frac =
        stage2_arrivals ? static_cast<double>(stage2_busy) / static_cast<double>(stage2_arrivals)
                        : 0.0;
    r.sim_time = end_time;
    if (nbatched > 0) {
        std::vector<double> pm(acc.peak_sum.size()), am(acc.area.size());
        for (std::size_t b = 0; b < pm.size(); ++b) {
            pm[b] = acc.peak_sum[b] / static_cast<double>(bsize);
            am[b] = acc.area[b] / acc.span[b];
        }
        r.peak_halfwidth = batch_halfwidth(pm);
        r.avg_aoi_halfwidth = batch_halfwidth(am);
    }
    if (!std::isfinite(r.avg_aoi) || !std::isfinite(r.avg_peak_aoi) ||
        !std::isfinite(r.sim_time))
        throw ConsistencyError("simulation produced a non-finite estimate");
    return r;
}

void check_config(const SimConfig& c) {
    if (c.deliveries == 0) throw std::invalid_argument("SimConfig: deliveries must be > 0");
    if (c.warmup_deliveries >= c.deliveries)
        throw std::invalid_argument("SimConfig: warmup_deliveries must be < deliveries");
    if (c.batches < 2) throw std::invalid_argument("SimConfig: batches must be >= 2");
}

}  // namespace

SimResult simulate(const SimConfig& config) {
    check_config(config);
    RngSource src(config.params, config.seed);
    return run_engine(config.scheme, src, config.deliveries, kInf, config.warmup_deliveries,
                      config.batches, config.event_log);
}

SimResult simulate_trace(SchemeId scheme, const TraceInput& trace, double horizon,
                         std::ostream* event_log) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("simulate_trace: horizon must be finite and > 0");
    if (trace.arrival_times.empty()) throw ConfigError("trace has no arrivals");
    TraceSource src(trace);
    return run_engine(scheme, src, 0, horizon, 0, 0, event_log);
}

SimResult replicate(const SimConfig& config, std::uint32_t replications) {
    if (replications < 1) throw std::invalid_argument("replicate: replications must be >= 1");
    check_config(config);
    if (replications == 1) return simulate(config);

    std::vector<std::future<SimResult>> jobs;
    jobs.reserve(replications);
    for (std::uint32_t i = 0; i < replications; ++i) {
        SimConfig c = config;
        c.seed = config.seed + i;
        c.event_log = nullptr;
        jobs.push_back(std::async(std::launch::async, [c] { return simulate(c); }));
    }
    std::vector<SimResult> runs;
    runs.reserve(replications);
    for (auto& j : jobs) runs.push_back(j.get());

    SimResult out;
    std::vector<double> aoi(replications), peak(replications);
    for (std::uint32_t i = 0; i < replications; ++i) {
        const SimResult& r = runs[i];
        aoi[i] = r.avg_aoi;
        peak[i] = r.avg_peak_aoi;
        out.avg_aoi += r.avg_aoi;
        out.avg_peak_aoi += r.avg_peak_aoi;
        out.busy_found_frac += r.busy_found_frac;
        out.delivered += r.delivered;
        out.discarded_stage1 += r.discarded_stage1;
        out.discarded_stage2 += r.discarded_stage2;
        out.sim_time += r.sim_time;
    }
    const double n = static_cast<double>(replications);
    out.avg_aoi /= n;
    out.avg_peak_aoi /= n;
    out.busy_found_frac /= n;
    out.avg_aoi_halfwidth = batch_halfwidth(aoi);
    out.peak_halfwidth = batch_halfwidth(peak);
    return out;
}

}  // namespace aoi
