#include "aoi/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "aoi/errors.hpp"

namespace aoi {

namespace {

struct Eval {
    double avg_aoi;
    double avg_peak;
};

Eval evaluate(SchemeId scheme, double lambda, const CompFamily& family,
              const CouplingSpec& spec, double mean_comp) {
    const SystemParams p = resolve_params(spec, lambda, family, mean_comp);
    return {avg_aoi(scheme, p), avg_peak_aoi(scheme, p)};
}

double checked_objective(SchemeId scheme, double lambda, const CompFamily& family,
                         const CouplingSpec& spec, double mean_comp,
                         const ObjectiveWeights& w, std::uint64_t& evals) {
    const Eval e = evaluate(scheme, lambda, family, spec, mean_comp);
    const double v = w.w1 * e.avg_aoi + w.w2 * e.avg_peak;
    ++evals;
    if (!std::isfinite(v))
        throw ConsistencyError("objective is non-finite at mean_comp = " +
                               std::to_string(mean_comp));
    return v;
}

}  // namespace

ObjectiveWeights::ObjectiveWeights(double w1_, double w2_) : w1(w1_), w2(w2_) {
    if (!(w1 >= 0.0) || !(w2 >= 0.0) || !(w1 + w2 > 0.0))
        throw std::invalid_argument("ObjectiveWeights: need w1, w2 >= 0 and w1 + w2 > 0");
}

double objective(SchemeId scheme, double lambda, const CompFamily& family,
                 const CouplingSpec& spec, double mean_comp, const ObjectiveWeights& weights) {
    const Eval e = evaluate(scheme, lambda, family, spec, mean_comp);
    return weights.w1 * e.avg_aoi + weights.w2 * e.avg_peak;
}

OptResult optimize_mean_comp(SchemeId scheme, double lambda, const CompFamily& family,
                             const CouplingSpec& spec, const ObjectiveWeights& weights,
                             std::uint32_t grid_points, double refine_tol) {
    if (grid_points < 3) throw std::invalid_argument("optimize_mean_comp: grid_points >= 3");
    if (!(refine_tol > 0.0)) throw std::invalid_argument("optimize_mean_comp: refine_tol > 0");

    std::uint64_t evals = 0;
    auto f = [&](double x) {
        return checked_objective(scheme, lambda, family, spec, x, weights, evals);
    };

    const double lo = spec.p_min, hi = spec.p_max;
    double best_x = lo, best_f = f(lo);
    std::size_t best_i = 0;
    std::vector<double> xs(grid_points), fs(grid_points);
    for (std::uint32_t i = 0; i < grid_points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(grid_points - 1);
        xs[i] = x;
        fs[i] = (i == 0) ? best_f : f(x);
        if (fs[i] < best_f) {
            best_f = fs[i];
            best_x = x;
            best_i = i;
        }
    }

    // golden-section refinement inside the bracket around the grid argmin
    double a = xs[best_i == 0 ? 0 : best_i - 1];
    double b = xs[std::min<std::size_t>(best_i + 1, grid_points - 1)];
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > refine_tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
        const double x = (fc < fd) ? c : d;
        const double v = std::min(fc, fd);
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
    }

    const Eval e = evaluate(scheme, lambda, family, spec, best_x);
    OptResult r;
    r.best_mean_comp = best_x;
    r.avg_aoi_at_opt = e.avg_aoi;
    r.avg_peak_at_opt = e.avg_peak;
    r.best_objective = weights.w1 * e.avg_aoi + weights.w2 * e.avg_peak;
    r.evaluations = evals;
    return r;
}

std::vector<TradeoffPoint> tradeoff_curve(SchemeId scheme, double lambda,
                                          const CompFamily& family, const CouplingSpec& spec,
                                          std::uint32_t weight_steps) {
    if (weight_steps < 2) throw std::invalid_argument("tradeoff_curve: weight_steps >= 2");
    std::vector<TradeoffPoint> pts;
    pts.reserve(weight_steps);
    const double half_pi = std::acos(0.0);
    for (std::uint32_t i = 0; i < weight_steps; ++i) {
        const double theta =
            half_pi * static_cast<double>(i) / static_cast<double>(weight_steps - 1);
        const double c = std::cos(theta), s = std::sin(theta);
        const ObjectiveWeights w(c * c, s * s);
        const OptResult r = optimize_mean_comp(scheme, lambda, family, spec, w);
        pts.push_back({w.w1, w.w2, r.best_mean_comp, r.avg_aoi_at_opt, r.avg_peak_at_opt});
    }
    // Pareto filter: drop any point weakly dominated in both coordinates.
    std::vector<TradeoffPoint> keep;
    for (const TradeoffPoint& p : pts) {
        bool dominated = false;
        for (const TradeoffPoint& q : pts) {
            if (q.avg_aoi <= p.avg_aoi && q.avg_peak_aoi <= p.avg_peak_aoi &&
                (q.avg_aoi < p.avg_aoi || q.avg_peak_aoi < p.avg_peak_aoi)) {
                dominated = true;
                break;
            }
        }
        if (dominated) continue;
        bool dup = false;
        for (const TradeoffPoint& q : keep)
            if (q.avg_aoi == p.avg_aoi && q.avg_peak_aoi == p.avg_peak_aoi) dup = true;
        if (!dup) keep.push_back(p);
    }
    std::sort(keep.begin(), keep.end(), [](const TradeoffPoint& x, const TradeoffPoint& y) {
        return x.avg_aoi < y.avg_aoi;
    });
    return keep;
}

std::vector<SweepRow> sweep(SchemeId scheme, double lambda, const CompFamily& family,
                            const CouplingSpec& spec, SweepParameter parameter, double from,
                            double to, std::uint32_t steps, const ObjectiveWeights& weights) {
    if (steps < 1) throw std::invalid_argument("sweep: steps >= 1");
    if (!(from <= to) || !std::isfinite(from) || !std::isfinite(to))
        throw std::invalid_argument("sweep: need finite from <= to");
    std::vector<SweepRow> rows;
    rows.reserve(steps);
    for (std::uint32_t i = 0; i < steps; ++i) {
        const double v = (steps == 1)
                             ? from
                             : from + (to - from) * static_cast<double>(i) /
                                          static_cast<double>(steps - 1);
        double lam = lambda;
        CompFamily fam = family;
        CouplingSpec sp = spec;
        switch (parameter) {
            case SweepParameter::Alpha: sp = CouplingSpec(spec.b0, v, spec.p_min, spec.p_max); break;
            case SweepParameter::ShapeK: fam.shape_k = v; break;
            case SweepParameter::Lambda: lam = v; break;
            case SweepParameter::MeanComp: break;
        }
        SweepRow row{};
        row.value = v;
        if (parameter == SweepParameter::MeanComp) {
            const Eval e = evaluate(scheme, lam, fam, sp, v);
            row.mean_comp = v;
            row.avg_aoi = e.avg_aoi;
            row.avg_peak_aoi = e.avg_peak;
        } else {
            const OptResult r = optimize_mean_comp(scheme, lam, fam, sp, weights);
            row.mean_comp = r.best_mean_comp;
            row.avg_aoi = r.avg_aoi_at_opt;
            row.avg_peak_aoi = r.avg_peak_at_opt;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace aoi
