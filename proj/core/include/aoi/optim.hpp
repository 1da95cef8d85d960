#pragma once

#include <vector>

#include "aoi/coupling.hpp"

namespace aoi {

struct ObjectiveWeights {
    double w1;  // average AoI weight
    double w2;  // average peak AoI weight

    ObjectiveWeights(double w1_, double w2_);
};

struct OptResult {
    double best_mean_comp;
    double best_objective;
    double avg_aoi_at_opt;
    double avg_peak_at_opt;
    std::uint64_t evaluations;
};

struct TradeoffPoint {
    double w1, w2;
    double mean_comp;
    double avg_aoi;
    double avg_peak_aoi;
};

/// One row of a parameter sweep: the swept value, the mean computation time
/// used (optimal for alpha/k/lambda sweeps, the value itself for mean_comp),
/// and the resulting AoI pair.
struct SweepRow {
    double value;
    double mean_comp;
    double avg_aoi;
    double avg_peak_aoi;
};

enum class SweepParameter { Alpha, ShapeK, Lambda, MeanComp };

double objective(SchemeId scheme, double lambda, const CompFamily& family,
                 const CouplingSpec& spec, double mean_comp, const ObjectiveWeights& weights);

/// Coarse grid scan over [p_min, p_max] followed by golden-section
/// refinement inside the best bracket. The objective is not assumed
/// unimodal; the result never exceeds any evaluated grid sample.
OptResult optimize_mean_comp(SchemeId scheme, double lambda, const CompFamily& family,
                             const CouplingSpec& spec, const ObjectiveWeights& weights,
                             std::uint32_t grid_points = 64, double refine_tol = 1e-4);

/// Sweeps (w1, w2) = (cos^2 t, sin^2 t) over weight_steps values of
/// t in [0, pi/2], optimizes each, Pareto-filters, sorts by avg_aoi.
std::vector<TradeoffPoint> tradeoff_curve(SchemeId scheme, double lambda,
                                          const CompFamily& family, const CouplingSpec& spec,
                                          std::uint32_t weight_steps);

std::vector<SweepRow> sweep(SchemeId scheme, double lambda, const CompFamily& family,
                            const CouplingSpec& spec, SweepParameter parameter, double from,
                            double to, std::uint32_t steps, const ObjectiveWeights& weights);

}  // namespace aoi
