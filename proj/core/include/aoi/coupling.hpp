#pragma once

#include "aoi/analytic.hpp"

namespace aoi {

/// Dependence of the transmission time on the chosen mean computation time:
/// 1/mu = b0 * exp(-alpha * E[P]), E[P] restricted to [p_min, p_max].
/// Models heavier preprocessing shrinking the transmitted payload.
struct CouplingSpec {
    double b0;
    double alpha;
    double p_min = 1.0;
    double p_max = 10.0;

    CouplingSpec(double b0_, double alpha_, double p_min_ = 1.0, double p_max_ = 10.0);
};

/// Family of computation laws with the mean left free.
struct CompFamily {
    DistKind kind = DistKind::Gamma;
    double shape_k = 1.0;  // Gamma only

    ServiceDistribution at_mean(double mean) const;
};

double transmission_mean(const CouplingSpec& spec, double mean_comp);

SystemParams resolve_params(const CouplingSpec& spec, double lambda,
                            const CompFamily& family, double mean_comp);

}  // namespace aoi
