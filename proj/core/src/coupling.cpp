#include "aoi/coupling.hpp"

#include <cmath>
#include <stdexcept>

namespace aoi {

CouplingSpec::CouplingSpec(double b0_, double alpha_, double p_min_, double p_max_)
    : b0(b0_), alpha(alpha_), p_min(p_min_), p_max(p_max_) {
    if (!(b0 > 0.0) || !std::isfinite(b0))
        throw std::invalid_argument("CouplingSpec: b0 must be finite and > 0");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("CouplingSpec: alpha must be finite and >= 0");
    if (!(p_min > 0.0) || !(p_min < p_max))
        throw std::invalid_argument("CouplingSpec: need 0 < p_min < p_max");
}

ServiceDistribution CompFamily::at_mean(double mean) const {
    switch (kind) {
        case DistKind::Gamma: return ServiceDistribution::gamma(mean, shape_k);
        case DistKind::Exponential: return ServiceDistribution::exponential(mean);
        case DistKind::Deterministic: return ServiceDistribution::deterministic(mean);
    }
    throw std::invalid_argument("CompFamily: unknown kind");
}

double transmission_mean(const CouplingSpec& spec, double mean_comp) {
    if (!(mean_comp >= spec.p_min) || !(mean_comp <= spec.p_max))
        throw std::domain_error("transmission_mean: mean_comp outside [p_min, p_max]");
    return spec.b0 * std::exp(-spec.alpha * mean_comp);
}

SystemParams resolve_params(const CouplingSpec& spec, double lambda,
                            const CompFamily& family, double mean_comp) {
    const double mu = 1.0 / transmission_mean(spec, mean_comp);
    return SystemParams(lambda, family.at_mean(mean_comp), mu);
}

}  // namespace aoi
