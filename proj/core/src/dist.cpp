#include "aoi/dist.hpp"

#include <cmath>
#include <stdexcept>

namespace aoi {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void check_gamma_arg(double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::domain_error("mgf: gamma must be finite and >= 0");
}

}  // namespace

ServiceDistribution::ServiceDistribution(DistKind kind, double mean, double shape)
    : kind_(kind), mean_(mean), shape_(shape) {}

ServiceDistribution ServiceDistribution::gamma(double mean, double shape_k) {
    require(std::isfinite(mean) && mean > 0.0, "gamma: mean must be > 0");
    require(std::isfinite(shape_k) && shape_k > 0.0, "gamma: shape must be > 0");
    return {DistKind::Gamma, mean, shape_k};
}

ServiceDistribution ServiceDistribution::exponential(double mean) {
    require(std::isfinite(mean) && mean > 0.0, "exponential: mean must be > 0");
    return {DistKind::Exponential, mean, 1.0};
}

ServiceDistribution ServiceDistribution::deterministic(double value) {
    require(std::isfinite(value) && value > 0.0, "deterministic: value must be > 0");
    return {DistKind::Deterministic, value, 0.0};
}

double ServiceDistribution::mgf(double gamma) const {
    check_gamma_arg(gamma);
    switch (kind_) {
        case DistKind::Gamma:
            // (1 + gamma/(k kappa))^-k with kappa = 1/mean
            return std::pow(1.0 + gamma * mean_ / shape_, -shape_);
        case DistKind::Exponential:
            return 1.0 / (1.0 + gamma * mean_);
        case DistKind::Deterministic:
            return std::exp(-gamma * mean_);
    }
    return 0.0;  // unreachable
}

double ServiceDistribution::mgf_d1(double gamma) const {
    check_gamma_arg(gamma);
    switch (kind_) {
        case DistKind::Gamma:
            return mean_ * std::pow(1.0 + gamma * mean_ / shape_, -shape_ - 1.0);
        case DistKind::Exponential: {
            const double u = 1.0 + gamma * mean_;
            return mean_ / (u * u);
        }
        case DistKind::Deterministic:
            return mean_ * std::exp(-gamma * mean_);
    }
    return 0.0;
}

double ServiceDistribution::mgf_d2(double gamma) const {
    check_gamma_arg(gamma);
    switch (kind_) {
        case DistKind::Gamma:
            // E[P^2] = mean^2 (k+1)/k at gamma = 0
            return mean_ * mean_ * (shape_ + 1.0) / shape_ *
                   std::pow(1.0 + gamma * mean_ / shape_, -shape_ - 2.0);
        case DistKind::Exponential: {
            const double u = 1.0 + gamma * mean_;
            return 2.0 * mean_ * mean_ / (u * u * u);
        }
        case DistKind::Deterministic:
            return mean_ * mean_ * std::exp(-gamma * mean_);
    }
    return 0.0;
}

double ServiceDistribution::sample(std::mt19937_64& rng) const {
    switch (kind_) {
        case DistKind::Gamma: {
            std::gamma_distribution<double> d(shape_, mean_ / shape_);
            return d(rng);
        }
        case DistKind::Exponential: {
            std::exponential_distribution<double> d(1.0 / mean_);
            return d(rng);
        }
        case DistKind::Deterministic:
            return mean_;
    }
    return 0.0;
}

std::string ServiceDistribution::describe() const {
    switch (kind_) {
        case DistKind::Gamma:
            return "Gamma(mean=" + std::to_string(mean_) + ", k=" + std::to_string(shape_) + ")";
        case DistKind::Exponential:
            return "Exponential(mean=" + std::to_string(mean_) + ")";
        case DistKind::Deterministic:
            return "Deterministic(" + std::to_string(mean_) + ")";
    }
    return {};
}

}  // namespace aoi
