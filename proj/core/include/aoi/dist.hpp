#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace aoi {

/// Computation-time law. Gamma is parameterized by mean and shape k
/// (rate kappa = 1/mean, per-stage rate k*kappa), so the mean is k-invariant.
/// Exponential and Deterministic are the k=1 and k->inf special cases kept
/// as first-class kinds.
enum class DistKind { Gamma, Exponential, Deterministic };

class ServiceDistribution {
public:
    static ServiceDistribution gamma(double mean, double shape_k);
    static ServiceDistribution exponential(double mean);
    static ServiceDistribution deterministic(double value);

    DistKind kind() const { return kind_; }
    double mean() const { return mean_; }
    /// Shape parameter; only meaningful for Gamma.
    double shape() const { return shape_; }

    /// M_P(gamma) = E[exp(-gamma P)], gamma >= 0.
    double mgf(double gamma) const;
    /// First truncated moment E[P exp(-gamma P)] (nonnegative convention).
    double mgf_d1(double gamma) const;
    /// Second truncated moment E[P^2 exp(-gamma P)].
    double mgf_d2(double gamma) const;
    /// E[P^2], alias for mgf_d2(0).
    double second_moment() const { return mgf_d2(0.0); }

    /// One draw from the law. Deterministic given the rng state.
    double sample(std::mt19937_64& rng) const;

    std::string describe() const;

private:
    ServiceDistribution(DistKind kind, double mean, double shape);

    DistKind kind_;
    double mean_;
    double shape_;  // Gamma only
};

/// (E[e^{-gZ}], E[Z e^{-gZ}], E[Z^2 e^{-gZ}]) for some nonnegative Z.
struct MomentTriple {
    double m0;  // in (0,1]
    double m1;  // time
    double m2;  // time^2
};

}  // namespace aoi
