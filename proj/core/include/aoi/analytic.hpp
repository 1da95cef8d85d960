#pragma once

#include <string>

#include "aoi/dist.hpp"

namespace aoi {

/// The four computation -> transmission queueing schemes.
enum class SchemeId {
    NP_NoBuffer,   // M/GI/1/1 -> GI/M/1/1
    NP_Buffer,     // M/GI/1/1 -> GI/M/1/2*
    Preempt_Tx,    // M/GI/1/1 -> GI/M/1 with preemption
    Preempt_Comp,  // M/GI/1 with preemption -> GI/M/1/2*
};

std::string scheme_name(SchemeId scheme);

struct SystemParams {
    double lambda;              // Poisson arrival rate
    ServiceDistribution comp;   // computation time P
    double mu;                  // transmission rate (service Exp(mu))

    SystemParams(double lambda_, ServiceDistribution comp_, double mu_);
};

/// Closed-form outputs for one scheme at one parameter point.
struct AoiReport {
    double avg_aoi;
    double avg_peak_aoi;
    double p_busy;          // stationary Pr[packet entering queue 2 finds it busy]
    double eff_rate;        // effective arrival rate (renewal rate of the sawtooth)
    double e_xt;            // E[X T]
    double e_x2;            // E[X^2]
    double peak_numerator;  // E[(X+T) 1{i = i*}]
    double peak_prob;       // Pr(i = i*)
};

/// Two-state (Idle/Busy) chain of the state seen by consecutive packets
/// entering the second queue.
struct TransitionProbs {
    double busy_given_idle;
    double idle_given_busy;
};

double effective_rate(SchemeId scheme, const SystemParams& p);
double interarrival_second_moment(SchemeId scheme, const SystemParams& p);
double busy_prob(SchemeId scheme, const SystemParams& p);
TransitionProbs transition_probs(SchemeId scheme, const SystemParams& p);
double mean_xt(SchemeId scheme, const SystemParams& p);
double avg_aoi(SchemeId scheme, const SystemParams& p);
double avg_peak_aoi(SchemeId scheme, const SystemParams& p);
AoiReport full_report(SchemeId scheme, const SystemParams& p);

/// E[W + I*] in a GI/M/1/1 queue: mean time from a busy-state arrival until
/// the next packet that enters service (geometric count, Wald).
double lemma_wait_plus_idle(double mean_interarrival, double exit_prob);

/// MGF of G conditioned on {G < F}, F ~ Exp(lambda) independent of G:
/// M_G(gamma + lambda) / M_G(lambda).
double mgf_conditioned_shorter(const ServiceDistribution& dist, double lambda, double gamma);

/// MGF of F ~ Exp(lambda) conditioned on {F < G}:
/// (1/(1 - M_G(lambda))) (lambda/(lambda+gamma)) (1 - M_G(gamma+lambda)).
double mgf_exp_conditioned_shorter(double lambda, const ServiceDistribution& dist, double gamma);

/// Truncated moments of the inter-arrival time X between consecutive jobs
/// that survive both queues' admission rules in the preemptive-computation
/// scheme. m0 is the closed-form MGF; m1, m2 are its analytic derivatives
/// under the nonnegative-moment convention.
MomentTriple preempt_interarrival_mgf(const SystemParams& p, double gamma);

/// Law of P' = (P | P < I), I ~ Exp(lambda): computation time conditioned on
/// finishing before the next arrival.
class ConditionedCompMoments {
public:
    explicit ConditionedCompMoments(const SystemParams& p);
    double mean() const { return mean_; }
    double mgf(double gamma) const;
    double d1(double gamma) const;

private:
    ServiceDistribution comp_;
    double lambda_;
    double mgf_at_lambda_;
    double mean_;
};

/// Restart period Y: total time spent on computations that get preempted
/// before the first uninterrupted one.
class RestartPeriodMoments {
public:
    explicit RestartPeriodMoments(const SystemParams& p);
    double mean() const { return mean_; }
    double mgf(double gamma) const;
    double d1(double gamma) const;
    double d2(double gamma) const;

private:
    ServiceDistribution comp_;
    double lambda_;
    double mgf_at_lambda_;
    double mean_;
};

/// E[W'] and E[S'] for the preemptive-transmission scheme: expected buffer
/// wait across preempted attempts and expected uninterrupted service time.
struct PreemptServiceMoments {
    double wait_mean;     // E[W']
    double service_mean;  // E[S']
};

PreemptServiceMoments preempt_service_moments(const SystemParams& p);

}  // namespace aoi
