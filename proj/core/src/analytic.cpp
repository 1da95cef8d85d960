#include "aoi/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "aoi/errors.hpp"

namespace aoi {

namespace {

void check_probability(double v, const char* what, bool open_top = true) {
    const bool ok = v > 0.0 && (open_top ? v < 1.0 : v <= 1.0) && std::isfinite(v);
    if (!ok)
        throw ConsistencyError(std::string(what) + " = " + std::to_string(v) +
                               " outside its valid range; formula/convention bug");
}

void check_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ConsistencyError(std::string(what) + " = " + std::to_string(v) +
                               " not positive and finite");
}

struct PeakParts {
    double numerator;
    double probability;
};

// Shorthand bundle used by every per-scheme formula.
struct Ctx {
    double lam, mu, s;     // s = lambda + mu
    double ep, ep2;        // E[P], E[P^2]
    double a, a1, a2;      // M_P(mu), E[P e^{-mu P}], E[P^2 e^{-mu P}]

    explicit Ctx(const SystemParams& p)
        : lam(p.lambda),
          mu(p.mu),
          s(p.lambda + p.mu),
          ep(p.comp.mean()),
          ep2(p.comp.second_moment()),
          a(p.comp.mgf(p.mu)),
          a1(p.comp.mgf_d1(p.mu)),
          a2(p.comp.mgf_d2(p.mu)) {}
};

// E[P_{i-1} ; K_{i-1} = B] for the GI/M/1/2* second queue: the previous
// computation time tilted by the busy event, whose threshold is Exp(mu)
// coming from Idle and Erlang-2(mu) coming from Busy.
double tilted_comp_mean_busy(const Ctx& c, double p_busy) {
    const double from_idle = c.lam / c.s * c.a1;
    const double from_busy =
        from_idle + c.mu * (c.lam / (c.s * c.s) * c.a1 + c.lam / c.s * c.a2);
    return (1.0 - p_busy) * from_idle + p_busy * from_busy;
}

PeakParts peak_parts(SchemeId scheme, const SystemParams& p);

}  // namespace

std::string scheme_name(SchemeId scheme) {
    switch (scheme) {
        case SchemeId::NP_NoBuffer: return "M/GI/1/1->GI/M/1/1";
        case SchemeId::NP_Buffer: return "M/GI/1/1->GI/M/1/2*";
        case SchemeId::Preempt_Tx: return "M/GI/1/1->GI/M/1-preemptive";
        case SchemeId::Preempt_Comp: return "M/GI/1-preemptive->GI/M/1/2*";
    }
    return {};
}

SystemParams::SystemParams(double lambda_, ServiceDistribution comp_, double mu_)
    : lambda(lambda_), comp(comp_), mu(mu_) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("SystemParams: lambda must be finite and > 0");
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("SystemParams: mu must be finite and > 0");
}

double effective_rate(SchemeId scheme, const SystemParams& p) {
    double rate;
    if (scheme == SchemeId::Preempt_Comp) {
        // only computations finishing before the next arrival survive stage 1
        rate = p.lambda * p.comp.mgf(p.lambda);
    } else {
        rate = p.lambda / (p.lambda * p.comp.mean() + 1.0);
    }
    check_positive(rate, "effective_rate");
    return rate;
}

double interarrival_second_moment(SchemeId scheme, const SystemParams& p) {
    if (scheme == SchemeId::Preempt_Comp) return preempt_interarrival_mgf(p, 0.0).m2;
    const double ep = p.comp.mean();
    return p.comp.second_moment() + 2.0 * ep / p.lambda + 2.0 / (p.lambda * p.lambda);
}

double lemma_wait_plus_idle(double mean_interarrival, double exit_prob) {
    if (!(exit_prob > 0.0) || exit_prob > 1.0)
        throw std::domain_error("lemma_wait_plus_idle: exit probability must be in (0,1]");
    return mean_interarrival / exit_prob;
}

double mgf_conditioned_shorter(const ServiceDistribution& dist, double lambda, double gamma) {
    const double denom = dist.mgf(lambda);
    if (!(denom > 0.0))
        throw std::domain_error("mgf_conditioned_shorter: M_G(lambda) = 0, conditioning degenerate");
    return dist.mgf(gamma + lambda) / denom;
}

double mgf_exp_conditioned_shorter(double lambda, const ServiceDistribution& dist, double gamma) {
    const double mg = dist.mgf(lambda);
    if (!(mg < 1.0))
        throw std::domain_error("mgf_exp_conditioned_shorter: M_G(lambda) = 1, conditioning degenerate");
    return (1.0 / (1.0 - mg)) * (lambda / (lambda + gamma)) * (1.0 - dist.mgf(gamma + lambda));
}

TransitionProbs transition_probs(SchemeId scheme, const SystemParams& p) {
    const Ctx c(p);
    switch (scheme) {
        case SchemeId::NP_NoBuffer:
        case SchemeId::Preempt_Tx: {
            const double q = c.lam / c.s * c.a;
            return {q, 1.0 - q};
        }
        case SchemeId::NP_Buffer: {
            const double q = c.lam / c.s * c.a;
            const double b = c.lam / (c.s * c.s) * c.a + c.lam / c.s * c.a1;
            return {q, 1.0 - (q + c.mu * b)};
        }
        case SchemeId::Preempt_Comp: {
            const MomentTriple x = preempt_interarrival_mgf(p, p.mu);
            return {x.m0, 1.0 - x.m0 - p.mu * x.m1};
        }
    }
    return {};
}

double busy_prob(SchemeId scheme, const SystemParams& p) {
    const Ctx c(p);
    double pb = 0.0;
    switch (scheme) {
        case SchemeId::NP_NoBuffer:
        case SchemeId::Preempt_Tx:
            pb = c.lam / c.s * c.a;
            break;
        case SchemeId::NP_Buffer:
            pb = c.lam * c.s * c.a /
                 (c.s * c.s - c.lam * c.mu * c.a - c.lam * c.mu * c.s * c.a1);
            break;
        case SchemeId::Preempt_Comp: {
            const MomentTriple x = preempt_interarrival_mgf(p, p.mu);
            pb = x.m0 / (1.0 - p.mu * x.m1);
            break;
        }
    }
    check_probability(pb, "busy_prob");
    return pb;
}

MomentTriple preempt_interarrival_mgf(const SystemParams& p, double gamma) {
    if (!(gamma >= 0.0)) throw std::domain_error("preempt_interarrival_mgf: gamma must be >= 0");
    const double lam = p.lambda;
    const double u = gamma + lam;
    const double a = p.comp.mgf(u);
    const double a1 = p.comp.mgf_d1(u);
    const double a2 = p.comp.mgf_d2(u);
    const double den = gamma + lam * a;  // > 0 for gamma >= 0
    const double g = a + gamma * a1;
    MomentTriple x;
    x.m0 = lam * a / den;
    x.m1 = lam * g / (den * den);
    x.m2 = lam * (gamma * a2 * den + 2.0 * g * (1.0 - lam * a1)) / (den * den * den);
    return x;
}

ConditionedCompMoments::ConditionedCompMoments(const SystemParams& p)
    : comp_(p.comp), lambda_(p.lambda), mgf_at_lambda_(p.comp.mgf(p.lambda)) {
    if (!(mgf_at_lambda_ > 0.0))
        throw std::domain_error("conditioned_comp_moments: M_P(lambda) = 0");
    mean_ = p.comp.mgf_d1(lambda_) / mgf_at_lambda_;
}

double ConditionedCompMoments::mgf(double gamma) const {
    return comp_.mgf(gamma + lambda_) / mgf_at_lambda_;
}

double ConditionedCompMoments::d1(double gamma) const {
    return comp_.mgf_d1(gamma + lambda_) / mgf_at_lambda_;
}

RestartPeriodMoments::RestartPeriodMoments(const SystemParams& p)
    : comp_(p.comp), lambda_(p.lambda), mgf_at_lambda_(p.comp.mgf(p.lambda)) {
    if (!(mgf_at_lambda_ > 0.0))
        throw std::domain_error("restart_period_moments: M_P(lambda) = 0");
    mean_ = (1.0 - mgf_at_lambda_ - lambda_ * p.comp.mgf_d1(lambda_)) /
            (lambda_ * mgf_at_lambda_);
}

double RestartPeriodMoments::mgf(double gamma) const {
    const double u = gamma + lambda_;
    return (lambda_ + gamma) * mgf_at_lambda_ / (gamma + lambda_ * comp_.mgf(u));
}

double RestartPeriodMoments::d1(double gamma) const {
    const double u = gamma + lambda_;
    const double den = gamma + lambda_ * comp_.mgf(u);
    const double n = 1.0 - (lambda_ + gamma) * comp_.mgf_d1(u) - comp_.mgf(u);
    return lambda_ * mgf_at_lambda_ * n / (den * den);
}

double RestartPeriodMoments::d2(double gamma) const {
    const double u = gamma + lambda_;
    const double a = comp_.mgf(u);
    const double a1 = comp_.mgf_d1(u);
    const double a2 = comp_.mgf_d2(u);
    const double den = gamma + lambda_ * a;
    const double n = 1.0 - (lambda_ + gamma) * a1 - a;
    return lambda_ * mgf_at_lambda_ *
           (2.0 * n * (1.0 - lambda_ * a1) - (lambda_ + gamma) * a2 * den) /
           (den * den * den);
}

PreemptServiceMoments preempt_service_moments(const SystemParams& p) {
    const Ctx c(p);
    const double drain = c.s - c.lam * c.a;  // lambda + mu - lambda M_P(mu) > 0
    PreemptServiceMoments m;
    m.wait_mean = (c.lam * c.s * c.a1 + c.lam * c.a) / (c.s * drain);
    m.service_mean = 1.0 / c.mu - c.lam / drain * (c.a1 + c.a / c.s);
    return m;
}

double mean_xt(SchemeId scheme, const SystemParams& p) {
    const Ctx c(p);
    double xt = 0.0;
    switch (scheme) {
        case SchemeId::NP_NoBuffer: {
            xt = c.ep * c.ep + c.ep / c.lam + 1.0 / (c.lam * c.mu) + c.ep / c.mu +
                 (c.s * c.ep + 1.0) / c.s * (c.lam * c.ep + 1.0) / (c.s - c.lam * c.a) * c.a;
            break;
        }
        case SchemeId::NP_Buffer: {
            const double pb = busy_prob(scheme, p);
            const double b = c.lam / (c.s * c.s) * c.a + c.lam / c.s * c.a1;
            const double base = (c.ep + 1.0 / c.lam) * (c.ep + 1.0 / c.mu) +
                                c.lam * (c.s * c.ep + 1.0) / (c.mu * c.s * c.s) * c.a;
            const double busy_extra =
                c.a * (c.lam * c.ep / (c.s * c.s) + 2.0 * c.lam / (c.s * c.s * c.s)) +
                c.a1 * (c.lam * c.ep / c.s + c.lam / (c.s * c.s));
            // exact conditioning of P_{i-1} on the busy state shifts the mean
            const double delta = tilted_comp_mean_busy(c, pb) - pb * c.ep;
            xt = base + pb * busy_extra + delta * b;
            break;
        }
        case SchemeId::Preempt_Tx: {
            const PreemptServiceMoments m = preempt_service_moments(p);
            xt = (1.0 / c.lam + c.ep) * (c.ep + m.wait_mean + m.service_mean);
            break;
        }
        case SchemeId::Preempt_Comp: {
            const double pb = busy_prob(scheme, p);
            const ConditionedCompMoments pp(p);
            const RestartPeriodMoments y(p);
            const double epp = pp.mean();
            const double ey = y.mean();
            const double mpp = pp.mgf(c.mu);
            const double my = y.mgf(c.mu);
            const double d1y = y.d1(c.mu);
            const double d2y = y.d2(c.mu);
            const double base =
                epp * epp + epp / c.lam + 1.0 / (c.lam * c.mu) + epp / c.mu + ey * epp +
                ey / c.mu +
                c.lam / (c.mu * c.s) * mpp * (my / c.s + epp * my + d1y);
            // A = I + Y (shared between X_i and the busy indicator)
            const double ea0 = c.lam / c.s * my;
            const double ea1 = c.lam / (c.s * c.s) * my + c.lam / c.s * d1y;
            const double ea2 = 2.0 * c.lam / (c.s * c.s * c.s) * my +
                               2.0 * c.lam / (c.s * c.s) * d1y + c.lam / c.s * d2y;
            const double extra =
                ea2 * mpp + ea1 * (epp * mpp + pp.d1(c.mu)) + epp * ea0 * pp.d1(c.mu);
            xt = base + pb * extra;
            break;
        }
    }
    check_positive(xt, "mean_xt");
    return xt;
}

namespace {

PeakParts peak_parts(SchemeId scheme, const SystemParams& p) {
    const Ctx c(p);
    PeakParts out{};
    switch (scheme) {
        case SchemeId::NP_NoBuffer: {
            // A packet is the minimum index of its service group exactly when
            // its predecessor found the second queue idle; condition P_{i-1}
            // on that event.
            const double q = c.lam / c.s * c.a;
            const double ep_idle = (c.ep - c.lam / c.s * c.a1) / (1.0 - q);
            out.probability = 1.0 - q;
            out.numerator =
                out.probability *
                (ep_idle + c.ep + 1.0 / c.lam + 1.0 / c.mu +
                 (c.lam * c.ep + 1.0) * c.a / (c.s - c.lam * c.a));
            break;
        }
        case SchemeId::NP_Buffer: {
            const double pb = busy_prob(scheme, p);
            const double q = c.lam / c.s * c.a;
            const double epb = tilted_comp_mean_busy(c, pb);
            const double ep_idle = (c.ep - epb) / (1.0 - pb);
            const double ep_busy = epb / pb;
            const double w_term = c.lam * c.a / (c.mu * c.s);
            out.numerator =
                (1.0 - pb) * (ep_idle + c.ep + 1.0 / c.lam + 1.0 / c.mu + w_term) +
                pb * (ep_busy * (1.0 - q) + c.ep + 1.0 / c.lam + 1.0 / c.mu - w_term);
            out.probability = 1.0 - pb * q;
            break;
        }
        case SchemeId::Preempt_Tx: {
            const double q = c.lam / c.s * c.a;
            const PreemptServiceMoments m = preempt_service_moments(p);
            const double tw = c.ep + m.wait_mean + m.service_mean;
            out.numerator = 2.0 * c.ep + 1.0 / c.lam + m.wait_mean + m.service_mean -
                            tw * q - c.lam / c.s * c.a1 - c.lam / (c.s * c.s) * c.a;
            out.probability = 1.0 - q;
            break;
        }
        case SchemeId::Preempt_Comp: {
            const double pb = busy_prob(scheme, p);
            const ConditionedCompMoments pp(p);
            const RestartPeriodMoments y(p);
            const double mx = c.lam / c.s * pp.mgf(c.mu) * y.mgf(c.mu);
            out.numerator = 2.0 * pp.mean() + y.mean() + 1.0 / c.lam + 1.0 / c.mu +
                            (1.0 - 2.0 * pb) * mx / c.mu - pb * pp.mean() * mx;
            out.probability = 1.0 - pb * mx;
            break;
        }
    }
    check_probability(out.probability, "peak_prob", /*open_top=*/false);
    check_positive(out.numerator, "peak_numerator");
    return out;
}

}  // namespace

double avg_aoi(SchemeId scheme, const SystemParams& p) {
    return effective_rate(scheme, p) *
           (mean_xt(scheme, p) + interarrival_second_moment(scheme, p) / 2.0);
}

double avg_peak_aoi(SchemeId scheme, const SystemParams& p) {
    const PeakParts parts = peak_parts(scheme, p);
    return parts.numerator / parts.probability;
}

AoiReport full_report(SchemeId scheme, const SystemParams& p) {
    AoiReport r{};
    r.eff_rate = effective_rate(scheme, p);
    r.e_xt = mean_xt(scheme, p);
    r.e_x2 = interarrival_second_moment(scheme, p);
    r.p_busy = busy_prob(scheme, p);
    const PeakParts parts = peak_parts(scheme, p);
    r.peak_numerator = parts.numerator;
    r.peak_prob = parts.probability;
    r.avg_aoi = r.eff_rate * (r.e_xt + r.e_x2 / 2.0);
    r.avg_peak_aoi = r.peak_numerator / r.peak_prob;
    check_positive(r.avg_aoi, "avg_aoi");
    check_positive(r.avg_peak_aoi, "avg_peak_aoi");
    return r;
}

}  // namespace aoi
