#include "ouprem/geometric.hpp"

#include "ouprem/arithmetic.hpp"
#include "ouprem/errors.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <tuple>

namespace ouprem {

double exp_integral_Ein(double z) {
    if (!(z >= 0.0)) throw DomainError("exp_integral_Ein: z must be >= 0");
    if (z == 0.0) return 0.0;
    if (z < 40.0) {
        double term = 1.0;
        double sum = 0.0;
        for (int k = 1; k < 1000; ++k) {
            term *= z / k;
            double add = term / k;
            sum += add;
            if (add < 1e-17 * sum) break;
        }
        return sum;
    }
    return exp_integral_Ei(z) - std::log(z) - kEulerGamma;
}

double exp_integral_Ei(double z) {
    if (!(z > 0.0)) throw DomainError("exp_integral_Ei: z must be > 0");
    if (z < 40.0) return kEulerGamma + std::log(z) + exp_integral_Ein(z);
    // Asymptotic series e^z/z Σ k!/z^k, truncated at its smallest term.
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        double next = term * k / z;
        if (next > term || next < 1e-17) break;
        term = next;
        sum += term;
    }
    return std::exp(z) / z * sum;
}

namespace geom {

namespace {

double maturity(const MarketState& s, double T) {
    if (!(T >= s.t)) throw DomainError("maturity T must satisfy T >= t");
    if (!(s.y >= 0.0)) throw DomainError("state: y must be >= 0");
    return T - s.t;
}

void require_geom_levy(const LevyModel& m) {
    if (!(m.theta_max() > 1.0)) throw DomainError("geometric model requires Theta_L > 1");
}

void check_solution(const FactorParams& fp, const MeasureChange& mc,
                    const riccati::RiccatiSolution& sol) {
    if (sol.theta2() != mc.theta2 || sol.beta2() != mc.beta2 || sol.mu_y() != fp.mu_y ||
        sol.alpha_y() != fp.alpha_y) {
        throw DomainError("Riccati solution does not match the measure change / factors");
    }
}

// Log of E[exp(X(T) + Y(T))] given the X transition (level drift mux, speed ax)
// and the spike exponent (psi1, psi0).
double log_moment(double x, double y, double mux, double ax, double sigma, double psi1,
                  double psi0, double tau) {
    return x * std::exp(-ax * tau) + mux * decay_integral(ax, tau) +
           0.5 * sigma * sigma * decay_integral(2.0 * ax, tau) + y * psi1 + psi0;
}

double log_expected_P(const LevyModel& m, const FactorParams& fp, const MarketState& s,
                      double tau) {
    double psi1 = std::exp(-fp.alpha_y * tau);
    double psi0 = riccati::esscher_psi0(m, fp.mu_y, fp.alpha_y, 0.0, tau);
    return log_moment(s.x, s.y, fp.mu_x, fp.alpha_x, fp.sigma_x, psi1, psi0, tau);
}

double log_forward(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                   const MarketState& s, double tau, const riccati::RiccatiSolution& sol) {
    validate_geom(m, mc);
    check_solution(fp, mc, sol);
    auto [psi1, psi0] = sol.at(tau);
    return log_moment(s.x, s.y, fp.mu_x + mc.theta1, fp.alpha_x * (1.0 - mc.beta1), fp.sigma_x,
                      psi1, psi0, tau);
}

void check_lemma_hypotheses(const FactorParams& fp, const riccati::RiccatiSolution& sol,
                            const char* who) {
    char buf[160];
    if (fp.mu_x != 0.0 || fp.mu_y != 0.0) {
        std::snprintf(buf, sizeof buf, "%s: requires mu_x = mu_y = 0", who);
        throw DomainError(buf);
    }
    if (!(fp.alpha_x < fp.alpha_y)) {
        std::snprintf(buf, sizeof buf, "%s: requires alpha_x < alpha_y", who);
        throw DomainError(buf);
    }
    if (sol.case_tag == riccati::Case::Case3) {
        std::snprintf(buf, sizeof buf, "%s: not defined for Case3 parameters", who);
        throw DomainError(buf);
    }
}

}  // namespace

double expected_spot_P(const LevyModel& m, const FactorParams& fp, const MarketState& s,
                       double T) {
    require_geom_levy(m);
    double tau = maturity(s, T);
    return fp.seasonality(T) * std::exp(log_expected_P(m, fp, s, tau));
}

double forward_price(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                     const MarketState& s, double T, const riccati::RiccatiSolution& sol) {
    require_geom_levy(m);
    double tau = maturity(s, T);
    return fp.seasonality(T) * std::exp(log_forward(m, fp, mc, s, tau, sol));
}

double risk_premium(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                    const MarketState& s, double T, const riccati::RiccatiSolution& sol) {
    return forward_price(m, fp, mc, s, T, sol) - expected_spot_P(m, fp, s, T);
}

double log_premium_ratio(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                         const MarketState& s, double T, const riccati::RiccatiSolution& sol) {
    require_geom_levy(m);
    double tau = maturity(s, T);
    return log_forward(m, fp, mc, s, tau, sol) - log_expected_P(m, fp, s, tau);
}

double esscher_forward(const LevyModel& m, const FactorParams& fp, double theta1, double theta2,
                       const MarketState& s, double T) {
    require_geom_levy(m);
    double tau = maturity(s, T);
    MeasureChange mc{theta1, theta2, 0.0, 0.0};
    validate_geom(m, mc);
    double ax = fp.alpha_x;
    double ay = fp.alpha_y;
    double e = s.x * std::exp(-ax * tau) + (fp.mu_x + theta1) / ax * (1.0 - std::exp(-ax * tau)) +
               fp.sigma_x * fp.sigma_x / (4.0 * ax) * (1.0 - std::exp(-2.0 * ax * tau)) +
               s.y * std::exp(-ay * tau) + fp.mu_y / ay * (1.0 - std::exp(-ay * tau)) +
               riccati::esscher_jump_integral(m, ay, theta2, tau);
    return fp.seasonality(T) * std::exp(e);
}

double GeomPremiumDecomposition::term(const std::string& name) const {
    for (const auto& [k, v] : terms) {
        if (k == name) return v;
    }
    throw std::out_of_range("GeomPremiumDecomposition: no term " + name);
}

GeomPremiumDecomposition sigma_fn(const LevyModel& m, const FactorParams& fp,
                                  const MeasureChange& mc, const MarketState& s, double tau,
                                  const riccati::RiccatiSolution& sol) {
    require_geom_levy(m);
    validate_geom(m, mc);
    check_solution(fp, mc, sol);
    check_lemma_hypotheses(fp, sol, "sigma_fn");
    if (!(tau >= 0.0)) throw DomainError("sigma_fn: tau must be >= 0");

    double ax = fp.alpha_x;
    double ay = fp.alpha_y;
    double b1 = mc.beta1;
    auto [psi1, psi0] = sol.at(tau);

    double base = s.x * std::exp(-ax * tau) * std::expm1(ax * b1 * tau);
    double spike = s.y * (psi1 - std::exp(-ay * tau));
    double th1 = mc.theta1 * decay_integral(ax * (1.0 - b1), tau);
    double var = fp.sigma_x * fp.sigma_x / (4.0 * ax) * arith::lambda_fn(2.0 * ax * tau, 1.0 - b1);
    double p0 = psi0 - riccati::esscher_psi0(m, 0.0, ay, 0.0, tau);

    GeomPremiumDecomposition d;
    d.terms = {{"base", base}, {"spike", spike}, {"theta1", th1}, {"variance", var}, {"psi0", p0}};
    d.sigma_total = base + spike + th1 + var + p0;
    return d;
}

SigmaLimits sigma_limits(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                         const MarketState& s, const riccati::RiccatiSolution& sol) {
    require_geom_levy(m);
    validate_geom(m, mc);
    check_solution(fp, mc, sol);
    check_lemma_hypotheses(fp, sol, "sigma_limits");
    if (sol.case_tag != riccati::Case::Case1) {
        throw DomainError("sigma_limits: requires Case1 parameters (limit diverges otherwise)");
    }
    if (!(mc.beta1 < 1.0)) throw DomainError("sigma_limits: requires beta1 < 1");
    if (mc.is_zero()) return {0.0, 0.0, 0.0};

    double ax = fp.alpha_x;
    double ay = fp.alpha_y;
    double th2 = mc.theta2;
    double b1 = mc.beta1;
    double sx2 = fp.sigma_x * fp.sigma_x;

    // Push the solution out until Ψ1 is negligible, then close the tail with
    // the exponential rate α_Y(1 - β2).
    double rate = ay * (1.0 - mc.beta2);
    double t_max = std::max(sol.horizon, 1.0);
    auto [p1, p0] = sol.at(t_max);
    while (p1 >= 1e-12 && t_max < 1e7) {
        t_max += std::max(50.0, 5.0 / rate);
        std::tie(p1, p0) = sol.at(t_max);
    }
    double k1q = cumulant(m, th2, 1);
    double tail = (fp.mu_y + k1q) * p1 / rate;
    double psi0_inf = p0 + tail;
    double j0_inf = integrate([&](double a) { return cumulant(m, a, 0) / a; }, 0.0, 1.0, 1e-13) / ay;

    SigmaLimits out{};
    out.limit_infinity =
        mc.theta1 / (ax * (1.0 - b1)) + sx2 * b1 / (4.0 * ax * (1.0 - b1)) + psi0_inf - j0_inf;
    double k2q = cumulant(m, th2, 2);
    double spike_slope =
        mc.beta2 == 0.0 ? 0.0 : s.y * ay * mc.beta2 * (cumulant(m, 1.0 + th2, 1) - k1q) / k2q;
    out.slope_at_zero = s.x * ax * b1 + spike_slope + mc.theta1 + cumulant(m, 1.0 + th2, 0) -
                        cumulant(m, th2, 0) - cumulant(m, 1.0, 0);
    out.error_estimate = std::fabs(tail);
    return out;
}

GeomCurve curve(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                const MarketState& s, const std::vector<double>& taus) {
    double horizon = 1.0;
    for (double t : taus) horizon = std::max(horizon, t);
    riccati::RiccatiSolution sol = riccati::solve_riccati(m, fp, mc, horizon);
    if (sol.case_tag == riccati::Case::Case3) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "refusing geometric premium for Case3 parameters (u*=%.6f, bound=%.6f, "
                      "t_inf=%.6g)",
                      sol.u_star, sol.beta_bound, sol.t_infinity.value_or(0.0));
        throw BlowUp(buf, sol.t_infinity.value_or(0.0));
    }
    GeomCurve c;
    c.taus = taus;
    for (double tau : taus) {
        double T = s.t + tau;
        double f = forward_price(m, fp, mc, s, T, sol);
        double e = expected_spot_P(m, fp, s, T);
        c.forward.push_back(f);
        c.risk_premium.push_back(f - e);
        c.sigma.push_back(log_premium_ratio(m, fp, mc, s, T, sol));
    }
    return c;
}

}  // namespace geom

}  // namespace ouprem
