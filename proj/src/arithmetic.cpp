#include "ouprem/arithmetic.hpp"

#include "ouprem/errors.hpp"

#include <cmath>
#include <limits>

namespace ouprem {

std::string to_string(Method m) {
    switch (m) {
        case Method::ClosedForm: return "closed_form";
        case Method::Ode: return "ode";
        case Method::MonteCarlo: return "monte_carlo";
    }
    return "unknown";
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v;
    if (n <= 0) return v;
    if (n == 1) return {lo};
    v.reserve(n);
    double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) v.push_back(lo + i * h);
    v.back() = hi;
    return v;
}

namespace arith {

namespace {

double maturity(const MarketState& s, double T) {
    if (!(T >= s.t)) throw DomainError("maturity T must satisfy T >= t");
    if (!(s.y >= 0.0)) throw DomainError("state: y must be >= 0");
    return T - s.t;
}

// x e^{-a τ} + μ τ η(a τ): conditional mean of an OU factor with level drift μ and speed a.
double ou_mean(double x, double mu, double a, double tau) {
    return x * std::exp(-a * tau) + mu * decay_integral(a, tau);
}

}  // namespace

double expected_spot_P(const LevyModel& m, const FactorParams& fp, const MarketState& s,
                       double T) {
    double tau = maturity(s, T);
    FactorParamsQ p = p_dynamics(m, fp);
    return fp.seasonality(T) + ou_mean(s.x, p.mu_x, p.alpha_x, tau) +
           ou_mean(s.y, p.mu_y, p.alpha_y, tau);
}

double forward_price(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                     const MarketState& s, double T) {
    double tau = maturity(s, T);
    validate_arith(m, mc);
    FactorParamsQ q = q_dynamics(m, fp, mc);
    return fp.seasonality(T) + ou_mean(s.x, q.mu_x, q.alpha_x, tau) +
           ou_mean(s.y, q.mu_y, q.alpha_y, tau);
}

double risk_premium(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                    const MarketState& s, double T) {
    double tau = maturity(s, T);
    validate_arith(m, mc);
    FactorParamsQ q = q_dynamics(m, fp, mc);
    double k1p = cumulant(m, 0.0, 1);
    double k1q = cumulant(m, mc.theta2, 1);

    double ix_q = decay_integral(q.alpha_x, tau);
    double ix_p = decay_integral(fp.alpha_x, tau);
    double iy_q = decay_integral(q.alpha_y, tau);
    double iy_p = decay_integral(fp.alpha_y, tau);

    double r = s.x * (std::exp(-q.alpha_x * tau) - std::exp(-fp.alpha_x * tau));
    r += s.y * (std::exp(-q.alpha_y * tau) - std::exp(-fp.alpha_y * tau));
    r += mc.theta1 * ix_q + fp.mu_x * (ix_q - ix_p);
    r += (k1q - k1p) * iy_q + (fp.mu_y + k1p) * (iy_q - iy_p);
    return r;
}

double esscher_premium(const LevyModel& m, const FactorParams& fp, double theta1, double theta2,
                       double tau) {
    return theta1 * decay_integral(fp.alpha_x, tau) +
           (cumulant(m, theta2, 1) - cumulant(m, 0.0, 1)) * decay_integral(fp.alpha_y, tau);
}

PremiumLimits rp_limits(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                        const MarketState& s) {
    validate_arith(m, mc);
    if (fp.mu_x != 0.0 || fp.mu_y != 0.0) {
        throw DomainError("rp_limits: requires mu_x = mu_y = 0");
    }
    if (!(mc.beta1 < 1.0) || !(mc.beta2 < 1.0)) {
        throw DomainError("rp_limits: limit diverges for beta = 1 (beta must lie in [0,1))");
    }
    double k1p = cumulant(m, 0.0, 1);
    double k1q = cumulant(m, mc.theta2, 1);
    double ax = fp.alpha_x;
    double ay = fp.alpha_y;
    PremiumLimits out{};
    out.limit_infinity = mc.theta1 / (ax * (1.0 - mc.beta1)) +
                         (k1q - k1p) / (ay * (1.0 - mc.beta2)) +
                         (k1p / ay) * mc.beta2 / (1.0 - mc.beta2);
    out.slope_at_zero = s.x * ax * mc.beta1 + s.y * ay * mc.beta2 + mc.theta1 + k1q - k1p;
    return out;
}

double lambda_fn(double x, double y) {
    if (!(x >= 0.0)) throw DomainError("lambda_fn: x must be >= 0");
    if (!(y >= 0.0 && y <= 1.0)) throw DomainError("lambda_fn: y must lie in [0,1]");
    if (std::isinf(x)) {
        return y == 0.0 ? kInf : (1.0 - y) / y;
    }
    double v = x * (eta(x * y) - eta(x));
    // η is decreasing, so only rounding can push v below zero when y is near 1.
    if (v < 0.0 && v > -8.0 * std::numeric_limits<double>::epsilon() * x) v = 0.0;
    return v;
}

SignConditions sign_conditions(const LevyModel& m, const FactorParams& fp,
                               const MeasureChange& mc, const MarketState& s) {
    PremiumLimits l = rp_limits(m, fp, mc, s);
    return {l.slope_at_zero > 0.0, l.limit_infinity < 0.0};
}

namespace {

void check_delivery(const MarketState& s, double T1, double T2) {
    if (!(s.t < T1 && T1 < T2)) {
        throw DomainError("swap: delivery period must satisfy t < T1 < T2");
    }
}

}  // namespace

double swap_price(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                  const MarketState& s, double T1, double T2) {
    check_delivery(s, T1, T2);
    validate_arith(m, mc);
    double I = adaptive_simpson([&](double T) { return forward_price(m, fp, mc, s, T); }, T1, T2,
                                1e-9);
    return I / (T2 - T1);
}

double swap_risk_premium(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                         const MarketState& s, double T1, double T2) {
    check_delivery(s, T1, T2);
    validate_arith(m, mc);
    double I = adaptive_simpson([&](double T) { return risk_premium(m, fp, mc, s, T); }, T1, T2,
                                1e-9);
    return I / (T2 - T1);
}

CurveResult curve(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                  const MarketState& s, const std::vector<double>& taus, CurveKind kind) {
    CurveResult r;
    r.taus = taus;
    r.values.reserve(taus.size());
    r.meta = {"arith", m.name(), mc, Method::ClosedForm};
    for (double tau : taus) {
        double T = s.t + tau;
        switch (kind) {
            case CurveKind::RiskPremium: r.values.push_back(risk_premium(m, fp, mc, s, T)); break;
            case CurveKind::Forward: r.values.push_back(forward_price(m, fp, mc, s, T)); break;
            case CurveKind::ExpectedSpot: r.values.push_back(expected_spot_P(m, fp, s, T)); break;
        }
    }
    return r;
}

}  // namespace arith

}  // namespace ouprem
