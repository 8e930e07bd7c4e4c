#pragma once

#include "ouprem/market.hpp"
#include "ouprem/riccati.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ouprem {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Ei(z) = ∫_{-∞}^z e^t / t dt for z > 0.
double exp_integral_Ei(double z);

/// Ein(z) = Ei(z) - log z - γ = Σ_{k>=1} z^k / (k k!), z >= 0.
double exp_integral_Ein(double z);

}  // namespace ouprem

namespace ouprem::geom {

/// E_P[S(T) | F_t] for S = Λ_g exp(X + Y).
double expected_spot_P(const LevyModel& m, const FactorParams& fp, const MarketState& s,
                       double T);

/// F_Q(t, T) via E_Q[e^{Y(T)} | F_t] = exp(Y(t) Ψ1(T-t) + Ψ0(T-t)).
double forward_price(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                     const MarketState& s, double T, const riccati::RiccatiSolution& sol);

/// F_Q - E_P.
double risk_premium(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                    const MarketState& s, double T, const riccati::RiccatiSolution& sol);

/// log F_Q - log E_P (the exponent difference; its sign is the premium's sign).
double log_premium_ratio(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                         const MarketState& s, double T, const riccati::RiccatiSolution& sol);

/// Esscher forward (β̄ = 0) by explicit exponentials, independent of the ODE solver.
double esscher_forward(const LevyModel& m, const FactorParams& fp, double theta1, double theta2,
                       const MarketState& s, double T);

struct GeomPremiumDecomposition {
    double sigma_total = 0.0;
    std::vector<std::pair<std::string, double>> terms;

    double term(const std::string& name) const;
};

/// Σ(t, τ) split into base, spike, theta1, variance and psi0 terms.
/// Requires μ_X = μ_Y = 0, α_X < α_Y and a Case1/Case2 solution.
GeomPremiumDecomposition sigma_fn(const LevyModel& m, const FactorParams& fp,
                                  const MeasureChange& mc, const MarketState& s, double tau,
                                  const riccati::RiccatiSolution& sol);

struct SigmaLimits {
    double limit_infinity;
    double slope_at_zero;
    double error_estimate;  // tail truncation of the infinite-horizon integral
};

/// Requires the sigma_fn hypotheses, β1 < 1 and a Case1 solution.
SigmaLimits sigma_limits(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                         const MarketState& s, const riccati::RiccatiSolution& sol);

struct GeomCurve {
    std::vector<double> taus, risk_premium, sigma, forward;
};

/// Curves over τ; refuses Case3 parameters by throwing BlowUp.
GeomCurve curve(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                const MarketState& s, const std::vector<double>& taus);

}  // namespace ouprem::geom
