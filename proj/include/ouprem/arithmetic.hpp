#pragma once

#include "ouprem/market.hpp"

namespace ouprem::arith {

/// E_P[S(T) | F_t] for S = Λ_a + X + Y.
double expected_spot_P(const LevyModel& m, const FactorParams& fp, const MarketState& s,
                       double T);

/// F_Q(t, T) = E_Q[S(T) | F_t].
double forward_price(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                     const MarketState& s, double T);

/// R^F(t, T) = F_Q(t, T) - E_P[S(T) | F_t]; independent of Λ_a.
double risk_premium(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                    const MarketState& s, double T);

/// θ1 τ η(α_X τ) + (κ'(θ2) - κ'(0)) τ η(α_Y τ): the premium under a pure Esscher change.
double esscher_premium(const LevyModel& m, const FactorParams& fp, double theta1, double theta2,
                       double tau);

struct PremiumLimits {
    double limit_infinity;
    double slope_at_zero;
};

/// Long-maturity limit and short-end slope of the premium.
/// Requires μ_X = μ_Y = 0 and β1, β2 < 1.
PremiumLimits rp_limits(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                        const MarketState& s);

/// Λ(x, y) = (1 - e^{-xy}) / y - (1 - e^{-x}), x >= 0 (may be +inf), y in [0, 1].
double lambda_fn(double x, double y);

struct SignConditions {
    bool short_end_positive;
    bool long_end_negative;
};

SignConditions sign_conditions(const LevyModel& m, const FactorParams& fp,
                               const MeasureChange& mc, const MarketState& s);

/// Average of F_Q(t, T) over delivery T in [T1, T2].
double swap_price(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                  const MarketState& s, double T1, double T2);

/// Average of R^F(t, T) over delivery T in [T1, T2].
double swap_risk_premium(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                         const MarketState& s, double T1, double T2);

enum class CurveKind { RiskPremium, Forward, ExpectedSpot };

CurveResult curve(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                  const MarketState& s, const std::vector<double>& taus, CurveKind kind);

}  // namespace ouprem::arith
