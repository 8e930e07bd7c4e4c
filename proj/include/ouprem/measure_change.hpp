#pragma once

#include "ouprem/levy_model.hpp"

namespace ouprem {

/// Deterministic seasonal level Λ(t).
///   constant: level
///   trig:     level + amplitude * cos(2π (t - phase) / period_days)
struct Seasonality {
    enum class Kind { Constant, Trig };

    Kind kind = Kind::Constant;
    double level = 0.0;
    double amplitude = 0.0;
    double period_days = 365.0;
    double phase = 0.0;

    static Seasonality constant(double level) { return {Kind::Constant, level, 0.0, 365.0, 0.0}; }
    static Seasonality trig(double level, double amplitude, double period_days, double phase) {
        return {Kind::Trig, level, amplitude, period_days, phase};
    }

    double operator()(double t) const;
    double min_value() const;
};

/// P-parameters of dX = (μ_X - α_X X)dt + σ_X dW and dY = (μ_Y - α_Y Y)dt + dL.
struct FactorParams {
    double mu_x = 0.0;
    double alpha_x = 0.099;
    double sigma_x = 0.0158;
    double x0 = 0.0;
    double mu_y = 0.0;
    double alpha_y = 0.3466;
    double y0 = 0.0;
    Seasonality seasonality = Seasonality::constant(0.0);

    /// Throws DomainError on non-positive speeds/volatility or negative μ_Y, Y(0).
    void validate() const;
};

/// Measure change Q_{θ̄,β̄}; all zero means Q = P.
struct MeasureChange {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;

    bool is_zero() const {
        return theta1 == 0.0 && theta2 == 0.0 && beta1 == 0.0 && beta2 == 0.0;
    }
};

/// θ2 in D_L and β's in [0,1]. Throws DomainError naming the violated domain.
void validate_arith(const LevyModel& m, const MeasureChange& mc);

/// Θ_L > 1, θ2 in D_L^g(δ), β's in [0,1].
void validate_geom(const LevyModel& m, const MeasureChange& mc, double delta = 1e-6);

/// Factor dynamics written as dX = (mu_x - alpha_x X)dt + ..., with the
/// jump compensator's mean folded into mu_y:
///   under Q: mu_y = μ_Y + κ'(θ2), alpha_y = α_Y(1 - β2)
///   under P: mu_y = μ_Y + κ'(0),  alpha_y = α_Y
/// A zero alpha means the factor is a drifted random walk.
struct FactorParamsQ {
    double mu_x;
    double alpha_x;
    double sigma_x;
    double mu_y;
    double alpha_y;
    bool x_drifted_brownian;
    bool y_nonstationary;
};

FactorParamsQ q_dynamics(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc);

/// The same representation under P; equals q_dynamics with mc = 0.
FactorParamsQ p_dynamics(const LevyModel& m, const FactorParams& fp);

/// G = (θ1 + α_X β1 x) / σ_X
double kernel_G(const FactorParams& fp, const MeasureChange& mc, double x);

/// H = e^{θ2 z} (1 + α_Y β2 z y / κ''(θ2))
double kernel_H(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc, double y,
                double z);

/// M = e^{θ2 z} (1 + α_Y β2 y / κ'(θ2)); finite-activity models only.
double kernel_M(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc, double y,
                double z);

/// Coefficient α_Y β2 / κ''(θ2) of the state-dependent part of the Q-compensator.
double spike_feedback(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc);

}  // namespace ouprem
