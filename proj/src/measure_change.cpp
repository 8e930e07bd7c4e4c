#include "ouprem/measure_change.hpp"

#include "ouprem/errors.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

namespace ouprem {

double Seasonality::operator()(double t) const {
    if (kind == Kind::Constant) return level;
    return level + amplitude * std::cos(2.0 * std::numbers::pi * (t - phase) / period_days);
}

double Seasonality::min_value() const {
    return kind == Kind::Constant ? level : level - std::fabs(amplitude);
}

void FactorParams::validate() const {
    if (!(alpha_x > 0.0)) throw DomainError("factors: alpha_x must be > 0");
    if (!(alpha_y > 0.0)) throw DomainError("factors: alpha_y must be > 0");
    if (!(sigma_x > 0.0)) throw DomainError("factors: sigma_x must be > 0");
    if (!(mu_y >= 0.0)) throw DomainError("factors: mu_y must be >= 0");
    if (!(y0 >= 0.0)) throw DomainError("factors: y0 must be >= 0");
    if (seasonality.kind == Seasonality::Kind::Trig && !(seasonality.period_days > 0.0)) {
        throw DomainError("seasonality: period_days must be > 0");
    }
}

namespace {

void check_betas(const MeasureChange& mc) {
    if (!(mc.beta1 >= 0.0 && mc.beta1 <= 1.0)) throw DomainError("beta1 outside [0,1]");
    if (!(mc.beta2 >= 0.0 && mc.beta2 <= 1.0)) throw DomainError("beta2 outside [0,1]");
    if (!std::isfinite(mc.theta1)) throw DomainError("theta1 must be finite");
}

std::string fmt_interval(const Interval& iv) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(-inf, %g)", iv.hi);
    return buf;
}

}  // namespace

void validate_arith(const LevyModel& m, const MeasureChange& mc) {
    check_betas(mc);
    Interval d = domains(m).d_L;
    if (!d.contains(mc.theta2)) {
        throw DomainError("theta2 outside D_L = " + fmt_interval(d));
    }
}

void validate_geom(const LevyModel& m, const MeasureChange& mc, double delta) {
    check_betas(mc);
    ThetaDomains d = domains(m);
    if (!(d.theta_max > 1.0)) {
        throw DomainError("geometric model requires Theta_L > 1");
    }
    Interval g = d.d_L_g_delta(delta);
    if (!g.contains(mc.theta2)) {
        throw DomainError("theta2 outside D_L^g = " + fmt_interval(g));
    }
}

FactorParamsQ q_dynamics(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc) {
    FactorParamsQ q{};
    q.mu_x = fp.mu_x + mc.theta1;
    q.alpha_x = fp.alpha_x * (1.0 - mc.beta1);
    q.sigma_x = fp.sigma_x;
    q.mu_y = fp.mu_y + cumulant(m, mc.theta2, 1);
    q.alpha_y = fp.alpha_y * (1.0 - mc.beta2);
    q.x_drifted_brownian = mc.beta1 == 1.0;
    q.y_nonstationary = mc.beta2 == 1.0;
    return q;
}

FactorParamsQ p_dynamics(const LevyModel& m, const FactorParams& fp) {
    return q_dynamics(m, fp, MeasureChange{});
}

double kernel_G(const FactorParams& fp, const MeasureChange& mc, double x) {
    return (mc.theta1 + fp.alpha_x * mc.beta1 * x) / fp.sigma_x;
}

double spike_feedback(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc) {
    if (mc.beta2 == 0.0) return 0.0;
    return fp.alpha_y * mc.beta2 / cumulant(m, mc.theta2, 2);
}

double kernel_H(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc, double y,
                double z) {
    if (!domains(m).d_L.contains(mc.theta2)) {
        throw DomainError("kernel_H: theta2 outside D_L");
    }
    if (!(y >= 0.0)) throw DomainError("kernel_H: y must be >= 0");
    return std::exp(mc.theta2 * z) * (1.0 + spike_feedback(m, fp, mc) * z * y);
}

double kernel_M(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc, double y,
                double z) {
    if (!m.finite_activity()) {
        throw UnsupportedModel("kernel_M: not available for infinite-activity " + m.name());
    }
    if (!domains(m).d_L.contains(mc.theta2)) {
        throw DomainError("kernel_M: theta2 outside D_L");
    }
    if (!(y >= 0.0)) throw DomainError("kernel_M: y must be >= 0");
    double k1 = cumulant(m, mc.theta2, 1);
    return std::exp(mc.theta2 * z) * (1.0 + fp.alpha_y * mc.beta2 * y / k1);
}

}  // namespace ouprem
