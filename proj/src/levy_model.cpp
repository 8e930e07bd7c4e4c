#include "ouprem/levy_model.hpp"

#include "ouprem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ouprem {

LevyModel LevyModel::dirac(double a) {
    if (!(a > 0.0)) throw DomainError("dirac: jump size a must be > 0");
    return LevyModel(Kind::Dirac, a, 0.0, 0.0, 0.0);
}

LevyModel LevyModel::cpexp(double c, double lambda) {
    if (!(c > 0.0)) throw DomainError("cpexp: c must be > 0");
    if (!(lambda > 0.0)) throw DomainError("cpexp: lambda must be > 0");
    return LevyModel(Kind::CompoundPoissonExp, 0.0, c, lambda, 0.0);
}

LevyModel LevyModel::tempered_stable(double c, double lambda, double alpha) {
    if (!(c > 0.0)) throw DomainError("tempered_stable: c must be > 0");
    if (!(lambda > 0.0)) throw DomainError("tempered_stable: lambda must be > 0");
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw DomainError("tempered_stable: alpha must lie in [0, 1)");
    }
    return LevyModel(Kind::TemperedStable, 0.0, c, lambda, alpha);
}

double LevyModel::theta_max() const {
    return kind_ == Kind::Dirac ? kInf : lambda_;
}

double LevyModel::jump_intensity() const {
    switch (kind_) {
        case Kind::Dirac: return 1.0;
        case Kind::CompoundPoissonExp: return c_ / lambda_;
        case Kind::TemperedStable: return kInf;
    }
    return kInf;
}

std::string LevyModel::name() const {
    char buf[128];
    switch (kind_) {
        case Kind::Dirac:
            std::snprintf(buf, sizeof buf, "dirac(a=%g)", a_);
            break;
        case Kind::CompoundPoissonExp:
            std::snprintf(buf, sizeof buf, "cpexp(c=%g,lambda=%g)", c_, lambda_);
            break;
        case Kind::TemperedStable:
            std::snprintf(buf, sizeof buf, "tempered_stable(c=%g,lambda=%g,alpha=%g)", c_,
                          lambda_, alpha_);
            break;
    }
    return buf;
}

Interval ThetaDomains::d_L_g_delta(double delta) const {
    return Interval{-kInf, std::min(theta_max - 1.0 - delta, theta_max / 2.0)};
}

ThetaDomains domains(const LevyModel& m) {
    double tm = m.theta_max();
    ThetaDomains d{tm, Interval{-kInf, tm / 2.0}, Interval{-kInf, std::min(tm - 1.0, tm / 2.0)}};
    return d;
}

double cumulant(const LevyModel& m, double theta, int order) {
    if (order < 0 || order > 3) throw DomainError("cumulant: order must be in 0..3");
    if (!(theta < m.theta_max())) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "cumulant: theta=%g outside (-inf, Theta_L=%g) for %s",
                      theta, m.theta_max(), m.name().c_str());
        throw DomainError(buf);
    }
    switch (m.kind()) {
        case LevyModel::Kind::Dirac: {
            double a = m.a();
            if (order == 0) return std::expm1(theta * a);
            return std::pow(a, order) * std::exp(theta * a);
        }
        case LevyModel::Kind::CompoundPoissonExp: {
            double c = m.c();
            double lam = m.lambda();
            if (order == 0) return c * theta / (lam * (lam - theta));
            double fact = order == 3 ? 6.0 : static_cast<double>(order);
            return c * fact / std::pow(lam - theta, order + 1);
        }
        case LevyModel::Kind::TemperedStable: {
            double c = m.c();
            double lam = m.lambda();
            double al = m.alpha();
            if (order == 0) {
                if (al == 0.0) return -c * std::log1p(-theta / lam);
                // Γ(-α)(λ^α)((1 - θ/λ)^α - 1), written to avoid cancellation at small θ.
                double r = std::expm1(al * std::log1p(-theta / lam));
                return c * std::tgamma(-al) * std::pow(lam, al) * r;
            }
            return c * std::tgamma(order - al) * std::pow(lam - theta, al - order);
        }
    }
    return 0.0;
}

double cumulant_increment(const LevyModel& m, double theta, double u, int order) {
    if (order != 0 && order != 1) throw DomainError("cumulant_increment: order must be 0 or 1");
    if (!(theta + u < m.theta_max()) || !(theta < m.theta_max())) {
        throw DomainError("cumulant_increment: argument outside (-inf, Theta_L)");
    }
    switch (m.kind()) {
        case LevyModel::Kind::Dirac: {
            double a = m.a();
            double base = std::exp(theta * a) * std::expm1(u * a);
            return order == 0 ? base : a * base;
        }
        case LevyModel::Kind::CompoundPoissonExp: {
            double c = m.c();
            double d = m.lambda() - theta;
            if (order == 0) return c * u / (d * (d - u));
            return c * u * (2.0 * d - u) / ((d - u) * (d - u) * d * d);
        }
        case LevyModel::Kind::TemperedStable: {
            double c = m.c();
            double al = m.alpha();
            double d = m.lambda() - theta;
            double l = std::log1p(-u / d);
            if (order == 0) {
                if (al == 0.0) return -c * l;
                return c * std::tgamma(-al) * std::pow(d, al) * std::expm1(al * l);
            }
            return c * std::tgamma(1.0 - al) * std::pow(d, al - 1.0) * std::expm1((al - 1.0) * l);
        }
    }
    return 0.0;
}

LevyDensityValue levy_density(const LevyModel& m, double z) {
    if (!(z > 0.0)) throw DomainError("levy_density: z must be > 0");
    LevyDensityValue v;
    switch (m.kind()) {
        case LevyModel::Kind::Dirac:
            v.point_mass = true;
            v.location = m.a();
            v.weight = 1.0;
            break;
        case LevyModel::Kind::CompoundPoissonExp:
            v.density = m.c() * std::exp(-m.lambda() * z);
            break;
        case LevyModel::Kind::TemperedStable:
            v.density = m.c() * std::exp(-m.lambda() * z) * std::pow(z, -1.0 - m.alpha());
            break;
    }
    return v;
}

double levy_integral(const LevyModel& m, const Fn& g, double rel_tol) {
    switch (m.kind()) {
        case LevyModel::Kind::Dirac:
            return g(m.a());
        case LevyModel::Kind::CompoundPoissonExp: {
            double c = m.c();
            double lam = m.lambda();
            return integrate_to_inf(
                [&](double z) {
                    double d = c * std::exp(-lam * z);
                    return d == 0.0 ? 0.0 : g(z) * d;
                },
                0.0, rel_tol);
        }
        case LevyModel::Kind::TemperedStable: {
            // Below 1e-100 the contribution of an O(z) integrand is below 1e-50.
            auto f = [&](double z) {
                if (z < 1e-100) return 0.0;
                double d = levy_density(m, z).density;
                return d == 0.0 ? 0.0 : g(z) * d;
            };
            double head = integrate_singular(f, 0.0, 1.0, rel_tol);
            double tail = integrate_to_inf(f, 1.0, rel_tol);
            return head + tail;
        }
    }
    return 0.0;
}

}  // namespace ouprem
