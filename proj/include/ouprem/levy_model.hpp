#pragma once

#include "ouprem/numerics.hpp"

#include <string>

namespace ouprem {

/// Driving subordinator L of the spike factor.
///
/// Three variants are supported:
///   Dirac(a)                  l(dz) = delta_a(dz)
///   CompoundPoissonExp(c, λ)  l(dz) = c e^{-λ z} dz
///   TemperedStable(c, λ, α)   l(dz) = c e^{-λ z} z^{-1-α} dz,  α in [0, 1)
class LevyModel {
public:
    enum class Kind { Dirac, CompoundPoissonExp, TemperedStable };

    static LevyModel dirac(double a = 1.0);
    static LevyModel cpexp(double c, double lambda);
    static LevyModel tempered_stable(double c, double lambda, double alpha);

    Kind kind() const { return kind_; }
    double a() const { return a_; }
    double c() const { return c_; }
    double lambda() const { return lambda_; }
    double alpha() const { return alpha_; }

    /// Exponential-moment boundary; +inf for Dirac.
    double theta_max() const;

    /// Total mass of l; +inf for tempered stable.
    double jump_intensity() const;

    bool finite_activity() const { return kind_ != Kind::TemperedStable; }

    std::string name() const;

private:
    LevyModel(Kind k, double a, double c, double lambda, double alpha)
        : kind_(k), a_(a), c_(c), lambda_(lambda), alpha_(alpha) {}

    Kind kind_;
    double a_;
    double c_;
    double lambda_;
    double alpha_;
};

struct Interval {
    double lo = -kInf;
    double hi = kInf;  // open upper end

    bool contains(double x) const { return x > lo && x < hi; }
};

struct ThetaDomains {
    double theta_max;  // Θ_L
    Interval d_L;      // (-inf, Θ_L/2)
    Interval d_L_g;    // (-inf, (Θ_L - 1) ∧ Θ_L/2)

    Interval d_L_g_delta(double delta) const;
};

/// κ_L^{(order)}(θ), order in 0..3. Throws DomainError for θ >= Θ_L.
double cumulant(const LevyModel& m, double theta, int order = 0);

/// κ^{(order)}(θ + u) - κ^{(order)}(θ) for order 0 or 1, without cancellation at small u.
double cumulant_increment(const LevyModel& m, double theta, double u, int order);

ThetaDomains domains(const LevyModel& m);

/// Value of the Lévy density at z > 0, or the atom for Dirac.
struct LevyDensityValue {
    bool point_mass = false;
    double density = 0.0;   // continuous part at z
    double location = 0.0;  // atom position (Dirac only)
    double weight = 0.0;    // atom weight (Dirac only)
};

LevyDensityValue levy_density(const LevyModel& m, double z);

/// ∫ g(z) l(dz) by quadrature (exact evaluation for the atom).
/// Intended for integrands with g(z) = O(z) at 0 in the tempered-stable case.
double levy_integral(const LevyModel& m, const Fn& g, double rel_tol = 1e-12);

}  // namespace ouprem
