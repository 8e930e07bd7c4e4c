#pragma once

#include "ouprem/measure_change.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace ouprem::riccati {

struct LevyExponents {
    double lam0;
    double lam1;
};

/// Λ0(u) = μ_Y u + κ(u+θ2) - κ(θ2)
/// Λ1(u) = -α_Y u + (α_Y β2 / κ''(θ2)) (κ'(u+θ2) - κ'(θ2))
LevyExponents levy_exponents(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                             double u);

/// Unique positive root of Λ1 on (0, Θ_L - θ2); β2 must lie in (0, 1).
double u_star(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
              double delta = 1e-6);

enum class Case { Case1, Case2, Case3 };

const char* to_string(Case c);

struct Classification {
    Case case_tag;
    double u_star;      // Θ_L - θ2 when β2 = 0, 0 when β2 = 1
    double beta_bound;  // κ''(θ2) / (κ'(1+θ2) - κ'(θ2))
};

Classification classify(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                        double delta = 1e-6);

/// t_∞ = ∫_1^{Θ_L-θ2} du / Λ1(u); Case3 only (WrongCase otherwise).
double blow_up_time(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                    double delta = 1e-6);

/// J_θ(τ) = ∫_0^τ [κ(e^{-α s} + θ) - κ(θ)] ds.
double esscher_jump_integral(const LevyModel& m, double alpha_y, double theta, double tau);

/// Closed-form Ψ0 for β2 = 0: μ_Y τ η(α_Y τ) + J_θ2(τ).
double esscher_psi0(const LevyModel& m, double mu_y, double alpha_y, double theta, double tau);

struct SolverOptions {
    double tol = 1e-10;          // per-step error target (atol = rtol)
    double guard = 1e-6;         // Case3 stop at (Θ_L - θ2)(1 - guard)
    double delta = 1e-6;         // margin in D_L^g(δ)
    double max_step = 1.0;       // days
    double fixed_step = 0.0;     // > 0: classical fixed-step Dormand-Prince
    bool force_numeric = false;  // integrate even when a closed form exists
};

enum class Outcome { Ok, BlowUp };

/// Generalized Riccati solution Ψ1' = Λ1(Ψ1), Ψ0' = Λ0(Ψ1), Ψ1(0) = 1, Ψ0(0) = 0.
class RiccatiSolution {
public:
    std::vector<double> t_grid;
    std::vector<double> psi1;
    std::vector<double> psi0;
    Case case_tag = Case::Case1;
    double u_star = 0.0;
    double beta_bound = 0.0;
    std::optional<double> t_infinity;
    Outcome outcome = Outcome::Ok;
    double horizon = 0.0;           // requested horizon
    double truncation_time = 0.0;   // Case3: end of the computed grid
    bool divergence_suspected = false;
    bool closed_form = false;

    /// (Ψ1(τ), Ψ0(τ)). Throws BlowUp past the truncation time in Case3.
    std::pair<double, double> at(double tau) const;

    /// True if at(tau) is defined (Case1/Case2 are defined on [0, ∞)).
    bool covers(double tau) const;

    const LevyModel& model() const { return model_; }
    double theta2() const { return theta2_; }
    double beta2() const { return beta2_; }
    double mu_y() const { return mu_y_; }
    double alpha_y() const { return alpha_y_; }

private:
    friend RiccatiSolution solve_riccati(const LevyModel&, const FactorParams&,
                                         const MeasureChange&, double, const SolverOptions&);
    RiccatiSolution(const LevyModel& m) : model_(m) {}

    LevyModel model_;
    double theta2_ = 0.0;
    double beta2_ = 0.0;
    double mu_y_ = 0.0;
    double alpha_y_ = 0.0;
    double tol_ = 1e-10;
};

RiccatiSolution solve_riccati(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                              double horizon, const SolverOptions& opt = {});

}  // namespace ouprem::riccati
