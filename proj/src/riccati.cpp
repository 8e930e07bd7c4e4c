#include "ouprem/riccati.hpp"

#include "ouprem/errors.hpp"
#include "ouprem/market.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace ouprem::riccati {

const char* to_string(Case c) {
    switch (c) {
        case Case::Case1: return "Case1";
        case Case::Case2: return "Case2";
        case Case::Case3: return "Case3";
    }
    return "?";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Vector field of the (Ψ1, Ψ0) system. Evaluations at or beyond the
// exponential-moment boundary return NaN so the integrator can reject the step.
struct Field {
    LevyModel m;
    double mu_y;
    double alpha_y;
    double theta2;
    double b;   // α_Y β2 / κ''(θ2)
    double upper;

    Field(const LevyModel& model, double mu, double ay, double th2, double beta2)
        : m(model), mu_y(mu), alpha_y(ay), theta2(th2) {
        b = beta2 == 0.0 ? 0.0 : ay * beta2 / cumulant(m, th2, 2);
        upper = m.theta_max() - th2;
    }

    bool inside(double u) const { return u < upper && std::isfinite(u); }

    double lam0(double u) const {
        if (!inside(u)) return kNaN;
        return mu_y * u + cumulant_increment(m, theta2, u, 0);
    }

    double lam1(double u) const {
        if (!inside(u)) return kNaN;
        if (b == 0.0) return -alpha_y * u;
        return -alpha_y * u + b * cumulant_increment(m, theta2, u, 1);
    }
};

Field make_field(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc) {
    return Field(m, fp.mu_y, fp.alpha_y, mc.theta2, mc.beta2);
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

struct Step {
    double u;
    double p;
    double err_u;
    double err_p;
    bool ok;
};

// One step from state (u, p). The field is autonomous and Λ0 depends on u only.
Step dp_step(const Field& f, double u, double p, double h) {
    std::array<double, 7> ku{};
    std::array<double, 7> kp{};
    auto eval = [&](int i, double ui) {
        ku[i] = f.lam1(ui);
        kp[i] = f.lam0(ui);
        return std::isfinite(ku[i]) && std::isfinite(kp[i]);
    };
    if (!eval(0, u)) return {u, p, 0, 0, false};
    if (!eval(1, u + h * a21 * ku[0])) return {u, p, 0, 0, false};
    if (!eval(2, u + h * (a31 * ku[0] + a32 * ku[1]))) return {u, p, 0, 0, false};
    if (!eval(3, u + h * (a41 * ku[0] + a42 * ku[1] + a43 * ku[2]))) return {u, p, 0, 0, false};
    if (!eval(4, u + h * (a51 * ku[0] + a52 * ku[1] + a53 * ku[2] + a54 * ku[3]))) {
        return {u, p, 0, 0, false};
    }
    if (!eval(5, u + h * (a61 * ku[0] + a62 * ku[1] + a63 * ku[2] + a64 * ku[3] +
                          a65 * ku[4]))) {
        return {u, p, 0, 0, false};
    }
    double un = u + h * (b1 * ku[0] + b3 * ku[2] + b4 * ku[3] + b5 * ku[4] + b6 * ku[5]);
    double pn = p + h * (b1 * kp[0] + b3 * kp[2] + b4 * kp[3] + b5 * kp[4] + b6 * kp[5]);
    if (!eval(6, un)) return {u, p, 0, 0, false};
    double eu = h * (e1 * ku[0] + e3 * ku[2] + e4 * ku[3] + e5 * ku[4] + e6 * ku[5] + e7 * ku[6]);
    double ep = h * (e1 * kp[0] + e3 * kp[2] + e4 * kp[3] + e5 * kp[4] + e6 * kp[5] + e7 * kp[6]);
    return {un, pn, eu, ep, true};
}

// Ψ1 is controlled in relative terms only: in Case1 it decays to 0 and its
// exponential rate must stay resolved far below any absolute tolerance.
double err_norm(const Step& s, double u, double p, double tol) {
    double su = tol * std::max({std::fabs(u), std::fabs(s.u), 1e-300});
    double sp = tol + tol * std::max(std::fabs(p), std::fabs(s.p));
    return std::max(std::fabs(s.err_u) / su, std::fabs(s.err_p) / sp);
}

struct Trajectory {
    std::vector<double> t, u, p;
    bool hit_target = false;
    bool stalled = false;
};

// Adaptive (or fixed-step) integration from (t0, u0, p0) to t1, stopping early
// when u reaches `target`. Accepted nodes are kept when recording.
Trajectory integrate_field(const Field& f, double t0, double u0, double p0, double t1,
                     const SolverOptions& opt, double target, bool record) {
    Trajectory tr;
    if (record) {
        tr.t.push_back(t0);
        tr.u.push_back(u0);
        tr.p.push_back(p0);
    }
    double t = t0, u = u0, p = p0;
    bool fixed = opt.fixed_step > 0.0;
    double h = fixed ? opt.fixed_step : std::min(opt.max_step, 0.01);
    auto push = [&]() {
        if (record) {
            tr.t.push_back(t);
            tr.u.push_back(u);
            tr.p.push_back(p);
        }
    };
    while (t < t1) {
        double hs = std::min(h, t1 - t);
        if (!fixed) hs = std::min(hs, opt.max_step);
        if (t1 - t - hs < 1e-12 * std::max(1.0, t1)) hs = t1 - t;
        Step s = dp_step(f, u, p, hs);
        if (!s.ok) {
            h = hs / 2.0;
            if (h < 1e-14 * std::max(1.0, t)) {
                tr.stalled = true;
                break;
            }
            continue;
        }
        double en = fixed ? 0.0 : err_norm(s, u, p, opt.tol);
        if (en > 1.0) {
            h = hs * std::max(0.2, 0.9 * std::pow(en, -0.2));
            if (h < 1e-14 * std::max(1.0, t)) {
                tr.stalled = true;
                break;
            }
            continue;
        }
        if (s.u >= target) {
            // Shrink the step so that it lands on the target level.
            double lo = 0.0, hi = hs;
            Step best = s;
            for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, t); ++i) {
                double mid = 0.5 * (lo + hi);
                Step sm = dp_step(f, u, p, mid);
                if (sm.ok && sm.u < target) {
                    lo = mid;
                } else {
                    hi = mid;
                    if (sm.ok) best = sm;
                }
            }
            t += hi;
            u = best.u;
            p = best.p;
            push();
            tr.hit_target = true;
            break;
        }
        t += hs;
        u = s.u;
        p = s.p;
        push();
        if (!fixed) {
            double fac = en == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(en, -0.2)));
            h = hs * fac;
        }
    }
    if (!record) {
        tr.t.push_back(t);
        tr.u.push_back(u);
        tr.p.push_back(p);
    }
    return tr;
}

double truncation_level(const Field& f, double guard) {
    if (std::isinf(f.upper)) return 1.0 - 2.0 * std::log(guard);
    return f.upper * (1.0 - guard);
}

}  // namespace

LevyExponents levy_exponents(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                             double u) {
    if (!(u + mc.theta2 < m.theta_max())) {
        throw DomainError("levy_exponents: u + theta2 must be < Theta_L");
    }
    Field f = make_field(m, fp, mc);
    return {f.lam0(u), f.lam1(u)};
}

double u_star(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
              double delta) {
    if (!(mc.beta2 > 0.0 && mc.beta2 < 1.0)) {
        throw DomainError("u_star: beta2 must lie in (0,1)");
    }
    validate_geom(m, mc, delta);
    Field f = make_field(m, fp, mc);
    auto g = [&](double u) { return f.lam1(u); };

    double lo = 0.0;
    double hi = 0.0;
    if (std::isinf(f.upper)) {
        hi = 1.0;
        for (int i = 0; i < 200 && !(g(hi) > 0.0); ++i) {
            lo = hi;
            hi *= 2.0;
        }
    } else {
        for (int k = 1; k <= 60; ++k) {
            double cand = f.upper * (1.0 - std::ldexp(1.0, -k));
            if (g(cand) > 0.0) {
                hi = cand;
                break;
            }
            lo = cand;
        }
    }
    if (!(g(hi) > 0.0)) throw DomainError("u_star: no sign change of Lambda1 found");
    if (lo == 0.0) {
        lo = hi / 2.0;
        for (int i = 0; i < 1000 && !(g(lo) < 0.0); ++i) lo /= 2.0;
        if (!(g(lo) < 0.0)) throw DomainError("u_star: root too close to 0");
    }
    return bisect(g, lo, hi, 1e-14);
}

Classification classify(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                        double delta) {
    validate_geom(m, mc, delta);
    double th2 = mc.theta2;
    double k2 = cumulant(m, th2, 2);
    double bound = k2 / (cumulant(m, 1.0 + th2, 1) - cumulant(m, th2, 1));
    Classification c{};
    c.beta_bound = bound;
    if (mc.beta2 == 0.0) {
        c.case_tag = Case::Case1;
        c.u_star = m.theta_max() - th2;
        return c;
    }
    if (mc.beta2 == 1.0) {
        c.case_tag = Case::Case3;
        c.u_star = 0.0;
        return c;
    }
    c.u_star = u_star(m, fp, mc, delta);
    if (std::fabs(c.u_star - 1.0) < 1e-10) {
        c.case_tag = Case::Case2;
    } else {
        c.case_tag = c.u_star > 1.0 ? Case::Case1 : Case::Case3;
    }
    return c;
}

double blow_up_time(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                    double delta) {
    Classification c = classify(m, fp, mc, delta);
    if (c.case_tag != Case::Case3) {
        throw WrongCase(std::string("blow_up_time: defined for Case3 only, got ") +
                        to_string(c.case_tag));
    }
    Field f = make_field(m, fp, mc);
    if (std::isinf(f.upper)) {
        // v = e^{-u} maps u in (1, ∞) to v in (0, 1/e).
        auto g = [&](double v) {
            double l = f.lam1(-std::log(v));
            return std::isinf(l) ? 0.0 : 1.0 / (v * l);
        };
        return integrate_singular(g, 0.0, std::exp(-1.0), 1e-13);
    }
    // 1/Λ1 vanishes at the finite boundary; tanh-sinh absorbs the algebraic endpoint behavior.
    auto g = [&](double u) {
        double l = f.lam1(u);
        return std::isfinite(l) ? 1.0 / l : 0.0;
    };
    return integrate_singular(g, 1.0, f.upper, 1e-13);
}

double esscher_jump_integral(const LevyModel& m, double alpha_y, double theta, double tau) {
    if (tau == 0.0) return 0.0;
    auto g = [&](double s) { return cumulant_increment(m, theta, std::exp(-alpha_y * s), 0); };
    return integrate(g, 0.0, tau, 1e-13);
}

double esscher_psi0(const LevyModel& m, double mu_y, double alpha_y, double theta, double tau) {
    return mu_y * decay_integral(alpha_y, tau) + esscher_jump_integral(m, alpha_y, theta, tau);
}

bool RiccatiSolution::covers(double tau) const {
    if (tau < 0.0) return false;
    if (case_tag == Case::Case3) return tau <= truncation_time;
    return true;
}

std::pair<double, double> RiccatiSolution::at(double tau) const {
    if (!(tau >= 0.0)) throw DomainError("RiccatiSolution::at: tau must be >= 0");
    if (case_tag == Case::Case3 && tau > truncation_time) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "Riccati solution does not exist beyond t=%.6g (requested %.6g)",
                      truncation_time, tau);
        throw BlowUp(buf, truncation_time);
    }
    if (closed_form) {
        if (case_tag == Case::Case2) {
            double rate = mu_y_ + cumulant(model_, 1.0 + theta2_, 0) - cumulant(model_, theta2_, 0);
            return {1.0, rate * tau};
        }
        return {std::exp(-alpha_y_ * tau), esscher_psi0(model_, mu_y_, alpha_y_, theta2_, tau)};
    }
    auto it = std::upper_bound(t_grid.begin(), t_grid.end(), tau);
    std::size_t i = static_cast<std::size_t>(it - t_grid.begin()) - 1;
    if (t_grid[i] == tau) return {psi1[i], psi0[i]};
    Field f(model_, mu_y_, alpha_y_, theta2_, beta2_);
    SolverOptions opt;
    opt.tol = tol_;
    Trajectory tr = integrate_field(f, t_grid[i], psi1[i], psi0[i], tau, opt, kInf, false);
    return {tr.u.back(), tr.p.back()};
}

RiccatiSolution solve_riccati(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc,
                              double horizon, const SolverOptions& opt) {
    if (!(horizon > 0.0)) throw DomainError("solve_riccati: horizon must be > 0");
    Classification c = classify(m, fp, mc, opt.delta);
    RiccatiSolution sol(m);
    sol.case_tag = c.case_tag;
    sol.u_star = c.u_star;
    sol.beta_bound = c.beta_bound;
    sol.horizon = horizon;
    sol.theta2_ = mc.theta2;
    sol.beta2_ = mc.beta2;
    sol.mu_y_ = fp.mu_y;
    sol.alpha_y_ = fp.alpha_y;
    sol.tol_ = opt.tol;

    bool closed = c.case_tag == Case::Case2 || (mc.beta2 == 0.0 && !opt.force_numeric);
    if (closed) {
        sol.closed_form = true;
        sol.truncation_time = horizon;
        int n = std::max(2, static_cast<int>(std::ceil(horizon / opt.max_step)) + 1);
        sol.t_grid = linspace(0.0, horizon, n);
        for (double t : sol.t_grid) {
            auto [a, b] = sol.at(t);
            sol.psi1.push_back(a);
            sol.psi0.push_back(b);
        }
        return sol;
    }

    Field f = make_field(m, fp, mc);
    double target = c.case_tag == Case::Case3 ? truncation_level(f, opt.guard) : kInf;
    Trajectory tr = integrate_field(f, 0.0, 1.0, 0.0, horizon, opt, target, true);
    sol.t_grid = std::move(tr.t);
    sol.psi1 = std::move(tr.u);
    sol.psi0 = std::move(tr.p);
    sol.truncation_time = sol.t_grid.back();

    if (c.case_tag == Case::Case3) {
        sol.t_infinity = blow_up_time(m, fp, mc, opt.delta);
        if (tr.hit_target || tr.stalled) {
            sol.outcome = Outcome::BlowUp;
            double u_end = sol.psi1.back();
            double ratio = f.lam0(u_end) / f.lam1(u_end);
            double p_end = sol.psi0.back();
            if (std::isinf(f.upper)) {
                sol.divergence_suspected = ratio > 1e-8;
            } else {
                sol.divergence_suspected =
                    ratio * (f.upper - u_end) > 1e-6 * std::max(1.0, std::fabs(p_end));
            }
        }
    } else if (tr.stalled) {
        throw DomainError("solve_riccati: integrator stalled before the horizon");
    }
    return sol;
}

}  // namespace ouprem::riccati
