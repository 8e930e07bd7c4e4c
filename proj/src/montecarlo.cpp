#include "ouprem/montecarlo.hpp"

#include "ouprem/errors.hpp"
#include "ouprem/riccati.hpp"
#include "ouprem/rng.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace ouprem::mc {

namespace {

// Stream purposes; each gets a disjoint counter range per path.
constexpr std::uint32_t kStreamX = 1;
constexpr std::uint32_t kStreamY = 2;
constexpr std::uint32_t kStreamG = 3;

struct JumpLaw {
    bool dirac = false;
    double a = 0.0;     // Dirac size
    double rate = 0.0;  // exponential rate λ - θ
    double m0 = 0.0;    // state-free intensity ∫ e^{θz} l(dz)
    double bm1 = 0.0;   // state coefficient b ∫ z e^{θz} l(dz)

    double intensity(double y) const { return m0 + bm1 * y; }

    double draw_size(PathStream& rng, double y) const {
        if (dirac) return a;
        double p_exp = m0 / (m0 + bm1 * y);
        if (rng.uniform() < p_exp) return rng.exponential(rate);
        return rng.exponential(rate) + rng.exponential(rate);
    }
};

JumpLaw jump_law(const LevyModel& m, const FactorParams& fp, const MeasureChange& mc) {
    if (!m.finite_activity()) {
        throw UnsupportedModel("Monte Carlo supports finite-activity models only, got " +
                               m.name());
    }
    JumpLaw j;
    double th = mc.theta2;
    double b = spike_feedback(m, fp, mc);
    if (m.kind() == LevyModel::Kind::Dirac) {
        j.dirac = true;
        j.a = m.a();
        j.m0 = std::exp(th * m.a());
    } else {
        j.rate = m.lambda() - th;
        j.m0 = m.c() / j.rate;
    }
    j.bm1 = b * cumulant(m, th, 1);
    return j;
}

struct SpikeSim {
    JumpLaw law;
    double mu_y;
    double alpha_y;
    double y0;
    double horizon;
    double dt;
    // Density accumulation (P-simulation only).
    bool track_density = false;
    double dens_theta = 0.0;
    double dens_b = 0.0;
    double dens_k0 = 0.0;
    double dens_k1 = 0.0;
};

SpikePath run_spike_path(const SpikeSim& sim, PathStream& rng) {
    SpikePath out;
    const double a = sim.alpha_y;
    const double level = sim.mu_y / a;
    double t = 0.0;
    double y = sim.y0;
    double log_h = 0.0;
    out.min_y = y;

    auto advance = [&](double h) {
        double e = eta(a * h);
        out.int_y += level * h + (y - level) * h * e;
        y = level + (y - level) * std::exp(-a * h);
        out.min_y = std::min(out.min_y, y);
    };

    double dt = sim.dt;
    while (t < sim.horizon) {
        double t_start = t;
        double y_start = y;
        double int_start = out.int_y;
        double step_end = std::min(t + dt, sim.horizon);
        // Y relaxes monotonically to `level` between jumps, so this bounds the intensity.
        double lam_bar = sim.law.intensity(std::max(y, level));
        double w = lam_bar > 0.0 ? rng.exponential(lam_bar) : kInf;
        if (t + w >= step_end) {
            advance(step_end - t);
            t = step_end;
            dt = sim.dt;
            continue;
        }
        advance(w);
        t += w;
        double lam = sim.law.intensity(y);
        if (lam > lam_bar * (1.0 + 1e-12)) {
            t = t_start;
            y = y_start;
            out.int_y = int_start;
            dt /= 2.0;
            if (dt < 1e-12) throw EnvelopeViolation("thinning envelope violated");
            continue;
        }
        if (rng.uniform() * lam_bar > lam) continue;
        double z = sim.law.draw_size(rng, y);
        if (sim.track_density) {
            log_h += sim.dens_theta * z + std::log1p(sim.dens_b * z * y);
        }
        y += z;
        out.n_jumps += 1;
        out.sum_jumps += z;
    }
    out.y_end = y;
    out.mean_jump_size = out.n_jumps ? out.sum_jumps / out.n_jumps : 0.0;
    if (sim.track_density) {
        out.log_density_H =
            log_h - sim.dens_k0 * sim.horizon - sim.dens_b * sim.dens_k1 * out.int_y;
    }
    return out;
}

std::vector<SpikePath> run_spike(const SpikeSim& sim, const SimConfig& cfg) {
    std::vector<SpikePath> out(cfg.n_paths);
    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t i) {
        PathStream rng(cfg.seed, i, kStreamY);
        out[i] = run_spike_path(sim, rng);
    });
    return out;
}

std::vector<double> simulate_ou(double x0, double mu, double alpha, double sigma,
                                const SimConfig& cfg, double horizon) {
    double mean = x0 * std::exp(-alpha * horizon) + mu * decay_integral(alpha, horizon);
    double sd = sigma * std::sqrt(decay_integral(2.0 * alpha, horizon));
    std::vector<double> out(cfg.n_paths);
    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t i) {
        PathStream rng(cfg.seed, i, kStreamX);
        out[i] = mean + sd * rng.normal();
    });
    return out;
}

}  // namespace

void SimConfig::validate() const {
    if (n_paths < 1) throw DomainError("SimConfig: n_paths must be >= 1");
    if (!(dt > 0.0)) throw DomainError("SimConfig: dt must be > 0");
    if (!(horizon > 0.0)) throw DomainError("SimConfig: horizon must be > 0");
    if (!(density_dt > 0.0)) throw DomainError("SimConfig: density_dt must be > 0");
}

double McEstimate::z_score(double target) const {
    if (std_error == 0.0) return mean == target ? 0.0 : kInf;
    return (mean - target) / std_error;
}

McEstimate estimate(const std::vector<double>& v) {
    McEstimate e;
    e.n = v.size();
    if (v.empty()) return e;
    KahanSum s;
    for (double x : v) s.add(x);
    e.mean = s.value() / static_cast<double>(e.n);
    if (e.n < 2) return e;
    KahanSum ss;
    for (double x : v) ss.add((x - e.mean) * (x - e.mean));
    double var = ss.value() / static_cast<double>(e.n - 1);
    e.std_error = std::sqrt(var / static_cast<double>(e.n));
    return e;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
    unsigned hw = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    std::size_t workers = std::min<std::size_t>(hw, std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                std::size_t lo = w * chunk;
                std::size_t hi = std::min(n, lo + chunk);
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<double> simulate_X(const FactorParams& fp, const SimConfig& cfg) {
    cfg.validate();
    return simulate_ou(fp.x0, fp.mu_x, fp.alpha_x, fp.sigma_x, cfg, cfg.horizon);
}

std::vector<double> simulate_X(const FactorParams& fp, const FactorParamsQ& q,
                               const SimConfig& cfg) {
    cfg.validate();
    return simulate_ou(fp.x0, q.mu_x, q.alpha_x, q.sigma_x, cfg, cfg.horizon);
}

std::vector<SpikePath> simulate_Y_P(const LevyModel& m, const FactorParams& fp,
                                    const SimConfig& cfg,
                                    const std::optional<MeasureChange>& density_for) {
    cfg.validate();
    fp.validate();
    SpikeSim sim{jump_law(m, fp, MeasureChange{}), fp.mu_y, fp.alpha_y, fp.y0, cfg.horizon,
                 cfg.dt};
    if (density_for) {
        validate_arith(m, *density_for);
        sim.track_density = true;
        sim.dens_theta = density_for->theta2;
        sim.dens_b = spike_feedback(m, fp, *density_for);
        sim.dens_k0 = cumulant(m, density_for->theta2, 0);
        sim.dens_k1 = cumulant(m, density_for->theta2, 1);
    }
    return run_spike(sim, cfg);
}

std::vector<SpikePath> simulate_Y_Q(const LevyModel& m, const FactorParams& fp,
                                    const MeasureChange& mc, const SimConfig& cfg) {
    cfg.validate();
    fp.validate();
    validate_arith(m, mc);
    SpikeSim sim{jump_law(m, fp, mc), fp.mu_y, fp.alpha_y, fp.y0, cfg.horizon, cfg.dt};
    return run_spike(sim, cfg);
}

std::vector<double> terminal_values(const std::vector<SpikePath>& paths) {
    std::vector<double> v;
    v.reserve(paths.size());
    for (const auto& p : paths) v.push_back(p.y_end);
    return v;
}

DensityCheck density_martingale_check(const LevyModel& m, const FactorParams& fp,
                                      const MeasureChange& mc, const SimConfig& cfg) {
    cfg.validate();
    fp.validate();
    validate_arith(m, mc);
    DensityCheck out;

    // Brownian part: Euler scheme for X and for ∫ G dW. G is evaluated at the
    // left endpoint, so each step's factor has conditional mean exactly 1.
    const int n_steps = std::max(1, static_cast<int>(std::lround(cfg.horizon / cfg.density_dt)));
    const double h = cfg.horizon / n_steps;
    std::vector<double> dens(cfg.n_paths);
    std::vector<double> dens_half(cfg.richardson ? cfg.n_paths : 0);
    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t i) {
        PathStream rng(cfg.seed, i, kStreamG);
        double x = fp.x0;
        double lg = 0.0;
        if (!cfg.richardson) {
            double sq = std::sqrt(h);
            for (int k = 0; k < n_steps; ++k) {
                double dw = sq * rng.normal();
                double g = kernel_G(fp, mc, x);
                lg += g * dw - 0.5 * g * g * h;
                x += (fp.mu_x - fp.alpha_x * x) * h + fp.sigma_x * dw;
            }
            dens[i] = std::exp(lg);
            return;
        }
        double hh = h / 2.0;
        double sq = std::sqrt(hh);
        double xf = fp.x0;
        double lf = 0.0;
        for (int k = 0; k < n_steps; ++k) {
            double dw1 = sq * rng.normal();
            double dw2 = sq * rng.normal();
            for (double dw : {dw1, dw2}) {
                double g = kernel_G(fp, mc, xf);
                lf += g * dw - 0.5 * g * g * hh;
                xf += (fp.mu_x - fp.alpha_x * xf) * hh + fp.sigma_x * dw;
            }
            double dw = dw1 + dw2;
            double g = kernel_G(fp, mc, x);
            lg += g * dw - 0.5 * g * g * h;
            x += (fp.mu_x - fp.alpha_x * x) * h + fp.sigma_x * dw;
        }
        dens[i] = std::exp(lg);
        dens_half[i] = std::exp(lf);
    });
    out.mean_G = estimate(dens);
    if (cfg.richardson) {
        out.mean_G_half = estimate(dens_half);
        out.richardson_G = 2.0 * out.mean_G_half->mean - out.mean_G.mean;
    }

    auto paths = simulate_Y_P(m, fp, cfg, mc);
    std::vector<double> dh(paths.size());
    double k0 = cumulant(m, mc.theta2, 0);
    for (std::size_t i = 0; i < paths.size(); ++i) {
        dh[i] = std::exp(paths[i].log_density_H);
        if (mc.beta2 == 0.0) {
            double esscher = mc.theta2 * paths[i].sum_jumps - k0 * cfg.horizon;
            out.max_esscher_mismatch =
                std::max(out.max_esscher_mismatch, std::fabs(paths[i].log_density_H - esscher));
        }
    }
    out.mean_H = estimate(dh);
    for (double d : dens) out.all_positive = out.all_positive && d > 0.0;
    for (double d : dh) out.all_positive = out.all_positive && d > 0.0;
    return out;
}

McEstimate mc_forward(ModelKind kind, const LevyModel& m, const FactorParams& fp,
                      const MeasureChange& mc, const SimConfig& cfg, double T) {
    if (!(T > 0.0)) throw DomainError("mc_forward: T must be > 0");
    if (kind == ModelKind::Geom) {
        auto cls = riccati::classify(m, fp, mc);
        if (cls.case_tag == riccati::Case::Case3) {
            throw DomainError("mc_forward: geometric forward requires Case1/Case2 parameters");
        }
    } else {
        validate_arith(m, mc);
    }
    SimConfig c = cfg;
    c.horizon = T;
    FactorParamsQ q = q_dynamics(m, fp, mc);
    auto xs = simulate_X(fp, q, c);
    auto ys = simulate_Y_Q(m, fp, mc, c);
    double season = fp.seasonality(T);
    std::vector<double> v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double s = xs[i] + ys[i].y_end;
        v[i] = kind == ModelKind::Arith ? season + s : season * std::exp(s);
    }
    return estimate(v);
}

}  // namespace ouprem::mc
