#include "svg.hpp"

#include "ouprem/arithmetic.hpp"
#include "ouprem/errors.hpp"
#include "ouprem/geometric.hpp"
#include "ouprem/montecarlo.hpp"
#include "ouprem/riccati.hpp"
#include "ouprem/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace ouprem;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitBlowUp = 3;
constexpr int kExitMcMismatch = 4;

const double kUnset = std::nan("");

bool is_set(double v) { return !std::isnan(v); }

struct CommonOpts {
    std::string scenario_path;
    std::string model;
    std::string levy_type;
    double c = kUnset, lambda = kUnset, a = kUnset, alpha = kUnset;
    double theta1 = kUnset, theta2 = kUnset, beta1 = kUnset, beta2 = kUnset;
    double x = kUnset, y = kUnset, t = kUnset;
    std::string csv_path;
    std::string svg_path;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--scenario", o.scenario_path, "Scenario JSON file");
    sub->add_option("--model", o.model, "arith | geom (overrides the scenario)");
    sub->add_option("--levy", o.levy_type, "cpexp | dirac | tempered_stable");
    sub->add_option("--c", o.c, "Levy intensity scale c");
    sub->add_option("--lambda", o.lambda, "Levy decay rate lambda");
    sub->add_option("--a", o.a, "Dirac jump size");
    sub->add_option("--alpha", o.alpha, "Tempered-stable index");
    sub->add_option("--theta1", o.theta1);
    sub->add_option("--theta2", o.theta2);
    sub->add_option("--beta1", o.beta1);
    sub->add_option("--beta2", o.beta2);
    sub->add_option("--x", o.x, "X(t)");
    sub->add_option("--y", o.y, "Y(t)");
    sub->add_option("--t", o.t, "Current time t (days)");
    sub->add_option("--csv", o.csv_path, "CSV output path (default: scenario, else stdout)");
    sub->add_option("--svg", o.svg_path, "Optional SVG plot path");
}

LevyModel levy_from(const CommonOpts& o, const LevyModel& base) {
    std::string type = o.levy_type;
    if (type.empty()) {
        if (!is_set(o.c) && !is_set(o.lambda) && !is_set(o.a) && !is_set(o.alpha)) return base;
        switch (base.kind()) {
            case LevyModel::Kind::Dirac: type = "dirac"; break;
            case LevyModel::Kind::CompoundPoissonExp: type = "cpexp"; break;
            case LevyModel::Kind::TemperedStable: type = "tempered_stable"; break;
        }
    }
    auto pick = [](double v, double fallback) { return is_set(v) ? v : fallback; };
    if (type == "dirac") return LevyModel::dirac(pick(o.a, base.kind() == LevyModel::Kind::Dirac ? base.a() : 1.0));
    if (type == "cpexp") {
        bool same = base.kind() == LevyModel::Kind::CompoundPoissonExp;
        return LevyModel::cpexp(pick(o.c, same ? base.c() : 0.4), pick(o.lambda, same ? base.lambda() : 2.0));
    }
    if (type == "tempered_stable") {
        bool same = base.kind() == LevyModel::Kind::TemperedStable;
        return LevyModel::tempered_stable(pick(o.c, same ? base.c() : 1.0),
                                          pick(o.lambda, same ? base.lambda() : 3.0),
                                          pick(o.alpha, same ? base.alpha() : 0.5));
    }
    throw DomainError("unknown levy type '" + type + "' (expected cpexp, dirac or tempered_stable)");
}

Scenario apply_overrides(Scenario s, const CommonOpts& o) {
    if (!o.model.empty() && o.model != s.model_kind) {
        s.model_kind = o.model;
        if (s.factors.seasonality.kind == Seasonality::Kind::Constant) {
            s.factors.seasonality.level = o.model == "geom" ? 1.0 : 0.0;
        }
    }
    s.levy = levy_from(o, s.levy);
    if (is_set(o.theta1)) s.measure.theta1 = o.theta1;
    if (is_set(o.theta2)) s.measure.theta2 = o.theta2;
    if (is_set(o.beta1)) s.measure.beta1 = o.beta1;
    if (is_set(o.beta2)) s.measure.beta2 = o.beta2;
    if (is_set(o.t)) s.state.t = o.t;
    if (is_set(o.x)) s.state.x = s.factors.x0 = o.x;
    if (is_set(o.y)) s.state.y = s.factors.y0 = o.y;
    if (!o.csv_path.empty()) s.outputs.csv_path = o.csv_path;
    if (!o.svg_path.empty()) s.outputs.svg_path = o.svg_path;
    s.validate();
    return s;
}

Scenario resolve(const CommonOpts& o) {
    Scenario base = o.scenario_path.empty() ? figure_base(o.model.empty() ? "arith" : o.model)
                                            : load_scenario(o.scenario_path);
    return apply_overrides(base, o);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string header(const std::string& command, const Scenario& s, const std::string& method) {
    std::ostringstream o;
    o << "# ouprem-csv v1 command=" << command << " model=" << s.model_kind
      << " levy=" << s.levy.name() << " theta=(" << fmt(s.measure.theta1) << ','
      << fmt(s.measure.theta2) << ") beta=(" << fmt(s.measure.beta1) << ','
      << fmt(s.measure.beta2) << ") state=(t=" << fmt(s.state.t) << ",x=" << fmt(s.state.x)
      << ",y=" << fmt(s.state.y) << ") method=" << method;
    if (!s.id.empty()) o << " id=" << s.id;
    o << '\n';
    return o.str();
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
    std::cerr << "wrote " << path << '\n';
}

std::string classification_line(const riccati::Classification& c) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s, u*=%.6f, bound=%.6f", riccati::to_string(c.case_tag),
                  c.u_star, c.beta_bound);
    return buf;
}

std::string case3_report(const Scenario& s) {
    auto cl = riccati::classify(s.levy, s.factors, s.measure);
    std::string r = classification_line(cl);
    if (cl.case_tag == riccati::Case::Case3) {
        r += ", t_inf=" + fmt(riccati::blow_up_time(s.levy, s.factors, s.measure));
    }
    return r;
}

// ---- commands -------------------------------------------------------------

int cmd_cumulant(const CommonOpts& o, const std::vector<double>& thetas, int order) {
    Scenario s = resolve(o);
    std::ostringstream out;
    out << "# ouprem-csv v1 command=cumulant levy=" << s.levy.name() << " order=" << order << '\n';
    out << "theta,value\n";
    for (double th : thetas) out << fmt(th) << ',' << fmt(cumulant(s.levy, th, order)) << '\n';
    emit(s.outputs.csv_path, out.str());
    return 0;
}

int cmd_classify(const CommonOpts& o) {
    Scenario s = resolve(o);
    std::cout << case3_report(s) << '\n';
    return 0;
}

int cmd_riccati(const CommonOpts& o, double horizon, int points, double step) {
    Scenario s = resolve(o);
    riccati::SolverOptions opt;
    opt.fixed_step = step;
    auto sol = riccati::solve_riccati(s.levy, s.factors, s.measure, horizon, opt);

    std::ostringstream out;
    out << header("riccati", s, sol.closed_form ? "closed_form" : "ode");
    out << "# case=" << riccati::to_string(sol.case_tag) << " u_star=" << fmt(sol.u_star)
        << " beta_bound=" << fmt(sol.beta_bound);
    if (sol.t_infinity) out << " t_inf=" << fmt(*sol.t_infinity);
    if (sol.outcome == riccati::Outcome::BlowUp) {
        out << " outcome=blow_up truncation=" << fmt(sol.truncation_time);
    }
    if (sol.divergence_suspected) out << " divergence_suspected=1";
    out << '\n' << "t,psi1,psi0\n";
    std::vector<double> ts, p1, p0;
    for (double t : linspace(0.0, horizon, points)) {
        if (!sol.covers(t)) break;
        auto [a, b] = sol.at(t);
        out << fmt(t) << ',' << fmt(a) << ',' << fmt(b) << '\n';
        ts.push_back(t);
        p1.push_back(a);
        p0.push_back(b);
    }
    emit(s.outputs.csv_path, out.str());
    if (!s.outputs.svg_path.empty()) {
        emit(s.outputs.svg_path,
             cli::render_svg("Riccati solution", "t (days)", ts, {{"psi1", p1}, {"psi0", p0}}));
    }
    if (sol.outcome == riccati::Outcome::BlowUp) {
        std::cerr << "blow-up: solution exists only up to t=" << fmt(sol.truncation_time)
                  << " (" << case3_report(s) << ")\n";
        return kExitBlowUp;
    }
    return 0;
}

int cmd_forward(const CommonOpts& o, double maturity) {
    Scenario s = resolve(o);
    double T = s.state.t + maturity;
    double f, e;
    if (s.model_kind == "arith") {
        f = arith::forward_price(s.levy, s.factors, s.measure, s.state, T);
        e = arith::expected_spot_P(s.levy, s.factors, s.state, T);
    } else {
        auto sol = riccati::solve_riccati(s.levy, s.factors, s.measure, maturity);
        f = geom::forward_price(s.levy, s.factors, s.measure, s.state, T, sol);
        e = geom::expected_spot_P(s.levy, s.factors, s.state, T);
    }
    std::cout << "forward=" << fmt(f) << '\n'
              << "expected_spot=" << fmt(e) << '\n'
              << "risk_premium=" << fmt(f - e) << '\n';
    return 0;
}

int write_curve(const std::string& command, const Scenario& s) {
    auto taus = s.grid.taus();
    std::ostringstream out;
    std::vector<double> rp;
    if (s.model_kind == "arith") {
        auto r = arith::curve(s.levy, s.factors, s.measure, s.state, taus, arith::CurveKind::RiskPremium);
        auto f = arith::curve(s.levy, s.factors, s.measure, s.state, taus, arith::CurveKind::Forward);
        auto e = arith::curve(s.levy, s.factors, s.measure, s.state, taus, arith::CurveKind::ExpectedSpot);
        out << header(command, s, "closed_form") << "tau_days,risk_premium,forward,expected_spot\n";
        for (std::size_t i = 0; i < taus.size(); ++i) {
            out << fmt(taus[i]) << ',' << fmt(r.values[i]) << ',' << fmt(f.values[i]) << ','
                << fmt(e.values[i]) << '\n';
        }
        rp = r.values;
    } else {
        geom::GeomCurve g;
        try {
            g = geom::curve(s.levy, s.factors, s.measure, s.state, taus);
        } catch (const BlowUp&) {
            throw BlowUp("refusing geometric premium curve: " + case3_report(s), 0.0);
        }
        out << header(command, s, s.measure.beta2 == 0.0 ? "closed_form" : "ode")
            << "tau_days,risk_premium,sigma,forward\n";
        for (std::size_t i = 0; i < taus.size(); ++i) {
            out << fmt(taus[i]) << ',' << fmt(g.risk_premium[i]) << ',' << fmt(g.sigma[i]) << ','
                << fmt(g.forward[i]) << '\n';
        }
        rp = g.risk_premium;
    }
    emit(s.outputs.csv_path, out.str());
    if (!s.outputs.svg_path.empty()) {
        std::string title = s.id.empty() ? std::string("risk premium") : "risk premium " + s.id;
        emit(s.outputs.svg_path, cli::render_svg(title, "tau (days)", taus, {{"R(t,t+tau)", rp}}));
    }
    return 0;
}

int cmd_premium_curve(const CommonOpts& o) { return write_curve("premium-curve", resolve(o)); }

int cmd_swap(const CommonOpts& o, double t1, double t2) {
    Scenario s = resolve(o);
    if (s.model_kind != "arith") throw DomainError("swap: only the arithmetic model is supported");
    double T1 = s.state.t + t1, T2 = s.state.t + t2;
    std::cout << "swap_price=" << fmt(arith::swap_price(s.levy, s.factors, s.measure, s.state, T1, T2)) << '\n'
              << "swap_risk_premium="
              << fmt(arith::swap_risk_premium(s.levy, s.factors, s.measure, s.state, T1, T2)) << '\n';
    return 0;
}

struct McOpts {
    std::string what = "forward";
    long long paths = -1;
    long long seed = -1;
    double maturity = kUnset;
    double dt = kUnset;
    unsigned threads = 0;
};

int cmd_mc_check(const CommonOpts& o, const McOpts& m) {
    Scenario s = resolve(o);
    mc::SimConfig cfg;
    cfg.n_paths = m.paths > 0 ? static_cast<std::size_t>(m.paths) : s.mc.paths;
    cfg.seed = s.mc.seed;
    if (const char* env = std::getenv("OUPREM_SEED")) cfg.seed = std::stoull(env);
    if (m.seed >= 0) cfg.seed = static_cast<std::uint64_t>(m.seed);
    cfg.dt = is_set(m.dt) ? m.dt : s.mc.dt;
    cfg.horizon = is_set(m.maturity) ? m.maturity : s.mc.maturity;
    cfg.threads = m.threads;
    cfg.validate();

    // Monte Carlo runs from the scenario state at t.
    FactorParams fp = s.factors;
    fp.x0 = s.state.x;
    fp.y0 = s.state.y;
    fp.seasonality.phase -= s.state.t;

    double worst = 0.0;
    std::cout << "seed=" << cfg.seed << " paths=" << cfg.n_paths << " T=" << fmt(cfg.horizon) << '\n';
    auto report = [&](const char* label, const mc::McEstimate& e, double target) {
        double z = e.z_score(target);
        worst = std::max(worst, std::fabs(z));
        std::printf("%s mean=%.10g se=%.3g target=%.10g z=%+.3f\n", label, e.mean, e.std_error,
                    target, z);
    };
    if (m.what == "density") {
        auto d = mc::density_martingale_check(s.levy, fp, s.measure, cfg);
        report("G", d.mean_G, 1.0);
        report("H", d.mean_H, 1.0);
    } else if (m.what == "forward") {
        double T = s.state.t + cfg.horizon;
        double target;
        mc::ModelKind kind;
        if (s.model_kind == "arith") {
            kind = mc::ModelKind::Arith;
            target = arith::forward_price(s.levy, s.factors, s.measure, s.state, T);
        } else {
            kind = mc::ModelKind::Geom;
            auto sol = riccati::solve_riccati(s.levy, s.factors, s.measure, cfg.horizon);
            target = geom::forward_price(s.levy, s.factors, s.measure, s.state, T, sol);
        }
        report("F", mc::mc_forward(kind, s.levy, fp, s.measure, cfg, cfg.horizon), target);
    } else {
        throw DomainError("mc-check: --what must be 'density' or 'forward'");
    }
    if (worst > 4.0) {
        std::cerr << "mc-check: |z| = " << worst << " exceeds 4\n";
        return kExitMcMismatch;
    }
    return 0;
}

int cmd_reproduce_fig(const std::string& id, const std::string& csv, const std::string& svg,
                      bool list) {
    if (list || id.empty()) {
        for (const auto& f : figure_ids()) {
            Scenario s = figure_scenario(f);
            std::printf("%-16s %s theta=(%g,%g) beta=(%g,%g) X=%g Y=%g\n", f.c_str(),
                        s.model_kind.c_str(), s.measure.theta1, s.measure.theta2,
                        s.measure.beta1, s.measure.beta2, s.state.x, s.state.y);
        }
        return 0;
    }
    Scenario s;
    try {
        s = figure_scenario(id);
    } catch (const std::out_of_range& e) {
        throw DomainError(std::string(e.what()) + " (see reproduce-fig --list)");
    }
    s.outputs.csv_path = csv;
    s.outputs.svg_path = svg;
    return write_curve("reproduce-fig", s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Risk premia in a two-factor OU spot model with Levy spikes"};
    app.require_subcommand(1);

    CommonOpts common;

    auto* cum = app.add_subcommand("cumulant", "Evaluate the cumulant function kappa^(order)(theta)");
    add_common(cum, common);
    std::vector<double> thetas{0.0};
    int order = 0;
    cum->add_option("--theta-values", thetas, "Points theta")->delimiter(',');
    cum->add_option("--order", order, "Derivative order 0..3");

    auto* cls = app.add_subcommand("classify", "Classify the Riccati system (Case1/2/3)");
    add_common(cls, common);

    auto* ric = app.add_subcommand("riccati", "Solve the generalized Riccati system");
    add_common(ric, common);
    double horizon = 360.0, step = 0.0;
    int points = 361;
    ric->add_option("--horizon", horizon, "Horizon (days)");
    ric->add_option("--points", points, "Output grid size");
    ric->add_option("--fixed-step", step, "Fixed step size (0: adaptive)");

    auto* fwd = app.add_subcommand("forward", "Forward price, P-expectation and premium");
    add_common(fwd, common);
    double maturity = 30.0;
    fwd->add_option("--tau", maturity, "Time to maturity T - t (days)");

    auto* pc = app.add_subcommand("premium-curve", "Risk premium term structure over the grid");
    add_common(pc, common);

    auto* sw = app.add_subcommand("swap", "Swap price and premium over a delivery window");
    add_common(sw, common);
    double t1 = 30.0, t2 = 60.0;
    sw->add_option("--start", t1, "Delivery start T1 - t (days)");
    sw->add_option("--end", t2, "Delivery end T2 - t (days)");

    auto* mck = app.add_subcommand("mc-check", "Monte Carlo checks of densities or forwards");
    add_common(mck, common);
    McOpts mco;
    mck->add_option("--what", mco.what, "density | forward");
    mck->add_option("--paths", mco.paths, "Number of paths");
    mck->add_option("--seed", mco.seed, "Seed (overrides OUPREM_SEED and the scenario)");
    mck->add_option("--tau", mco.maturity, "Horizon T - t (days)");
    mck->add_option("--dt", mco.dt, "Thinning step (days)");
    mck->add_option("--threads", mco.threads, "Worker threads (0: all cores)");

    auto* fig = app.add_subcommand("reproduce-fig", "Premium curve for a built-in figure setup");
    std::string fig_id, fig_csv, fig_svg;
    bool fig_list = false;
    fig->add_option("id", fig_id, "Figure id");
    fig->add_option("--csv", fig_csv, "CSV output path (default stdout)");
    fig->add_option("--svg", fig_svg, "Optional SVG plot path");
    fig->add_flag("--list", fig_list, "List the built-in figure ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (cum->parsed()) return cmd_cumulant(common, thetas, order);
        if (cls->parsed()) return cmd_classify(common);
        if (ric->parsed()) return cmd_riccati(common, horizon, points, step);
        if (fwd->parsed()) return cmd_forward(common, maturity);
        if (pc->parsed()) return cmd_premium_curve(common);
        if (sw->parsed()) return cmd_swap(common, t1, t2);
        if (mck->parsed()) return cmd_mc_check(common, mco);
        if (fig->parsed()) return cmd_reproduce_fig(fig_id, fig_csv, fig_svg, fig_list);
    } catch (const DomainError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const UnsupportedModel& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return kExitValidation;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const BlowUp& e) {
        std::cerr << "blow-up: " << e.what() << '\n';
        return kExitBlowUp;
    } catch (const WrongCase& e) {
        std::cerr << "wrong case: " << e.what() << '\n';
        return kExitBlowUp;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
