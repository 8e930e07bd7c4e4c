#include "ouprem/scenario.hpp"

#include "ouprem/errors.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

namespace ouprem {

using nlohmann::json;

namespace {

double num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw DomainError(std::string("scenario: '") + key + "' must be a number");
    return j.at(key).get<double>();
}

LevyModel parse_levy(const json& j) {
    std::string type = j.value("type", "cpexp");
    if (type == "dirac") return LevyModel::dirac(num(j, "a", 1.0));
    if (type == "cpexp") return LevyModel::cpexp(num(j, "c", 0.4), num(j, "lambda", 2.0));
    if (type == "tempered_stable") {
        return LevyModel::tempered_stable(num(j, "c", 1.0), num(j, "lambda", 3.0),
                                          num(j, "alpha", 0.5));
    }
    throw DomainError("scenario: unknown levy type '" + type + "'");
}

json levy_json(const LevyModel& m) {
    switch (m.kind()) {
        case LevyModel::Kind::Dirac: return {{"type", "dirac"}, {"a", m.a()}};
        case LevyModel::Kind::CompoundPoissonExp:
            return {{"type", "cpexp"}, {"c", m.c()}, {"lambda", m.lambda()}};
        case LevyModel::Kind::TemperedStable:
            return {{"type", "tempered_stable"},
                    {"c", m.c()},
                    {"lambda", m.lambda()},
                    {"alpha", m.alpha()}};
    }
    return {};
}

Seasonality parse_seasonality(const json& j, double default_level) {
    std::string kind = j.value("kind", "constant");
    if (kind == "constant") return Seasonality::constant(num(j, "level", default_level));
    if (kind == "trig") {
        return Seasonality::trig(num(j, "level", default_level), num(j, "amplitude", 0.0),
                                 num(j, "period_days", 365.0), num(j, "phase", 0.0));
    }
    throw DomainError("scenario: unknown seasonality kind '" + kind + "'");
}

std::pair<double, double> pair_of(const json& j, const char* key) {
    if (!j.contains(key)) return {0.0, 0.0};
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != 2) {
        throw DomainError(std::string("scenario: measure.") + key + " must be a 2-element array");
    }
    return {a.at(0).get<double>(), a.at(1).get<double>()};
}

}  // namespace

void Scenario::validate() const {
    if (model_kind != "arith" && model_kind != "geom") {
        throw DomainError("scenario: model must be 'arith' or 'geom'");
    }
    factors.validate();
    if (!(state.y >= 0.0)) throw DomainError("scenario: state.y must be >= 0");
    if (grid.n_points < 2) throw DomainError("scenario: grid.n_points must be >= 2");
    if (!(grid.tau_min >= 0.0 && grid.tau_max > grid.tau_min)) {
        throw DomainError("scenario: grid requires 0 <= tau_min < tau_max");
    }
    if (model_kind == "arith") {
        validate_arith(levy, measure);
    } else {
        validate_geom(levy, measure);
        if (!(factors.seasonality.min_value() > 0.0)) {
            throw DomainError("scenario: geometric seasonality must stay > 0");
        }
    }
}

Scenario parse_scenario(const json& j) {
    Scenario s;
    s.id = j.value("id", "");
    s.model_kind = j.value("model", "arith");
    if (j.contains("levy")) s.levy = parse_levy(j.at("levy"));

    const json st = j.value("state", json::object());
    s.state.t = num(st, "t", 0.0);
    s.state.x = num(st, "x", 0.0);
    s.state.y = num(st, "y", 0.0);

    const json f = j.value("factors", json::object());
    FactorParams& fp = s.factors;
    fp.mu_x = num(f, "mu_x", 0.0);
    fp.alpha_x = num(f, "alpha_x", 0.099);
    fp.sigma_x = num(f, "sigma_x", 0.0158);
    fp.x0 = num(f, "x0", s.state.x);
    fp.mu_y = num(f, "mu_y", 0.0);
    fp.alpha_y = num(f, "alpha_y", 0.3466);
    fp.y0 = num(f, "y0", s.state.y);
    double default_level = s.model_kind == "geom" ? 1.0 : 0.0;
    fp.seasonality = f.contains("seasonality") ? parse_seasonality(f.at("seasonality"), default_level)
                                               : Seasonality::constant(default_level);

    if (j.contains("measure")) {
        auto [t1, t2] = pair_of(j.at("measure"), "theta");
        auto [b1, b2] = pair_of(j.at("measure"), "beta");
        s.measure = {t1, t2, b1, b2};
    }

    const json g = j.value("grid", json::object());
    s.grid.tau_min = num(g, "tau_min", 0.0);
    s.grid.tau_max = num(g, "tau_max", 360.0);
    s.grid.n_points = static_cast<int>(num(g, "n_points", 361));

    const json o = j.value("outputs", json::object());
    s.outputs.csv_path = o.value("csv_path", "");
    s.outputs.svg_path = o.value("svg_path", "");

    const json m = j.value("mc", json::object());
    s.mc.paths = static_cast<std::size_t>(num(m, "paths", 100000));
    s.mc.seed = m.contains("seed") ? m.at("seed").get<std::uint64_t>() : s.mc.seed;
    s.mc.dt = num(m, "dt", 1.0);
    s.mc.maturity = num(m, "maturity", 7.0);

    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("scenario: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DomainError("scenario: invalid JSON in '" + path + "': " + e.what());
    }
    return parse_scenario(j);
}

json to_json(const Scenario& s) {
    const FactorParams& f = s.factors;
    json season;
    if (f.seasonality.kind == Seasonality::Kind::Constant) {
        season = {{"kind", "constant"}, {"level", f.seasonality.level}};
    } else {
        season = {{"kind", "trig"},
                  {"level", f.seasonality.level},
                  {"amplitude", f.seasonality.amplitude},
                  {"period_days", f.seasonality.period_days},
                  {"phase", f.seasonality.phase}};
    }
    return {
        {"id", s.id},
        {"model", s.model_kind},
        {"levy", levy_json(s.levy)},
        {"factors",
         {{"mu_x", f.mu_x},
          {"alpha_x", f.alpha_x},
          {"sigma_x", f.sigma_x},
          {"x0", f.x0},
          {"mu_y", f.mu_y},
          {"alpha_y", f.alpha_y},
          {"y0", f.y0},
          {"seasonality", season}}},
        {"measure",
         {{"theta", {s.measure.theta1, s.measure.theta2}},
          {"beta", {s.measure.beta1, s.measure.beta2}}}},
        {"state", {{"t", s.state.t}, {"x", s.state.x}, {"y", s.state.y}}},
        {"grid",
         {{"tau_min", s.grid.tau_min}, {"tau_max", s.grid.tau_max}, {"n_points", s.grid.n_points}}},
        {"outputs", {{"csv_path", s.outputs.csv_path}, {"svg_path", s.outputs.svg_path}}},
        {"mc", {{"paths", s.mc.paths}, {"seed", s.mc.seed}, {"dt", s.mc.dt}, {"maturity", s.mc.maturity}}},
    };
}

Scenario figure_base(const std::string& model_kind) {
    Scenario s;
    s.model_kind = model_kind;
    s.levy = LevyModel::cpexp(0.4, 2.0);
    s.factors = FactorParams{};
    s.factors.alpha_x = 0.099;
    s.factors.alpha_y = 0.3466;
    s.factors.sigma_x = 0.0158;
    s.factors.seasonality = Seasonality::constant(model_kind == "geom" ? 1.0 : 0.0);
    return s;
}

namespace {

struct FigureSpec {
    const char* model;
    double theta1, theta2, beta1, beta2, x, y;
};

const std::map<std::string, FigureSpec>& figure_table() {
    static const std::map<std::string, FigureSpec> table = {
        {"beta0-1a", {"arith", 0.075, 0.0, 0.0, 0.0, 0.0, 0.0}},
        {"beta0-1b", {"arith", -0.075, 0.0, 0.0, 0.0, 0.0, 0.0}},
        {"beta0-1c", {"arith", 0.0, 0.75, 0.0, 0.0, 0.0, 0.0}},
        {"beta0-1d", {"arith", 0.0, -0.75, 0.0, 0.0, 0.0, 0.0}},
        {"beta0-2a", {"arith", -0.1, 0.95, 0.0, 0.0, 0.0, 0.0}},
        {"beta0-2b", {"arith", 0.02, -0.95, 0.0, 0.0, 0.0, 0.0}},
        {"beta0-2c", {"arith", -0.05, 0.95, 0.0, 0.0, 0.0, 0.0}},
        {"beta0-2d", {"arith", -0.075, 0.15, 0.0, 0.0, 0.0, 0.0}},
        {"theta0-3a", {"arith", 0.0, 0.0, 0.25, 0.75, 2.5, 2.5}},
        {"theta0-3b", {"arith", 0.0, 0.0, 0.75, 0.0, -2.5, 2.5}},
        {"theta0-3c", {"arith", 0.0, 0.0, 0.75, 0.75, -2.5, 0.0}},
        {"theta0-3d", {"arith", 0.0, 0.0, 0.5, 0.5, -2.5, 2.5}},
        // X(t) does not enter when β1 = 0; 0 is used.
        {"mixed-4", {"arith", -0.5, 0.5, 0.0, 0.88, 0.0, 5.0}},
        {"geom-beta0-5a", {"geom", -0.3, 0.9, 0.0, 0.0, -0.5, 0.5}},
        {"geom-beta0-5b", {"geom", 0.03, -0.9, 0.0, 0.0, 0.5, 0.5}},
        {"geom-beta0-5c", {"geom", -0.09, 0.9, 0.0, 0.0, -0.5, 0.5}},
        {"geom-beta0-5d", {"geom", -0.2, 0.1, 0.0, 0.0, 0.5, 0.5}},
        {"geom-theta0-6a", {"geom", 0.0, 0.0, 0.4, 0.2, 1.0, 0.5}},
        {"geom-theta0-6b", {"geom", 0.0, 0.0, 0.75, 0.0, -2.5, 0.5}},
        {"geom-theta0-6c", {"geom", 0.0, 0.0, 0.75, 0.3, -2.5, 0.0}},
        {"geom-theta0-6d", {"geom", 0.0, 0.0, 0.5, 0.2, -2.5, 2.5}},
        {"geom-mixed-7", {"geom", -0.1, 0.2, 0.0, 0.2, 1.0, 1.0}},
    };
    return table;
}

}  // namespace

std::vector<std::string> figure_ids() {
    std::vector<std::string> ids;
    for (const auto& [k, v] : figure_table()) ids.push_back(k);
    return ids;
}

Scenario figure_scenario(const std::string& id) {
    auto it = figure_table().find(id);
    if (it == figure_table().end()) throw std::out_of_range("unknown figure id '" + id + "'");
    const FigureSpec& f = it->second;
    Scenario s = figure_base(f.model);
    s.id = id;
    s.measure = {f.theta1, f.theta2, f.beta1, f.beta2};
    s.state = {0.0, f.x, f.y};
    s.factors.x0 = f.x;
    s.factors.y0 = f.y;
    s.grid = Grid{0.0, 360.0, 361};
    s.validate();
    return s;
}

}  // namespace ouprem
