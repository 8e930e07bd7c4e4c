#include "ouprem/errors.hpp"
#include "ouprem/scenario.hpp"

#include <doctest.h>

using namespace ouprem;
using nlohmann::json;

TEST_CASE("parse a full scenario") {
    json j = json::parse(R"({
      "id": "s1", "model": "arith",
      "levy": {"type": "tempered_stable", "c": 1.0, "lambda": 3.0, "alpha": 0.5},
      "factors": {"mu_x": 0.01, "alpha_x": 0.1, "sigma_x": 0.02, "alpha_y": 0.3,
                  "seasonality": {"kind": "trig", "level": 40, "amplitude": 4, "period_days": 365, "phase": 10}},
      "measure": {"theta": [-0.1, 0.9], "beta": [0.2, 0.3]},
      "state": {"t": 5, "x": 1.5, "y": 0.25},
      "grid": {"tau_min": 1, "tau_max": 90, "n_points": 90},
      "outputs": {"csv_path": "out.csv", "svg_path": "out.svg"},
      "mc": {"paths": 1000, "seed": 7, "dt": 0.5, "maturity": 14}
    })");
    Scenario s = parse_scenario(j);
    CHECK(s.levy.kind() == LevyModel::Kind::TemperedStable);
    CHECK(s.levy.alpha() == 0.5);
    CHECK(s.factors.mu_x == 0.01);
    CHECK(s.factors.x0 == 1.5);
    CHECK(s.factors.y0 == 0.25);
    CHECK(s.factors.seasonality(10.0) == doctest::Approx(44.0));
    CHECK(s.measure.theta2 == 0.9);
    CHECK(s.measure.beta1 == 0.2);
    CHECK(s.grid.taus().size() == 90);
    CHECK(s.outputs.svg_path == "out.svg");
    CHECK(s.mc.seed == 7);
    CHECK(s.mc.maturity == 14);

    Scenario back = parse_scenario(to_json(s));
    CHECK(to_json(back) == to_json(s));
}

TEST_CASE("defaults and validation") {
    Scenario s = parse_scenario(json::parse(R"({"model": "geom"})"));
    CHECK(s.levy.kind() == LevyModel::Kind::CompoundPoissonExp);
    CHECK(s.factors.seasonality.level == 1.0);
    CHECK(s.grid.n_points == 361);

    CHECK_THROWS_AS(parse_scenario(json::parse(R"({"model": "log"})")), DomainError);
    CHECK_THROWS_AS(parse_scenario(json::parse(R"({"grid": {"n_points": 1}})")), DomainError);
    CHECK_THROWS_AS(parse_scenario(json::parse(R"({"levy": {"type": "gamma"}})")), DomainError);
    CHECK_THROWS_AS(parse_scenario(json::parse(R"({"state": {"y": -1}})")), DomainError);
    CHECK_THROWS_AS(parse_scenario(json::parse(R"({"measure": {"theta": [0, 1.0]}})")), DomainError);
    CHECK_THROWS_AS(parse_scenario(json::parse(R"({"model": "geom", "measure": {"theta": [0, 1.2]}})")),
                    DomainError);
    CHECK_THROWS_AS(parse_scenario(json::parse(
                        R"({"model": "geom", "factors": {"seasonality": {"kind": "constant", "level": 0}}})")),
                    DomainError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), DomainError);
}

TEST_CASE("built-in figure scenarios share one parameter block") {
    auto ids = figure_ids();
    CHECK(ids.size() == 22);
    for (const auto& id : ids) {
        Scenario s = figure_scenario(id);
        INFO(id);
        CHECK(s.levy.kind() == LevyModel::Kind::CompoundPoissonExp);
        CHECK(s.levy.c() == 0.4);
        CHECK(s.levy.lambda() == 2.0);
        CHECK(s.factors.alpha_x == 0.099);
        CHECK(s.factors.alpha_y == 0.3466);
        CHECK(s.factors.sigma_x == 0.0158);
        CHECK(s.grid.tau_max == 360.0);
    }
    Scenario f = figure_scenario("beta0-2a");
    CHECK(f.measure.theta1 == -0.1);
    CHECK(f.measure.theta2 == 0.95);
    Scenario g = figure_scenario("geom-theta0-6c");
    CHECK(g.model_kind == "geom");
    CHECK(g.measure.beta1 == 0.75);
    CHECK(g.measure.beta2 == 0.3);
    CHECK(g.state.x == -2.5);
    CHECK(g.state.y == 0.0);
    CHECK_THROWS_AS(figure_scenario("nope"), std::out_of_range);
}
