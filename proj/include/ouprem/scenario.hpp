#pragma once

#include "ouprem/market.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ouprem {

struct Grid {
    double tau_min = 0.0;
    double tau_max = 360.0;
    int n_points = 361;

    std::vector<double> taus() const { return linspace(tau_min, tau_max, n_points); }
};

struct Outputs {
    std::string csv_path;
    std::string svg_path;
};

struct McSettings {
    std::size_t paths = 100000;
    std::uint64_t seed = 20240501;
    double dt = 1.0;
    double maturity = 7.0;
};

struct Scenario {
    std::string id;
    std::string model_kind = "arith";  // "arith" | "geom"
    LevyModel levy = LevyModel::cpexp(0.4, 2.0);
    FactorParams factors;
    MeasureChange measure;
    MarketState state;
    Grid grid;
    Outputs outputs;
    McSettings mc;

    /// Throws DomainError on invalid content.
    void validate() const;
};

/// Parses the scenario schema documented in README.md.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);
nlohmann::json to_json(const Scenario& s);

/// Parameter block shared by all figure setups: α_X = 0.099, α_Y = 0.3466, c = 0.4, λ = 2.
Scenario figure_base(const std::string& model_kind);

std::vector<std::string> figure_ids();

/// Built-in scenario for a figure id; throws std::out_of_range for unknown ids.
Scenario figure_scenario(const std::string& id);

}  // namespace ouprem
