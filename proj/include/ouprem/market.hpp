#pragma once

#include "ouprem/measure_change.hpp"

#include <string>
#include <vector>

namespace ouprem {

/// Factor values observed at time t (days).
struct MarketState {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

enum class Method { ClosedForm, Ode, MonteCarlo };

std::string to_string(Method m);

struct CurveMeta {
    std::string model_kind;  // "arith" | "geom"
    std::string levy;
    MeasureChange measure;
    Method method = Method::ClosedForm;
};

/// Sampled curve over times to maturity tau = T - t.
struct CurveResult {
    std::vector<double> taus;
    std::vector<double> values;
    std::vector<double> standard_errors;  // empty unless Monte Carlo
    CurveMeta meta;
};

/// n points evenly spaced on [lo, hi].
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace ouprem
