#pragma once

#include "ouprem/measure_change.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace ouprem::mc {

struct SimConfig {
    std::size_t n_paths = 100000;
    double dt = 1.0;            // thinning envelope step (days)
    std::uint64_t seed = 20240501;
    double horizon = 30.0;      // days
    unsigned threads = 0;       // 0: hardware concurrency
    double density_dt = 0.01;   // Euler step for the Brownian density
    bool richardson = false;    // also run the Brownian density at density_dt / 2

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;

    double z_score(double target) const;
};

/// Mean and standard error (sample std / sqrt n), Kahan-summed in index order.
McEstimate estimate(const std::vector<double>& v);

/// Runs body(i) for i in [0, n) on `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// Exact OU terminal samples X(horizon) under P.
std::vector<double> simulate_X(const FactorParams& fp, const SimConfig& cfg);

/// Exact OU terminal samples under Q (drifted Brownian motion when β1 = 1).
std::vector<double> simulate_X(const FactorParams& fp, const FactorParamsQ& q,
                               const SimConfig& cfg);

struct SpikePath {
    double y_end = 0.0;
    std::uint32_t n_jumps = 0;
    double sum_jumps = 0.0;        // L(T) - L(0)
    double int_y = 0.0;            // ∫_0^T Y dt
    double min_y = 0.0;
    double log_density_H = 0.0;    // log E(H~)(T); only under P with a density target
    double mean_jump_size = 0.0;
};

/// Y under P: Poisson jump times, exponential/point sizes, exact decay between jumps.
/// When `density_for` is set, log E(H~)(T) for that measure change is accumulated.
std::vector<SpikePath> simulate_Y_P(const LevyModel& m, const FactorParams& fp,
                                    const SimConfig& cfg,
                                    const std::optional<MeasureChange>& density_for = {});

/// Y under Q by thinning the state-dependent intensity of H(y, z) l(dz).
std::vector<SpikePath> simulate_Y_Q(const LevyModel& m, const FactorParams& fp,
                                    const MeasureChange& mc, const SimConfig& cfg);

std::vector<double> terminal_values(const std::vector<SpikePath>& paths);

struct DensityCheck {
    McEstimate mean_G;
    McEstimate mean_H;
    std::optional<McEstimate> mean_G_half;  // Euler at density_dt / 2
    std::optional<double> richardson_G;     // 2 m(dt/2) - m(dt)
    double max_esscher_mismatch = 0.0;      // β2 = 0: |log E(H~) - (θ2 L - κ(θ2) T)|
    bool all_positive = true;
};

/// Means of E(G~)(T) and E(H~)(T) under P with T = cfg.horizon.
DensityCheck density_martingale_check(const LevyModel& m, const FactorParams& fp,
                                      const MeasureChange& mc, const SimConfig& cfg);

enum class ModelKind { Arith, Geom };

/// Direct Q-simulation estimate of F_Q(0, T) from the initial state in fp.
McEstimate mc_forward(ModelKind kind, const LevyModel& m, const FactorParams& fp,
                      const MeasureChange& mc, const SimConfig& cfg, double T);

}  // namespace ouprem::mc
