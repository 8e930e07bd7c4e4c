#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace ouprem {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// eta(x) = (1 - e^{-x}) / x, continuous at 0.
///
/// Every expression of the form (1 - e^{-k tau}) / k is written as
/// tau * eta(k tau) so that k -> 0 (speed 1 - beta -> 0) is exact.
inline double eta(double x) {
    if (std::fabs(x) < 1e-4) {
        return 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0;
    }
    return -std::expm1(-x) / x;
}

/// (1 - e^{-k tau}) / k with the k -> 0 limit tau.
inline double decay_integral(double k, double tau) { return tau * eta(k * tau); }

/// Compensated summation; adding in a fixed order gives a fixed result.
class KahanSum {
public:
    void add(double v) {
        double y = v - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double kahan_sum(const std::vector<double>& v);

using Fn = std::function<double(double)>;

/// Adaptive Simpson on [a, b] with relative tolerance on the total.
double adaptive_simpson(const Fn& f, double a, double b, double rel_tol = 1e-9,
                        int max_depth = 40);

/// Adaptive Gauss-Kronrod (61-point) on a finite interval.
double integrate(const Fn& f, double a, double b, double rel_tol = 1e-12,
                 double* error = nullptr);

/// Integral over [a, +inf) for integrands with exponential decay.
double integrate_to_inf(const Fn& f, double a, double rel_tol = 1e-12,
                        double* error = nullptr);

/// Tanh-sinh on a finite interval; tolerates endpoint singularities.
double integrate_singular(const Fn& f, double a, double b, double rel_tol = 1e-12,
                          double* error = nullptr);

/// Bisection for a sign change of f on [lo, hi].
double bisect(const Fn& f, double lo, double hi, double x_tol = 1e-13,
              int max_iter = 200);

}  // namespace ouprem
