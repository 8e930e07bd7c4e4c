#include "ouprem/numerics.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <stdexcept>

namespace ouprem {

double kahan_sum(const std::vector<double>& v) {
    KahanSum s;
    for (double x : v) s.add(x);
    return s.value();
}

namespace {

double simpson_rec(const Fn& f, double a, double b, double fa, double fm, double fb,
                   double whole, double eps, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double diff = left + right - whole;
    if (depth <= 0 || std::fabs(diff) <= 15.0 * eps) {
        return left + right + diff / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const Fn& f, double a, double b, double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    double fa = f(a);
    double fb = f(b);
    double fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);

    // Coarse Simpson pass over |f| fixes the absolute scale of the tolerance.
    constexpr int n = 64;
    double h = (b - a) / n;
    KahanSum coarse;
    for (int i = 0; i <= n; ++i) {
        double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        coarse.add(w * std::fabs(f(a + i * h)));
    }
    double scale = coarse.value() * std::fabs(h) / 3.0;
    double eps = rel_tol * std::max(scale, 1e-300);
    return simpson_rec(f, a, b, fa, fm, fb, whole, eps, max_depth);
}

double integrate(const Fn& f, double a, double b, double rel_tol, double* error) {
    if (a == b) {
        if (error) *error = 0.0;
        return 0.0;
    }
    double err = 0.0;
    double r = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, 15, rel_tol, &err);
    if (error) *error = err;
    return r;
}

double integrate_to_inf(const Fn& f, double a, double rel_tol, double* error) {
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0;
    double l1 = 0.0;
    double r = integrator.integrate(f, a, kInf, rel_tol, &err, &l1);
    if (error) *error = err;
    return r;
}

double integrate_singular(const Fn& f, double a, double b, double rel_tol, double* error) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    double err = 0.0;
    double l1 = 0.0;
    double r = integrator.integrate(f, a, b, rel_tol, &err, &l1);
    if (error) *error = err;
    return r;
}

double bisect(const Fn& f, double lo, double hi, double x_tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) {
        throw std::invalid_argument("bisect: no sign change on bracket");
    }
    for (int i = 0; i < max_iter && hi - lo > x_tol; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace ouprem
