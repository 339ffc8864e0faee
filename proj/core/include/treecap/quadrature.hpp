#pragma once

#include <functional>
#include <stdexcept>

namespace treecap {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;  // error estimate actually achieved
    int subdivisions = 0;
};

struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& what, double achieved_tol)
        : std::runtime_error(what), achieved_tol(achieved_tol) {}
    double achieved_tol;
};

/// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b] to the
/// requested relative tolerance. Intervals are bisected until the local
/// error estimate passes; exceeding `max_subdivisions` throws a
/// QuadratureError carrying the tolerance actually achieved.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, int max_subdivisions = 2000);

}  // namespace treecap
