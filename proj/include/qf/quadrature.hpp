#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace qf {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;   // accumulated error estimate
    long cells = 0;       // leaf cells evaluated
};

struct QuadratureError : std::runtime_error {
    double achieved;
    QuadratureError(const std::string& what, double err) : std::runtime_error(what), achieved(err) {}
};

// Adaptive tensor quadrature over the box prod [lo_j, hi_j].  Each cell is
// scored by a 5^d vs 3^d Gauss-Legendre difference and split along its
// longest axis until the local estimate fits within its share of abs_tol.
// Throws QuadratureError when the cell budget runs out first.
QuadratureResult adaptive_integrate(const std::function<double(std::span<const double>)>& f,
                                    std::span<const double> lo, std::span<const double> hi,
                                    double abs_tol, long max_cells = 400000);

}  // namespace qf
