#include "qf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace qf {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1].
constexpr double g3x[] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double g3w[] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
constexpr double g5x[] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                          0.9061798459386640};
constexpr double g5w[] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                          0.4786286704993665, 0.2369268850561891};

struct Cell {
    std::vector<double> lo, hi;
    double value;  // 5^d rule
    double err;    // |5^d - 3^d|
};

template <int K>
double tensor_rule(const std::function<double(std::span<const double>)>& f,
                   std::span<const double> lo, std::span<const double> hi, const double* gx,
                   const double* gw) {
    const std::size_t d = lo.size();
    std::vector<int> odo(d, 0);
    std::vector<double> x(d);
    double total = 0.0;
    double vol = 1.0;
    for (std::size_t j = 0; j < d; ++j) vol *= 0.5 * (hi[j] - lo[j]);
    for (;;) {
        double w = 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            x[j] = 0.5 * (lo[j] + hi[j]) + 0.5 * (hi[j] - lo[j]) * gx[odo[j]];
            w *= gw[odo[j]];
        }
        total += w * f(x);
        std::size_t axis = 0;
        while (axis < d) {
            if (++odo[axis] < K) break;
            odo[axis] = 0;
            ++axis;
        }
        if (axis == d) break;
    }
    return total * vol;
}

Cell make_cell(const std::function<double(std::span<const double>)>& f, std::vector<double> lo,
               std::vector<double> hi) {
    Cell c{std::move(lo), std::move(hi), 0.0, 0.0};
    double i5 = tensor_rule<5>(f, c.lo, c.hi, g5x, g5w);
    double i3 = tensor_rule<3>(f, c.lo, c.hi, g3x, g3w);
    c.value = i5;
    c.err = std::abs(i5 - i3);
    return c;
}

}  // namespace

QuadratureResult adaptive_integrate(const std::function<double(std::span<const double>)>& f,
                                    std::span<const double> lo, std::span<const double> hi,
                                    double abs_tol, long max_cells) {
    if (lo.size() != hi.size() || lo.empty())
        throw std::invalid_argument("adaptive_integrate: inconsistent box");

    auto worse = [](const Cell& a, const Cell& b) { return a.err < b.err; };
    std::priority_queue<Cell, std::vector<Cell>, decltype(worse)> heap(worse);
    heap.push(make_cell(f, std::vector<double>(lo.begin(), lo.end()),
                        std::vector<double>(hi.begin(), hi.end())));

    double total_err = heap.top().err;
    long cells = 1;
    while (total_err > abs_tol) {
        if (cells >= max_cells)
            throw QuadratureError("adaptive_integrate: cell budget exhausted", total_err);
        Cell c = heap.top();
        heap.pop();
        total_err -= c.err;
        // split the longest axis
        std::size_t axis = 0;
        for (std::size_t j = 1; j < c.lo.size(); ++j)
            if (c.hi[j] - c.lo[j] > c.hi[axis] - c.lo[axis]) axis = j;
        double mid = 0.5 * (c.lo[axis] + c.hi[axis]);
        auto lo1 = c.lo, hi1 = c.hi, lo2 = c.lo, hi2 = c.hi;
        hi1[axis] = mid;
        lo2[axis] = mid;
        Cell a = make_cell(f, std::move(lo1), std::move(hi1));
        Cell b = make_cell(f, std::move(lo2), std::move(hi2));
        total_err += a.err + b.err;
        heap.push(std::move(a));
        heap.push(std::move(b));
        ++cells;
    }

    QuadratureResult out;
    out.error = total_err;
    out.cells = cells;
    // summing smallest-first keeps the large-cell cancellation error down
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(cells));
    while (!heap.empty()) {
        vals.push_back(heap.top().value);
        heap.pop();
    }
    std::sort(vals.begin(), vals.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    for (double v : vals) out.value += v;
    return out;
}

}  // namespace qf
