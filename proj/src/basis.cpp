#include "qf/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace qf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
const double kSqrt2 = std::sqrt(2.0);

void check_dims(const BasisSpec& spec, const MultiIndex& l, std::size_t tdim) {
    if (static_cast<int>(l.size()) != spec.dimension)
        throw std::domain_error("eval_basis: index dimension mismatch");
    if (tdim != static_cast<std::size_t>(spec.dimension))
        throw std::domain_error("eval_basis: point dimension mismatch");
}

// 1-d factor: 1 for k = 0, sqrt2 cos(2pi k t) for k > 0, sqrt2 sin(2pi k t)
// for k < 0 (the sign of k stays inside the argument).
inline double factor_1d(int k, double t) {
    if (k == 0) return 1.0;
    double a = kTwoPi * k * t;
    return k > 0 ? kSqrt2 * std::cos(a) : kSqrt2 * std::sin(a);
}

}  // namespace

double eval_basis(const BasisSpec& spec, const MultiIndex& l, std::span<const double> t) {
    check_dims(spec, l, t.size());
    if (is_zero(l)) throw std::domain_error("eval_basis: zero index excluded");

    if (spec.kind == BasisKind::FourierDotProduct) {
        double dot = 0.0;
        int first = 0;
        for (std::size_t j = 0; j < l.size(); ++j) {
            if (first == 0 && l[j] != 0) first = l[j];
            dot += static_cast<double>(l[j]) * t[j];
        }
        double a = kTwoPi * dot;
        return first > 0 ? kSqrt2 * std::cos(a) : kSqrt2 * std::sin(a);
    }

    double prod = 1.0;
    for (std::size_t j = 0; j < l.size(); ++j) prod *= factor_1d(l[j], t[j]);
    return prod;
}

double eval_index(const BasisSpec& spec, const Index& ix, std::span<const double> t) {
    if (ix.tag == 0) return eval_basis(spec, ix.lattice, t);
    if (ix.tag != 1 && ix.tag != 2)
        throw std::domain_error("eval_index: sample tag must be 0, 1 or 2");
    auto d = static_cast<std::size_t>(spec.dimension);
    if (t.size() != 2 * d) throw std::domain_error("eval_index: two-sample point must have dimension 2d");
    return eval_basis(spec, ix.lattice, t.subspan(ix.tag == 1 ? 0 : d, d));
}

double sup_sq_bound(const BasisSpec& spec) {
    if (spec.kind == BasisKind::FourierDotProduct) return 2.0;
    return std::ldexp(1.0, spec.dimension);
}

std::vector<std::vector<double>> gram_check(const BasisSpec& spec,
                                            const std::vector<MultiIndex>& indices,
                                            int grid_size) {
    if (grid_size < 2) throw std::domain_error("gram_check: grid_size must be >= 2");
    const std::size_t k = indices.size();
    const int d = spec.dimension;
    std::vector<std::vector<double>> gram(k, std::vector<double>(k, 0.0));

    std::vector<int> odo(d, 0);
    std::vector<double> t(d, 0.0);
    std::vector<double> vals(k, 0.0);
    double cell = std::pow(1.0 / grid_size, d);
    for (;;) {
        for (int j = 0; j < d; ++j) t[j] = static_cast<double>(odo[j]) / grid_size;
        for (std::size_t i = 0; i < k; ++i) vals[i] = eval_basis(spec, indices[i], t);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i; j < k; ++j) gram[i][j] += vals[i] * vals[j] * cell;
        int axis = 0;
        while (axis < d && ++odo[axis] == grid_size) odo[axis++] = 0;
        if (axis == d) break;
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < i; ++j) gram[i][j] = gram[j][i];
    return gram;
}

double grid_sup_sum_sq(const BasisSpec& spec, const std::vector<Index>& indices, int ambient_dim,
                       double cost_cap) {
    if (indices.empty()) return 0.0;
    const int d = spec.dimension;
    std::vector<int> freq(d, 1);
    for (const auto& ix : indices)
        for (int j = 0; j < d; ++j) freq[j] = std::max(freq[j], std::abs(ix.lattice[j]));

    std::vector<long> pts(ambient_dim);
    double total = 1.0;
    for (int a = 0; a < ambient_dim; ++a) {
        pts[a] = std::max<long>(9, 4L * freq[a % d] + 2);
        total *= static_cast<double>(pts[a]);
    }
    if (total * static_cast<double>(indices.size()) > cost_cap)
        return sup_sq_bound(spec) * static_cast<double>(indices.size());

    double sup = 0.0;
    std::vector<long> odo(ambient_dim, 0);
    std::vector<double> t(ambient_dim);
    for (;;) {
        for (int a = 0; a < ambient_dim; ++a) t[a] = static_cast<double>(odo[a]) / pts[a];
        double s = 0.0;
        for (const auto& ix : indices) {
            double v = eval_index(spec, ix, t);
            s += v * v;
        }
        sup = std::max(sup, s);
        int axis = 0;
        while (axis < ambient_dim) {
            if (++odo[axis] < pts[axis]) break;
            odo[axis] = 0;
            ++axis;
        }
        if (axis == ambient_dim) break;
    }
    return sup;
}

}  // namespace qf
