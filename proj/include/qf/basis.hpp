#pragma once

#include <span>
#include <vector>

#include "qf/index.hpp"

namespace qf {

enum class BasisKind {
    FourierDotProduct,  // sqrt2 cos(2pi k.t) / sqrt2 sin(2pi k.t), split by sign of first nonzero entry
    FourierTensor,      // product of 1-d Fourier factors per coordinate
};

struct BasisSpec {
    BasisKind kind = BasisKind::FourierTensor;
    int dimension = 1;  // lattice dimension d; functions live on [0,1]^d
};

// Evaluate phi_l(t) for a nonzero lattice index l and t in [0,1]^d.
// Throws std::domain_error on a zero index or a dimension mismatch.
double eval_basis(const BasisSpec& spec, const MultiIndex& l, std::span<const double> t);

// Index-aware evaluation.  tag == 0 expects t of dimension d; a two-sample
// index (tag s in {1,2}) expects t in [0,1]^{2d} and evaluates psi_m on the
// s-th half of the coordinates.
double eval_index(const BasisSpec& spec, const Index& ix, std::span<const double> t);

// Uniform bound on phi_l^2: 2 for the dot-product family, 2^d for tensor.
double sup_sq_bound(const BasisSpec& spec);

// Numerically integrated Gram matrix over the periodic tensor grid
// {i/N}^d (trapezoid rule; exact for trigonometric polynomials below the
// Nyquist bound).  Test support for orthonormality.
std::vector<std::vector<double>> gram_check(const BasisSpec& spec,
                                            const std::vector<MultiIndex>& indices,
                                            int grid_size);

// sup over a tensor grid at twice the Nyquist resolution of the largest
// active frequency of sum_l phi_l(t)^2.  Falls back to the uniform bound
// times |indices| when the grid would exceed cost_cap evaluations.
double grid_sup_sum_sq(const BasisSpec& spec, const std::vector<Index>& indices, int ambient_dim,
                       double cost_cap = 3e7);

}  // namespace qf
