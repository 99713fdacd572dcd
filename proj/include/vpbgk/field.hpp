#pragma once

#include "vpbgk/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace vpbgk {

/// Discrete electric field E_i, one entry per spatial node.
template <typename Scalar = double>
using FieldVector = NodeArray<Scalar>;

enum class FieldMethod {
    Direct,  ///< O(n_x^2) kernel sum, ascending k per output node
    Prefix,  ///< O(n_x) two-pass evaluation of the same sum
};

/// Green kernel of -d^2/dx^2 composed with -d/dx on the unit torus.
template <typename Scalar>
Scalar green_kernel(Scalar x, Scalar y) {
    if (!(x >= 0 && x <= 1) || !(y >= 0 && y <= 1))
        throw std::invalid_argument("green_kernel: arguments must lie in [0, 1]");
    return y <= x ? y : y - Scalar(1);
}

/// E_i = sum_k K(x_i, x_k) (rho_k - 1) dx.
template <typename Scalar, typename Derived>
FieldVector<Scalar> electric_field(const PhaseGrid<Scalar>& grid, const Eigen::ArrayBase<Derived>& rho,
                                   FieldMethod method = FieldMethod::Direct) {
    const Index n = grid.n_x;
    if (rho.size() != n) throw std::invalid_argument("electric_field: rho length must equal n_x");
    FieldVector<Scalar> e(n);

    if (method == FieldMethod::Direct) {
#pragma omp parallel for schedule(static)
        for (Index i = 0; i < n; ++i) {
            const Scalar xi = grid.x(i);
            Scalar acc = 0;
            for (Index k = 0; k < n; ++k) acc += green_kernel(xi, grid.x(k)) * (rho(k) - Scalar(1)) * grid.dx;
            e(i) = acc;
        }
        return e;
    }

    // K(x_i, x_k) = x_k - [k > i], so E_i = sum_k x_k s_k dx - sum_{k>i} s_k dx.
    Scalar moment = 0;
    for (Index k = 0; k < n; ++k) moment += grid.x(k) * (rho(k) - Scalar(1)) * grid.dx;
    Scalar tail = 0;
    for (Index i = n - 1; i >= 0; --i) {
        e(i) = moment - tail;
        tail += (rho(i) - Scalar(1)) * grid.dx;
    }
    return e;
}

}  // namespace vpbgk
