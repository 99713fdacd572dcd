#pragma once

#include "vpbgk/field.hpp"
#include "vpbgk/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vpbgk {

/// f_{i,j} on every spatial node and velocity node, plus the two Neumann ghost rows.
///
/// Storage is one row-major block of n_x x (2 n_v + 3); column 0 holds j = -n_v-1 and
/// the last column holds j = n_v+1.
template <typename Scalar = double>
class DistributionField {
public:
    DistributionField() = default;

    DistributionField(Index n_x, Index n_v) : n_x_(n_x), n_v_(n_v), data_(PhaseArray<Scalar>::Zero(n_x, 2 * n_v + 3)) {}

    explicit DistributionField(const PhaseGrid<Scalar>& grid) : DistributionField(grid.n_x, grid.n_v) {}

    /// Storage left uninitialised; every entry must be written before it is read.
    static DistributionField uninitialized(const PhaseGrid<Scalar>& grid) {
        DistributionField f;
        f.n_x_ = grid.n_x;
        f.n_v_ = grid.n_v;
        f.data_.resize(grid.n_x, 2 * grid.n_v + 3);
        return f;
    }

    Index n_x() const noexcept { return n_x_; }
    Index n_v() const noexcept { return n_v_; }
    Index velocity_count() const noexcept { return 2 * n_v_ + 1; }

    /// j runs over -n_v-1..n_v+1.
    Scalar& operator()(Index i, Index j) { return data_(i, j + n_v_ + 1); }
    const Scalar& operator()(Index i, Index j) const { return data_(i, j + n_v_ + 1); }

    /// Full storage including ghosts.
    PhaseArray<Scalar>& storage() noexcept { return data_; }
    const PhaseArray<Scalar>& storage() const noexcept { return data_; }

    /// The n_x x (2 n_v + 1) block of physical nodes.
    auto interior() { return data_.middleCols(1, velocity_count()); }
    auto interior() const { return data_.middleCols(1, velocity_count()); }

    auto ghost_lo() { return data_.col(0); }
    auto ghost_lo() const { return data_.col(0); }
    auto ghost_hi() { return data_.col(data_.cols() - 1); }
    auto ghost_hi() const { return data_.col(data_.cols() - 1); }

    /// Ghost rows copy the adjacent boundary rows (homogeneous Neumann in v).
    void refresh_ghosts() {
        data_.col(0) = data_.col(1);
        data_.col(data_.cols() - 1) = data_.col(data_.cols() - 2);
    }

    bool same_shape(const DistributionField& other) const noexcept {
        return n_x_ == other.n_x_ && n_v_ == other.n_v_;
    }

    bool matches(const PhaseGrid<Scalar>& grid) const noexcept { return n_x_ == grid.n_x && n_v_ == grid.n_v; }

private:
    Index n_x_ = 0;
    Index n_v_ = 0;
    PhaseArray<Scalar> data_;
};

/// Upwind spatial flux v^+ f_left + v^- f_right with v^- = -min(v, 0).
template <typename Scalar>
Scalar upwind_flux_x(Scalar v, Scalar f_left, Scalar f_right) {
    return std::max(v, Scalar(0)) * f_left + (-std::min(v, Scalar(0))) * f_right;
}

/// Upwind velocity flux E^+ f_down + E^- f_up with E^- = -min(E, 0).
template <typename Scalar>
Scalar upwind_flux_v(Scalar e, Scalar f_down, Scalar f_up) {
    return std::max(e, Scalar(0)) * f_down + (-std::min(e, Scalar(0))) * f_up;
}

/// Explicit upwind transport and force step f^n -> f~^n, written in convex form:
///
///   f~_{i,j} = (1 - dt/dx|v_j| - dt/dv|E_i|) f_{i,j} + dt/dx (v_j^+ f_{i-1,j} + v_j^- f_{i+1,j})
///            + dt/dv (E_i^+ f_{i,j-1} + E_i^- f_{i,j+1})
///
/// i wraps periodically and j +- 1 past the box reads the ghost rows. Throws
/// CflViolation if any node has a Courant sum >= 1.
template <typename Scalar, typename Derived>
DistributionField<Scalar> transport_step(const DistributionField<Scalar>& f, const Eigen::ArrayBase<Derived>& e,
                                         const PhaseGrid<Scalar>& grid, Scalar dt) {
    if (!f.matches(grid)) throw std::invalid_argument("transport_step: field does not match grid");
    if (e.size() != grid.n_x) throw std::invalid_argument("transport_step: field vector length must equal n_x");
    if (!(dt > 0)) throw std::invalid_argument("transport_step: dt must be positive");

    const Index n_x = grid.n_x;
    const Index m = grid.velocity_count();
    const Scalar cx = dt / grid.dx;
    const Scalar cv = dt / grid.dv;

    for (Index i = 0; i < n_x; ++i) {
        const Scalar courant = cx * grid.v_max + cv * std::abs(e(i));
        if (!(courant < 1)) throw CflViolation(i, grid.n_v, static_cast<double>(courant));
    }

    const VelocityArray<Scalar> v = grid.velocities();
    const VelocityArray<Scalar> x_up = cx * v.max(Scalar(0));     // weight on f_{i-1,j}
    const VelocityArray<Scalar> x_down = cx * (-v.min(Scalar(0)));  // weight on f_{i+1,j}

    auto out = DistributionField<Scalar>::uninitialized(grid);
    const auto& src = f.storage();
    auto& dst = out.storage();

    // Evaluated as f + sum_k w_k (f_k - f): identical weights, but equal neighbours leave f untouched.
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n_x; ++i) {
        const Index im = (i == 0) ? n_x - 1 : i - 1;
        const Index ip = (i == n_x - 1) ? 0 : i + 1;
        const Scalar ei = e(i);
        const Scalar e_plus = cv * std::max(ei, Scalar(0));
        const Scalar e_minus = cv * (-std::min(ei, Scalar(0)));
        const auto c = src.row(i).segment(1, m);

        dst.row(i).segment(1, m) = c + x_up * (src.row(im).segment(1, m) - c) + x_down * (src.row(ip).segment(1, m) - c) +
                                   e_plus * (src.row(i).segment(0, m) - c) + e_minus * (src.row(i).segment(2, m) - c);
    }
    out.refresh_ghosts();
    return out;
}

}  // namespace vpbgk
