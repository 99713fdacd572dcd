#pragma once

#include "vpbgk/types.hpp"

#include <cmath>
#include <stdexcept>

namespace vpbgk {

/// Uniform node-centred phase-space mesh on the unit torus times [-v_max, v_max].
///
/// Spatial nodes are x_i = i*dx for i = 0..n_x-1 (periodic). Velocity nodes are
/// v_j = j*dv for j = -n_v..n_v; the Neumann ghost rows sit at j = +-(n_v+1).
template <typename Scalar = double>
struct PhaseGrid {
    Index n_x = 0;
    Scalar dx = 0;
    Index n_v = 0;
    Scalar dv = 0;
    Scalar v_max = 0;

    Index velocity_count() const noexcept { return 2 * n_v + 1; }
    Scalar x(Index i) const noexcept { return Scalar(i) * dx; }
    Scalar v(Index j) const noexcept { return Scalar(j) * dv; }

    /// v_j for j = -n_v..n_v as a row array.
    VelocityArray<Scalar> velocities() const {
        VelocityArray<Scalar> out(velocity_count());
        for (Index k = 0; k < out.size(); ++k) out(k) = v(k - n_v);
        return out;
    }

    /// v_j for j = -n_v-1..n_v+1 (ghost rows included).
    VelocityArray<Scalar> velocities_with_ghosts() const {
        VelocityArray<Scalar> out(velocity_count() + 2);
        for (Index k = 0; k < out.size(); ++k) out(k) = v(k - n_v - 1);
        return out;
    }

    NodeArray<Scalar> positions() const {
        NodeArray<Scalar> out(n_x);
        for (Index i = 0; i < n_x; ++i) out(i) = x(i);
        return out;
    }

    bool operator==(const PhaseGrid&) const = default;
};

template <typename Scalar = double>
PhaseGrid<Scalar> build_grid(Index n_x, Index n_v, Scalar v_max) {
    if (n_x < 2) throw std::invalid_argument("build_grid: n_x must be >= 2");
    if (n_v < 1) throw std::invalid_argument("build_grid: n_v must be >= 1");
    if (!(v_max > 0) || !std::isfinite(v_max))
        throw std::invalid_argument("build_grid: v_max must be positive and finite");
    PhaseGrid<Scalar> g;
    g.n_x = n_x;
    g.dx = Scalar(1) / Scalar(n_x);
    g.n_v = n_v;
    g.dv = v_max / Scalar(n_v);
    g.v_max = v_max;
    return g;
}

/// Time-step bookkeeping for one run.
template <typename Scalar = double>
struct TimeStepPlan {
    Scalar sigma = Scalar(0.9);
    Scalar dt = 0;
    Scalar t_final = 0;
};

/// Largest Courant sum dt/dx|v_j| + dt/dv*e_max over the velocity nodes.
template <typename Scalar>
Scalar courant_sum(const PhaseGrid<Scalar>& grid, Scalar e_max, Scalar dt) {
    return dt / grid.dx * grid.v_max + dt / grid.dv * e_max;
}

/// dt = sigma / (v_max/dx + e_max/dv).
template <typename Scalar>
Scalar cfl_dt(const PhaseGrid<Scalar>& grid, Scalar e_max, Scalar sigma) {
    if (!(sigma > 0 && sigma < 1)) throw std::invalid_argument("cfl_dt: sigma must lie in (0, 1)");
    if (!(e_max >= 0) || !std::isfinite(e_max))
        throw std::invalid_argument("cfl_dt: e_max must be finite and nonnegative");
    return sigma / (grid.v_max / grid.dx + e_max / grid.dv);
}

/// Truncation velocity tied to the velocity mesh, V_M = c / dv^gamma.
/// Experimental; the fixed-box runs never call it.
template <typename Scalar>
Scalar coupled_truncation_velocity(Scalar c, Scalar dv, Scalar gamma) {
    if (!(c > 0) || !(dv > 0) || !(gamma > 0 && gamma < 1))
        throw std::invalid_argument("coupled_truncation_velocity: need c > 0, dv > 0, gamma in (0,1)");
    return c / std::pow(dv, gamma);
}

}  // namespace vpbgk
