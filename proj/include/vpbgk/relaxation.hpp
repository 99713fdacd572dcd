#pragma once

#include "vpbgk/grid.hpp"
#include "vpbgk/transport.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vpbgk {

/// Below these the moments are rejected rather than clamped.
inline constexpr double kDensityFloor = 1e-300;
inline constexpr double kTemperatureFloor = 1e-14;

/// Per-node density, bulk velocity and temperature.
template <typename Scalar = double>
struct MacroFields {
    NodeArray<Scalar> rho;
    NodeArray<Scalar> u;
    NodeArray<Scalar> temp;

    Index size() const noexcept { return rho.size(); }
};

namespace detail {

/// Sequential accumulator; optionally Neumaier-compensated.
template <typename Scalar>
struct Accumulator {
    bool compensated = false;
    Scalar sum = 0;
    Scalar carry = 0;

    void add(Scalar term) {
        if (!compensated) {
            sum += term;
            return;
        }
        const Scalar t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            carry += (sum - t) + term;
        else
            carry += (term - t) + sum;
        sum = t;
    }

    Scalar value() const { return compensated ? sum + carry : sum; }
};

}  // namespace detail

/// Velocity moments m0, m1, m2 of f at every spatial node (ascending-j sums), turned into
/// rho = m0, U = m1/m0, T = (m2 - m0 U^2)/m0. Throws DegenerateDensity / NegativeTemperature.
template <typename Scalar>
MacroFields<Scalar> discrete_moments(const DistributionField<Scalar>& f, const PhaseGrid<Scalar>& grid,
                                     bool compensated = false) {
    if (!f.matches(grid)) throw std::invalid_argument("discrete_moments: field does not match grid");
    const Index n_x = grid.n_x;
    MacroFields<Scalar> m{NodeArray<Scalar>(n_x), NodeArray<Scalar>(n_x), NodeArray<Scalar>(n_x)};

    const VelocityArray<Scalar> v = grid.velocities();
    const VelocityArray<Scalar> v2 = v.square();
    const Index count = grid.velocity_count();

    // Errors are collected per node and raised outside the parallel region.
    NodeArray<Scalar> m0s(n_x);
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n_x; ++i) {
        const Scalar* row = f.storage().row(i).data() + 1;
        Scalar m0, m1, m2;
        if (compensated) {
            detail::Accumulator<Scalar> a0{true}, a1{true}, a2{true};
            for (Index k = 0; k < count; ++k) {
                a0.add(row[k]);
                a1.add(v(k) * row[k]);
                a2.add(v2(k) * row[k]);
            }
            m0 = a0.value();
            m1 = a1.value();
            m2 = a2.value();
        } else {
            Scalar s0 = 0, s1 = 0, s2 = 0;
            for (Index k = 0; k < count; ++k) {
                s0 += row[k];
                s1 += v(k) * row[k];
                s2 += v2(k) * row[k];
            }
            m0 = s0;
            m1 = s1;
            m2 = s2;
        }
        m0 *= grid.dv;
        m1 *= grid.dv;
        m2 *= grid.dv;
        m0s(i) = m0;
        const Scalar u = m1 / m0;
        m.rho(i) = m0;
        m.u(i) = u;
        m.temp(i) = (m2 - m0 * u * u) / m0;
    }

    for (Index i = 0; i < n_x; ++i) {
        if (!(m0s(i) > Scalar(kDensityFloor))) throw DegenerateDensity(i, static_cast<double>(m0s(i)));
        if (!(m.temp(i) > Scalar(kTemperatureFloor))) throw NegativeTemperature(i, static_cast<double>(m.temp(i)));
    }
    return m;
}

namespace detail {

/// Writes the Gaussian row of node i into `row` (ghost columns included). `row` must be
/// a freshly allocated array so that every node takes the same vectorised exp path.
template <typename Scalar>
void maxwellian_row(const MacroFields<Scalar>& m, Index i, const VelocityArray<Scalar>& v, VelocityArray<Scalar>& row) {
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    row = -(v - m.u(i)).square() / (Scalar(2) * m.temp(i));
    row = (m.rho(i) / std::sqrt(two_pi * m.temp(i))) * row.exp();
}

template <typename Scalar>
void check_maxwellian_inputs(const MacroFields<Scalar>& m, const PhaseGrid<Scalar>& grid) {
    const Index n_x = grid.n_x;
    if (m.rho.size() != n_x || m.u.size() != n_x || m.temp.size() != n_x)
        throw std::invalid_argument("discrete_maxwellian: macro fields do not match grid");
    for (Index i = 0; i < n_x; ++i) {
        if (!(m.rho(i) > 0) || !std::isfinite(m.rho(i))) throw DegenerateDensity(i, static_cast<double>(m.rho(i)));
        if (!(m.temp(i) > 0) || !std::isfinite(m.temp(i)))
            throw NegativeTemperature(i, static_cast<double>(m.temp(i)));
    }
}

}  // namespace detail

/// Node-wise Gaussian rho/sqrt(2 pi T) exp(-(v_j - U)^2 / (2T)); ghost rows are
/// evaluated at v = +-(v_max + dv).
template <typename Scalar>
DistributionField<Scalar> discrete_maxwellian(const MacroFields<Scalar>& m, const PhaseGrid<Scalar>& grid) {
    detail::check_maxwellian_inputs(m, grid);
    const VelocityArray<Scalar> v = grid.velocities_with_ghosts();
    auto out = DistributionField<Scalar>::uninitialized(grid);
    auto& dst = out.storage();

#pragma omp parallel
    {
        VelocityArray<Scalar> row(v.size());
#pragma omp for schedule(static)
        for (Index i = 0; i < grid.n_x; ++i) {
            detail::maxwellian_row(m, i, v, row);
            dst.row(i) = row;
        }
    }
    return out;
}

/// One relaxation step f^{n+1} = (eps f~ + dt M(f~)) / (eps + dt), followed by the Neumann ghost refresh.
template <typename Scalar>
DistributionField<Scalar> imex_step(const DistributionField<Scalar>& f_tilde, const PhaseGrid<Scalar>& grid, Scalar eps,
                                    Scalar dt, bool compensated = false) {
    if (!(eps > 0)) throw std::invalid_argument("imex_step: eps must be positive");
    if (!(dt > 0)) throw std::invalid_argument("imex_step: dt must be positive");
    const MacroFields<Scalar> m = discrete_moments(f_tilde, grid, compensated);
    detail::check_maxwellian_inputs(m, grid);

    const VelocityArray<Scalar> v = grid.velocities_with_ghosts();
    auto out = DistributionField<Scalar>::uninitialized(grid);
    const auto& src = f_tilde.storage();
    auto& dst = out.storage();
    const Scalar denom = eps + dt;

#pragma omp parallel
    {
        VelocityArray<Scalar> row(v.size());
#pragma omp for schedule(static)
        for (Index i = 0; i < grid.n_x; ++i) {
            detail::maxwellian_row(m, i, v, row);
            dst.row(i) = (eps * src.row(i) + dt * row) / denom;
        }
    }
    out.refresh_ghosts();
    return out;
}

}  // namespace vpbgk
