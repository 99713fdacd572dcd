#pragma once

#include "vpbgk/field.hpp"
#include "vpbgk/grid.hpp"
#include "vpbgk/transport.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace vpbgk {

/// Moments and norms of one state. Sums run in fixed (i, j) order.
struct DiagnosticsRecord {
    double t = 0;
    long step = 0;
    double mass = 0;            ///< sum f dx dv
    double momentum = 0;        ///< sum v f dx dv
    double kinetic_energy = 0;  ///< sum |v|^2 f dx dv
    double field_energy = 0;    ///< sum |E|^2 dx
    double entropy = 0;         ///< sum f log f dx dv, 0 log 0 = 0; NaN if any f < 0
    double min_f = 0;
    double e_inf = 0;
    std::map<double, double> weighted_norms;  ///< q -> ||f||_{L^inf_q}

    double total_energy() const { return kinetic_energy + field_energy; }
};

/// (1 + |v_j|)^q for j = -n_v..n_v.
template <typename Scalar>
VelocityArray<Scalar> velocity_weights(const PhaseGrid<Scalar>& grid, Scalar q) {
    return (Scalar(1) + grid.velocities().abs()).pow(q);
}

/// sup_{i,j} |f_{i,j}| (1 + |v_j|)^q over the physical nodes.
template <typename Scalar>
Scalar weighted_linf_norm(const DistributionField<Scalar>& f, const PhaseGrid<Scalar>& grid, Scalar q) {
    if (!(q > 0)) throw std::invalid_argument("weighted_linf_norm: q must be positive");
    if (!f.matches(grid)) throw std::invalid_argument("weighted_linf_norm: field does not match grid");
    const VelocityArray<Scalar> w = velocity_weights(grid, q);
    Scalar best = 0;
    for (Index i = 0; i < grid.n_x; ++i) {
        for (Index k = 0; k < w.size(); ++k) {
            const Scalar val = std::abs(f.interior()(i, k)) * w(k);
            if (val > best) best = val;
        }
    }
    return best;
}

inline double min_value(const DistributionField<double>& f) { return f.interior().minCoeff(); }

inline double mass_of(const DistributionField<double>& f, const PhaseGrid<double>& grid) {
    double acc = 0;
    for (Index i = 0; i < grid.n_x; ++i)
        for (Index j = -grid.n_v; j <= grid.n_v; ++j) acc += f(i, j);
    return acc * grid.dx * grid.dv;
}

inline DiagnosticsRecord compute_record(const DistributionField<double>& f, const FieldVector<double>& e,
                                        const PhaseGrid<double>& grid, const std::vector<double>& q_list, double t,
                                        long step) {
    DiagnosticsRecord r;
    r.t = t;
    r.step = step;
    double m0 = 0, m1 = 0, m2 = 0, h = 0;
    bool negative = false;
    for (Index i = 0; i < grid.n_x; ++i) {
        for (Index j = -grid.n_v; j <= grid.n_v; ++j) {
            const double fij = f(i, j);
            const double vj = grid.v(j);
            m0 += fij;
            m1 += vj * fij;
            m2 += vj * vj * fij;
            if (fij > 0)
                h += fij * std::log(fij);
            else if (fij < 0)
                negative = true;
        }
    }
    const double cell = grid.dx * grid.dv;
    r.mass = m0 * cell;
    r.momentum = m1 * cell;
    r.kinetic_energy = m2 * cell;
    r.entropy = negative ? std::numeric_limits<double>::quiet_NaN() : h * cell;
    double fe = 0;
    for (Index i = 0; i < e.size(); ++i) fe += e(i) * e(i);
    r.field_energy = fe * grid.dx;
    r.e_inf = e.abs().maxCoeff();
    r.min_f = min_value(f);
    for (double q : q_list) r.weighted_norms[q] = weighted_linf_norm(f, grid, q);
    return r;
}

/// One measured quantity against its bound.
struct BoundCheck {
    double value = 0;
    double bound = 0;
    bool pass = false;
};

/// Directly measurable stability quantities of a state.
struct StabilityFlags {
    BoundCheck l1;              ///< mass <= (2 + T_f) exp(T_f / eps)
    BoundCheck field;           ///< max|E| <= (2 + T_f) exp(T_f / eps) + 1
    BoundCheck positivity;      ///< min f > 0
    double lower_profile = 0;   ///< min_{i,j} f exp(|v_j|^alpha); reported, not asserted

    bool all_pass() const { return l1.pass && field.pass && positivity.pass; }
};

/// Mass bound (2 + T_f) exp(T_f / eps); +inf once the exponential overflows.
inline double l1_bound(double t_final, double eps) { return (2.0 + t_final) * std::exp(t_final / eps); }

inline double field_bound(double t_final, double eps) { return l1_bound(t_final, eps) + 1.0; }

inline StabilityFlags evaluate_stability(double mass, double e_inf, double min_f, double t_final, double eps) {
    StabilityFlags s;
    s.l1 = {mass, l1_bound(t_final, eps), mass <= l1_bound(t_final, eps)};
    s.field = {e_inf, field_bound(t_final, eps), e_inf <= field_bound(t_final, eps)};
    s.positivity = {min_f, 0.0, min_f > 0};
    return s;
}

inline double maxwellian_lower_profile(const DistributionField<double>& f, const PhaseGrid<double>& grid,
                                       double alpha) {
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < grid.n_x; ++i)
        for (Index j = -grid.n_v; j <= grid.n_v; ++j)
            best = std::min(best, f(i, j) * std::exp(std::pow(std::abs(grid.v(j)), alpha)));
    return best;
}

}  // namespace vpbgk
