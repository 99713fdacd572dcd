#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace vpbgk {

using Index = Eigen::Index;

/// Column array over spatial nodes (rho, U, T, E, ...).
template <typename Scalar>
using NodeArray = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

/// Row array over velocity nodes; matches the row layout of a distribution.
template <typename Scalar>
using VelocityArray = Eigen::Array<Scalar, 1, Eigen::Dynamic>;

/// Row-major (i-major, j-minor) phase-space storage.
template <typename Scalar>
using PhaseArray = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Raised by the transport step when dt/dx|v_j| + dt/dv|E_i| >= 1 at some node.
class CflViolation : public std::runtime_error {
public:
    CflViolation(Index i, Index j, double courant)
        : std::runtime_error("CFL violation at (i=" + std::to_string(i) + ", j=" + std::to_string(j) +
                             "): Courant sum " + std::to_string(courant) + " >= 1"),
          i_(i), j_(j), courant_(courant) {}

    Index i() const noexcept { return i_; }
    Index j() const noexcept { return j_; }
    double courant() const noexcept { return courant_; }

private:
    Index i_;
    Index j_;
    double courant_;
};

/// Zeroth moment at or below the density floor.
class DegenerateDensity : public std::runtime_error {
public:
    DegenerateDensity(Index i, double rho)
        : std::runtime_error("degenerate density at node " + std::to_string(i) + ": rho = " +
                             std::to_string(rho)),
          i_(i), rho_(rho) {}

    Index i() const noexcept { return i_; }
    double rho() const noexcept { return rho_; }

private:
    Index i_;
    double rho_;
};

/// Discrete temperature at or below the temperature floor.
class NegativeTemperature : public std::runtime_error {
public:
    NegativeTemperature(Index i, double temp)
        : std::runtime_error("non-positive temperature at node " + std::to_string(i) + ": T = " +
                             std::to_string(temp)),
          i_(i), temp_(temp) {}

    Index i() const noexcept { return i_; }
    double temp() const noexcept { return temp_; }

private:
    Index i_;
    double temp_;
};

}  // namespace vpbgk
