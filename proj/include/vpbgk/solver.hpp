#pragma once

#include "vpbgk/diagnostics.hpp"
#include "vpbgk/field.hpp"
#include "vpbgk/grid.hpp"
#include "vpbgk/relaxation.hpp"
#include "vpbgk/transport.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vpbgk {

using Grid = PhaseGrid<double>;
using Distribution = DistributionField<double>;
using Field = FieldVector<double>;
using Macro = MacroFields<double>;

/// f0(x, v) = (1 + 0.01 cos 2 pi x) exp(-v^2/2) / sqrt(2 pi).
struct PaperTest {};

/// Spatially uniform Maxwellian with the given moments.
struct UniformMaxwellian {
    double rho = 1;
    double u = 0;
    double temp = 1;
};

/// Node values read from a distribution dump; ghosts copy the boundary rows.
struct Tabulated {
    Distribution f;
    std::string source;
};

using InitialCondition = std::variant<PaperTest, UniformMaxwellian, Tabulated>;

enum class DtPolicy { Adaptive, Fixed };

const char* to_string(DtPolicy policy);
const char* to_string(FieldMethod method);

struct SolverConfig {
    Index n_x = 40;
    Index n_v = 80;
    double v_max = 15;
    double eps = 1;
    double t_final = 0.4;
    double sigma = 0.9;
    InitialCondition initial_condition = PaperTest{};
    long diagnostics_every = 0;
    std::vector<double> q_list{4, 5};
    DtPolicy dt_policy = DtPolicy::Adaptive;
    FieldMethod field_method = FieldMethod::Direct;
    bool compensated_sum = false;
    bool zero_field = false;  ///< force E = 0 (pure transport checks)
    bool collisions = true;   ///< false skips the relaxation step
    bool keep_f_snapshots = false;

    /// Throws std::invalid_argument on the first violated range.
    void validate() const;
    Grid grid() const;
};

struct SimulationState {
    double t = 0;
    long step = 0;
    Distribution f;
    Field e;      ///< field of the current f
    Macro macro;  ///< moments of the current f
};

/// Cheap per-step monitor, recorded for every step.
struct StepMonitor {
    long step = 0;
    double t = 0;       ///< time after the step
    double dt = 0;
    double courant = 0; ///< attained max Courant sum
    double e_inf = 0;   ///< max|E^n| used by the step
    double mass = 0;    ///< mass of f^{n+1}
    double min_f = 0;   ///< min of f^{n+1}
};

struct Snapshot {
    double t = 0;
    long step = 0;
    Macro macro;
    Field e;
    std::optional<Distribution> f;
};

struct DiagnosticsLog {
    std::vector<DiagnosticsRecord> records;
    std::vector<StepMonitor> steps;
    std::vector<Snapshot> snapshots;
    DtPolicy dt_policy = DtPolicy::Adaptive;
    double fixed_dt = 0;  ///< only meaningful for DtPolicy::Fixed

    double min_f_over_run() const;
    /// A1, A2 and positivity evaluated at every monitored step (and t = 0).
    bool stability_held(const SolverConfig& config) const;
};

/// Raised by run() with the time and step at which a step failed.
class StepError : public std::runtime_error {
public:
    StepError(double t, long step, const std::string& what)
        : std::runtime_error("step " + std::to_string(step) + " (t = " + std::to_string(t) + "): " + what),
          t_(t), step_(step) {}
    double t() const noexcept { return t_; }
    long step() const noexcept { return step_; }

private:
    double t_;
    long step_;
};

/// f0 at the nodes with ghosts f0(x_i, +-V_M), and the matching moments and field.
SimulationState initialize(const SolverConfig& config, const Grid& grid);

/// Recomputes moments and field of state.f in place.
void refresh_macro(SimulationState& state, const Grid& grid, const SolverConfig& config);

/// density -> field -> transport -> relaxation; dt is min(admissible, t_final - t)
/// unless `forced_dt` is given. Returns the new state; `monitor` receives step data.
SimulationState advance_step(const SimulationState& state, const Grid& grid, const SolverConfig& config,
                             std::optional<double> forced_dt = std::nullopt, StepMonitor* monitor = nullptr);

struct RunResult {
    SimulationState state;
    DiagnosticsLog log;
};

RunResult run(const SolverConfig& config);

StabilityFlags stability_report(const SimulationState& state, const SolverConfig& config, const Grid& grid,
                                double alpha = 2.0);

}  // namespace vpbgk
