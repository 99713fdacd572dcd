#include "vpbgk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>

namespace vpbgk {

const char* to_string(DtPolicy policy) { return policy == DtPolicy::Fixed ? "fixed" : "adaptive"; }

const char* to_string(FieldMethod method) { return method == FieldMethod::Prefix ? "prefix" : "direct"; }

void SolverConfig::validate() const {
    if (n_x < 2) throw std::invalid_argument("n_x must be >= 2");
    if (n_v < 1) throw std::invalid_argument("n_v must be >= 1");
    if (!(v_max > 0) || !std::isfinite(v_max)) throw std::invalid_argument("v_max must be positive");
    if (!(eps > 0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be positive");
    if (!(t_final >= 0) || !std::isfinite(t_final)) throw std::invalid_argument("t_final must be nonnegative");
    if (!(sigma > 0 && sigma < 1)) throw std::invalid_argument("sigma must lie in (0, 1)");
    if (diagnostics_every < 0) throw std::invalid_argument("diagnostics_every must be nonnegative");
    for (double q : q_list)
        if (!(q > 3)) throw std::invalid_argument("every q in q_list must satisfy q > 3");
    if (const auto* u = std::get_if<UniformMaxwellian>(&initial_condition)) {
        if (!(u->rho > 0) || !(u->temp > 0))
            throw std::invalid_argument("uniform_maxwellian needs rho > 0 and temp > 0");
    }
}

Grid SolverConfig::grid() const { return build_grid<double>(n_x, n_v, v_max); }

namespace {

double paper_initial(double x, double v) {
    return (1.0 + 0.01 * std::cos(2.0 * std::numbers::pi * x)) * std::exp(-0.5 * v * v) /
           std::sqrt(2.0 * std::numbers::pi);
}

double gaussian(double rho, double u, double temp, double v) {
    return rho / std::sqrt(2.0 * std::numbers::pi * temp) * std::exp(-(v - u) * (v - u) / (2.0 * temp));
}

}  // namespace

void refresh_macro(SimulationState& state, const Grid& grid, const SolverConfig& config) {
    state.macro = discrete_moments(state.f, grid, config.compensated_sum);
    if (config.zero_field)
        state.e = Field::Zero(grid.n_x);
    else
        state.e = electric_field(grid, state.macro.rho, config.field_method);
}

SimulationState initialize(const SolverConfig& config, const Grid& grid) {
    config.validate();
    SimulationState s;
    s.f = Distribution(grid);

    std::visit(
        [&](const auto& ic) {
            using T = std::decay_t<decltype(ic)>;
            if constexpr (std::is_same_v<T, Tabulated>) {
                if (!ic.f.matches(grid))
                    throw std::invalid_argument("tabulated initial data has shape (" + std::to_string(ic.f.n_x()) +
                                                ", " + std::to_string(ic.f.n_v()) + "), grid needs (" +
                                                std::to_string(grid.n_x) + ", " + std::to_string(grid.n_v) + ")");
                s.f.interior() = ic.f.interior();
                s.f.refresh_ghosts();
            } else {
                auto f0 = [&](double x, double v) {
                    if constexpr (std::is_same_v<T, PaperTest>)
                        return paper_initial(x, v);
                    else
                        return gaussian(ic.rho, ic.u, ic.temp, v);
                };
                for (Index i = 0; i < grid.n_x; ++i) {
                    const double x = grid.x(i);
                    for (Index j = -grid.n_v; j <= grid.n_v; ++j) s.f(i, j) = f0(x, grid.v(j));
                    s.f(i, -grid.n_v - 1) = f0(x, -grid.v_max);
                    s.f(i, grid.n_v + 1) = f0(x, grid.v_max);
                }
            }
        },
        config.initial_condition);

    refresh_macro(s, grid, config);
    return s;
}

SimulationState advance_step(const SimulationState& state, const Grid& grid, const SolverConfig& config,
                             std::optional<double> forced_dt, StepMonitor* monitor) {
    if (!(state.t < config.t_final)) throw std::logic_error("advance_step: state already at t_final");

    const double e_inf = state.e.size() ? state.e.abs().maxCoeff() : 0.0;
    const double remaining = config.t_final - state.t;
    double dt = forced_dt ? *forced_dt : cfl_dt(grid, e_inf, config.sigma);
    const bool last = dt >= remaining;
    if (last) dt = remaining;

    SimulationState next;
    Distribution f_tilde = transport_step(state.f, state.e, grid, dt);
    next.f = config.collisions ? imex_step(f_tilde, grid, config.eps, dt, config.compensated_sum)
                               : std::move(f_tilde);
    next.t = last ? config.t_final : state.t + dt;
    next.step = state.step + 1;
    refresh_macro(next, grid, config);

    if (monitor) {
        monitor->step = next.step;
        monitor->t = next.t;
        monitor->dt = dt;
        monitor->courant = courant_sum(grid, e_inf, dt);
        monitor->e_inf = e_inf;
        double mass = 0;
        for (Index i = 0; i < grid.n_x; ++i) mass += next.macro.rho(i);
        monitor->mass = mass * grid.dx;
        monitor->min_f = min_value(next.f);
    }
    return next;
}

double DiagnosticsLog::min_f_over_run() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : steps) m = std::min(m, s.min_f);
    for (const auto& r : records) m = std::min(m, r.min_f);
    return m;
}

bool DiagnosticsLog::stability_held(const SolverConfig& config) const {
    for (const auto& s : steps)
        if (!evaluate_stability(s.mass, s.e_inf, s.min_f, config.t_final, config.eps).all_pass()) return false;
    for (const auto& r : records)
        if (!evaluate_stability(r.mass, r.e_inf, r.min_f, config.t_final, config.eps).all_pass()) return false;
    return true;
}

namespace {

Snapshot take_snapshot(const SimulationState& s, bool with_f) {
    Snapshot snap{s.t, s.step, s.macro, s.e, std::nullopt};
    if (with_f) snap.f = s.f;
    return snap;
}

}  // namespace

RunResult run(const SolverConfig& config) {
    const Grid grid = config.grid();
    RunResult out;
    out.state = initialize(config, grid);
    auto& state = out.state;
    auto& log = out.log;
    log.dt_policy = config.dt_policy;

    auto record = [&] {
        log.records.push_back(compute_record(state.f, state.e, grid, config.q_list, state.t, state.step));
        log.snapshots.push_back(take_snapshot(state, config.keep_f_snapshots));
    };

    record();
    log.steps.push_back({0, state.t, 0.0, 0.0, state.e.abs().maxCoeff(), mass_of(state.f, grid), min_value(state.f)});

    std::optional<double> forced;
    if (config.dt_policy == DtPolicy::Fixed) {
        log.fixed_dt = cfl_dt(grid, state.e.abs().maxCoeff(), config.sigma);
        forced = log.fixed_dt;
    }

    while (state.t < config.t_final) {
        StepMonitor mon;
        try {
            state = advance_step(state, grid, config, forced, &mon);
        } catch (const std::exception& ex) {
            std::throw_with_nested(StepError(state.t, state.step, ex.what()));
        }
        log.steps.push_back(mon);
        const bool due = config.diagnostics_every > 0 && state.step % config.diagnostics_every == 0;
        if (due || state.t >= config.t_final) record();
    }
    return out;
}

StabilityFlags stability_report(const SimulationState& state, const SolverConfig& config, const Grid& grid,
                                double alpha) {
    const double e_inf = state.e.size() ? state.e.abs().maxCoeff() : 0.0;
    StabilityFlags flags = evaluate_stability(mass_of(state.f, grid), e_inf, min_value(state.f), config.t_final,
                                              config.eps);
    flags.lower_profile = maxwellian_lower_profile(state.f, grid, alpha);
    return flags;
}

}  // namespace vpbgk
