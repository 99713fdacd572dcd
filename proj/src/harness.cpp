#include "vpbgk/harness.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace vpbgk {

namespace {

bool is_nested(const Grid& fine, const Grid& coarse) {
    return fine.n_x == 2 * coarse.n_x && fine.n_v == 2 * coarse.n_v && fine.v_max == coarse.v_max;
}

}  // namespace

std::string weighted_metric_name(double q) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "f_linf_q%g", q);
    return buf;
}

Distribution restrict_fine_to_coarse(const Distribution& f_fine, const Grid& grid_fine, const Grid& grid_coarse) {
    if (!f_fine.matches(grid_fine)) throw std::invalid_argument("restrict_fine_to_coarse: field does not match fine grid");
    if (!is_nested(grid_fine, grid_coarse))
        throw std::invalid_argument("restrict_fine_to_coarse: fine grid is not a 2x node-nested refinement");
    Distribution out(grid_coarse);
    for (Index i = 0; i < grid_coarse.n_x; ++i)
        for (Index j = -grid_coarse.n_v; j <= grid_coarse.n_v; ++j) out(i, j) = f_fine(2 * i, 2 * j);
    out.refresh_ghosts();
    return out;
}

Field restrict_field(const Field& e_fine, const Grid& grid_fine, const Grid& grid_coarse) {
    if (e_fine.size() != grid_fine.n_x) throw std::invalid_argument("restrict_field: length does not match fine grid");
    if (!is_nested(grid_fine, grid_coarse))
        throw std::invalid_argument("restrict_field: fine grid is not a 2x node-nested refinement");
    Field out(grid_coarse.n_x);
    for (Index i = 0; i < grid_coarse.n_x; ++i) out(i) = e_fine(2 * i);
    return out;
}

double pairwise_error(const Distribution& f_coarse, const Distribution& f_fine_restricted, const Grid& grid_coarse,
                      double q) {
    if (!f_coarse.same_shape(f_fine_restricted) || !f_coarse.matches(grid_coarse))
        throw std::invalid_argument("pairwise_error: shape mismatch");
    Distribution diff(grid_coarse);
    diff.storage() = f_coarse.storage() - f_fine_restricted.storage();
    return weighted_linf_norm(diff, grid_coarse, q);
}

double observed_order(double e_coarse, double e_fine) {
    if (!(e_coarse > 0) || !(e_fine > 0)) throw std::invalid_argument("observed_order: errors must be positive");
    return std::log2(e_coarse / e_fine);
}

ConvergenceReport convergence_study(const SolverConfig& base_config, int levels) {
    if (levels < 2) throw std::invalid_argument("convergence_study: levels must be >= 2");
    base_config.validate();

    ConvergenceReport report;
    report.dt_policy = base_config.dt_policy;
    report.convention =
        "self-convergence: each row compares grid (n_x, n_v) with (2 n_x, 2 n_v) at the shared nodes and t_final; "
        "v_max fixed, n_v doubles with n_x";
    for (double q : base_config.q_list) report.metrics.push_back(weighted_metric_name(q));
    report.metrics.push_back(kFieldMetric);

    struct LevelResult {
        Grid grid;
        SimulationState state;
    };
    std::vector<LevelResult> results;
    results.reserve(levels);

    for (int level = 0; level < levels; ++level) {
        SolverConfig cfg = base_config;
        cfg.n_x = base_config.n_x << level;
        cfg.n_v = base_config.n_v << level;
        if (level > 0 && std::holds_alternative<Tabulated>(cfg.initial_condition))
            throw std::invalid_argument("convergence_study: tabulated initial data cannot be refined");
        RunResult r;
        try {
            r = run(cfg);
        } catch (const std::exception& ex) {
            std::throw_with_nested(std::runtime_error("level " + std::to_string(level) + " (" +
                                                      std::to_string(cfg.n_x) + ", " + std::to_string(cfg.n_v) +
                                                      "): " + ex.what()));
        }
        LevelSummary summary;
        summary.n_x = cfg.n_x;
        summary.n_v = cfg.n_v;
        summary.steps = r.state.step;
        summary.min_f = r.log.min_f_over_run();
        for (const auto& s : r.log.steps) {
            summary.max_mass = std::max(summary.max_mass, s.mass);
            summary.max_e_inf = std::max(summary.max_e_inf, s.e_inf);
        }
        summary.stability_held = r.log.stability_held(cfg);
        report.levels.push_back(summary);
        results.push_back({cfg.grid(), std::move(r.state)});
    }

    for (int level = 0; level + 1 < levels; ++level) {
        const auto& coarse = results[level];
        const auto& fine = results[level + 1];
        ConvergenceRow row;
        row.n_x = coarse.grid.n_x;
        row.n_v = coarse.grid.n_v;
        row.dt_policy = base_config.dt_policy;
        const Distribution restricted = restrict_fine_to_coarse(fine.state.f, fine.grid, coarse.grid);
        for (double q : base_config.q_list)
            row.errors[weighted_metric_name(q)] = pairwise_error(coarse.state.f, restricted, coarse.grid, q);
        const Field e_restricted = restrict_field(fine.state.e, fine.grid, coarse.grid);
        row.errors[kFieldMetric] = (coarse.state.e - e_restricted).abs().maxCoeff();
        report.rows.push_back(std::move(row));
    }

    for (std::size_t r = 0; r + 1 < report.rows.size(); ++r) {
        for (const auto& metric : report.metrics) {
            const double a = report.rows[r].errors.at(metric);
            const double b = report.rows[r + 1].errors.at(metric);
            if (a > 0 && b > 0) report.rows[r].orders[metric] = observed_order(a, b);
        }
    }
    return report;
}

}  // namespace vpbgk
