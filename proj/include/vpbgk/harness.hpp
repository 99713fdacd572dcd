#pragma once

#include "vpbgk/solver.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vpbgk {

/// One coarse/fine pair of a self-convergence study, labelled by the coarse grid.
struct ConvergenceRow {
    Index n_x = 0;
    Index n_v = 0;
    DtPolicy dt_policy = DtPolicy::Adaptive;
    std::map<std::string, double> errors;
    std::map<std::string, double> orders;  ///< absent on the finest row
};

/// Per-level run summary kept alongside the report.
struct LevelSummary {
    Index n_x = 0;
    Index n_v = 0;
    long steps = 0;
    double min_f = 0;        ///< min over every step of the run
    double max_mass = 0;
    double max_e_inf = 0;
    bool stability_held = false;
};

struct ConvergenceReport {
    std::vector<std::string> metrics;  ///< column order, e.g. f_linf_q4, f_linf_q5, e_linf
    std::vector<ConvergenceRow> rows;
    std::vector<LevelSummary> levels;
    DtPolicy dt_policy = DtPolicy::Adaptive;
    std::string convention;  ///< how errors were measured
};

/// Metric name for the weighted norm with exponent q ("f_linf_q4").
std::string weighted_metric_name(double q);
inline const std::string kFieldMetric = "e_linf";

/// Samples a 2x node-nested fine field at the coarse nodes (x_i = X_{2i}, v_j = V_{2j}).
Distribution restrict_fine_to_coarse(const Distribution& f_fine, const Grid& grid_fine, const Grid& grid_coarse);

/// Coarse-node sampling of a fine field vector, E_i = E_fine_{2i}.
Field restrict_field(const Field& e_fine, const Grid& grid_fine, const Grid& grid_coarse);

/// ||f_coarse - f_fine_restricted||_{L^inf_q} on the coarse grid.
double pairwise_error(const Distribution& f_coarse, const Distribution& f_fine_restricted, const Grid& grid_coarse,
                      double q);

/// log2(e_coarse / e_fine).
double observed_order(double e_coarse, double e_fine);

/// Runs `levels` grids, each a 2x refinement in x and v of the previous, to t_final and
/// measures consecutive-level differences at the shared nodes.
ConvergenceReport convergence_study(const SolverConfig& base_config, int levels);

}  // namespace vpbgk
