#pragma once

// Central table of numerical tolerances and budgets. Every module reads its
// defaults from here; callers override through the per-operation option
// structs.

namespace kreinlab::tol {

// Dense eigensolvers.
inline constexpr int jacobi_max_sweeps = 30;
inline constexpr int ql_max_iterations = 60;  // per eigenvalue

// ODE integration: fixed-step RK4 with step-halving verification.
inline constexpr double ode_halving_rel = 1e-11;
inline constexpr double ode_step_target = 1e-13;  // heuristic step selection
inline constexpr double ode_scan_target = 1e-6;   // coarse scans only
inline constexpr int ode_min_steps = 64;
inline constexpr int ode_max_steps = 1 << 24;
inline constexpr double ode_rescale_threshold = 1e100;

// Root finding.
inline constexpr double root_rel = 1e-10;
inline constexpr double coarse_root_window = 1e-5;  // relative half-width around a coarse root
inline constexpr int root_scan_density = 64;  // per expected eigenvalue gap
inline constexpr double tangential_ratio = 1e-8;

// Quadrature.
inline constexpr double quad_rel = 1e-11;
inline constexpr int quad_max_panels = 1 << 16;

// Boundary determinants.
inline constexpr double krein_gap = 1e-6;  // half-width excluded around λ = a
inline constexpr double dirichlet_singular = 1e-13;
inline constexpr double dtn_symmetry_guard = 1e-6;

// Grid model and spectral toolkit.
inline constexpr double zero_eigen_guard = 1e-12;
inline constexpr double kyfan_rel = 1e-10;
inline constexpr double shift_collision = 1e-9;

// Lower-bound certification.
inline constexpr double certificate_bisect_rel = 1e-10;
inline constexpr double certificate_backoff_rel = 1e-7;

}  // namespace kreinlab::tol
