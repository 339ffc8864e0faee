#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "treecap/edge_coefficients.hpp"
#include "treecap/tree.hpp"

namespace treecap {

/// Vertex potential on a truncation, together with its p-energy
///   sum over edges of |du|^p / r_e^{p-1}
/// and the flux residual the solver achieved. Values inside an edge are
/// reconstructed affinely in the cumulative-resistance parameter, which is
/// the one-dimensional energy minimizer between the endpoint values.
struct PotentialField {
    TreeTopology topology;
    std::vector<double> values;
    double energy = 0.0;
    double residual = 0.0;

    double at(VertexId v) const { return values[static_cast<std::size_t>(topology.linear_index(v))]; }

    /// Value at the point of the edge (parent -> edge_child) sitting at
    /// `resistance_fraction` in [0, 1] of the edge's cumulative resistance.
    double interior_value(VertexId edge_child, double resistance_fraction) const;

    /// Restriction to a shallower truncation (prefix copy of values).
    PotentialField restricted_to(int depth) const;
};

/// Dirichlet problem on a weighted truncation: minimize the p-energy over
/// the free vertices with the boundary vertices pinned. The boundary set
/// must be nonempty; on a tree every free vertex then reaches a boundary
/// vertex through free vertices, so the problem is well posed and the
/// minimizer is unique for p > 1 (strict convexity).
struct DirichletProblem {
    std::shared_ptr<const EdgeTable> edges;
    std::vector<std::uint8_t> is_boundary;
    std::vector<double> boundary_values;

    const TreeTopology& topology() const { return edges->topology(); }
    double p() const { return edges->p(); }

    /// Pins `plate_one` to value_one and `plate_zero` to value_zero; all
    /// other vertices are free.
    static DirichletProblem from_plates(std::shared_ptr<const EdgeTable> edges, const VertexSet& plate_one,
                                        double value_one, const VertexSet& plate_zero, double value_zero);

    void validate() const;
};

enum class SweepMode {
    GaussSeidel,  // in-place sweeps, the default
    Jacobi        // snapshot sweeps; same limit within tolerance, parallelizable
};

struct SolveOptions {
    double tol = 1e-10;     // convergence threshold on the max flux residual
    int max_sweeps = 20000;
    SweepMode mode = SweepMode::GaussSeidel;
};

/// Raised when the sweep budget runs out; carries the best field reached
/// and its residual so callers can diagnose instead of guessing.
struct SolveError : std::runtime_error {
    SolveError(const std::string& what, PotentialField best_field, double best_residual, int sweeps)
        : std::runtime_error(what), best(std::move(best_field)), residual(best_residual), sweeps(sweeps) {}
    PotentialField best;
    double residual;
    int sweeps;
};

/// Nonlinear Gauss-Seidel: each free-vertex update solves the scalar flux
/// balance at that vertex, which is strictly monotone in the vertex value,
/// by bracketed bisection to 1e-14 followed by one Newton polish step.
/// Sweep order is level-major, index-minor, fixed, so results are
/// deterministic. Convergence is judged on the flux residual. For p close
/// to 1 (p < 1.1) the scalar flux map is nearly vertical near the root;
/// the sweep budget is raised internally and accuracy degrades gracefully.
PotentialField solve_dirichlet(const DirichletProblem& problem, const SolveOptions& options = {});
PotentialField solve_dirichlet(const DirichletProblem& problem, double tol, int max_sweeps);

/// Per-vertex p-flux imbalance
///   sum over neighbors w of sign(u_w - u_v) |u_w - u_v|^{p-1} / r_e^{p-1},
/// zero (within tolerance) at every free vertex of an exact solution.
struct FluxResidual {
    std::vector<double> per_vertex;  // 0 at boundary vertices
    double max_abs = 0.0;
};

FluxResidual flux_residual(const PotentialField& field, const DirichletProblem& problem);

/// p-energy of a value vector against an edge table.
double field_energy(const std::vector<double>& values, const EdgeTable& edges);

/// Direct test of the variational inequality: true iff the energy of
/// `field` on the support region of (trial - field) does not exceed the
/// energy of `trial` there. The perturbation must be nonnegative and
/// supported on free vertices.
bool superharmonic_check(const PotentialField& field, const DirichletProblem& problem,
                         const PotentialField& trial);

struct CaccioppoliResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// Discrete Caccioppoli-type inequality for a positive p-superharmonic f
/// and a cutoff 0 <= phi <= 1 vanishing on the boundary plates:
///   sum_e f_mid^{-p} phi_mid^p |df|^p / r_e^{p-1}
///     <= (p/(p-1))^p * energy(phi),
/// with edge-midpoint values of f and phi. Rejects cutoffs that do not
/// vanish on the boundary and f <= 0 anywhere on the support.
CaccioppoliResult caccioppoli_check(const PotentialField& f, const PotentialField& phi,
                                    const DirichletProblem& problem);

}  // namespace treecap
