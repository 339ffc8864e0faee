#include "treecap/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace treecap {

namespace {

inline double signed_power(double s, double q) {
    if (s > 0.0) return std::pow(s, q);
    if (s < 0.0) return -std::pow(-s, q);
    return 0.0;
}

// Neighbor values and edge conductances around one vertex.
struct Star {
    std::vector<double> value;
    std::vector<double> conductance;

    void clear() {
        value.clear();
        conductance.clear();
    }
};

void gather_star(const TreeTopology& topo, const EdgeTable& edges, const std::vector<double>& u,
                 VertexId v, std::int64_t linear, Star& star) {
    star.clear();
    if (v.level > 0) {
        star.value.push_back(u[static_cast<std::size_t>(topo.linear_index(topo.parent(v)))]);
        star.conductance.push_back(edges.conductance(linear));
    }
    if (v.level < topo.depth()) {
        for (int c = 0; c < topo.branching(); ++c) {
            const std::int64_t child = topo.linear_index(topo.child(v, c));
            star.value.push_back(u[static_cast<std::size_t>(child)]);
            star.conductance.push_back(edges.conductance(child));
        }
    }
}

double star_flux(const Star& star, double x, double p) {
    double flux = 0.0;
    for (std::size_t i = 0; i < star.value.size(); ++i)
        flux += star.conductance[i] * signed_power(star.value[i] - x, p - 1.0);
    return flux;
}

// Solves the scalar flux balance at one vertex. The flux is strictly
// decreasing in x with a root inside [min neighbor, max neighbor].
double scalar_update(const Star& star, double p) {
    if (star.value.empty()) return 0.0;
    if (p == 2.0) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < star.value.size(); ++i) {
            num += star.conductance[i] * star.value[i];
            den += star.conductance[i];
        }
        return num / den;
    }
    double lo = star.value[0], hi = star.value[0];
    for (double v : star.value) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo <= 0.0) return lo;

    for (int iter = 0; iter < 64 && hi - lo > 1e-14; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (star_flux(star, mid, p) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);

    // one Newton polish step, kept only if it stays bracketed and improves
    const double fx = star_flux(star, x, p);
    double slope = 0.0;
    for (std::size_t i = 0; i < star.value.size(); ++i) {
        const double gap = std::abs(star.value[i] - x);
        if (gap > 0.0) slope -= star.conductance[i] * (p - 1.0) * std::pow(gap, p - 2.0);
    }
    if (std::isfinite(slope) && slope < 0.0) {
        const double candidate = x - fx / slope;
        if (candidate >= lo && candidate <= hi && std::abs(star_flux(star, candidate, p)) <= std::abs(fx))
            x = candidate;
    }
    return x;
}

}  // namespace

double PotentialField::interior_value(VertexId edge_child, double resistance_fraction) const {
    if (edge_child.level < 1) throw std::invalid_argument("interior_value: the root is not an edge");
    if (resistance_fraction < 0.0 || resistance_fraction > 1.0)
        throw std::invalid_argument("interior_value: fraction must lie in [0, 1]");
    const double a = at(topology.parent(edge_child));
    const double b = at(edge_child);
    return a + resistance_fraction * (b - a);
}

PotentialField PotentialField::restricted_to(int depth) const {
    if (depth < 0 || depth > topology.depth())
        throw std::invalid_argument("restricted_to: depth outside the truncation");
    PotentialField out;
    out.topology = build_truncation(topology.branching(), depth);
    out.values.assign(values.begin(), values.begin() + out.topology.vertex_count());
    out.energy = energy;
    out.residual = residual;
    return out;
}

DirichletProblem DirichletProblem::from_plates(std::shared_ptr<const EdgeTable> edges,
                                               const VertexSet& plate_one, double value_one,
                                               const VertexSet& plate_zero, double value_zero) {
    DirichletProblem problem;
    const TreeTopology& topo = edges->topology();
    const std::int64_t n = topo.vertex_count();
    problem.edges = std::move(edges);
    problem.is_boundary.assign(static_cast<std::size_t>(n), 0);
    problem.boundary_values.assign(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
        const VertexId v = topo.vertex_at(i);
        const bool one = plate_one.contains(topo, v);
        const bool zero = plate_zero.contains(topo, v);
        if (one && zero) throw std::invalid_argument("from_plates: the plates must be disjoint");
        if (one || zero) {
            problem.is_boundary[static_cast<std::size_t>(i)] = 1;
            problem.boundary_values[static_cast<std::size_t>(i)] = one ? value_one : value_zero;
        }
    }
    problem.validate();
    return problem;
}

void DirichletProblem::validate() const {
    if (!edges) throw std::invalid_argument("dirichlet: missing edge table");
    const std::size_t n = static_cast<std::size_t>(topology().vertex_count());
    if (is_boundary.size() != n || boundary_values.size() != n)
        throw std::invalid_argument("dirichlet: boundary arrays do not match the truncation");
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_boundary[i]) continue;
        any = true;
        if (!std::isfinite(boundary_values[i]))
            throw std::invalid_argument("dirichlet: boundary values must be finite");
    }
    if (!any) throw std::invalid_argument("dirichlet: the boundary set must be nonempty");
}

PotentialField solve_dirichlet(const DirichletProblem& problem, const SolveOptions& options) {
    problem.validate();
    if (!(options.tol > 0.0)) throw std::invalid_argument("solve_dirichlet: tol must be positive");
    const TreeTopology& topo = problem.topology();
    const EdgeTable& edges = *problem.edges;
    const double p = problem.p();
    const std::int64_t n = topo.vertex_count();

    int sweep_budget = options.max_sweeps;
    if (p < 1.1) sweep_budget *= 4;  // nearly vertical scalar flux branch

    // start from the boundary mean; free values are then already inside the
    // maximum-principle bounds
    double mean = 0.0;
    std::int64_t boundary_count = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        if (problem.is_boundary[static_cast<std::size_t>(i)]) {
            mean += problem.boundary_values[static_cast<std::size_t>(i)];
            ++boundary_count;
        }
    }
    mean /= static_cast<double>(boundary_count);

    std::vector<double> u(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        u[static_cast<std::size_t>(i)] =
            problem.is_boundary[static_cast<std::size_t>(i)] ? problem.boundary_values[static_cast<std::size_t>(i)] : mean;

    std::vector<double> next;
    if (options.mode == SweepMode::Jacobi) next = u;

    Star star;
    double best_residual = std::numeric_limits<double>::infinity();
    int sweeps = 0;
    for (; sweeps < sweep_budget; ++sweeps) {
        std::vector<double>& target = options.mode == SweepMode::Jacobi ? next : u;
        for (std::int64_t i = 0; i < n; ++i) {
            if (problem.is_boundary[static_cast<std::size_t>(i)]) continue;
            gather_star(topo, edges, u, topo.vertex_at(i), i, star);
            target[static_cast<std::size_t>(i)] = scalar_update(star, p);
        }
        if (options.mode == SweepMode::Jacobi) u = next;

        double max_residual = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            if (problem.is_boundary[static_cast<std::size_t>(i)]) continue;
            gather_star(topo, edges, u, topo.vertex_at(i), i, star);
            max_residual = std::max(max_residual, std::abs(star_flux(star, u[static_cast<std::size_t>(i)], p)));
        }
        best_residual = max_residual;
        if (max_residual <= options.tol) {
            PotentialField field{topo, std::move(u), 0.0, max_residual};
            field.energy = field_energy(field.values, edges);
            return field;
        }
    }

    PotentialField best{topo, std::move(u), 0.0, best_residual};
    best.energy = field_energy(best.values, edges);
    throw SolveError("solve_dirichlet: sweep budget exhausted before the flux residual reached tol (best " +
                         std::to_string(best_residual) + ")",
                     std::move(best), best_residual, sweeps);
}

PotentialField solve_dirichlet(const DirichletProblem& problem, double tol, int max_sweeps) {
    SolveOptions options;
    options.tol = tol;
    options.max_sweeps = max_sweeps;
    return solve_dirichlet(problem, options);
}

FluxResidual flux_residual(const PotentialField& field, const DirichletProblem& problem) {
    problem.validate();
    const TreeTopology& topo = problem.topology();
    if (field.values.size() != static_cast<std::size_t>(topo.vertex_count()))
        throw std::invalid_argument("flux_residual: field does not match the truncation");
    const double p = problem.p();

    FluxResidual out;
    out.per_vertex.assign(field.values.size(), 0.0);
    Star star;
    for (std::int64_t i = 0; i < topo.vertex_count(); ++i) {
        if (problem.is_boundary[static_cast<std::size_t>(i)]) continue;
        gather_star(topo, *problem.edges, field.values, topo.vertex_at(i), i, star);
        const double r = star_flux(star, field.values[static_cast<std::size_t>(i)], p);
        out.per_vertex[static_cast<std::size_t>(i)] = r;
        out.max_abs = std::max(out.max_abs, std::abs(r));
    }
    return out;
}

double field_energy(const std::vector<double>& values, const EdgeTable& edges) {
    const TreeTopology& topo = edges.topology();
    const double p = edges.p();
    double energy = 0.0;
    for (std::int64_t slot = 1; slot < topo.vertex_count(); ++slot) {
        const VertexId v = topo.vertex_at(slot);
        const double du = values[static_cast<std::size_t>(slot)] -
                          values[static_cast<std::size_t>(topo.linear_index(topo.parent(v)))];
        if (du != 0.0) energy += edges.conductance(slot) * std::pow(std::abs(du), p);
    }
    return energy;
}

bool superharmonic_check(const PotentialField& field, const DirichletProblem& problem,
                         const PotentialField& trial) {
    problem.validate();
    const TreeTopology& topo = problem.topology();
    const std::size_t n = static_cast<std::size_t>(topo.vertex_count());
    if (field.values.size() != n || trial.values.size() != n)
        throw std::invalid_argument("superharmonic_check: field sizes do not match the truncation");

    std::vector<double> bump(n);
    for (std::size_t i = 0; i < n; ++i) {
        bump[i] = trial.values[i] - field.values[i];
        if (bump[i] < -1e-12)
            throw std::invalid_argument("superharmonic_check: the perturbation must be nonnegative");
        if (problem.is_boundary[i] && std::abs(bump[i]) > 1e-12)
            throw std::invalid_argument("superharmonic_check: the perturbation must be supported on free vertices");
    }

    const double p = problem.p();
    double lhs = 0.0, rhs = 0.0;
    for (std::int64_t slot = 1; slot < topo.vertex_count(); ++slot) {
        const VertexId v = topo.vertex_at(slot);
        const std::size_t a = static_cast<std::size_t>(topo.linear_index(topo.parent(v)));
        const std::size_t b = static_cast<std::size_t>(slot);
        if (bump[a] == 0.0 && bump[b] == 0.0) continue;  // edge outside the support
        const double c = problem.edges->conductance(slot);
        lhs += c * std::pow(std::abs(field.values[b] - field.values[a]), p);
        rhs += c * std::pow(std::abs(trial.values[b] - trial.values[a]), p);
    }
    return lhs <= rhs * (1.0 + 1e-12) + 1e-300;
}

CaccioppoliResult caccioppoli_check(const PotentialField& f, const PotentialField& phi,
                                    const DirichletProblem& problem) {
    problem.validate();
    const TreeTopology& topo = problem.topology();
    const std::size_t n = static_cast<std::size_t>(topo.vertex_count());
    if (f.values.size() != n || phi.values.size() != n)
        throw std::invalid_argument("caccioppoli_check: field sizes do not match the truncation");

    for (std::size_t i = 0; i < n; ++i) {
        if (phi.values[i] < -1e-12 || phi.values[i] > 1.0 + 1e-12)
            throw std::invalid_argument("caccioppoli_check: the cutoff must satisfy 0 <= phi <= 1");
        if (problem.is_boundary[i] && std::abs(phi.values[i]) > 1e-12)
            throw std::invalid_argument(
                "caccioppoli_check: the cutoff must vanish on the boundary plates (compact support)");
    }

    const double p = problem.p();
    double lhs = 0.0, rhs = 0.0;
    for (std::int64_t slot = 1; slot < topo.vertex_count(); ++slot) {
        const VertexId v = topo.vertex_at(slot);
        const std::size_t a = static_cast<std::size_t>(topo.linear_index(topo.parent(v)));
        const std::size_t b = static_cast<std::size_t>(slot);
        const double c = problem.edges->conductance(slot);
        const double dphi = phi.values[b] - phi.values[a];
        if (dphi != 0.0) rhs += c * std::pow(std::abs(dphi), p);

        const double phi_mid = 0.5 * (phi.values[a] + phi.values[b]);
        if (phi_mid <= 0.0) continue;
        if (f.values[a] <= 0.0 || f.values[b] <= 0.0)
            throw std::invalid_argument("caccioppoli_check: f must be strictly positive on the support of phi");
        const double f_mid = 0.5 * (f.values[a] + f.values[b]);
        const double df = f.values[b] - f.values[a];
        if (df != 0.0)
            lhs += std::pow(f_mid, -p) * std::pow(phi_mid, p) * c * std::pow(std::abs(df), p);
    }
    rhs *= std::pow(p / (p - 1.0), p);
    return {lhs, rhs, lhs <= rhs * (1.0 + 1e-9)};
}

}  // namespace treecap
