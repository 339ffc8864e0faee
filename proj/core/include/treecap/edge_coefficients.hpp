#pragma once

#include <cstdint>
#include <vector>

#include "treecap/tree.hpp"
#include "treecap/weights.hpp"

namespace treecap {

/// Network coefficients of one edge at level n:
///   resistance r_e = integral over (n-1, n] of (lambda^p / mu)^{1/(p-1)},
///   mass       m_e = integral over (n-1, n] of mu.
/// The p-energy of a potential whose endpoint gap is du then reduces to
/// |du|^p / r_e^{p-1} (the one-dimensional minimizer inside the edge).
/// Resistances are kept in log form so that level-dependent factors
/// survive deep truncations.
struct EdgeCoefficients {
    double log_resistance = 0.0;
    double mass = 0.0;

    double resistance() const;
};

/// Coefficients of the edge whose child endpoint is `edge_child`.
/// Closed-form for level-constant profile families; adaptive quadrature at
/// relative tolerance `quad_tol` otherwise.
EdgeCoefficients edge_coefficients(const WeightConfig& config, const TreeTopology& topology,
                                   VertexId edge_child, double quad_tol = 1e-10);

/// Materialized per-edge table for a whole truncation. Edge slots are
/// indexed by the linear index of the child endpoint (slot 0, the root, is
/// unused). Values are cached per (region, level), so radial configs get
/// bit-identical coefficients across a level.
class EdgeTable {
public:
    EdgeTable(TreeTopology topology, WeightConfig config, double quad_tol = 1e-10);

    const TreeTopology& topology() const { return topology_; }
    const WeightConfig& config() const { return config_; }
    double p() const { return config_.p; }

    double log_resistance(std::int64_t edge_slot) const { return log_resistance_[static_cast<std::size_t>(edge_slot)]; }
    /// r_e^{1-p}, the weight in front of |du|^p in the edge energy.
    double conductance(std::int64_t edge_slot) const { return conductance_[static_cast<std::size_t>(edge_slot)]; }
    double mass(std::int64_t edge_slot) const { return mass_[static_cast<std::size_t>(edge_slot)]; }

    /// Sum of edge masses over all edges with child level <= n (the measure
    /// of X^n).
    double truncation_mass(int n) const;

private:
    TreeTopology topology_;
    WeightConfig config_;
    std::vector<double> log_resistance_;
    std::vector<double> conductance_;
    std::vector<double> mass_;
};

}  // namespace treecap
