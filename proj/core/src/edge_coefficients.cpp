#include "treecap/edge_coefficients.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "treecap/quadrature.hpp"

namespace treecap {

namespace {

EdgeCoefficients compute_for_region(const WeightConfig& config, int region, int level, double quad_tol) {
    const RadialProfile& lambda = config.lambda_of_region(region);
    const RadialProfile& mu = config.mu_of_region(region);
    const double p = config.p;

    EdgeCoefficients out;
    if (is_level_constant(lambda) && is_level_constant(mu)) {
        const double log_l = log_value_at_level(lambda, config.branching, level);
        const double log_m = log_value_at_level(mu, config.branching, level);
        out.log_resistance = (p * log_l - log_m) / (p - 1.0);
        out.mass = std::exp(log_m);
        return out;
    }

    const auto value = [&](const RadialProfile& prof, double t) -> double {
        if (const auto* s = std::get_if<SampledProfile>(&prof)) return s->value_at(t);
        return std::exp(log_value_at_level(prof, config.branching, level));
    };
    const double a = static_cast<double>(level - 1);
    const double b = static_cast<double>(level);
    if (level > max_defined_level(lambda) && !std::get_if<SampledProfile>(&lambda))
        throw std::invalid_argument("edge_coefficients: lambda undefined at level " + std::to_string(level));
    const double r = integrate_adaptive(
                         [&](double t) {
                             return std::pow(value(lambda, t), p / (p - 1.0)) *
                                    std::pow(value(mu, t), -1.0 / (p - 1.0));
                         },
                         a, b, quad_tol)
                         .value;
    out.log_resistance = std::log(r);
    out.mass = integrate_adaptive([&](double t) { return value(mu, t); }, a, b, quad_tol).value;
    return out;
}

}  // namespace

double EdgeCoefficients::resistance() const { return std::exp(log_resistance); }

EdgeCoefficients edge_coefficients(const WeightConfig& config, const TreeTopology& topology,
                                   VertexId edge_child, double quad_tol) {
    config.validate();
    if (!topology.contains(edge_child) || edge_child.level < 1)
        throw std::invalid_argument("edge_coefficients: not an edge of the truncation");
    if (!(quad_tol > 0.0)) throw std::invalid_argument("edge_coefficients: quad_tol must be positive");
    const int region = config.region_of_edge(edge_child);
    return compute_for_region(config, region, edge_child.level, quad_tol);
}

EdgeTable::EdgeTable(TreeTopology topology, WeightConfig config, double quad_tol)
    : topology_(topology), config_(std::move(config)) {
    config_.validate();
    const std::int64_t n = topology_.vertex_count();
    log_resistance_.assign(static_cast<std::size_t>(n), 0.0);
    conductance_.assign(static_cast<std::size_t>(n), 0.0);
    mass_.assign(static_cast<std::size_t>(n), 0.0);

    std::map<std::pair<int, int>, EdgeCoefficients> cache;  // (region, level) -> coefficients
    const double p = config_.p;
    for (std::int64_t slot = 1; slot < n; ++slot) {
        const VertexId v = topology_.vertex_at(slot);
        const int region = config_.region_of_edge(v);
        const auto key = std::make_pair(region, v.level);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, compute_for_region(config_, region, v.level, quad_tol)).first;
        const EdgeCoefficients& c = it->second;
        const std::size_t s = static_cast<std::size_t>(slot);
        log_resistance_[s] = c.log_resistance;
        conductance_[s] = std::exp((1.0 - p) * c.log_resistance);
        mass_[s] = c.mass;
    }
}

double EdgeTable::truncation_mass(int n) const {
    const std::int64_t end = topology_.level_offset(std::min(n, topology_.depth()) + 1);
    double total = 0.0;
    for (std::int64_t slot = 1; slot < end; ++slot) total += mass_[static_cast<std::size_t>(slot)];
    return total;
}

}  // namespace treecap
