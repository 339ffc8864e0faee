#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "treecap/tree.hpp"

namespace treecap {

// Radial density profiles. A profile assigns a positive value to every
// radius t >= 0; the first three families depend on t only through the
// level function j(t) = ceil(t), so their integrals over unit intervals
// are closed-form.

struct ConstantProfile {
    double value = 1.0;
};

/// value(t) = exp(-rate * j(t))
struct ExpLevelProfile {
    double rate = 0.0;
};

/// value(t) = K^(exponent * j(t)); resolved against the config's K.
struct PowLevelOfKProfile {
    double exponent = 0.0;
};

/// One positive value per level 1..m; undefined beyond the table.
struct PerLevelProfile {
    std::vector<double> values;
};

/// Positive samples on a uniform grid t = 0, step, 2*step, ...; evaluated
/// by linear interpolation. `tail_rate`, when set, declares the behavior
/// beyond the grid: value continues geometrically per level with
/// value(level L + k) = (last sample) * exp(-tail_rate * k). Without it the
/// tail is unknown and any question about large radii stays undetermined.
struct SampledProfile {
    double step = 1.0;
    std::vector<double> samples;
    std::optional<double> tail_rate;

    double t_end() const { return step * static_cast<double>(samples.size() - 1); }
    double value_at(double t) const;
};

using RadialProfile =
    std::variant<ConstantProfile, ExpLevelProfile, PowLevelOfKProfile, PerLevelProfile, SampledProfile>;

/// True for families whose value depends on t only through j(t).
bool is_level_constant(const RadialProfile& profile);

/// log value on the level-n slab (n-1, n], for level-constant families
/// (including sampled profiles past their grid when a tail is declared).
/// Throws when the profile is undefined at that level.
double log_value_at_level(const RadialProfile& profile, int branching, int level);

/// Slope b of log value(level) = a + b*level for the symbolic families
/// (and for sampled tails); nullopt when the asymptotic rate is unknown.
std::optional<double> level_log_slope(const RadialProfile& profile, int branching);

/// Intercept a of the symbolic representation above; only meaningful when
/// level_log_slope is defined and the profile is symbolic from level 1 on.
std::optional<double> level_log_intercept(const RadialProfile& profile, int branching);

/// Largest level n such that the profile is defined on all of (0, n];
/// INT_MAX for profiles defined at every radius.
int max_defined_level(const RadialProfile& profile);

/// integral of the profile over the level-n slab (n-1, n]; closed form for
/// level-constant families, adaptive quadrature for sampled ones.
double profile_level_integral(const RadialProfile& profile, int branching, int level, double quad_tol = 1e-10);

std::string describe_profile(const RadialProfile& profile);

/// Subtree reweighting: the pair (lambda, mu) applies to the whole subtree
/// below `anchor`, starting with the anchor's incoming edge.
struct SubtreeOverride {
    VertexId anchor;
    RadialProfile lambda;
    RadialProfile mu;
};

/// Weighted K-regular tree: branching K, exponent p > 1, the radial pair
/// (lambda, mu), and optional per-subtree overrides. Overrides must be
/// anchored at distinct, non-nested vertices of level >= 1 so that every
/// point of the tree resolves to exactly one profile pair.
struct WeightConfig {
    int branching = 2;
    double p = 2.0;
    RadialProfile lambda = ConstantProfile{1.0};
    RadialProfile mu = ConstantProfile{1.0};
    std::vector<SubtreeOverride> overrides;

    bool radial() const { return overrides.empty(); }

    /// Validates p > 1, K >= 1, profile positivity/definedness, and the
    /// override anchoring rules. Throws std::invalid_argument on violation.
    void validate() const;

    /// Index into `overrides` of the region owning the edge with child
    /// endpoint `edge_child`, or -1 for the default region.
    int region_of_edge(VertexId edge_child) const;

    const RadialProfile& lambda_of_region(int region) const {
        return region < 0 ? lambda : overrides[static_cast<std::size_t>(region)].lambda;
    }
    const RadialProfile& mu_of_region(int region) const {
        return region < 0 ? mu : overrides[static_cast<std::size_t>(region)].mu;
    }
};

void validate_profile(const RadialProfile& profile, const std::string& field);

}  // namespace treecap
