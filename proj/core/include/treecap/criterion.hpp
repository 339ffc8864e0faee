#pragma once

#include <string>
#include <variant>

#include "treecap/weights.hpp"

namespace treecap {

/// Evidence for a divergent criterion integral: the per-level log ratio of
/// consecutive terms (>= -1e-12 means the level series cannot be summed).
struct DivergenceWitness {
    std::string reason;
    double level_log_ratio = 0.0;
};

struct RpFinite {
    double value = 0.0;
};
struct RpInfinite {
    DivergenceWitness witness;
};
struct RpUndetermined {
    double partial = 0.0;  // integral up to `horizon`
    int horizon = 0;
};

/// Value of the criterion integral R_p: finite with its value, infinite
/// with a symbolic witness, or undetermined with the partial integral up
/// to a horizon. Divergence is only ever decided symbolically; profiles
/// with unknown tails stay undetermined.
using RpValue = std::variant<RpFinite, RpInfinite, RpUndetermined>;

bool rp_is_finite(const RpValue& v);
bool rp_is_infinite(const RpValue& v);
bool rp_is_undetermined(const RpValue& v);
std::string describe_rp(const RpValue& v);

/// Geometric level series whose ratio is within this tolerance of 1 are
/// treated as non-summable: at such rates no finite horizon distinguishes
/// the integral from a divergent one, and the boundary family is exactly
/// ratio 1 up to floating-point rounding.
inline constexpr double kGeometricRateTol = 1e-12;

/// log of the truncated criterion integral
///   integral_{lo}^{hi} lambda^{p/(p-1)} mu^{1/(1-p)} K^{j(t)/(1-p)} dt
/// for one radial profile pair, accumulated level by level in log form.
double log_rp_integral(int branching, double p, const RadialProfile& lambda, const RadialProfile& mu,
                       double lo, double hi, double quad_tol = 1e-10);

/// Classification of the full-line criterion integral for one profile pair.
RpValue classify_rp_pair(int branching, double p, const RadialProfile& lambda, const RadialProfile& mu);

/// The level function: smallest integer >= t (so 0 at t = 0). Rejects
/// negative radii.
int level_index(double t);

/// Truncated criterion integral of a radial config over [n_lo, n_hi].
/// Additive over adjacent intervals. Non-radial configs are rejected
/// (apply the subtree decomposition instead).
double rp_truncated(const WeightConfig& config, double n_lo, double n_hi, double quad_tol = 1e-10);

/// Decides R_p for a radial config: closed-form value when the level
/// series converges, a divergence witness when it does not, undetermined
/// (with partial integral and horizon) when a tail is unknown.
RpValue rp_classify(const WeightConfig& config);

enum class SubtreeSide { T1, Complement };

/// Criterion integral of the distinguished subtree T_1 (weight (1/K) R_p)
/// or of its complement (weight (K-1)/K R_p), evaluated with the profile
/// pair that the subtree actually carries. Requires K >= 2 and a single
/// pair on the designated side.
RpValue rp_subtree(const WeightConfig& config, SubtreeSide side);

}  // namespace treecap
