#include "treecap/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "treecap/quadrature.hpp"

namespace treecap {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Online log-sum-exp with a deterministic left-to-right order.
class LogSum {
public:
    void add(double x) {
        if (x == kNegInf) return;
        if (x <= max_) {
            sum_ += std::exp(x - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - x) + 1.0;
            max_ = x;
        }
    }
    double log_value() const { return sum_ > 0.0 ? max_ + std::log(sum_) : kNegInf; }

private:
    double max_ = kNegInf;
    double sum_ = 0.0;
};

// log of integral over (a, b] (a slab inside level n) of the criterion
// integrand for one profile pair.
double log_slab_term(int branching, double p, const RadialProfile& lambda, const RadialProfile& mu,
                     int level, double a, double b, double quad_tol) {
    const double log_k_part = -static_cast<double>(level) * std::log(static_cast<double>(branching)) / (p - 1.0);
    if (is_level_constant(lambda) && is_level_constant(mu)) {
        const double log_l = log_value_at_level(lambda, branching, level);
        const double log_m = log_value_at_level(mu, branching, level);
        return std::log(b - a) + (p * log_l - log_m) / (p - 1.0) + log_k_part;
    }
    const auto value = [&](const RadialProfile& prof, double t) -> double {
        if (const auto* s = std::get_if<SampledProfile>(&prof)) return s->value_at(t);
        return std::exp(log_value_at_level(prof, branching, level));
    };
    const double integral = integrate_adaptive(
                                [&](double t) {
                                    return std::pow(value(lambda, t), p / (p - 1.0)) *
                                           std::pow(value(mu, t), -1.0 / (p - 1.0));
                                },
                                a, b, quad_tol)
                                .value;
    return std::log(integral) + log_k_part;
}

void require_defined_up_to(const RadialProfile& prof, double hi, const char* name) {
    const int needed = static_cast<int>(std::ceil(hi - 1e-12));
    if (needed > max_defined_level(prof))
        throw std::invalid_argument(std::string("rp: ") + name + " profile undefined beyond level " +
                                    std::to_string(max_defined_level(prof)));
}

struct PairSlopes {
    std::optional<double> lambda_slope;
    std::optional<double> mu_slope;
};

PairSlopes pair_slopes(int branching, const RadialProfile& lambda, const RadialProfile& mu) {
    return {level_log_slope(lambda, branching), level_log_slope(mu, branching)};
}

}  // namespace

bool rp_is_finite(const RpValue& v) { return std::holds_alternative<RpFinite>(v); }
bool rp_is_infinite(const RpValue& v) { return std::holds_alternative<RpInfinite>(v); }
bool rp_is_undetermined(const RpValue& v) { return std::holds_alternative<RpUndetermined>(v); }

std::string describe_rp(const RpValue& v) {
    std::ostringstream out;
    if (const auto* f = std::get_if<RpFinite>(&v)) {
        out << "finite " << f->value;
    } else if (const auto* i = std::get_if<RpInfinite>(&v)) {
        out << "infinite (" << i->witness.reason << ")";
    } else {
        const auto& u = std::get<RpUndetermined>(v);
        out << "undetermined (partial " << u.partial << " up to horizon " << u.horizon << ")";
    }
    return out.str();
}

double log_rp_integral(int branching, double p, const RadialProfile& lambda, const RadialProfile& mu,
                       double lo, double hi, double quad_tol) {
    if (!(lo >= 0.0) || !(hi > lo)) throw std::invalid_argument("rp: need 0 <= lo < hi");
    require_defined_up_to(lambda, hi, "lambda");
    require_defined_up_to(mu, hi, "mu");

    LogSum sum;
    int level = static_cast<int>(std::floor(lo)) + 1;
    double a = lo;
    while (a < hi) {
        const double b = std::min(hi, static_cast<double>(level));
        if (b > a) sum.add(log_slab_term(branching, p, lambda, mu, level, a, b, quad_tol));
        a = b;
        ++level;
    }
    return sum.log_value();
}

RpValue classify_rp_pair(int branching, double p, const RadialProfile& lambda, const RadialProfile& mu) {
    const PairSlopes slopes = pair_slopes(branching, lambda, mu);
    const double log_k = std::log(static_cast<double>(branching));

    if (!slopes.lambda_slope || !slopes.mu_slope) {
        const int horizon = std::min(max_defined_level(lambda), max_defined_level(mu));
        const double partial =
            horizon > 0 ? std::exp(log_rp_integral(branching, p, lambda, mu, 0.0, horizon)) : 0.0;
        return RpUndetermined{partial, horizon};
    }

    // log tau_n = A + n * B for the level terms beyond any sampled grid.
    const double rate = (p * (*slopes.lambda_slope) - (*slopes.mu_slope) - log_k) / (p - 1.0);
    if (rate >= -kGeometricRateTol) {
        std::ostringstream reason;
        reason << "level terms have log ratio " << rate << " >= -" << kGeometricRateTol
               << "; the level series is non-summable";
        return RpInfinite{DivergenceWitness{reason.str(), rate}};
    }

    const auto head_levels = [&](const RadialProfile& prof) -> int {
        if (const auto* s = std::get_if<SampledProfile>(&prof))
            return static_cast<int>(std::ceil(s->t_end() - 1e-12));
        return 0;
    };
    const int head = std::max(head_levels(lambda), head_levels(mu));

    // Geometric tail from level head+1 on, plus an explicit head integral.
    const double log_tail_first = log_slab_term(branching, p, lambda, mu, head + 1,
                                                static_cast<double>(head), static_cast<double>(head + 1), 1e-12);
    const double tail = std::exp(log_tail_first) / (1.0 - std::exp(rate));
    const double head_part = head > 0 ? std::exp(log_rp_integral(branching, p, lambda, mu, 0.0, head)) : 0.0;
    return RpFinite{head_part + tail};
}

int level_index(double t) {
    if (t < 0.0) throw std::invalid_argument("level_index: radius must be nonnegative");
    return static_cast<int>(std::ceil(t));
}

double rp_truncated(const WeightConfig& config, double n_lo, double n_hi, double quad_tol) {
    config.validate();
    if (!config.radial())
        throw std::invalid_argument(
            "rp_truncated: the criterion integral is defined for the radial pair; "
            "use rp_subtree for configs with overrides");
    return std::exp(log_rp_integral(config.branching, config.p, config.lambda, config.mu, n_lo, n_hi, quad_tol));
}

RpValue rp_classify(const WeightConfig& config) {
    config.validate();
    if (!config.radial())
        throw std::invalid_argument("rp_classify: requires a radial config; use rp_subtree per side");
    return classify_rp_pair(config.branching, config.p, config.lambda, config.mu);
}

namespace {

// Resolves the single profile pair carried by one side of the root split.
// region -1 is the default pair; otherwise an override index.
int side_region(const WeightConfig& config, SubtreeSide side) {
    const int K = config.branching;
    int region = std::numeric_limits<int>::min();
    const int first_branch = side == SubtreeSide::T1 ? 0 : 1;
    const int last_branch = side == SubtreeSide::T1 ? 0 : K - 1;
    for (int b = first_branch; b <= last_branch; ++b) {
        const int r = config.region_of_edge(VertexId{1, b});
        if (region == std::numeric_limits<int>::min())
            region = r;
        else if (r != region)
            throw std::invalid_argument("rp_subtree: mixed weights inside one subtree");
    }
    // anchors strictly below level 1 inside this side would split the pair
    for (const SubtreeOverride& o : config.overrides) {
        if (o.anchor.level < 2) continue;
        std::int64_t top = o.anchor.index;
        for (int n = o.anchor.level; n > 1; --n) top /= K;
        const bool inside = side == SubtreeSide::T1 ? (top == 0) : (top != 0);
        if (inside) throw std::invalid_argument("rp_subtree: mixed weights inside one subtree");
    }
    return region;
}

}  // namespace

RpValue rp_subtree(const WeightConfig& config, SubtreeSide side) {
    config.validate();
    if (config.branching < 2) throw std::invalid_argument("rp_subtree: requires K >= 2");
    const int region = side_region(config, side);
    const RadialProfile& lambda = config.lambda_of_region(region);
    const RadialProfile& mu = config.mu_of_region(region);
    const double prefactor = side == SubtreeSide::T1
                                 ? 1.0 / static_cast<double>(config.branching)
                                 : static_cast<double>(config.branching - 1) / static_cast<double>(config.branching);

    RpValue base = classify_rp_pair(config.branching, config.p, lambda, mu);
    if (auto* f = std::get_if<RpFinite>(&base)) return RpFinite{prefactor * f->value};
    if (auto* u = std::get_if<RpUndetermined>(&base)) return RpUndetermined{prefactor * u->partial, u->horizon};
    return base;
}

}  // namespace treecap
