#include "treecap/weights.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "treecap/quadrature.hpp"

namespace treecap {

namespace {

int floor_level(double t) {
    return static_cast<int>(std::floor(t + 1e-12));
}

}  // namespace

double SampledProfile::value_at(double t) const {
    if (samples.empty()) throw std::invalid_argument("sampled profile: no samples");
    if (t <= 0.0) return samples.front();
    const double pos = t / step;
    const auto last = static_cast<double>(samples.size() - 1);
    if (pos >= last) {
        if (!tail_rate) return samples.back();
        // geometric continuation per level beyond the grid
        const int grid_level = static_cast<int>(std::ceil(t_end() - 1e-12));
        const int level = static_cast<int>(std::ceil(t - 1e-12));
        return samples.back() * std::exp(-(*tail_rate) * static_cast<double>(level - grid_level));
    }
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    return samples[lo] * (1.0 - frac) + samples[lo + 1] * frac;
}

bool is_level_constant(const RadialProfile& profile) {
    return !std::holds_alternative<SampledProfile>(profile);
}

double log_value_at_level(const RadialProfile& profile, int branching, int level) {
    if (level < 1) throw std::invalid_argument("profile: level must be >= 1");
    if (const auto* c = std::get_if<ConstantProfile>(&profile)) return std::log(c->value);
    if (const auto* e = std::get_if<ExpLevelProfile>(&profile)) return -e->rate * level;
    if (const auto* w = std::get_if<PowLevelOfKProfile>(&profile))
        return w->exponent * static_cast<double>(level) * std::log(static_cast<double>(branching));
    if (const auto* t = std::get_if<PerLevelProfile>(&profile)) {
        if (level > static_cast<int>(t->values.size()))
            throw std::invalid_argument("per-level profile: undefined beyond level " +
                                        std::to_string(t->values.size()));
        return std::log(t->values[static_cast<std::size_t>(level - 1)]);
    }
    const auto& s = std::get<SampledProfile>(profile);
    if (level <= max_defined_level(profile))
        throw std::invalid_argument("sampled profile: not level-constant inside its grid");
    if (!s.tail_rate)
        throw std::invalid_argument("sampled profile: undefined beyond level " +
                                    std::to_string(max_defined_level(profile)) + " (unknown tail)");
    const int grid_level = static_cast<int>(std::ceil(s.t_end() - 1e-12));
    return std::log(s.samples.back()) - (*s.tail_rate) * static_cast<double>(level - grid_level);
}

std::optional<double> level_log_slope(const RadialProfile& profile, int branching) {
    if (std::holds_alternative<ConstantProfile>(profile)) return 0.0;
    if (const auto* e = std::get_if<ExpLevelProfile>(&profile)) return -e->rate;
    if (const auto* w = std::get_if<PowLevelOfKProfile>(&profile))
        return w->exponent * std::log(static_cast<double>(branching));
    if (const auto* s = std::get_if<SampledProfile>(&profile)) {
        if (s->tail_rate) return -(*s->tail_rate);
        return std::nullopt;
    }
    return std::nullopt;  // per-level table: no asymptotic rate
}

std::optional<double> level_log_intercept(const RadialProfile& profile, int branching) {
    if (const auto* c = std::get_if<ConstantProfile>(&profile)) return std::log(c->value);
    if (std::holds_alternative<ExpLevelProfile>(profile)) return 0.0;
    if (std::holds_alternative<PowLevelOfKProfile>(profile)) return 0.0;
    (void)branching;
    return std::nullopt;
}

int max_defined_level(const RadialProfile& profile) {
    if (const auto* t = std::get_if<PerLevelProfile>(&profile))
        return static_cast<int>(t->values.size());
    if (const auto* s = std::get_if<SampledProfile>(&profile)) {
        if (s->tail_rate) return std::numeric_limits<int>::max();
        return floor_level(s->t_end());
    }
    return std::numeric_limits<int>::max();
}

double profile_level_integral(const RadialProfile& profile, int branching, int level, double quad_tol) {
    if (const auto* s = std::get_if<SampledProfile>(&profile)) {
        const double a = static_cast<double>(level - 1);
        const double b = static_cast<double>(level);
        if (b > s->t_end() + 1e-12 && !s->tail_rate)
            throw std::invalid_argument("sampled profile: undefined beyond its grid (unknown tail)");
        return integrate_adaptive([&](double t) { return s->value_at(t); }, a, b, quad_tol).value;
    }
    return std::exp(log_value_at_level(profile, branching, level));
}

std::string describe_profile(const RadialProfile& profile) {
    std::ostringstream out;
    if (const auto* c = std::get_if<ConstantProfile>(&profile)) {
        out << "constant " << c->value;
    } else if (const auto* e = std::get_if<ExpLevelProfile>(&profile)) {
        out << "explevel " << e->rate;
    } else if (const auto* w = std::get_if<PowLevelOfKProfile>(&profile)) {
        out << "powlevelk " << w->exponent;
    } else if (const auto* t = std::get_if<PerLevelProfile>(&profile)) {
        out << "perlevel";
        for (double v : t->values) out << ' ' << v;
    } else {
        const auto& s = std::get<SampledProfile>(profile);
        out << "sampled step=" << s.step;
        if (s.tail_rate)
            out << " tail=rate:" << *s.tail_rate;
        else
            out << " tail=unknown";
        out << " (" << s.samples.size() << " samples)";
    }
    return out.str();
}

void validate_profile(const RadialProfile& profile, const std::string& field) {
    if (const auto* c = std::get_if<ConstantProfile>(&profile)) {
        if (!(c->value > 0.0)) throw std::invalid_argument(field + ": constant profile must be positive");
        return;
    }
    if (const auto* e = std::get_if<ExpLevelProfile>(&profile)) {
        if (!std::isfinite(e->rate)) throw std::invalid_argument(field + ": explevel rate must be finite");
        return;
    }
    if (const auto* w = std::get_if<PowLevelOfKProfile>(&profile)) {
        if (!std::isfinite(w->exponent)) throw std::invalid_argument(field + ": powlevelk exponent must be finite");
        return;
    }
    if (const auto* t = std::get_if<PerLevelProfile>(&profile)) {
        if (t->values.empty()) throw std::invalid_argument(field + ": per-level table must be nonempty");
        for (double v : t->values)
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument(field + ": per-level table values must be positive and finite");
        return;
    }
    const auto& s = std::get<SampledProfile>(profile);
    if (!(s.step > 0.0)) throw std::invalid_argument(field + ": sampled profile step must be positive");
    if (s.samples.size() < 2) throw std::invalid_argument(field + ": sampled profile needs at least two samples");
    for (double v : s.samples)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(field + ": sampled profile values must be positive and finite");
    if (s.tail_rate) {
        // a declared tail continues per level; require the grid to end on a level boundary
        const double t_end = s.t_end();
        if (std::abs(t_end - std::round(t_end)) > 1e-9)
            throw std::invalid_argument(field + ": a declared tail requires the sample grid to end on an integer radius");
    }
}

void WeightConfig::validate() const {
    if (branching < 1) throw std::invalid_argument("config: branching K must be >= 1");
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("config: p must be finite and > 1");
    validate_profile(lambda, "lambda");
    validate_profile(mu, "mu");
    for (std::size_t i = 0; i < overrides.size(); ++i) {
        const SubtreeOverride& o = overrides[i];
        if (o.anchor.level < 1)
            throw std::invalid_argument("config: override anchors must have level >= 1 (adjust the defaults instead)");
        std::int64_t width = 1;
        for (int n = 0; n < o.anchor.level; ++n) width *= branching;
        if (o.anchor.index < 0 || o.anchor.index >= width)
            throw std::invalid_argument("config: override anchor index out of range for its level");
        validate_profile(o.lambda, "override lambda");
        validate_profile(o.mu, "override mu");
        for (std::size_t j = 0; j < i; ++j) {
            const VertexId a = overrides[j].anchor;
            const VertexId b = o.anchor;
            const VertexId lo = a.level <= b.level ? a : b;
            const VertexId hi = a.level <= b.level ? b : a;
            std::int64_t idx = hi.index;
            for (int n = hi.level; n > lo.level; --n) idx /= branching;
            if (idx == lo.index)
                throw std::invalid_argument("config: override anchors must be distinct and non-nested");
        }
    }
}

int WeightConfig::region_of_edge(VertexId edge_child) const {
    for (std::size_t i = 0; i < overrides.size(); ++i) {
        const VertexId a = overrides[i].anchor;
        if (a.level > edge_child.level) continue;
        std::int64_t idx = edge_child.index;
        for (int n = edge_child.level; n > a.level; --n) idx /= branching;
        if (idx == a.index) return static_cast<int>(i);
    }
    return -1;
}

}  // namespace treecap
