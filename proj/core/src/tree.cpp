#include "treecap/tree.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace treecap {

namespace {

// Cap so that vertex counts, prefix sums and per-vertex allocations all fit
// comfortably in signed 64-bit arithmetic.
constexpr std::int64_t kMaxVertexCount = std::int64_t{1} << 62;

// Returns the vertex count of X^depth, or -1 on overflow of the cap.
std::int64_t checked_vertex_count(int branching, int depth) {
    std::int64_t count = 1;
    std::int64_t level = 1;
    for (int n = 1; n <= depth; ++n) {
        if (level > kMaxVertexCount / branching) return -1;
        level *= branching;
        if (count > kMaxVertexCount - level) return -1;
        count += level;
    }
    return count;
}

}  // namespace

std::int64_t TreeTopology::level_count(int level) const {
    std::int64_t c = 1;
    for (int n = 0; n < level; ++n) c *= branching_;
    return c;
}

std::int64_t TreeTopology::level_offset(int level) const {
    if (branching_ == 1) return level;
    // (K^level - 1) / (K - 1)
    std::int64_t power = 1;
    for (int n = 0; n < level; ++n) power *= branching_;
    return (power - 1) / (branching_ - 1);
}

VertexId TreeTopology::vertex_at(std::int64_t linear) const {
    int level = 0;
    std::int64_t count = 1;
    std::int64_t offset = 0;
    while (linear >= offset + count) {
        offset += count;
        count *= branching_;
        ++level;
    }
    return VertexId{level, linear - offset};
}

bool TreeTopology::contains(VertexId v) const {
    return v.level >= 0 && v.level <= depth_ && v.index >= 0 && v.index < level_count(v.level);
}

VertexId TreeTopology::parent(VertexId v) const {
    if (v.level <= 0) throw std::invalid_argument("tree: the root has no parent");
    return VertexId{v.level - 1, v.index / branching_};
}

VertexId TreeTopology::child(VertexId v, int c) const {
    if (c < 0 || c >= branching_) throw std::invalid_argument("tree: child slot out of range");
    if (v.level >= depth_) throw std::invalid_argument("tree: vertex at truncation depth has no children");
    return VertexId{v.level + 1, v.index * branching_ + c};
}

VertexId TreeTopology::ancestor_at(VertexId v, int level) const {
    if (level < 0 || level > v.level) throw std::invalid_argument("tree: ancestor level out of range");
    std::int64_t index = v.index;
    for (int n = v.level; n > level; --n) index /= branching_;
    return VertexId{level, index};
}

bool TreeTopology::is_ancestor_or_self(VertexId ancestor, VertexId v) const {
    if (ancestor.level > v.level) return false;
    return ancestor_at(v, ancestor.level) == ancestor;
}

bool TreeTopology::in_t1(VertexId v) const {
    if (v.level == 0) return true;
    return ancestor_at(v, 1).index == 0;
}

int TreeTopology::max_admissible_depth(int branching) {
    if (branching <= 1) return std::numeric_limits<int>::max();
    int depth = 0;
    while (checked_vertex_count(branching, depth + 1) >= 0) ++depth;
    return depth;
}

TreeTopology build_truncation(int branching, int depth) {
    if (branching < 1) throw std::invalid_argument("build_truncation: branching K must be >= 1");
    if (depth < 0) throw std::invalid_argument("build_truncation: depth must be >= 0");
    if (checked_vertex_count(branching, depth) < 0) {
        throw std::invalid_argument(
            "build_truncation: K^depth overflows 64-bit indexing; largest admissible depth for K=" +
            std::to_string(branching) + " is " + std::to_string(TreeTopology::max_admissible_depth(branching)));
    }
    return TreeTopology(branching, depth);
}

VertexSet VertexSet::explicit_set(std::vector<VertexId> vertices) {
    VertexSet set(Kind::Explicit, 0);
    set.explicit_ = std::move(vertices);
    return set;
}

bool VertexSet::contains(const TreeTopology& topology, VertexId v) const {
    switch (kind_) {
        case Kind::Explicit:
            for (const VertexId& u : explicit_)
                if (u == v) return true;
            return false;
        case Kind::Truncation:
            return v.level <= parameter_;
        case Kind::BeyondLevel:
            return v.level > parameter_;
        case Kind::SubtreeT1:
            return topology.in_t1(v);
        case Kind::PlateE:
            return v.level > parameter_ && topology.in_t1(v);
        case Kind::PlateF:
            return v.level > parameter_ && !topology.in_t1(v);
    }
    return false;
}

std::int64_t VertexSet::size(const TreeTopology& topology) const {
    switch (kind_) {
        case Kind::Explicit:
            return static_cast<std::int64_t>(explicit_.size());
        case Kind::Truncation:
            return topology.level_offset(std::min(parameter_, topology.depth()) + 1);
        case Kind::BeyondLevel:
            return topology.vertex_count() - topology.level_offset(std::min(parameter_, topology.depth()) + 1);
        default: {
            std::int64_t n = 0;
            for_each(topology, [&n](VertexId) { ++n; });
            return n;
        }
    }
}

void VertexSet::for_each(const TreeTopology& topology, const std::function<void(VertexId)>& fn) const {
    if (kind_ == Kind::Explicit) {
        for (const VertexId& v : explicit_) fn(v);
        return;
    }
    for (int level = 0; level <= topology.depth(); ++level) {
        const std::int64_t count = topology.level_count(level);
        for (std::int64_t index = 0; index < count; ++index) {
            VertexId v{level, index};
            if (contains(topology, v)) fn(v);
        }
    }
}

VertexSet subtree_t1(const TreeTopology& topology) {
    if (topology.branching() < 2)
        throw std::invalid_argument("subtree_t1: K = 1 makes T_1 the whole tree (degenerate split)");
    return VertexSet::subtree_t1();
}

std::pair<VertexSet, VertexSet> plate_sets(const TreeTopology& topology, int n) {
    if (topology.branching() < 2) throw std::invalid_argument("plate_sets: requires K >= 2");
    if (n < 1 || n >= topology.depth())
        throw std::invalid_argument("plate_sets: need 1 <= n < depth so both plates are nonempty");
    return {VertexSet::plate_e(n), VertexSet::plate_f(n)};
}

}  // namespace treecap
