#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace treecap {

/// Vertex of the K-regular rooted tree, addressed by (level, index) with
/// index in [0, K^level). Child c of (n, i) is (n+1, i*K + c); the parent
/// of (n, i) is (n-1, i / K). Edges are identified with their child
/// endpoint throughout the library.
struct VertexId {
    int level = 0;
    std::int64_t index = 0;

    friend bool operator==(const VertexId&, const VertexId&) = default;
};

/// Combinatorial truncation X^m of the K-regular rooted tree: all vertices
/// of level <= m. Stores only (K, m); every parent/child/ancestor query is
/// O(1) base-K index arithmetic, so deep truncations cost nothing to
/// represent (allocation happens only when a per-vertex field is built).
///
/// Immutable after construction; safe for concurrent reads.
class TreeTopology {
public:
    TreeTopology() = default;

    int branching() const { return branching_; }
    int depth() const { return depth_; }

    /// K^level, the number of vertices at a given level.
    std::int64_t level_count(int level) const;

    /// Number of vertices with level strictly below `level` (prefix sum of
    /// level_count), i.e. the linear index of (level, 0).
    std::int64_t level_offset(int level) const;

    /// Total vertex count, sum_{n=0}^{m} K^n. The edge count is one less.
    std::int64_t vertex_count() const { return level_offset(depth_ + 1); }

    std::int64_t linear_index(VertexId v) const { return level_offset(v.level) + v.index; }
    VertexId vertex_at(std::int64_t linear) const;

    bool contains(VertexId v) const;
    VertexId parent(VertexId v) const;
    VertexId child(VertexId v, int c) const;

    /// Ancestor of v at the requested level (v itself when levels match).
    VertexId ancestor_at(VertexId v, int level) const;

    /// True when `ancestor` lies on the root path of `v` (self counts).
    bool is_ancestor_or_self(VertexId ancestor, VertexId v) const;

    /// True when v lies in T_1 = [0, x_0] plus the subtree below x_0,
    /// where x_0 is the level-1 vertex of index 0.
    bool in_t1(VertexId v) const;

    /// Largest depth m such that the vertex count of X^m still fits the
    /// 64-bit index space used here.
    static int max_admissible_depth(int branching);

private:
    friend TreeTopology build_truncation(int branching, int depth);

    TreeTopology(int branching, int depth) : branching_(branching), depth_(depth) {}

    int branching_ = 1;
    int depth_ = 0;
};

/// Set of vertices inside a truncation. Either an explicit list or one of
/// the named families used by the capacity computations:
///   truncation(n)    X^n, all vertices of level <= n
///   beyond_level(n)  X \ X^n, all vertices of level > n
///   subtree_t1()     T_1
///   plate_e(n)       E_n = (X \ X^n) ∩ T_1
///   plate_f(n)       F_n = (X \ X^n) \ T_1
/// Membership is evaluated against a concrete topology.
class VertexSet {
public:
    enum class Kind { Explicit, Truncation, BeyondLevel, SubtreeT1, PlateE, PlateF };

    static VertexSet truncation(int n) { return VertexSet(Kind::Truncation, n); }
    static VertexSet beyond_level(int n) { return VertexSet(Kind::BeyondLevel, n); }
    static VertexSet subtree_t1() { return VertexSet(Kind::SubtreeT1, 0); }
    static VertexSet plate_e(int n) { return VertexSet(Kind::PlateE, n); }
    static VertexSet plate_f(int n) { return VertexSet(Kind::PlateF, n); }
    static VertexSet explicit_set(std::vector<VertexId> vertices);

    Kind kind() const { return kind_; }
    int parameter() const { return parameter_; }

    bool contains(const TreeTopology& topology, VertexId v) const;
    std::int64_t size(const TreeTopology& topology) const;
    void for_each(const TreeTopology& topology, const std::function<void(VertexId)>& fn) const;

private:
    VertexSet(Kind kind, int parameter) : kind_(kind), parameter_(parameter) {}

    Kind kind_ = Kind::Truncation;
    int parameter_ = 0;
    std::vector<VertexId> explicit_;
};

/// Builds X^depth for a K-regular tree. Rejects branching < 1, negative
/// depth, and truncations whose vertex count overflows 64-bit indexing
/// (the error message reports the largest admissible depth).
TreeTopology build_truncation(int branching, int depth);

/// The distinguished subtree T_1: the root, the level-1 vertex x_0 of
/// index 0, and everything below x_0. Requires branching >= 2 (for K = 1
/// the "subtree" would be the whole tree and the split is degenerate).
VertexSet subtree_t1(const TreeTopology& topology);

/// The plate pair (E_n, F_n): vertices of level > n inside / outside T_1.
/// Requires 1 <= n < depth so that both plates are nonempty in the
/// truncation, and branching >= 2.
std::pair<VertexSet, VertexSet> plate_sets(const TreeTopology& topology, int n);

}  // namespace treecap
