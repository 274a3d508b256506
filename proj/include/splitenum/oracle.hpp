#ifndef SPLITENUM_ORACLE_HPP
#define SPLITENUM_ORACLE_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "splitenum/grammars.hpp"
#include "splitenum/powerseries.hpp"

namespace splitenum::oracle {

inline constexpr int kMaxVertices = 12;   // canonical forms
inline constexpr int kMaxGeneration = 8;  // generators, labeled orbit counts
inline constexpr int kMaxExhaustive = 6;  // labeled filter over all 2^(n choose 2) graphs
inline constexpr int kMaxSplitCheck = 8;  // split-based recognizer

struct TooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Simple undirected graph on vertices 0..n-1, one adjacency bitmask per vertex.
class SmallGraph {
public:
    explicit SmallGraph(int n = 0);

    int order() const { return n_; }
    void addEdge(int u, int v);
    bool hasEdge(int u, int v) const { return (adj_[u] >> v) & 1u; }
    std::uint16_t neighbors(int v) const { return adj_[v]; }
    int degree(int v) const;
    std::size_t edgeCount() const;
    bool isConnected() const;

    /// Subgraph induced by the vertices in `mask`, renumbered in increasing order.
    SmallGraph induced(std::uint16_t mask) const;
    /// Copy with one extra vertex n adjacent to the vertices in `mask`.
    SmallGraph withVertex(std::uint16_t mask) const;
    SmallGraph withoutVertex(int v) const;

    /// Upper-triangle adjacency bits (0,1),(0,2),...,(1,2),... as '0'/'1'.
    std::string upperTriangle() const;
    static SmallGraph fromUpperTriangle(int n, const std::string& bits);

    bool operator==(const SmallGraph&) const = default;

private:
    int n_;
    std::array<std::uint16_t, kMaxVertices> adj_{};
};

SmallGraph path(int n);
SmallGraph cycle(int n);
SmallGraph complete(int n);

/// Adjacency rows of the canonical relabeling; equal keys <=> isomorphic graphs.
struct CanonicalKey {
    int n = 0;
    std::array<std::uint16_t, kMaxVertices> rows{};

    auto operator<=>(const CanonicalKey&) const = default;
    SmallGraph graph() const;
};

/// Minimum relabeled adjacency over the leaves of a refinement/individualization
/// search; leaves are only ever permutations consistent with an equitable
/// degree-refined vertex partition.
CanonicalKey canonicalize(const SmallGraph& g);
std::uint64_t automorphismCount(const SmallGraph& g);

/// Every induced subgraph on >= 4 vertices has a split with both sides >= 2.
bool isDHbySplits(const SmallGraph& g);
/// Reduces to one vertex by deleting pendant vertices and twins.
bool isDHbyPruning(const SmallGraph& g);

std::set<CanonicalKey> connectedGraphs(int n);
/// Closure of the one-vertex graph under pendant, true-twin and false-twin additions.
std::set<CanonicalKey> generateAllDH(int n);
/// Trees with every vertex replaced by a clique, adjacent cliques fully joined.
std::set<CanonicalKey> generateAll3LP(int n);
std::set<CanonicalKey> generateAll(grammars::GraphClassId id, int n);

enum class CountMode { Automatic, ExhaustiveFilter, Orbit };
/// Connected labeled graphs of the class on n vertices.
BigInt countLabeled(grammars::GraphClassId id, int n, CountMode mode = CountMode::Automatic);

/// One graph per line, "n bits", ordered by canonical key.
std::string dumpGraphs(const std::set<CanonicalKey>& keys);
std::vector<SmallGraph> parseGraphDump(const std::string& text);

} // namespace splitenum::oracle

#endif
