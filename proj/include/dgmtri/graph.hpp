#ifndef DGMTRI_GRAPH_HPP
#define DGMTRI_GRAPH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dgmtri/bigint.hpp"

namespace dgmtri {

using NodeId = int;

struct NodeInfo {
    std::string name;
    int frame = 0;
    int cardinality = 2;
    int hint = -1; // -1: no user hint
};

using Edge = std::pair<NodeId, NodeId>; // normalized u < v in undirected graphs

// Undirected labeled graph. Adjacency lists are kept sorted ascending so that
// every algorithm downstream iterates nodes in a fixed order.
class UGraph {
public:
    UGraph() = default;
    explicit UGraph(std::vector<NodeInfo> nodes);

    int nodeCount() const { return static_cast<int>(nodes_.size()); }
    std::size_t edgeCount() const { return edgeCount_; }
    const NodeInfo& info(NodeId v) const;
    const std::vector<NodeInfo>& nodes() const { return nodes_; }

    void addEdge(NodeId u, NodeId v);
    bool hasEdge(NodeId u, NodeId v) const;
    const std::vector<NodeId>& neighbors(NodeId v) const;

    std::vector<Edge> edges() const; // sorted, u < v

    // Line-per-edge text form used by test fixtures and debug dumps.
    std::string dump() const;

private:
    void checkNode(NodeId v) const;

    std::vector<NodeInfo> nodes_;
    std::vector<std::vector<NodeId>> adj_;
    std::size_t edgeCount_ = 0;
};

// Directed labeled graph (parents -> children).
class DGraph {
public:
    DGraph() = default;
    explicit DGraph(std::vector<NodeInfo> nodes);

    int nodeCount() const { return static_cast<int>(nodes_.size()); }
    std::size_t edgeCount() const { return edgeCount_; }
    const NodeInfo& info(NodeId v) const;
    const std::vector<NodeInfo>& nodes() const { return nodes_; }

    void addEdge(NodeId parent, NodeId child);
    bool hasEdge(NodeId parent, NodeId child) const;
    const std::vector<NodeId>& parents(NodeId v) const;
    const std::vector<NodeId>& children(NodeId v) const;

    std::vector<Edge> edges() const; // (parent, child) pairs, sorted

    bool isAcyclic() const;
    // Topological order; throws ModelError on a cycle. The message names one
    // node on the offending cycle.
    std::vector<NodeId> topologicalOrder() const;

    std::string dump() const;

private:
    void checkNode(NodeId v) const;

    std::vector<NodeInfo> nodes_;
    std::vector<std::vector<NodeId>> parents_;
    std::vector<std::vector<NodeId>> children_;
    std::size_t edgeCount_ = 0;
};

// Drop directions and marry all co-parents of every child.
UGraph moralize(const DGraph& g);

// Subgraph induced by `keep` (node ids renumbered densely in the order given
// by ascending old id). Optional map receives old-id -> new-id (-1 if absent).
UGraph inducedSubgraph(const UGraph& g, std::span<const NodeId> keep,
                       std::vector<NodeId>* oldToNew = nullptr);

// True iff no edge joins `left` to `right`. The three sets must partition the
// node set of g.
bool isSeparator(const UGraph& g, std::span<const NodeId> sep,
                 std::span<const NodeId> left, std::span<const NodeId> right);

struct EliminationResult {
    std::vector<NodeId> order;                 // as eliminated
    std::vector<Edge> fill;                    // added edges, u < v
    std::vector<std::vector<NodeId>> cliques;  // one per step, before pruning
    int maxcliqueSize = 0;
    double logWeight = 0.0;   // log10 of summed maximal-clique state spaces
    BigUint stateSpace;       // the exact sum behind logWeight
};

// Simulate vertex elimination of `order` (a permutation of a subset of the
// nodes; partial elimination leaves a residual completed graph behind).
EliminationResult eliminate(const UGraph& g, std::span<const NodeId> order);

// The filled graph g + result.fill.
UGraph filledGraph(const UGraph& g, const EliminationResult& r);

// Rose's path characterization: pairs {u,v} (edges or new) such that some
// path connects u and v with every interior node eliminated before both.
// Returned restricted to NEW pairs (not edges of g), sorted.
std::vector<Edge> fillOracle(const UGraph& g, std::span<const NodeId> order);

// Maximum cardinality search. Returns the visit order and whether the graph
// is chordal (zero fill along the reverse visit order).
std::pair<std::vector<NodeId>, bool> mcs(const UGraph& g);

// Maximal cliques of a chordal graph via a perfect elimination order.
// Throws ModelError if g is not chordal.
std::vector<std::vector<NodeId>> maximalCliques(const UGraph& g);

// Drop cliques contained in another clique of the list; result sorted.
std::vector<std::vector<NodeId>> pruneNonMaximal(std::vector<std::vector<NodeId>> cliques);

// log10 of the summed clique state spaces (sum over cliques of the product of
// member cardinalities). Throws InputError on an empty list.
double logWeight(const std::vector<std::vector<NodeId>>& cliques, const UGraph& g);
BigUint totalStateSpace(const std::vector<std::vector<NodeId>>& cliques, const UGraph& g);

} // namespace dgmtri

#endif
