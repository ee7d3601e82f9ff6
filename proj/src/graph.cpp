// Undirected/directed graph core: moralization, elimination, chordality.

#include "dgmtri/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

#include "dgmtri/errors.hpp"

namespace dgmtri {

namespace {

void insertSorted(std::vector<NodeId>& v, NodeId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
}

bool containsSorted(const std::vector<NodeId>& v, NodeId x) {
    return std::binary_search(v.begin(), v.end(), x);
}

} // namespace

// ---------------------------------------------------------------- UGraph

UGraph::UGraph(std::vector<NodeInfo> nodes)
    : nodes_(std::move(nodes)), adj_(nodes_.size()) {}

void UGraph::checkNode(NodeId v) const {
    if (v < 0 || v >= nodeCount())
        throw InputError("unknown node id " + std::to_string(v));
}

const NodeInfo& UGraph::info(NodeId v) const {
    checkNode(v);
    return nodes_[static_cast<std::size_t>(v)];
}

void UGraph::addEdge(NodeId u, NodeId v) {
    checkNode(u);
    checkNode(v);
    if (u == v) throw InputError("self-loop on node " + std::to_string(u));
    if (hasEdge(u, v)) return;
    insertSorted(adj_[u], v);
    insertSorted(adj_[v], u);
    ++edgeCount_;
}

bool UGraph::hasEdge(NodeId u, NodeId v) const {
    checkNode(u);
    checkNode(v);
    return containsSorted(adj_[u], v);
}

const std::vector<NodeId>& UGraph::neighbors(NodeId v) const {
    checkNode(v);
    return adj_[v];
}

std::vector<Edge> UGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edgeCount_);
    for (NodeId u = 0; u < nodeCount(); ++u)
        for (NodeId v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

std::string UGraph::dump() const {
    std::ostringstream os;
    for (NodeId v = 0; v < nodeCount(); ++v) {
        const auto& n = nodes_[v];
        os << "node " << v << ' ' << n.name << " frame=" << n.frame
           << " card=" << n.cardinality << '\n';
    }
    for (const auto& [u, v] : edges()) os << "edge " << u << ' ' << v << '\n';
    return os.str();
}

// ---------------------------------------------------------------- DGraph

DGraph::DGraph(std::vector<NodeInfo> nodes)
    : nodes_(std::move(nodes)), parents_(nodes_.size()), children_(nodes_.size()) {}

void DGraph::checkNode(NodeId v) const {
    if (v < 0 || v >= nodeCount())
        throw InputError("unknown node id " + std::to_string(v));
}

const NodeInfo& DGraph::info(NodeId v) const {
    checkNode(v);
    return nodes_[static_cast<std::size_t>(v)];
}

void DGraph::addEdge(NodeId parent, NodeId child) {
    checkNode(parent);
    checkNode(child);
    if (parent == child) throw InputError("self-loop on node " + std::to_string(parent));
    if (hasEdge(parent, child)) return;
    insertSorted(children_[parent], child);
    insertSorted(parents_[child], parent);
    ++edgeCount_;
}

bool DGraph::hasEdge(NodeId parent, NodeId child) const {
    checkNode(parent);
    checkNode(child);
    return containsSorted(children_[parent], child);
}

const std::vector<NodeId>& DGraph::parents(NodeId v) const {
    checkNode(v);
    return parents_[v];
}

const std::vector<NodeId>& DGraph::children(NodeId v) const {
    checkNode(v);
    return children_[v];
}

std::vector<Edge> DGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edgeCount_);
    for (NodeId u = 0; u < nodeCount(); ++u)
        for (NodeId v : children_[u]) out.emplace_back(u, v);
    return out;
}

bool DGraph::isAcyclic() const {
    try {
        topologicalOrder();
        return true;
    } catch (const ModelError&) {
        return false;
    }
}

std::vector<NodeId> DGraph::topologicalOrder() const {
    std::vector<int> indeg(nodes_.size(), 0);
    for (NodeId v = 0; v < nodeCount(); ++v)
        indeg[v] = static_cast<int>(parents_[v].size());
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (NodeId v = 0; v < nodeCount(); ++v)
        if (indeg[v] == 0) ready.push(v);
    std::vector<NodeId> order;
    order.reserve(nodes_.size());
    while (!ready.empty()) {
        NodeId v = ready.top();
        ready.pop();
        order.push_back(v);
        for (NodeId c : children_[v])
            if (--indeg[c] == 0) ready.push(c);
    }
    if (order.size() != nodes_.size()) {
        NodeId witness = 0;
        for (NodeId v = 0; v < nodeCount(); ++v)
            if (indeg[v] > 0) {
                witness = v;
                break;
            }
        throw ModelError("directed cycle through node " + info(witness).name +
                         " (frame " + std::to_string(info(witness).frame) + ")");
    }
    return order;
}

std::string DGraph::dump() const {
    std::ostringstream os;
    for (NodeId v = 0; v < nodeCount(); ++v) {
        const auto& n = nodes_[v];
        os << "node " << v << ' ' << n.name << " frame=" << n.frame
           << " card=" << n.cardinality << '\n';
    }
    for (const auto& [u, v] : edges()) os << "edge " << u << " -> " << v << '\n';
    return os.str();
}

// ------------------------------------------------------------- operations

UGraph moralize(const DGraph& g) {
    UGraph m(g.nodes());
    for (const auto& [p, c] : g.edges()) m.addEdge(p, c);
    for (NodeId child = 0; child < g.nodeCount(); ++child) {
        const auto& ps = g.parents(child);
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (std::size_t j = i + 1; j < ps.size(); ++j)
                m.addEdge(ps[i], ps[j]);
    }
    return m;
}

UGraph inducedSubgraph(const UGraph& g, std::span<const NodeId> keep,
                       std::vector<NodeId>* oldToNew) {
    std::vector<NodeId> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InputError("induced subgraph: duplicate node in selection");
    std::vector<NodeId> map(static_cast<std::size_t>(g.nodeCount()), -1);
    std::vector<NodeInfo> infos;
    infos.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        NodeId v = sorted[i];
        if (v < 0 || v >= g.nodeCount())
            throw InputError("induced subgraph: unknown node id " + std::to_string(v));
        map[v] = static_cast<NodeId>(i);
        infos.push_back(g.info(v));
    }
    UGraph sub(std::move(infos));
    for (NodeId v : sorted)
        for (NodeId w : g.neighbors(v))
            if (v < w && map[w] >= 0) sub.addEdge(map[v], map[w]);
    if (oldToNew) *oldToNew = std::move(map);
    return sub;
}

bool isSeparator(const UGraph& g, std::span<const NodeId> sep,
                 std::span<const NodeId> left, std::span<const NodeId> right) {
    std::vector<int> side(static_cast<std::size_t>(g.nodeCount()), 0);
    auto mark = [&](std::span<const NodeId> s, int tag) {
        for (NodeId v : s) {
            if (v < 0 || v >= g.nodeCount())
                throw InputError("separator check: unknown node id " + std::to_string(v));
            if (side[v] != 0) throw InputError("separator check: sets overlap");
            side[v] = tag;
        }
    };
    mark(sep, 1);
    mark(left, 2);
    mark(right, 3);
    for (NodeId v = 0; v < g.nodeCount(); ++v)
        if (side[v] == 0) throw InputError("separator check: sets do not cover the graph");
    for (NodeId v : left)
        for (NodeId w : g.neighbors(v))
            if (side[w] == 3) return false;
    return true;
}

EliminationResult eliminate(const UGraph& g, std::span<const NodeId> order) {
    const int n = g.nodeCount();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (NodeId v : order) {
        if (v < 0 || v >= n)
            throw InputError("eliminate: unknown node id " + std::to_string(v));
        if (seen[v]) throw InputError("eliminate: duplicate node in order");
        seen[v] = 1;
    }

    // working adjacency as sets for cheap fill insertion
    std::vector<std::set<NodeId>> adj(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v)
        adj[v].insert(g.neighbors(v).begin(), g.neighbors(v).end());

    EliminationResult res;
    res.order.assign(order.begin(), order.end());
    std::vector<char> gone(static_cast<std::size_t>(n), 0);
    for (NodeId v : order) {
        std::vector<NodeId> nbrs(adj[v].begin(), adj[v].end());
        std::vector<NodeId> clique;
        clique.push_back(v);
        clique.insert(clique.end(), nbrs.begin(), nbrs.end());
        std::sort(clique.begin(), clique.end());
        res.cliques.push_back(clique);
        res.maxcliqueSize = std::max<int>(res.maxcliqueSize, static_cast<int>(clique.size()));
        for (std::size_t i = 0; i < nbrs.size(); ++i)
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                NodeId a = nbrs[i], b = nbrs[j];
                if (adj[a].insert(b).second) {
                    adj[b].insert(a);
                    res.fill.emplace_back(std::min(a, b), std::max(a, b));
                }
            }
        for (NodeId w : nbrs) adj[w].erase(v);
        adj[v].clear();
        gone[v] = 1;
    }
    std::sort(res.fill.begin(), res.fill.end());

    auto maximal = pruneNonMaximal(res.cliques);
    if (!maximal.empty()) {
        res.stateSpace = totalStateSpace(maximal, g);
        res.logWeight = res.stateSpace.log10();
    }
    return res;
}

UGraph filledGraph(const UGraph& g, const EliminationResult& r) {
    UGraph out(g.nodes());
    for (const auto& [u, v] : g.edges()) out.addEdge(u, v);
    for (const auto& [u, v] : r.fill) out.addEdge(u, v);
    return out;
}

std::vector<Edge> fillOracle(const UGraph& g, std::span<const NodeId> order) {
    const int n = g.nodeCount();
    std::vector<int> pos(static_cast<std::size_t>(n), n + 1); // uneliminated sort last
    int idx = 0;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (NodeId v : order) {
        if (v < 0 || v >= n)
            throw InputError("fillOracle: unknown node id " + std::to_string(v));
        if (seen[v]) throw InputError("fillOracle: duplicate node in order");
        seen[v] = 1;
        pos[v] = idx++;
    }

    // For each pair, search for a path whose interior is eliminated before
    // both endpoints. Small-n oracle; clarity over speed.
    std::vector<Edge> out;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (g.hasEdge(u, v)) continue;
            // interior nodes must be eliminated before both endpoints; an
            // uneliminated endpoint poses no constraint (pos = n+1)
            int cutoff = std::min(pos[u], pos[v]);
            std::vector<char> visited(static_cast<std::size_t>(n), 0);
            std::queue<NodeId> q;
            visited[u] = 1;
            bool found = false;
            for (NodeId w : g.neighbors(u)) {
                if (w == v) continue; // direct edge excluded above anyway
                if (pos[w] < cutoff && !visited[w]) {
                    visited[w] = 1;
                    q.push(w);
                }
            }
            while (!q.empty() && !found) {
                NodeId x = q.front();
                q.pop();
                for (NodeId w : g.neighbors(x)) {
                    if (w == v) {
                        found = true;
                        break;
                    }
                    if (pos[w] < cutoff && !visited[w]) {
                        visited[w] = 1;
                        q.push(w);
                    }
                }
            }
            if (found) out.emplace_back(u, v);
        }
    }
    return out;
}

std::pair<std::vector<NodeId>, bool> mcs(const UGraph& g) {
    const int n = g.nodeCount();
    std::vector<int> weight(static_cast<std::size_t>(n), 0);
    std::vector<char> numbered(static_cast<std::size_t>(n), 0);
    std::vector<NodeId> order;
    order.reserve(static_cast<std::size_t>(n));
    for (int step = 0; step < n; ++step) {
        NodeId best = -1;
        for (NodeId v = 0; v < n; ++v)
            if (!numbered[v] && (best == -1 || weight[v] > weight[best])) best = v;
        numbered[best] = 1;
        order.push_back(best);
        for (NodeId w : g.neighbors(best))
            if (!numbered[w]) ++weight[w];
    }
    // chordal iff the reverse visit order is a perfect elimination order
    std::vector<NodeId> peo(order.rbegin(), order.rend());
    bool chordal = fillOracle(g, peo).empty();
    return {order, chordal};
}

std::vector<std::vector<NodeId>> pruneNonMaximal(std::vector<std::vector<NodeId>> cliques) {
    for (auto& c : cliques) std::sort(c.begin(), c.end());
    std::sort(cliques.begin(), cliques.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });
    std::vector<std::vector<NodeId>> out;
    for (const auto& c : cliques) {
        bool contained = false;
        for (const auto& big : out) {
            if (std::includes(big.begin(), big.end(), c.begin(), c.end())) {
                contained = true;
                break;
            }
        }
        if (!contained) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<NodeId>> maximalCliques(const UGraph& g) {
    auto [order, chordal] = mcs(g);
    if (!chordal)
        throw ModelError("maximalCliques: graph is not chordal (triangulate first)");
    std::vector<NodeId> peo(order.rbegin(), order.rend());
    auto elim = eliminate(g, peo);
    return pruneNonMaximal(elim.cliques);
}

BigUint totalStateSpace(const std::vector<std::vector<NodeId>>& cliques, const UGraph& g) {
    BigUint total;
    for (const auto& c : cliques) {
        BigUint prod(1);
        for (NodeId v : c)
            prod.mulSmall(static_cast<std::uint64_t>(g.info(v).cardinality));
        total.add(prod);
    }
    return total;
}

double logWeight(const std::vector<std::vector<NodeId>>& cliques, const UGraph& g) {
    if (cliques.empty()) throw InputError("logWeight: empty clique list");
    return totalStateSpace(cliques, g).log10();
}

} // namespace dgmtri
