// Triangulation search engine: prioritized greedy elimination, exact subset
// search over elimination orders, and the anytime controller.

#include "dgmtri/engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "dgmtri/errors.hpp"

namespace dgmtri {

namespace {

const char* criterionName(Criterion c) {
    switch (c) {
        case Criterion::CliqueSize: return "size";
        case Criterion::Fillin: return "fillin";
        case Criterion::Weight: return "weight";
        case Criterion::TemporalPosition: return "temporal";
        case Criterion::FilePosition: return "position";
        case Criterion::Hint: return "hint";
        case Criterion::Random: return "random";
    }
    return "?";
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

std::string HeuristicChain::label() const {
    std::string out;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (i) out += ',';
        out += criterionName(criteria[i]);
    }
    if (std::find(criteria.begin(), criteria.end(), Criterion::Random) != criteria.end())
        out += "#" + std::to_string(seed);
    return out;
}

HeuristicChain parseChain(const std::string& names) {
    HeuristicChain chain;
    chain.criteria.clear();
    std::istringstream is(names);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok == "size" || tok == "cliquesize")
            chain.criteria.push_back(Criterion::CliqueSize);
        else if (tok == "fillin" || tok == "fill")
            chain.criteria.push_back(Criterion::Fillin);
        else if (tok == "weight")
            chain.criteria.push_back(Criterion::Weight);
        else if (tok == "temporal")
            chain.criteria.push_back(Criterion::TemporalPosition);
        else if (tok == "position" || tok == "file")
            chain.criteria.push_back(Criterion::FilePosition);
        else if (tok == "hint")
            chain.criteria.push_back(Criterion::Hint);
        else if (tok == "random")
            chain.criteria.push_back(Criterion::Random);
        else
            throw InputError("unknown heuristic '" + tok + "'");
    }
    if (chain.criteria.empty()) throw InputError("empty heuristic chain");
    return chain;
}

bool Score::less(const Score& a, const Score& b, ScorePrimary primary) {
    auto key = [&](const Score& s) {
        return primary == ScorePrimary::Maxclique
                   ? std::tuple<double, double, double>(s.maxclique, s.logWeight,
                                                        static_cast<double>(s.fillCount))
                   : std::tuple<double, double, double>(s.logWeight, s.maxclique,
                                                        static_cast<double>(s.fillCount));
    };
    return key(a) < key(b);
}

Score scoreOf(const EliminationResult& r) {
    return Score{r.maxcliqueSize, r.logWeight, r.fill.size()};
}

// ------------------------------------------------------------------ greedy

namespace {

// log10 cardinality table keeps weight criteria bit-stable across orderings
double logCard(int card) {
    static constexpr int kMax = 4096;
    static const std::vector<double> table = [] {
        std::vector<double> t(kMax + 1, 0.0);
        for (int i = 1; i <= kMax; ++i) t[i] = std::log10(static_cast<double>(i));
        return t;
    }();
    return card <= kMax ? table[card] : std::log10(static_cast<double>(card));
}

struct WorkGraph {
    std::vector<std::set<NodeId>> adj;
    explicit WorkGraph(const UGraph& g) : adj(static_cast<std::size_t>(g.nodeCount())) {
        for (NodeId v = 0; v < g.nodeCount(); ++v)
            adj[v].insert(g.neighbors(v).begin(), g.neighbors(v).end());
    }
    int fillinOf(NodeId v) const {
        int fills = 0;
        std::vector<NodeId> nb(adj[v].begin(), adj[v].end());
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j)
                if (!adj[nb[i]].count(nb[j])) ++fills;
        return fills;
    }
    void eliminateNode(NodeId v) {
        std::vector<NodeId> nb(adj[v].begin(), adj[v].end());
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                adj[nb[i]].insert(nb[j]);
                adj[nb[j]].insert(nb[i]);
            }
        for (NodeId w : nb) adj[w].erase(v);
        adj[v].clear();
    }
};

} // namespace

EliminationResult greedyEliminate(const UGraph& g, const HeuristicChain& chain) {
    std::vector<NodeId> all(static_cast<std::size_t>(g.nodeCount()));
    for (NodeId v = 0; v < g.nodeCount(); ++v) all[v] = v;
    return greedyEliminate(g, chain, all);
}

EliminationResult greedyEliminate(const UGraph& g, const HeuristicChain& chain,
                                  std::span<const NodeId> eliminable) {
    if (chain.criteria.empty()) throw InputError("empty heuristic chain");
    WorkGraph work(g);
    std::vector<char> pending(static_cast<std::size_t>(g.nodeCount()), 0);
    for (NodeId v : eliminable) {
        if (v < 0 || v >= g.nodeCount())
            throw InputError("greedyEliminate: unknown node id " + std::to_string(v));
        pending[v] = 1;
    }

    // random criterion: one seeded priority permutation per run
    std::vector<double> randomRank(static_cast<std::size_t>(g.nodeCount()), 0.0);
    std::uint64_t state = chain.seed ^ 0xd6e8feb86659fd93ull;
    for (auto& r : randomRank) r = static_cast<double>(splitmix64(state));

    auto criterionValue = [&](Criterion c, NodeId v) -> double {
        switch (c) {
            case Criterion::CliqueSize:
                return static_cast<double>(work.adj[v].size()) + 1.0;
            case Criterion::Fillin: return static_cast<double>(work.fillinOf(v));
            case Criterion::Weight: {
                double w = logCard(g.info(v).cardinality);
                for (NodeId u : work.adj[v]) w += logCard(g.info(u).cardinality);
                return w;
            }
            case Criterion::TemporalPosition: return static_cast<double>(g.info(v).frame);
            case Criterion::FilePosition: return static_cast<double>(v);
            case Criterion::Hint: {
                int h = g.info(v).hint;
                return h < 0 ? 1e18 : static_cast<double>(h);
            }
            case Criterion::Random: return randomRank[v];
        }
        return 0.0;
    };

    std::vector<NodeId> order;
    order.reserve(eliminable.size());
    std::vector<double> key, bestKey;
    for (std::size_t step = 0; step < eliminable.size(); ++step) {
        NodeId best = -1;
        for (NodeId v = 0; v < g.nodeCount(); ++v) {
            if (!pending[v]) continue;
            key.clear();
            for (Criterion c : chain.criteria) key.push_back(criterionValue(c, v));
            // strict less keeps the lowest node id on full ties
            if (best < 0 || std::lexicographical_compare(key.begin(), key.end(),
                                                         bestKey.begin(), bestKey.end())) {
                best = v;
                bestKey = key;
            }
        }
        order.push_back(best);
        pending[best] = 0;
        work.eliminateNode(best);
    }
    return eliminate(g, order);
}

// -------------------------------------------------------------- exhaustive

namespace {

struct DpValue {
    int maxclique = 0;
    long double weight = 0.0L; // cumulative step state spaces
    bool operator<(const DpValue& o) const {
        if (maxclique != o.maxclique) return maxclique < o.maxclique;
        return weight < o.weight;
    }
};

// Adjacency of the graph after eliminating `mask`, restricted to remaining
// nodes (Rose: u ~ v iff an edge or a path through eliminated nodes joins
// them). Full matrix, one BFS per node.
std::vector<std::vector<char>> adjacencyAfter(const UGraph& g, std::uint32_t mask,
                                              const std::vector<int>& elimIndex) {
    const int n = g.nodeCount();
    auto eliminated = [&](NodeId v) {
        int ei = elimIndex[v];
        return ei >= 0 && (mask & (1u << ei));
    };
    std::vector<std::vector<char>> adj(static_cast<std::size_t>(n),
                                       std::vector<char>(static_cast<std::size_t>(n), 0));
    std::vector<NodeId> stack;
    for (NodeId v = 0; v < n; ++v) {
        if (eliminated(v)) continue;
        std::vector<char> visited(static_cast<std::size_t>(n), 0);
        visited[v] = 1;
        stack.assign(1, v);
        while (!stack.empty()) {
            NodeId x = stack.back();
            stack.pop_back();
            for (NodeId w : g.neighbors(x)) {
                if (visited[w]) continue;
                visited[w] = 1;
                if (eliminated(w))
                    stack.push_back(w);
                else
                    adj[v][w] = 1;
            }
        }
    }
    return adj;
}

} // namespace

EliminationResult exhaustiveOrders(const UGraph& g, int nodeLimit) {
    std::vector<NodeId> all(static_cast<std::size_t>(g.nodeCount()));
    for (NodeId v = 0; v < g.nodeCount(); ++v) all[v] = v;
    return exhaustiveOrders(g, all, nodeLimit);
}

EliminationResult exhaustiveOrders(const UGraph& g, std::span<const NodeId> eliminable,
                                   int nodeLimit) {
    std::vector<NodeId> elimNodes(eliminable.begin(), eliminable.end());
    std::sort(elimNodes.begin(), elimNodes.end());
    const int n = static_cast<int>(elimNodes.size());
    if (n > nodeLimit)
        throw InputError("exhaustiveOrders: " + std::to_string(n) +
                         " nodes exceed the limit of " + std::to_string(nodeLimit));
    if (n > 20) throw InputError("exhaustiveOrders: subset space too large (max 20)");
    if (n == 0) return eliminate(g, {});

    std::vector<int> elimIndex(static_cast<std::size_t>(g.nodeCount()), -1);
    for (int i = 0; i < n; ++i) elimIndex[elimNodes[i]] = i;

    const std::uint32_t full = (1u << n) - 1u;
    std::vector<DpValue> memo(static_cast<std::size_t>(full) + 1, DpValue{-1, 0.0L});
    std::vector<std::int8_t> choice(static_cast<std::size_t>(full) + 1, -1);

    std::function<DpValue(std::uint32_t)> solve = [&](std::uint32_t mask) -> DpValue {
        if (mask == full) return DpValue{0, 0.0L};
        DpValue& slot = memo[mask];
        if (slot.maxclique >= 0) return slot;

        auto adj = adjacencyAfter(g, mask, elimIndex);
        auto stats = [&](int i) {
            NodeId v = elimNodes[i];
            int cliqueSize = 1;
            long double ss = g.info(v).cardinality;
            bool simplicial = true;
            for (NodeId a = 0; a < g.nodeCount(); ++a) {
                if (!adj[v][a]) continue;
                ++cliqueSize;
                ss *= static_cast<long double>(g.info(a).cardinality);
                for (NodeId b = a + 1; b < g.nodeCount() && simplicial; ++b)
                    if (adj[v][b] && !adj[a][b]) simplicial = false;
            }
            return std::tuple<int, long double, bool>(cliqueSize, ss, simplicial);
        };

        // A simplicial node may always be eliminated first: it adds no fill,
        // its clique never shrinks by waiting, and leaving it only inflates
        // the step cliques of its earlier-eliminated neighbors.
        int pick = -1;
        for (int i = 0; i < n && pick < 0; ++i) {
            if (mask & (1u << i)) continue;
            if (std::get<2>(stats(i))) pick = i;
        }

        DpValue best{1 << 20, 0.0L};
        int bestChoice = -1;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) continue;
            if (pick >= 0 && i != pick) continue;
            auto [cs, ss, simp] = stats(i);
            DpValue sub = solve(mask | (1u << i));
            DpValue combined{std::max(cs, sub.maxclique), ss + sub.weight};
            if (combined < best) {
                best = combined;
                bestChoice = i;
            }
        }
        slot = best;
        choice[mask] = static_cast<std::int8_t>(bestChoice);
        return slot;
    };
    solve(0);

    std::vector<NodeId> order;
    order.reserve(static_cast<std::size_t>(n));
    std::uint32_t mask = 0;
    while (mask != full) {
        int i = choice[mask];
        order.push_back(elimNodes[i]);
        mask |= (1u << i);
    }
    return eliminate(g, order);
}

// ----------------------------------------------------------------- anytime

std::pair<EliminationResult, AnytimeLog> anytime(const UGraph& g,
                                                 std::span<const HeuristicChain> strategies,
                                                 const AnytimeOptions& opts) {
    std::vector<NodeId> all(static_cast<std::size_t>(g.nodeCount()));
    for (NodeId v = 0; v < g.nodeCount(); ++v) all[v] = v;
    return anytime(g, strategies, all, opts);
}

std::pair<EliminationResult, AnytimeLog> anytime(const UGraph& g,
                                                 std::span<const HeuristicChain> strategies,
                                                 std::span<const NodeId> eliminable,
                                                 const AnytimeOptions& opts) {
    if (strategies.empty()) throw InputError("anytime: no strategies given");
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(Clock::now() - start).count();
    };
    auto budgetLeft = [&] {
        return opts.budget.count() <= 0.0 ? false : elapsed() < opts.budget.count();
    };

    // Work units in fixed order; the first always runs so a result exists.
    struct Unit {
        HeuristicChain chain;
        bool exhaustive = false;
        std::string label;
    };
    std::vector<Unit> units;
    for (const auto& s : strategies) units.push_back({s, false, s.label()});
    for (const auto& s : strategies) {
        for (int r = 1; r <= opts.randomRestarts; ++r) {
            HeuristicChain restart = s;
            if (std::find(restart.criteria.begin(), restart.criteria.end(),
                          Criterion::Random) == restart.criteria.end())
                restart.criteria.push_back(Criterion::Random);
            restart.seed = s.seed * 1000003u + static_cast<std::uint64_t>(r);
            units.push_back({restart, false, restart.label()});
        }
    }
    if (opts.includeExhaustive &&
        static_cast<int>(eliminable.size()) <= opts.exhaustiveNodeLimit)
        units.push_back({HeuristicChain{}, true, "exhaustive"});

    auto runUnit = [&](const Unit& u) {
        return u.exhaustive ? exhaustiveOrders(g, eliminable, opts.exhaustiveNodeLimit)
                            : greedyEliminate(g, u.chain, eliminable);
    };

    std::optional<EliminationResult> best;
    AnytimeLog log;
    auto consider = [&](const Unit& u, EliminationResult r) {
        if (!best || Score::less(scoreOf(r), scoreOf(*best), opts.primary))
            best = std::move(r);
        log.push_back({elapsed(), u.label, scoreOf(*best)});
    };

    if (opts.threads > 1 && units.size() > 1) {
        // Deterministic parallel evaluation: results are merged in unit order,
        // so thread scheduling never changes the outcome, only wall time.
        std::vector<std::future<EliminationResult>> futs;
        futs.reserve(units.size());
        for (const auto& u : units)
            futs.push_back(std::async(std::launch::async, [&runUnit, &u] { return runUnit(u); }));
        for (std::size_t i = 0; i < units.size(); ++i) consider(units[i], futs[i].get());
        return {*best, log};
    }

    for (std::size_t i = 0; i < units.size(); ++i) {
        if (i > 0 && !budgetLeft()) break;
        consider(units[i], runUnit(units[i]));
    }
    return {*best, log};
}

EliminationResult EngineSettings::run(const UGraph& g,
                                      std::span<const NodeId> eliminable) const {
    if (strategies.empty()) throw InputError("engine: no strategies configured");
    if (!useAnytime) return greedyEliminate(g, strategies.front(), eliminable);
    return anytime(g, strategies, eliminable, anytimeOpts).first;
}

// ---------------------------------------------------- partition protocol

TriangulatedPartition triangulatePartition(const UGraph& part,
                                           std::span<const NodeId> leftInterface,
                                           std::span<const NodeId> rightInterface,
                                           const EngineSettings& engine,
                                           std::span<const NodeId> keepExtra) {
    auto checkSubset = [&](std::span<const NodeId> s, const char* what) {
        for (NodeId v : s)
            if (v < 0 || v >= part.nodeCount())
                throw InputError(std::string("triangulatePartition: ") + what +
                                 " node " + std::to_string(v) + " outside the partition");
    };
    checkSubset(leftInterface, "left interface");
    checkSubset(rightInterface, "right interface");
    checkSubset(keepExtra, "keep");

    TriangulatedPartition out;
    out.leftInterface.assign(leftInterface.begin(), leftInterface.end());
    out.rightInterface.assign(rightInterface.begin(), rightInterface.end());
    std::sort(out.leftInterface.begin(), out.leftInterface.end());
    std::sort(out.rightInterface.begin(), out.rightInterface.end());

    UGraph completed(part.nodes());
    for (const auto& [u, v] : part.edges()) completed.addEdge(u, v);
    auto complete = [&](const std::vector<NodeId>& s) {
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j) completed.addEdge(s[i], s[j]);
    };
    complete(out.leftInterface);
    complete(out.rightInterface);

    std::vector<char> stays(static_cast<std::size_t>(part.nodeCount()), 0);
    for (NodeId v : rightInterface) stays[v] = 1;
    for (NodeId v : keepExtra) stays[v] = 1;
    std::vector<NodeId> proper;
    for (NodeId v = 0; v < completed.nodeCount(); ++v)
        if (!stays[v]) proper.push_back(v);

    out.elimination = engine.run(completed, proper);
    out.cliques = pruneNonMaximal(out.elimination.cliques);
    out.maxclique = out.elimination.maxcliqueSize;
    out.maxcliqueWithInterface =
        std::max<int>(out.maxclique, static_cast<int>(out.rightInterface.size()));
    if (!out.cliques.empty()) {
        out.stateSpace = totalStateSpace(out.cliques, completed);
        out.logWeight = out.stateSpace.log10();
    }
    out.completed = std::move(completed);
    return out;
}

} // namespace dgmtri
