#ifndef DGMTRI_ENGINE_HPP
#define DGMTRI_ENGINE_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgmtri/graph.hpp"

namespace dgmtri {

// Per-step node selection criteria, applied in priority order; later entries
// break ties of earlier ones. Remaining ties fall back to ascending node id.
enum class Criterion {
    CliqueSize,       // size of the clique elimination would form now
    Fillin,           // number of fill edges elimination would add now
    Weight,           // state space of that clique
    TemporalPosition, // lower frame first
    FilePosition,     // declaration order
    Hint,             // user-supplied hint, lower first (missing hints last)
    Random,           // seeded tie-break permutation
};

struct HeuristicChain {
    std::vector<Criterion> criteria{Criterion::Fillin, Criterion::CliqueSize};
    std::uint64_t seed = 0; // used by Random only
    std::string label() const;
};

HeuristicChain parseChain(const std::string& names); // e.g. "fillin,size,random"

// Primary objective when comparing elimination results.
enum class ScorePrimary { Maxclique, Weight };

struct Score {
    int maxclique = 0;
    double logWeight = 0.0;
    std::size_t fillCount = 0;

    static bool less(const Score& a, const Score& b, ScorePrimary primary);
};

Score scoreOf(const EliminationResult& r);

// Greedy prioritized elimination of `eliminable` (all nodes when empty).
EliminationResult greedyEliminate(const UGraph& g, const HeuristicChain& chain);
EliminationResult greedyEliminate(const UGraph& g, const HeuristicChain& chain,
                                  std::span<const NodeId> eliminable);

// Exact minimum over all elimination orders of (maxclique, then cumulative
// step state space) via dynamic programming over eliminated subsets.
// Throws InputError when more than nodeLimit nodes are eliminable.
EliminationResult exhaustiveOrders(const UGraph& g, int nodeLimit = 10);
EliminationResult exhaustiveOrders(const UGraph& g, std::span<const NodeId> eliminable,
                                   int nodeLimit);

struct AnytimeEntry {
    double elapsedSeconds = 0.0;
    std::string strategy;
    Score best; // best-so-far after this strategy finished
};
using AnytimeLog = std::vector<AnytimeEntry>;

struct AnytimeOptions {
    std::chrono::duration<double> budget{0.0};
    bool includeExhaustive = false;
    int exhaustiveNodeLimit = 10;
    int randomRestarts = 0; // extra seeded random-tie-break passes per strategy
    ScorePrimary primary = ScorePrimary::Maxclique;
    int threads = 1;
};

// Runs the strategies (first one unconditionally, the rest within budget) and
// returns the best result seen. The log's best-so-far column never increases.
std::pair<EliminationResult, AnytimeLog> anytime(const UGraph& g,
                                                 std::span<const HeuristicChain> strategies,
                                                 const AnytimeOptions& opts);
std::pair<EliminationResult, AnytimeLog> anytime(const UGraph& g,
                                                 std::span<const HeuristicChain> strategies,
                                                 std::span<const NodeId> eliminable,
                                                 const AnytimeOptions& opts);

// Engine configuration shared by the pipeline, the CLI and global boundary
// quality measures.
struct EngineSettings {
    std::vector<HeuristicChain> strategies{HeuristicChain{}};
    AnytimeOptions anytimeOpts;
    bool useAnytime = false; // plain first-strategy greedy when false

    EliminationResult run(const UGraph& g, std::span<const NodeId> eliminable) const;
};

// A partition triangulated as a "1.5 chunk": the partition plus the next
// partition's first interface, both interfaces completed, then all partition
// nodes eliminated (interface nodes of the following partition stay).
struct TriangulatedPartition {
    UGraph completed;               // induced subgraph with interfaces completed
    std::vector<NodeId> leftInterface;
    std::vector<NodeId> rightInterface;
    EliminationResult elimination;  // over the partition-proper nodes
    std::vector<std::vector<NodeId>> cliques; // maximal among the step cliques
    int maxclique = 0;              // elimination cliques only
    int maxcliqueWithInterface = 0; // includes the completed right interface
    double logWeight = 0.0;
    BigUint stateSpace;
};

// `keepExtra` names additional nodes that stay uneliminated (left-interface
// nodes straddling into later partitions when the boundary spans more chunks
// than it skips).
TriangulatedPartition triangulatePartition(const UGraph& part,
                                           std::span<const NodeId> leftInterface,
                                           std::span<const NodeId> rightInterface,
                                           const EngineSettings& engine,
                                           std::span<const NodeId> keepExtra = {});

} // namespace dgmtri

#endif
