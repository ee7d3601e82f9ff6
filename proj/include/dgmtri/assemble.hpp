#ifndef DGMTRI_ASSEMBLE_HPP
#define DGMTRI_ASSEMBLE_HPP

#include <vector>

#include "dgmtri/engine.hpp"
#include "dgmtri/repartition.hpp"

namespace dgmtri {

struct TriangulatedBlocks {
    TriangulatedPartition p, c, e;
};

// Triangulate the three partition units of a repartitioned template.
TriangulatedBlocks triangulateBlocks(const RepartitionedTemplate& rt,
                                     const EngineSettings& engine);

struct AssembledTriangulation {
    int k = 1;          // repetitions of C'
    int copies = 0;     // chunk copies of the underlying unroll (M + kS)
    int slices = 0;
    UGraph moralGraph;  // moralized direct unroll, the ground truth to cover
    std::vector<std::vector<NodeId>> cliques; // placed, pruned maximal

    bool chordal = false;
    bool coversAllEdges = false;
    bool seamsSeparate = false;
    int maxclique = 0;
    double logWeight = 0.0;
    BigUint stateSpace;
};

// Union the frame-shifted copies of the per-partition cliques over the graph
// unrolled k times and verify the result (chordality via MCS on the filled
// graph, moral edge cover, seam separation).
AssembledTriangulation assembleUnrolled(const RepartitionedTemplate& rt, int k,
                                        const TriangulatedBlocks& blocks);

// Exact total state space as a function of the repetition count: ends + k
// times the repeating contribution, extracted from the k=1 and k=2
// assemblies. Virtual scoring for large k without materializing the graph.
struct UnrollWeightModel {
    BigUint ends;    // A in  state space = A + k B
    BigUint perCopy; // B
    int maxclique = 0;

    BigUint stateSpaceAt(std::uint64_t k) const;
    double logWeightAt(std::uint64_t k) const { return stateSpaceAt(k).log10(); }
};

UnrollWeightModel virtualWeightModel(const RepartitionedTemplate& rt,
                                     const TriangulatedBlocks& blocks);

// log10(A + k*B) for already-known clique state spaces; used by reports.
double virtualLogWeight(const BigUint& ends, const BigUint& perCopy, std::uint64_t k);

} // namespace dgmtri

#endif
