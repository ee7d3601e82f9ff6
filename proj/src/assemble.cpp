// Stitching triangulated partitions into a full unrolled triangulation.

#include "dgmtri/assemble.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dgmtri/errors.hpp"

namespace dgmtri {

TriangulatedBlocks triangulateBlocks(const RepartitionedTemplate& rt,
                                     const EngineSettings& engine) {
    TriangulatedBlocks out;
    out.p = triangulatePartition(rt.pUnit.graph, rt.pUnit.leftInterfaceLocal,
                                 rt.pUnit.rightInterfaceLocal, engine,
                                 rt.pUnit.keepExtraLocal);
    out.c = triangulatePartition(rt.cUnit.graph, rt.cUnit.leftInterfaceLocal,
                                 rt.cUnit.rightInterfaceLocal, engine,
                                 rt.cUnit.keepExtraLocal);
    out.e = triangulatePartition(rt.eUnit.graph, rt.eUnit.leftInterfaceLocal,
                                 rt.eUnit.rightInterfaceLocal, engine,
                                 rt.eUnit.keepExtraLocal);
    return out;
}

namespace {

// Map a unit-local clique onto the target unroll: local id -> canvas id ->
// canvas position -> shift -> target id.
std::vector<std::vector<NodeId>> placeCliques(const PartitionUnit& unit,
                                              const TriangulatedPartition& tp,
                                              const CanvasView& canvasView,
                                              const CanvasView& targetView,
                                              int copyDelta) {
    std::vector<std::vector<NodeId>> out;
    out.reserve(tp.cliques.size());
    for (const auto& clique : tp.cliques) {
        std::vector<NodeId> placed;
        placed.reserve(clique.size());
        for (NodeId local : clique) {
            NodeId canvasId = unit.canvasNodes[static_cast<std::size_t>(local)];
            Pos p = canvasView.posOf(canvasId);
            if (p.kind == Pos::Kind::Chunk) p.copy += copyDelta;
            NodeId target = targetView.nodeAt(p);
            if (target < 0)
                throw ModelError("assemble: clique node falls outside the unrolled graph");
            placed.push_back(target);
        }
        std::sort(placed.begin(), placed.end());
        out.push_back(std::move(placed));
    }
    return out;
}

} // namespace

AssembledTriangulation assembleUnrolled(const RepartitionedTemplate& rt, int k,
                                        const TriangulatedBlocks& blocks) {
    if (k < 1) throw InputError("assemble: k must be >= 1");
    AssembledTriangulation out;
    out.k = k;
    out.copies = rt.M + k * rt.S;
    out.slices = rt.lengths.slicesFor(k);
    if (!rt.lengths.admits(out.slices))
        throw ModelError("assemble: inadmissible unroll length; " + rt.lengths.formula());

    auto target = unroll(rt.source, out.copies);
    out.moralGraph = moralize(target.graph);
    CanvasView targetView(target, rt.reversedView);
    CanvasView canvasView = rt.view();

    const int S = rt.S;
    const int eAnchor = rt.canvas.k - rt.M - S;

    std::vector<std::vector<NodeId>> cliques =
        placeCliques(rt.pUnit, blocks.p, canvasView, targetView, 0);
    for (int j = 0; j < k; ++j) {
        auto cs = placeCliques(rt.cUnit, blocks.c, canvasView, targetView, (j - 1) * S);
        cliques.insert(cliques.end(), cs.begin(), cs.end());
    }
    {
        auto cs = placeCliques(rt.eUnit, blocks.e, canvasView, targetView,
                               (k - 1) * S - eAnchor);
        cliques.insert(cliques.end(), cs.begin(), cs.end());
    }
    out.cliques = pruneNonMaximal(std::move(cliques));

    // verification: chordality of the filled graph, moral edge cover, seams
    UGraph filled(out.moralGraph.nodes());
    for (const auto& [u, v] : out.moralGraph.edges()) filled.addEdge(u, v);
    for (const auto& clique : out.cliques)
        for (std::size_t i = 0; i < clique.size(); ++i)
            for (std::size_t j = i + 1; j < clique.size(); ++j)
                filled.addEdge(clique[i], clique[j]);
    out.chordal = mcs(filled).second;

    std::vector<std::vector<int>> memberOf(
        static_cast<std::size_t>(out.moralGraph.nodeCount()));
    for (std::size_t ci = 0; ci < out.cliques.size(); ++ci)
        for (NodeId v : out.cliques[ci]) memberOf[v].push_back(static_cast<int>(ci));
    out.coversAllEdges = true;
    for (const auto& [u, v] : out.moralGraph.edges()) {
        bool covered = false;
        for (int ci : memberOf[u]) {
            const auto& c = out.cliques[static_cast<std::size_t>(ci)];
            if (std::binary_search(c.begin(), c.end(), v)) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            out.coversAllEdges = false;
            break;
        }
    }

    out.seamsSeparate = true;
    for (int seam = 0; seam <= k && out.seamsSeparate; ++seam)
        out.seamsSeparate = seamSeparates(targetView, out.moralGraph, rt.cumAdvanced,
                                          rt.cumInterface, seam * S);

    out.maxclique = 0;
    for (const auto& c : out.cliques)
        out.maxclique = std::max<int>(out.maxclique, static_cast<int>(c.size()));
    out.stateSpace = totalStateSpace(out.cliques, out.moralGraph);
    out.logWeight = out.stateSpace.log10();
    return out;
}

BigUint UnrollWeightModel::stateSpaceAt(std::uint64_t k) const {
    BigUint total = perCopy;
    total.mulSmall(k);
    total.add(ends);
    return total;
}

UnrollWeightModel virtualWeightModel(const RepartitionedTemplate& rt,
                                     const TriangulatedBlocks& blocks) {
    // The state space is A + kB once every repeated copy sees the same
    // neighborhood; at k = 1 the sole copy touches both ends, so the model is
    // extracted from k = 2 and k = 3.
    auto a2 = assembleUnrolled(rt, 2, blocks);
    auto a3 = assembleUnrolled(rt, 3, blocks);
    UnrollWeightModel model;
    model.maxclique = std::max(a2.maxclique, a3.maxclique);
    model.perCopy = a3.stateSpace;
    model.perCopy.sub(a2.stateSpace);
    model.ends = a2.stateSpace;
    BigUint twoB = model.perCopy;
    twoB.mulSmall(2);
    model.ends.sub(twoB);
    return model;
}

double virtualLogWeight(const BigUint& ends, const BigUint& perCopy, std::uint64_t k) {
    BigUint total = perCopy;
    total.mulSmall(k);
    total.add(ends);
    return total.log10();
}

} // namespace dgmtri
