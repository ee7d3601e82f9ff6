#ifndef DGMTRI_REPARTITION_HPP
#define DGMTRI_REPARTITION_HPP

#include <compare>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dgmtri/boundary.hpp"
#include "dgmtri/graph.hpp"
#include "dgmtri/template.hpp"

namespace dgmtri {

// A node position in view coordinates, independent of how far the template is
// unrolled. Chunk positions name a copy index; prologue/epilogue positions
// name a slot only.
struct Pos {
    enum class Kind : std::uint8_t { Prologue = 0, Chunk = 1, Epilogue = 2 };
    Kind kind = Kind::Chunk;
    int copy = 0; // chunk positions only
    int slot = 0;

    auto operator<=>(const Pos&) const = default;
};

// View over an unrolled graph that can present the mirror image (copies and
// prologue/epilogue roles reversed) so boundary layout code is written once.
class CanvasView {
public:
    CanvasView(const UnrolledGraph& u, bool reversed) : u_(&u), reversed_(reversed) {}

    int copies() const { return u_->k; }
    bool reversed() const { return reversed_; }
    const UnrolledGraph& unrolled() const { return *u_; }

    NodeId nodeAt(const Pos& p) const;   // -1 when the position does not exist
    Pos posOf(NodeId v) const;
    std::vector<NodeId> prologue() const;
    std::vector<NodeId> epilogue() const;
    std::vector<NodeId> chunkCopy(int viewCopy) const;
    int prologueSlots() const { return reversed_ ? u_->eVarCount : u_->pVarCount; }
    int epilogueSlots() const { return reversed_ ? u_->pVarCount : u_->eVarCount; }

private:
    int viewToReal(int viewCopy) const { return reversed_ ? u_->k - 1 - viewCopy : viewCopy; }
    const UnrolledGraph* u_;
    bool reversed_;
};

struct AdmissibleLengths {
    int pSlices = 0, cSlices = 1, eSlices = 0;
    int M = 1, S = 1;

    // T = pSlices + (M + k S) cSlices + eSlices for some k >= 1
    bool admits(int T) const;
    int slicesFor(int k) const { return pSlices + (M + k * S) * cSlices + eSlices; }
    std::string formula() const;
};

// One triangulation unit: a partition with its seam interfaces, extracted
// from the working canvas with its true surrounding context.
struct PartitionUnit {
    std::string name;                 // "P'", "C'", "E'"
    std::vector<NodeId> canvasNodes;  // induced selection, sorted (= local ids)
    UGraph graph;                     // induced moral subgraph
    std::vector<NodeId> leftInterfaceLocal;
    std::vector<NodeId> rightInterfaceLocal;
    std::vector<NodeId> keepExtraLocal; // left-seam stragglers owned by later copies
    int anchorCopy = 0;               // canvas copy where the block was extracted
};

struct RepartitionedTemplate {
    Template source;
    int M = 1, S = 1;
    Direction direction = Direction::Left;
    bool reversedView = false;

    BoundaryResult boundary; // as found on the search window

    // cumulative boundary pattern (offset in 0..M-1, slot); for M <= S this
    // is exactly the search pattern, for M > S overlapping instances union up
    std::vector<std::pair<int, int>> cumAdvanced;
    std::vector<std::pair<int, int>> cumInterface;

    // block contents as canvas-relative positions (chunk copies 0-based):
    //   P' anchored at copy 0, C' repeats every S copies, E' rides at the end
    std::vector<Pos> pPrime, cPrime, ePrime;

    AdmissibleLengths lengths;

    // working canvas: the template unrolled far enough that every block sits
    // with its real context (M + 3S + 2 copies)
    UnrolledGraph canvas;
    UGraph canvasMoral;

    PartitionUnit pUnit, cUnit, eUnit;

    CanvasView view() const { return CanvasView(canvas, reversedView); }

    // node id sets of the k=1 layout blocks on a given unrolled graph
    std::vector<NodeId> blockNodes(const CanvasView& v, const std::vector<Pos>& block,
                                   int copyDelta) const;
};

// The partition algorithm: find (or accept) a boundary, lay two copies of it
// S chunks apart, and cut the partially unrolled graph into [P', C', E'].
RepartitionedTemplate partitionTemplate(const Template& t, int M, int S, QualityKind j,
                                        const SearchOptions& opts = {});
RepartitionedTemplate partitionTemplate(const Template& t, int M, int S,
                                        const BoundaryResult& boundary);

// True iff the boundary instance anchored at `anchorCopy` separates the
// left-of-boundary side from the rest of the graph.
bool seamSeparates(const CanvasView& v, const UGraph& moral,
                   const std::vector<std::pair<int, int>>& cumAdvanced,
                   const std::vector<std::pair<int, int>>& cumInterface, int anchorCopy);

// Connected-side cuts: region nodes reachable from the lowest-frame (resp.
// highest-frame) nodes of g without crossing a boundary edge. Throws
// ModelError when the boundary edges do not disconnect the region.
std::vector<NodeId> lCut(const UGraph& g, std::span<const Edge> boundaryEdges,
                         std::span<const NodeId> region);
std::vector<NodeId> rCut(const UGraph& g, std::span<const Edge> boundaryEdges,
                         std::span<const NodeId> region);

// Rebuild the k-times unrolled moral graph purely from the blocks and their
// extracted edge patterns (the direct unroll is the verification target, not
// an input). Returns the graph plus, per node, the (name, real frame) pair.
struct ReunrolledGraph {
    UGraph graph;
    std::vector<std::pair<std::string, int>> nodeKeys; // name, absolute frame
};
ReunrolledGraph reunrollFromPatterns(const RepartitionedTemplate& rt, int k);

} // namespace dgmtri

#endif
