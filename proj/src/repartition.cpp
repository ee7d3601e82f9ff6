// The partition algorithm: lay two copies of a boundary S chunks apart and
// cut the partially unrolled graph into [P', C', E'].

#include "dgmtri/repartition.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "dgmtri/errors.hpp"

namespace dgmtri {

// ------------------------------------------------------------- CanvasView

NodeId CanvasView::nodeAt(const Pos& p) const {
    switch (p.kind) {
        case Pos::Kind::Prologue: {
            if (p.slot < 0 || p.slot >= prologueSlots()) return -1;
            return reversed_ ? u_->eNode(p.slot) : u_->pNode(p.slot);
        }
        case Pos::Kind::Epilogue: {
            if (p.slot < 0 || p.slot >= epilogueSlots()) return -1;
            return reversed_ ? u_->pNode(p.slot) : u_->eNode(p.slot);
        }
        case Pos::Kind::Chunk: {
            if (p.copy < 0 || p.copy >= u_->k) return -1;
            if (p.slot < 0 || p.slot >= u_->cVarCount) return -1;
            return u_->chunkNode(viewToReal(p.copy), p.slot);
        }
    }
    return -1;
}

Pos CanvasView::posOf(NodeId v) const {
    int region = u_->regionOf[v];
    int slot = u_->slotOf[v];
    if (region == UnrolledGraph::kPrologue)
        return Pos{reversed_ ? Pos::Kind::Epilogue : Pos::Kind::Prologue, 0, slot};
    if (region == UnrolledGraph::kEpilogue)
        return Pos{reversed_ ? Pos::Kind::Prologue : Pos::Kind::Epilogue, 0, slot};
    return Pos{Pos::Kind::Chunk, reversed_ ? u_->k - 1 - region : region, slot};
}

std::vector<NodeId> CanvasView::prologue() const {
    return reversed_ ? u_->epilogueNodes() : u_->prologueNodes();
}

std::vector<NodeId> CanvasView::epilogue() const {
    return reversed_ ? u_->prologueNodes() : u_->epilogueNodes();
}

std::vector<NodeId> CanvasView::chunkCopy(int viewCopy) const {
    return u_->chunkNodes(viewToReal(viewCopy));
}

// ---------------------------------------------------- admissible lengths

bool AdmissibleLengths::admits(int T) const {
    long long rem = static_cast<long long>(T) - pSlices - eSlices -
                    static_cast<long long>(M) * cSlices;
    long long step = static_cast<long long>(S) * cSlices;
    return rem >= step && rem % step == 0;
}

std::string AdmissibleLengths::formula() const {
    std::ostringstream os;
    os << "T = " << pSlices << " + (" << M << " + k*" << S << ")*" << cSlices << " + "
       << eSlices << ", k >= 1";
    return os.str();
}

// ------------------------------------------------------------------- cuts

namespace {

std::vector<NodeId> connectedCut(const UGraph& g, std::span<const Edge> boundaryEdges,
                                 std::span<const NodeId> region, bool fromLeft) {
    std::set<Edge> blocked(boundaryEdges.begin(), boundaryEdges.end());
    auto isBlocked = [&](NodeId a, NodeId b) {
        return blocked.count({std::min(a, b), std::max(a, b)}) > 0;
    };
    int seedFrame = fromLeft ? std::numeric_limits<int>::max()
                             : std::numeric_limits<int>::min();
    for (NodeId v = 0; v < g.nodeCount(); ++v)
        seedFrame = fromLeft ? std::min(seedFrame, g.info(v).frame)
                             : std::max(seedFrame, g.info(v).frame);
    std::vector<char> visited(static_cast<std::size_t>(g.nodeCount()), 0);
    std::vector<NodeId> stack;
    for (NodeId v = 0; v < g.nodeCount(); ++v)
        if (g.info(v).frame == seedFrame) {
            visited[v] = 1;
            stack.push_back(v);
        }
    while (!stack.empty()) {
        NodeId x = stack.back();
        stack.pop_back();
        for (NodeId w : g.neighbors(x)) {
            if (visited[w] || isBlocked(x, w)) continue;
            visited[w] = 1;
            stack.push_back(w);
        }
    }
    std::vector<NodeId> out;
    for (NodeId v : region)
        if (visited[v]) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::vector<NodeId> lCut(const UGraph& g, std::span<const Edge> boundaryEdges,
                         std::span<const NodeId> region) {
    auto left = connectedCut(g, boundaryEdges, region, true);
    auto right = connectedCut(g, boundaryEdges, region, false);
    std::vector<NodeId> overlap;
    std::set_intersection(left.begin(), left.end(), right.begin(), right.end(),
                          std::back_inserter(overlap));
    if (!overlap.empty())
        throw ModelError("cut: boundary edges do not disconnect the region");
    return left;
}

std::vector<NodeId> rCut(const UGraph& g, std::span<const Edge> boundaryEdges,
                         std::span<const NodeId> region) {
    auto left = connectedCut(g, boundaryEdges, region, true);
    auto right = connectedCut(g, boundaryEdges, region, false);
    std::vector<NodeId> overlap;
    std::set_intersection(left.begin(), left.end(), right.begin(), right.end(),
                          std::back_inserter(overlap));
    if (!overlap.empty())
        throw ModelError("cut: boundary edges do not disconnect the region");
    return right;
}

// -------------------------------------------------------------- partition

namespace {

using Pattern = std::vector<std::pair<int, int>>; // (copy offset, slot)

// Overlapping boundary instances S apart union into one cumulative pattern:
// a position is left of the cumulative boundary iff some earlier instance
// has it on its left.
Pattern cumulativeAdvanced(const Pattern& advanced, int S) {
    std::set<std::pair<int, int>> out;
    for (auto [off, slot] : advanced)
        for (int base = off; base >= 0; base -= S) out.insert({base, slot});
    return Pattern(out.begin(), out.end());
}

Pattern cumulativeInterface(const Pattern& iface, const Pattern& cumAdv, int S) {
    std::set<std::pair<int, int>> adv(cumAdv.begin(), cumAdv.end());
    std::set<std::pair<int, int>> out;
    for (auto [off, slot] : iface)
        for (int base = off; base >= 0; base -= S)
            if (!adv.count({base, slot})) out.insert({base, slot});
    return Pattern(out.begin(), out.end());
}

std::vector<Pos> patternPositions(const Pattern& pat, int anchorCopy) {
    std::vector<Pos> out;
    out.reserve(pat.size());
    for (auto [off, slot] : pat) out.push_back({Pos::Kind::Chunk, anchorCopy + off, slot});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeId> positionsToNodes(const CanvasView& v, const std::vector<Pos>& ps,
                                     int copyDelta) {
    std::vector<NodeId> out;
    out.reserve(ps.size());
    for (Pos p : ps) {
        if (p.kind == Pos::Kind::Chunk) p.copy += copyDelta;
        NodeId id = v.nodeAt(p);
        if (id < 0) throw ModelError("partition: block position outside the canvas");
        out.push_back(id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

// separation of one instantiated boundary: the interface image must cut
// (prologue + copies < anchor + advanced image) from the rest
bool seamSeparates(const CanvasView& v, const UGraph& moral,
                   const std::vector<std::pair<int, int>>& cumAdvanced,
                   const std::vector<std::pair<int, int>>& cumInterface, int anchorCopy) {
    std::vector<char> iface(static_cast<std::size_t>(moral.nodeCount()), 0);
    std::vector<char> left(static_cast<std::size_t>(moral.nodeCount()), 0);
    for (auto [off, slot] : cumInterface) {
        NodeId id = v.nodeAt({Pos::Kind::Chunk, anchorCopy + off, slot});
        if (id >= 0) iface[id] = 1;
    }
    for (NodeId p : v.prologue()) left[p] = 1;
    for (int c = 0; c < anchorCopy; ++c)
        for (NodeId x : v.chunkCopy(c)) left[x] = 1;
    for (auto [off, slot] : cumAdvanced) {
        NodeId id = v.nodeAt({Pos::Kind::Chunk, anchorCopy + off, slot});
        if (id >= 0) left[id] = 1;
    }
    std::vector<NodeId> sep, lhs, rhs;
    for (NodeId x = 0; x < moral.nodeCount(); ++x) {
        if (iface[x])
            sep.push_back(x);
        else if (left[x])
            lhs.push_back(x);
        else
            rhs.push_back(x);
    }
    return isSeparator(moral, sep, lhs, rhs);
}

namespace {

void checkSeamSeparation(const CanvasView& v, const UGraph& moral,
                         const std::vector<std::pair<int, int>>& cumAdv,
                         const std::vector<std::pair<int, int>>& cumIface, int anchorCopy) {
    if (!seamSeparates(v, moral, cumAdv, cumIface, anchorCopy))
        throw ModelError(
            "partition: an instantiated boundary does not separate; the prologue or "
            "epilogue structure is incompatible with laying this boundary across chunks");
}

} // namespace

std::vector<NodeId> RepartitionedTemplate::blockNodes(const CanvasView& v,
                                                      const std::vector<Pos>& block,
                                                      int copyDelta) const {
    return positionsToNodes(v, block, copyDelta);
}

RepartitionedTemplate partitionTemplate(const Template& t, int M, int S, QualityKind j,
                                        const SearchOptions& opts) {
    if (S < 1) throw InputError("partition: S must be >= 1");
    auto run = bestBoundary(t, M, j, Direction::Both, opts);
    return partitionTemplate(t, M, S, run.best);
}

RepartitionedTemplate partitionTemplate(const Template& t, int M, int S,
                                        const BoundaryResult& boundary) {
    if (M < 1 || S < 1) throw InputError("partition: M and S must be >= 1");
    requireValid(t);

    RepartitionedTemplate rt;
    rt.source = t;
    rt.M = M;
    rt.S = S;
    rt.boundary = boundary;
    rt.direction = boundary.direction;
    rt.reversedView = boundary.direction == Direction::Right;

    rt.cumAdvanced = cumulativeAdvanced(boundary.advancedPattern, S);
    rt.cumInterface = cumulativeInterface(boundary.interfacePattern, rt.cumAdvanced, S);

    // Block contents, canvas-relative. P' owns the advanced image of the
    // first instance; interfaces sit right of their boundary.
    std::set<Pos> pSet, cSet, eSet;
    const auto basic = unroll(t, 1);
    const int pSlots = rt.reversedView ? basic.eVarCount : basic.pVarCount;
    const int eSlots = rt.reversedView ? basic.pVarCount : basic.eVarCount;
    const int cSlots = basic.cVarCount;

    for (int s = 0; s < pSlots; ++s) pSet.insert({Pos::Kind::Prologue, 0, s});
    const auto advPos0 = patternPositions(rt.cumAdvanced, 0);
    const auto advPos1 = patternPositions(rt.cumAdvanced, S);
    for (const Pos& p : advPos0) pSet.insert(p);
    std::set<Pos> adv0(advPos0.begin(), advPos0.end());
    std::set<Pos> adv1(advPos1.begin(), advPos1.end());
    for (int c = 0; c < S; ++c)
        for (int s = 0; s < cSlots; ++s) {
            Pos p{Pos::Kind::Chunk, c, s};
            if (!adv0.count(p)) cSet.insert(p);
        }
    for (Pos p : adv1)
        if (!adv0.count(p)) cSet.insert(p);

    // E' covers the k=1 remainder: copies S..S+M-1 minus the advanced image
    // of the second instance, plus the epilogue
    for (int c = S; c < S + M; ++c)
        for (int s = 0; s < cSlots; ++s) {
            Pos p{Pos::Kind::Chunk, c, s};
            if (!adv1.count(p)) eSet.insert(p);
        }
    for (int s = 0; s < eSlots; ++s) eSet.insert({Pos::Kind::Epilogue, 0, s});

    rt.pPrime.assign(pSet.begin(), pSet.end());
    rt.cPrime.assign(cSet.begin(), cSet.end());
    rt.ePrime.assign(eSet.begin(), eSet.end());

    rt.lengths = AdmissibleLengths{t.pFrames, t.cFrames, t.eFrames, M, S};
    if (rt.reversedView) std::swap(rt.lengths.pSlices, rt.lengths.eSlices);

    // Working canvas: every block with its true context, plus room for the
    // edge patterns to reach two copies past each block.
    const int canvasCopies = M + 3 * S + 2;
    rt.canvas = unroll(t, canvasCopies);
    rt.canvasMoral = moralize(rt.canvas.graph);
    CanvasView view(rt.canvas, rt.reversedView);

    // Separation holds on the search window by construction; laying the
    // boundary across plain chunk copies must be checked explicitly. The last
    // anchor validates the seam sitting directly against the real epilogue.
    const int eAnchor = canvasCopies - M - S;
    for (int anchor : {0, S, 2 * S, eAnchor + S})
        checkSeamSeparation(view, rt.canvasMoral, rt.cumAdvanced, rt.cumInterface, anchor);

    // the three blocks must tile the M+S-copy unroll exactly
    {
        auto u1 = unroll(t, M + S);
        CanvasView v1(u1, rt.reversedView);
        std::set<NodeId> seen;
        std::size_t total = 0;
        for (const auto* block : {&rt.pPrime, &rt.cPrime, &rt.ePrime}) {
            auto ids = positionsToNodes(v1, *block, 0);
            total += ids.size();
            seen.insert(ids.begin(), ids.end());
        }
        if (total != seen.size() ||
            seen.size() != static_cast<std::size_t>(u1.graph.nodeCount()))
            throw ModelError("partition: blocks do not tile the unrolled graph");
    }

    // triangulation units with their seam interfaces
    auto makeUnit = [&](const char* name, const std::vector<Pos>& block, int delta,
                        const Pattern& leftIface, int leftAnchor, const Pattern& rightIface,
                        int rightAnchor) {
        PartitionUnit unit;
        unit.name = name;
        unit.anchorCopy = delta;
        std::set<NodeId> nodes;
        auto blockIds = positionsToNodes(view, block, delta);
        nodes.insert(blockIds.begin(), blockIds.end());
        std::vector<NodeId> leftIds, rightIds;
        for (auto [off, slot] : leftIface) {
            NodeId id = view.nodeAt({Pos::Kind::Chunk, leftAnchor + off, slot});
            if (id < 0) throw ModelError("partition: seam interface outside the canvas");
            leftIds.push_back(id);
            nodes.insert(id);
        }
        for (auto [off, slot] : rightIface) {
            NodeId id = view.nodeAt({Pos::Kind::Chunk, rightAnchor + off, slot});
            if (id < 0) throw ModelError("partition: seam interface outside the canvas");
            rightIds.push_back(id);
            nodes.insert(id);
        }
        unit.canvasNodes.assign(nodes.begin(), nodes.end());
        std::vector<NodeId> map;
        unit.graph = inducedSubgraph(rt.canvasMoral, unit.canvasNodes, &map);
        std::set<NodeId> blockSet(blockIds.begin(), blockIds.end());
        for (NodeId id : leftIds) {
            unit.leftInterfaceLocal.push_back(map[id]);
            if (!blockSet.count(id)) unit.keepExtraLocal.push_back(map[id]);
        }
        for (NodeId id : rightIds) unit.rightInterfaceLocal.push_back(map[id]);
        std::sort(unit.leftInterfaceLocal.begin(), unit.leftInterfaceLocal.end());
        std::sort(unit.rightInterfaceLocal.begin(), unit.rightInterfaceLocal.end());
        std::sort(unit.keepExtraLocal.begin(), unit.keepExtraLocal.end());
        return unit;
    };

    const Pattern empty;
    rt.pUnit = makeUnit("P'", rt.pPrime, 0, empty, 0, rt.cumInterface, 0);
    rt.cUnit = makeUnit("C'", rt.cPrime, S, rt.cumInterface, S, rt.cumInterface, 2 * S);
    rt.eUnit = makeUnit("E'", rt.ePrime, eAnchor, rt.cumInterface, eAnchor + S, empty, 0);
    return rt;
}

// ------------------------------------------------- pattern-based reunroll

namespace {

struct PatternEdge {
    Pos a, b;
};

// total order on positions: prologue, chunk copies, epilogue
bool posLess(const Pos& x, const Pos& y) {
    auto key = [](const Pos& p) {
        int major = p.kind == Pos::Kind::Prologue ? -1
                    : p.kind == Pos::Kind::Epilogue ? (1 << 28)
                                                    : p.copy;
        return std::pair<int, int>(major, p.slot);
    };
    return key(x) < key(y);
}

Pos shiftPos(Pos p, int delta) {
    if (p.kind == Pos::Kind::Chunk) p.copy += delta;
    return p;
}

} // namespace

ReunrolledGraph reunrollFromPatterns(const RepartitionedTemplate& rt, int k) {
    if (k < 1) throw InputError("reunroll: k must be >= 1");
    CanvasView canvasView = rt.view();
    const int S = rt.S, M = rt.M;
    const int eAnchor = rt.canvas.k - M - S;

    // block images on the extraction canvas, for edge classification
    auto imageSet = [&](const std::vector<Pos>& block, int delta) {
        std::set<Pos> out;
        for (Pos p : block) out.insert(shiftPos(p, delta));
        return out;
    };
    std::set<Pos> pImg = imageSet(rt.pPrime, 0);
    std::set<Pos> cImg = imageSet(rt.cPrime, S);
    std::set<Pos> eImg = imageSet(rt.ePrime, eAnchor);

    // classify every canvas edge by the block owning its lower endpoint
    std::vector<PatternEdge> pPat, cPat, ePat;
    for (const auto& [u, v] : rt.canvasMoral.edges()) {
        Pos a = canvasView.posOf(u), b = canvasView.posOf(v);
        if (posLess(b, a)) std::swap(a, b);
        if (pImg.count(a))
            pPat.push_back({a, b});
        else if (cImg.count(a))
            cPat.push_back({shiftPos(a, -S), shiftPos(b, -S)});
        else if (eImg.count(a))
            ePat.push_back({shiftPos(a, -eAnchor), shiftPos(b, -eAnchor)});
    }

    // target layout
    auto target = unroll(rt.source, M + k * S);
    CanvasView tview(target, rt.reversedView);

    // tiling check: blocks cover the target exactly once
    std::vector<int> owner(static_cast<std::size_t>(target.graph.nodeCount()), -1);
    auto claim = [&](const std::vector<Pos>& block, int delta, int tag) {
        for (Pos p : block) {
            NodeId id = tview.nodeAt(shiftPos(p, delta));
            if (id < 0 || owner[id] != -1)
                throw ModelError("reunroll: block tiling mismatch");
            owner[id] = tag;
        }
    };
    claim(rt.pPrime, 0, 0);
    for (int j = 0; j < k; ++j) claim(rt.cPrime, j * S, 1);
    claim(rt.ePrime, (k - 1) * S, 2);
    for (int own : owner)
        if (own == -1) throw ModelError("reunroll: block tiling leaves gaps");

    UGraph out(target.graph.nodes());
    auto place = [&](const std::vector<PatternEdge>& pat, int delta) {
        for (const auto& e : pat) {
            NodeId a = tview.nodeAt(shiftPos(e.a, delta));
            NodeId b = tview.nodeAt(shiftPos(e.b, delta));
            if (a < 0 || b < 0) continue; // position past this unroll length
            out.addEdge(a, b);
        }
    };
    place(pPat, 0);
    for (int j = 0; j < k; ++j) place(cPat, j * S);
    place(ePat, (k - 1) * S);

    ReunrolledGraph res{std::move(out), {}};
    res.nodeKeys.reserve(static_cast<std::size_t>(target.graph.nodeCount()));
    for (NodeId v = 0; v < target.graph.nodeCount(); ++v)
        res.nodeKeys.emplace_back(target.graph.info(v).name, target.graph.info(v).frame);
    return res;
}

} // namespace dgmtri
