// Interface measures and the recursive boundary search.

#include "dgmtri/boundary.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

#include "dgmtri/errors.hpp"

namespace dgmtri {

QualityKind parseQualityKind(const std::string& name) {
    if (name == "size") return QualityKind::Size;
    if (name == "fillin") return QualityKind::Fillin;
    if (name == "weight") return QualityKind::Weight;
    if (name == "global-mc") return QualityKind::GlobalMaxclique;
    if (name == "global-weight") return QualityKind::GlobalWeight;
    throw InputError("unknown quality measure '" + name + "'");
}

const char* qualityKindName(QualityKind k) {
    switch (k) {
        case QualityKind::Size: return "size";
        case QualityKind::Fillin: return "fillin";
        case QualityKind::Weight: return "weight";
        case QualityKind::GlobalMaxclique: return "global-mc";
        case QualityKind::GlobalWeight: return "global-weight";
    }
    return "?";
}

bool isLocal(QualityKind k) {
    return k == QualityKind::Size || k == QualityKind::Fillin || k == QualityKind::Weight;
}

double Quality::value() const {
    switch (kind) {
        case QualityKind::Size:
        case QualityKind::Fillin:
        case QualityKind::GlobalMaxclique: return static_cast<double>(count);
        case QualityKind::Weight:
        case QualityKind::GlobalWeight: return big.log10();
    }
    return 0.0;
}

int Quality::compare(const Quality& a, const Quality& b) {
    if (a.kind != b.kind) throw InputError("comparing qualities of different kinds");
    switch (a.kind) {
        case QualityKind::Size:
        case QualityKind::Fillin:
        case QualityKind::GlobalMaxclique:
            return a.count < b.count ? -1 : (a.count > b.count ? 1 : 0);
        case QualityKind::Weight:
        case QualityKind::GlobalWeight: return a.big.compare(b.big);
    }
    return 0;
}

double jSize(std::span<const NodeId> iface) { return static_cast<double>(iface.size()); }

double jFillin(std::span<const NodeId> iface, const UGraph& g) {
    int missing = 0;
    for (std::size_t i = 0; i < iface.size(); ++i)
        for (std::size_t j = i + 1; j < iface.size(); ++j)
            if (!g.hasEdge(iface[i], iface[j])) ++missing;
    return static_cast<double>(missing);
}

double jWeight(std::span<const NodeId> iface, const UGraph& g) {
    BigUint prod(1);
    for (NodeId v : iface) prod.mulSmall(static_cast<std::uint64_t>(g.info(v).cardinality));
    return prod.log10();
}

// ----------------------------------------------------------------- Window

Window::Window(const Template& t, int M, bool reversedView)
    : tpl_(&t), reversed_(reversedView), M_(M) {
    if (M < 1) throw InputError("boundary window: M must be >= 1");
    requireValid(t);
    flank_ = moralSpan(t);
    if (M < flank_)
        throw ModelError("boundary window: moral edges span " + std::to_string(flank_) +
                         " chunks, so M must be at least " + std::to_string(flank_));

    const int copies = M_ + 2 * flank_;
    unrolled_ = unroll(t, copies);
    moral_ = moralize(unrolled_.graph);

    leftContext_ = reversed_ ? unrolled_.epilogueNodes() : unrolled_.prologueNodes();
    for (int f = 0; f < flank_; ++f) {
        auto copy = unrolled_.chunkNodes(viewToReal(f));
        leftContext_.insert(leftContext_.end(), copy.begin(), copy.end());
    }
    rightContext_ = reversed_ ? unrolled_.prologueNodes() : unrolled_.epilogueNodes();
    for (int f = 0; f < flank_; ++f) {
        auto copy = unrolled_.chunkNodes(viewToReal(flank_ + M_ + f));
        rightContext_.insert(rightContext_.end(), copy.begin(), copy.end());
    }
    std::sort(leftContext_.begin(), leftContext_.end());
    std::sort(rightContext_.begin(), rightContext_.end());

    regionOffsetOf_.assign(static_cast<std::size_t>(moral_.nodeCount()), -1);
    for (int off = 0; off < M_; ++off) {
        auto copy = unrolled_.chunkNodes(viewToReal(flank_ + off));
        std::sort(copy.begin(), copy.end());
        for (NodeId v : copy) regionOffsetOf_[v] = off;
        regionNodes_.insert(regionNodes_.end(), copy.begin(), copy.end());
        regionChunks_.push_back(std::move(copy));
    }
    std::sort(regionNodes_.begin(), regionNodes_.end());
}

int Window::viewToReal(int viewCopy) const {
    return reversed_ ? unrolled_.k - 1 - viewCopy : viewCopy;
}

NodeId Window::regionNode(int offset, int slot) const {
    return unrolled_.chunkNode(viewToReal(flank_ + offset), slot);
}

NodeId Window::shiftedRight(NodeId v, int copies) const {
    int region = unrolled_.regionOf[v];
    if (region < 0) throw InputError("shiftedRight: not a chunk node");
    int viewCopy = reversed_ ? unrolled_.k - 1 - region : region;
    return unrolled_.chunkNode(viewToReal(viewCopy + copies), unrolled_.slotOf[v]);
}

// ------------------------------------------------------- split interfaces

std::vector<NodeId> leftInterfaceAt(const UnrolledGraph& u, const UGraph& moral,
                                    int splitCopy) {
    // left part: prologue plus copies < splitCopy
    std::vector<NodeId> out;
    auto onLeft = [&](NodeId v) {
        int r = u.regionOf[v];
        if (r == UnrolledGraph::kPrologue) return true;
        if (r == UnrolledGraph::kEpilogue) return false;
        return r < splitCopy;
    };
    for (NodeId v = 0; v < moral.nodeCount(); ++v) {
        if (onLeft(v)) continue;
        for (NodeId w : moral.neighbors(v))
            if (onLeft(w)) {
                out.push_back(v);
                break;
            }
    }
    return out;
}

std::vector<NodeId> rightInterfaceAt(const UnrolledGraph& u, const UGraph& moral,
                                     int splitCopy) {
    std::vector<NodeId> out;
    auto onLeft = [&](NodeId v) {
        int r = u.regionOf[v];
        if (r == UnrolledGraph::kPrologue) return true;
        if (r == UnrolledGraph::kEpilogue) return false;
        return r < splitCopy;
    };
    for (NodeId v = 0; v < moral.nodeCount(); ++v) {
        if (!onLeft(v)) continue;
        for (NodeId w : moral.neighbors(v))
            if (!onLeft(w)) {
                out.push_back(v);
                break;
            }
    }
    return out;
}

// ----------------------------------------------------------------- search

namespace {

struct SearchState {
    const Window& w;
    QualityKind j;
    const SearchOptions& opts;

    std::vector<char> inLeftContext, inRightContext, inRegion;
    std::vector<char> inB, inIface;
    std::vector<NodeId> firstChunk; // sorted

    std::set<std::vector<NodeId>> memo;
    std::map<std::vector<NodeId>, Quality> globalCache;

    long statesVisited = 0;
    bool stopped = false;

    std::vector<NodeId> bestIface, bestB;
    Quality bestQuality;
    bool haveBest = false;

    explicit SearchState(const Window& win, QualityKind kind, const SearchOptions& o)
        : w(win), j(kind), opts(o) {
        const int n = win.moral().nodeCount();
        inLeftContext.assign(n, 0);
        inRightContext.assign(n, 0);
        inRegion.assign(n, 0);
        inB.assign(n, 0);
        inIface.assign(n, 0);
        for (NodeId v : win.leftContext()) inLeftContext[v] = 1;
        for (NodeId v : win.rightContext()) inRightContext[v] = 1;
        for (NodeId v : win.regionNodes()) inRegion[v] = 1;
        firstChunk = win.regionChunks().front();
    }

    Quality score(const std::vector<NodeId>& iface, const std::vector<NodeId>& bSet) {
        Quality q;
        q.kind = j;
        const UGraph& g = w.moral();
        switch (j) {
            case QualityKind::Size: q.count = iface.size(); break;
            case QualityKind::Fillin:
                q.count = static_cast<std::uint64_t>(jFillin(iface, g));
                break;
            case QualityKind::Weight: {
                q.big = BigUint(1);
                for (NodeId v : iface)
                    q.big.mulSmall(static_cast<std::uint64_t>(g.info(v).cardinality));
                break;
            }
            case QualityKind::GlobalMaxclique:
            case QualityKind::GlobalWeight: {
                auto it = globalCache.find(iface);
                if (it != globalCache.end()) return it->second;
                q = globalQuality(iface, bSet);
                globalCache.emplace(iface, q);
                break;
            }
        }
        return q;
    }

    // Triangulate the repeating partition this interface implies (chunk skip
    // one): from the interface to its one-copy shift.
    Quality globalQuality(const std::vector<NodeId>& iface, const std::vector<NodeId>& bSet) {
        static const EngineSettings defaultEngine; // greedy min-fill, min-size ties
        const EngineSettings& engine = opts.engine ? *opts.engine : defaultEngine;

        std::vector<NodeId> shiftedIface, shiftedB;
        for (NodeId v : iface) shiftedIface.push_back(w.shiftedRight(v));
        for (NodeId v : bSet) shiftedB.push_back(w.shiftedRight(v));

        // Repeating partition for chunk skip 1: everything between this
        // boundary and its one-copy shift, C' = (chunk_0 ∪ shift(B)) \ B.
        std::set<NodeId> part;
        for (NodeId v : w.regionChunks().front()) part.insert(v);
        for (NodeId v : shiftedB) part.insert(v);
        for (NodeId v : bSet) part.erase(v);

        // 1.5-chunk node set: C' plus both seam interfaces (the left one can
        // straddle into following copies when M > 1)
        std::set<NodeId> sub(part.begin(), part.end());
        sub.insert(iface.begin(), iface.end());
        sub.insert(shiftedIface.begin(), shiftedIface.end());
        std::vector<NodeId> subNodes(sub.begin(), sub.end());

        std::vector<NodeId> keepExtra; // left-interface stragglers outside C'
        for (NodeId v : iface)
            if (!part.count(v)) keepExtra.push_back(v);

        std::vector<NodeId> map;
        UGraph subGraph = inducedSubgraph(w.moral(), subNodes, &map);
        auto remap = [&](const std::vector<NodeId>& xs) {
            std::vector<NodeId> out;
            out.reserve(xs.size());
            for (NodeId v : xs) out.push_back(map[v]);
            return out;
        };
        auto tp = triangulatePartition(subGraph, remap(iface), remap(shiftedIface), engine,
                                       remap(keepExtra));

        Quality q;
        q.kind = j;
        if (j == QualityKind::GlobalMaxclique)
            q.count = static_cast<std::uint64_t>(tp.maxcliqueWithInterface);
        else
            q.big = tp.stateSpace;
        return q;
    }

    // lexicographic (quality, |iface|, iface ids) with strict improvement
    void noteInterface(const std::vector<NodeId>& iface, const std::vector<NodeId>& bSet) {
        ++statesVisited;
        if (opts.visitedSink) opts.visitedSink->push_back(iface);
        if (opts.checkSeparation) assertSeparation(iface, bSet);
        Quality q = score(iface, bSet);
        bool better = false;
        if (!haveBest)
            better = true;
        else {
            int c = Quality::compare(q, bestQuality);
            if (c < 0)
                better = true;
            else if (c == 0 && (iface.size() < bestIface.size() ||
                                (iface.size() == bestIface.size() && iface < bestIface)))
                better = true;
        }
        if (better) {
            bestQuality = q;
            bestIface = iface;
            bestB = bSet;
            haveBest = true;
        }
        if (opts.maxStates >= 0 && statesVisited >= opts.maxStates) stopped = true;
    }

    void assertSeparation(const std::vector<NodeId>& iface,
                          const std::vector<NodeId>& bSet) const {
        const UGraph& g = w.moral();
        std::vector<char> side(static_cast<std::size_t>(g.nodeCount()), 0);
        for (NodeId v : iface) side[v] = 1;
        std::vector<NodeId> left, right;
        for (NodeId v = 0; v < g.nodeCount(); ++v) {
            if (side[v]) continue;
            if (inLeftContext[v] || std::binary_search(bSet.begin(), bSet.end(), v))
                left.push_back(v);
            else
                right.push_back(v);
        }
        if (!isSeparator(g, iface, left, right))
            throw ModelError("boundary search: visited interface is not a separator");
    }

    void recurse(const std::vector<NodeId>& iface, const std::vector<NodeId>& bSet) {
        if (stopped) return;
        for (NodeId v : iface) {
            if (stopped) return;
            // never advance past a node touching the far context: the
            // boundary must stay within the M-chunk span
            bool touchesFar = false;
            for (NodeId nb : w.moral().neighbors(v))
                if (inRightContext[nb]) {
                    touchesFar = true;
                    break;
                }
            if (touchesFar) continue;

            std::vector<NodeId> nextB = bSet;
            nextB.insert(std::lower_bound(nextB.begin(), nextB.end(), v), v);

            // skipping an entire leading chunk would repeat a boundary that a
            // smaller window already produces
            if (std::includes(nextB.begin(), nextB.end(), firstChunk.begin(),
                              firstChunk.end()))
                continue;

            std::vector<NodeId> nextIface;
            nextIface.reserve(iface.size() + 4);
            std::set<NodeId> acc(iface.begin(), iface.end());
            for (NodeId nb : w.moral().neighbors(v))
                if (inRegion[nb]) acc.insert(nb);
            for (NodeId x : acc)
                if (!std::binary_search(nextB.begin(), nextB.end(), x))
                    nextIface.push_back(x);

            if (opts.memoize) {
                if (!memo.insert(nextIface).second) continue;
            }
            noteInterface(nextIface, nextB);
            recurse(nextIface, nextB);
        }
    }
};

} // namespace

BoundaryResult boundarySearch(const Window& w, QualityKind j, const SearchOptions& opts) {
    SearchState st(w, j, opts);

    // initial interface: region nodes adjacent to the left context
    std::vector<NodeId> iface;
    for (NodeId v : w.regionNodes())
        for (NodeId nb : w.moral().neighbors(v))
            if (st.inLeftContext[nb]) {
                iface.push_back(v);
                break;
            }
    std::vector<NodeId> bSet;

    st.noteInterface(iface, bSet);
    BoundaryResult res;
    res.initialQuality = st.bestQuality;
    res.initialSize = static_cast<int>(iface.size());
    if (opts.memoize) st.memo.insert(iface);
    if (opts.runSearch) st.recurse(iface, bSet);

    res.direction = w.reversedView() ? Direction::Right : Direction::Left;
    res.interfaceNodes = st.bestIface;
    res.advanced = st.bestB;
    res.quality = st.bestQuality;
    res.statesVisited = st.statesVisited;

    // boundary edges: one endpoint in leftContext ∪ B
    std::vector<char> leftSide(static_cast<std::size_t>(w.moral().nodeCount()), 0);
    for (NodeId v : w.leftContext()) leftSide[v] = 1;
    for (NodeId v : res.advanced) leftSide[v] = 1;
    for (const auto& [u, v] : w.moral().edges())
        if (leftSide[u] != leftSide[v]) res.boundaryEdges.emplace_back(u, v);

    for (NodeId v : res.interfaceNodes)
        res.interfacePattern.emplace_back(w.regionOffsetOf(v), w.slotOf(v));
    for (NodeId v : res.advanced)
        res.advancedPattern.emplace_back(w.regionOffsetOf(v), w.slotOf(v));
    std::sort(res.interfacePattern.begin(), res.interfacePattern.end());
    std::sort(res.advancedPattern.begin(), res.advancedPattern.end());
    for (NodeId v : res.interfaceNodes)
        res.interfaceLabels.push_back(w.moral().info(v).name + ":" +
                                      std::to_string(w.moral().info(v).frame));
    return res;
}

double jGlobal(std::span<const NodeId> iface, const Window& w, const EngineSettings& engine,
               QualityKind kind) {
    if (kind != QualityKind::GlobalMaxclique && kind != QualityKind::GlobalWeight)
        throw InputError("jGlobal requires a global quality kind");
    SearchOptions opts;
    opts.engine = &engine;
    SearchState st(w, kind, opts);

    // derive the left-of-boundary set by connectivity: region nodes cut off
    // from the right context by the interface
    std::vector<char> blocked(static_cast<std::size_t>(w.moral().nodeCount()), 0);
    for (NodeId v : iface) blocked[v] = 1;
    std::vector<char> reach(static_cast<std::size_t>(w.moral().nodeCount()), 0);
    std::vector<NodeId> stack(w.rightContext().begin(), w.rightContext().end());
    for (NodeId v : stack) reach[v] = 1;
    while (!stack.empty()) {
        NodeId x = stack.back();
        stack.pop_back();
        if (blocked[x]) continue;
        for (NodeId nb : w.moral().neighbors(x))
            if (!reach[nb] && !blocked[nb]) {
                reach[nb] = 1;
                stack.push_back(nb);
            }
    }
    std::vector<NodeId> bSet;
    for (NodeId v : w.regionNodes())
        if (!reach[v] && !blocked[v]) bSet.push_back(v);

    std::vector<NodeId> ifaceSorted(iface.begin(), iface.end());
    std::sort(ifaceSorted.begin(), ifaceSorted.end());
    return st.score(ifaceSorted, bSet).value();
}

BoundaryRun bestBoundary(const Template& t, int M, QualityKind j, Direction direction,
                         const SearchOptions& opts) {
    BoundaryRun run;
    if (direction == Direction::Left || direction == Direction::Both) {
        Window w(t, M, false);
        run.left = boundarySearch(w, j, opts);
    }
    if (direction == Direction::Right || direction == Direction::Both) {
        Window w(t, M, true);
        run.right = boundarySearch(w, j, opts);
    }
    if (run.left && run.right) {
        // keep the better result; exact ties go left
        run.best = (Quality::compare(run.right->quality, run.left->quality) < 0)
                       ? *run.right
                       : *run.left;
    } else if (run.left) {
        run.best = *run.left;
    } else {
        run.best = *run.right;
    }
    return run;
}

} // namespace dgmtri
