#ifndef DGMTRI_BOUNDARY_HPP
#define DGMTRI_BOUNDARY_HPP

#include <optional>
#include <span>
#include <vector>

#include "dgmtri/engine.hpp"
#include "dgmtri/graph.hpp"
#include "dgmtri/template.hpp"

namespace dgmtri {

enum class Direction { Left, Right, Both };

enum class QualityKind { Size, Fillin, Weight, GlobalMaxclique, GlobalWeight };

QualityKind parseQualityKind(const std::string& name);
const char* qualityKindName(QualityKind k);
bool isLocal(QualityKind k);

// Interface quality, lower is better. Weight-flavored measures carry the
// exact integer state space so that equal-quality interfaces compare equal
// regardless of the cardinality multiset behind them.
struct Quality {
    QualityKind kind = QualityKind::Size;
    std::uint64_t count = 0; // Size, Fillin, GlobalMaxclique
    BigUint big;             // Weight (product), GlobalWeight (state space)

    double value() const; // numeric form for reports (log10 for weights)
    static int compare(const Quality& a, const Quality& b);
    bool operator<(const Quality& o) const { return compare(*this, o) < 0; }
    bool operator==(const Quality& o) const { return compare(*this, o) == 0; }
};

// Local interface measures.
double jSize(std::span<const NodeId> iface);
double jFillin(std::span<const NodeId> iface, const UGraph& g);
double jWeight(std::span<const NodeId> iface, const UGraph& g);

// A moralized search window: the template unrolled so the M search chunks sit
// between full flanking chunk copies on both sides (the flanks stand in for
// whatever precedes/follows a repetition, which also covers empty P or E).
// All boundary machinery works in "view" coordinates where the prologue side
// is on the left; a reversed window presents the mirror image so the right
// interface search is the same code.
class Window {
public:
    Window(const Template& t, int M, bool reversedView);

    const Template& source() const { return *tpl_; }
    const UGraph& moral() const { return moral_; }
    const UnrolledGraph& unrolled() const { return unrolled_; }
    bool reversedView() const { return reversed_; }
    int chunkSpan() const { return M_; }
    int flank() const { return flank_; }

    const std::vector<NodeId>& leftContext() const { return leftContext_; }
    const std::vector<NodeId>& rightContext() const { return rightContext_; }
    const std::vector<std::vector<NodeId>>& regionChunks() const { return regionChunks_; }
    const std::vector<NodeId>& regionNodes() const { return regionNodes_; }
    bool inRegion(NodeId v) const { return regionOffsetOf_[v] >= 0; }

    // chunk offset within the M-chunk span (0..M-1); -1 outside the region
    int regionOffsetOf(NodeId v) const { return regionOffsetOf_[v]; }
    int slotOf(NodeId v) const { return unrolled_.slotOf[v]; }
    NodeId regionNode(int offset, int slot) const;
    // node one view-copy to the right of a region node (right flank allowed)
    NodeId shiftedRight(NodeId v, int copies = 1) const;

private:
    const Template* tpl_;
    UnrolledGraph unrolled_;
    UGraph moral_;
    bool reversed_ = false;
    int M_ = 1;
    int flank_ = 1;
    std::vector<NodeId> leftContext_, rightContext_, regionNodes_;
    std::vector<std::vector<NodeId>> regionChunks_;
    std::vector<int> regionOffsetOf_;
    int viewToReal(int viewCopy) const;
};

struct BoundaryResult {
    Direction direction = Direction::Left;
    std::vector<NodeId> interfaceNodes; // C_L, window node ids, sorted
    std::vector<NodeId> advanced;       // B_L, nodes the boundary moved past
    std::vector<Edge> boundaryEdges;    // exactly one endpoint left of the boundary
    Quality quality;
    long statesVisited = 0;
    Quality initialQuality;
    int initialSize = 0;

    // chunk-relative pattern (offset within span, slot), sorted
    std::vector<std::pair<int, int>> interfacePattern;
    std::vector<std::pair<int, int>> advancedPattern;

    std::vector<std::string> interfaceLabels; // "name:frame" per interface node
};

struct SearchOptions {
    bool runSearch = true;       // false: report the initial interface only
    bool memoize = true;
    long maxStates = -1;         // cap on scored interfaces, -1 = unlimited
    bool checkSeparation = false; // assert the separator property on every visited state
    const EngineSettings* engine = nullptr; // for global quality kinds
    // collects every visited interface when set (testing hook)
    std::vector<std::vector<NodeId>>* visitedSink = nullptr;
};

// Interface of the nodes at/after `splitCopy` toward the earlier copies, on a
// moralized unrolled graph (split runs between chunk copies; the epilogue is
// copy index k).
std::vector<NodeId> leftInterfaceAt(const UnrolledGraph& u, const UGraph& moral,
                                    int splitCopy);
std::vector<NodeId> rightInterfaceAt(const UnrolledGraph& u, const UGraph& moral,
                                     int splitCopy);

// The recursive boundary advance over a window (always the view-left form;
// build a reversed window for the right-interface search).
BoundaryResult boundarySearch(const Window& w, QualityKind j, const SearchOptions& opts);

// Global quality of an interface: triangulate the implied repeating partition
// (one chunk skip) deterministically and score it.
double jGlobal(std::span<const NodeId> iface, const Window& w,
               const EngineSettings& engine, QualityKind kind);

struct BoundaryRun {
    std::optional<BoundaryResult> left, right;
    BoundaryResult best; // ties prefer the left direction
};

BoundaryRun bestBoundary(const Template& t, int M, QualityKind j,
                         Direction direction = Direction::Both,
                         const SearchOptions& opts = {});

} // namespace dgmtri

#endif
