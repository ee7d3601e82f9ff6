#ifndef DGMTRI_TEMPLATE_HPP
#define DGMTRI_TEMPLATE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "dgmtri/graph.hpp"

namespace dgmtri {

// A dynamic template [P, C, E] written on a two-chunk canvas:
//   frames [0, P)              prologue
//   frames [P, P+C)            chunk copy 1 (variables declared here)
//   frames [P+C, P+2C)         chunk copy 2 (implied; only edges may refer to it)
//   frames [P+2C, P+2C+E)      epilogue
// Edges whose endpoints lie in copies 1 and 2 define the inter-chunk edges.
struct TemplateVar {
    std::string name;
    int frame = 0; // absolute canvas frame
    int cardinality = 2;
    int hint = -1;

    bool operator==(const TemplateVar&) const = default;
};

struct TemplateEdge {
    std::string fromName;
    int fromFrame = 0;
    std::string toName;
    int toFrame = 0;

    bool operator==(const TemplateEdge&) const = default;
};

struct Template {
    int pFrames = 0;
    int cFrames = 1;
    int eFrames = 0;

    std::vector<TemplateVar> vars;   // declaration order is meaningful (file position)
    std::vector<TemplateEdge> edges;

    int chunk1Begin() const { return pFrames; }
    int chunk2Begin() const { return pFrames + cFrames; }
    int epilogueBegin() const { return pFrames + 2 * cFrames; }
    int canvasFrames() const { return pFrames + 2 * cFrames + eFrames; }

    enum class Region { Prologue, Chunk1, Chunk2, Epilogue, Invalid };
    Region regionOfFrame(int frame) const;

    bool operator==(const Template&) const = default;
};

Template parseTemplate(std::istream& in);
Template parseTemplate(const std::string& text);
std::string printTemplate(const Template& t);
Template loadTemplateFile(const std::string& path);

struct Diagnostic {
    std::string message;
};

// Empty iff the template is well formed: chunk present, at most one of P/E
// empty, cardinalities >= 2, resolvable references, edges only within or
// between adjacent regions, acyclic when unrolled.
std::vector<Diagnostic> validate(const Template& t);

// Throws ModelError with the combined diagnostics when validate() is nonempty.
void requireValid(const Template& t);

struct UnrolledGraph {
    DGraph graph;
    int k = 1;          // number of chunk copies
    int sliceCount = 0; // T = T(P) + k T(C) + T(E)

    static constexpr int kPrologue = -1;
    static constexpr int kEpilogue = -2;
    std::vector<int> regionOf; // per node: kPrologue, chunk copy 0..k-1, kEpilogue
    std::vector<int> frameOf;  // per node: absolute frame in the unrolled graph
    std::vector<int> slotOf;   // per node: index within its region's variable list

    int pVarCount = 0, cVarCount = 0, eVarCount = 0;

    NodeId pNode(int slot) const;
    NodeId chunkNode(int copy, int slot) const;
    NodeId eNode(int slot) const;
    std::vector<NodeId> prologueNodes() const;
    std::vector<NodeId> chunkNodes(int copy) const;
    std::vector<NodeId> epilogueNodes() const;
};

// Replicate the chunk k times between prologue and epilogue. k >= 1; k == 1
// is the basic template.
UnrolledGraph unroll(const Template& t, int k);

// Largest number of chunk copies any moralized edge spans (1 for forward-only
// templates; 2 when a child has parents in both neighboring copies). The
// boundary search needs M at least this large.
int moralSpan(const Template& t);

} // namespace dgmtri

#endif
