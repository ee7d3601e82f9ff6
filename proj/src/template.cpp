// Template parsing, validation and unrolling.

#include "dgmtri/template.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "dgmtri/errors.hpp"

namespace dgmtri {

Template::Region Template::regionOfFrame(int frame) const {
    if (frame < 0 || frame >= canvasFrames()) return Region::Invalid;
    if (frame < pFrames) return Region::Prologue;
    if (frame < chunk2Begin()) return Region::Chunk1;
    if (frame < epilogueBegin()) return Region::Chunk2;
    return Region::Epilogue;
}

// ----------------------------------------------------------------- parsing

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
    }
    return toks;
}

int parseInt(const std::string& s, int lineNo, const std::string& what) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(lineNo, "expected integer for " + what + ", got '" + s + "'");
    }
}

// key=value with a mandatory key
int parseKeyed(const std::string& tok, const std::string& key, int lineNo) {
    auto eq = tok.find('=');
    if (eq == std::string::npos || tok.substr(0, eq) != key)
        throw ParseError(lineNo, "expected " + key + "=<int>, got '" + tok + "'");
    return parseInt(tok.substr(eq + 1), lineNo, key);
}

// name:frame
std::pair<std::string, int> parseRef(const std::string& tok, int lineNo) {
    auto colon = tok.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
        throw ParseError(lineNo, "expected <name>:<frame>, got '" + tok + "'");
    return {tok.substr(0, colon), parseInt(tok.substr(colon + 1), lineNo, "frame")};
}

} // namespace

Template parseTemplate(std::istream& in) {
    Template t;
    bool sawFrames = false;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];
        if (kw == "FRAMES") {
            if (sawFrames) throw ParseError(lineNo, "duplicate FRAMES line");
            if (toks.size() != 4) throw ParseError(lineNo, "FRAMES P=<int> C=<int> E=<int>");
            t.pFrames = parseKeyed(toks[1], "P", lineNo);
            t.cFrames = parseKeyed(toks[2], "C", lineNo);
            t.eFrames = parseKeyed(toks[3], "E", lineNo);
            if (t.cFrames < 1) throw ParseError(lineNo, "chunk must have at least one frame");
            if (t.pFrames < 0 || t.eFrames < 0)
                throw ParseError(lineNo, "frame counts must be non-negative");
            sawFrames = true;
        } else if (kw == "VAR") {
            if (!sawFrames) throw ParseError(lineNo, "VAR before FRAMES");
            if (toks.size() < 4 || toks.size() > 5)
                throw ParseError(lineNo, "VAR <name> frame=<int> card=<int> [hint=<int>]");
            TemplateVar v;
            v.name = toks[1];
            v.frame = parseKeyed(toks[2], "frame", lineNo);
            v.cardinality = parseKeyed(toks[3], "card", lineNo);
            if (toks.size() == 5) v.hint = parseKeyed(toks[4], "hint", lineNo);
            auto region = t.regionOfFrame(v.frame);
            if (region == Template::Region::Invalid)
                throw ParseError(lineNo, "VAR frame " + std::to_string(v.frame) +
                                             " outside the canvas");
            if (region == Template::Region::Chunk2)
                throw ParseError(lineNo,
                                 "VAR in chunk copy 2 is implied and may not be declared");
            for (const auto& other : t.vars)
                if (other.name == v.name && other.frame == v.frame)
                    throw ParseError(lineNo, "duplicate variable " + v.name + ":" +
                                                 std::to_string(v.frame));
            t.vars.push_back(v);
        } else if (kw == "EDGE") {
            if (!sawFrames) throw ParseError(lineNo, "EDGE before FRAMES");
            if (toks.size() != 4 || toks[2] != "->")
                throw ParseError(lineNo, "EDGE <name>:<frame> -> <name>:<frame>");
            TemplateEdge e;
            std::tie(e.fromName, e.fromFrame) = parseRef(toks[1], lineNo);
            std::tie(e.toName, e.toFrame) = parseRef(toks[3], lineNo);
            if (e.fromName == e.toName && e.fromFrame == e.toFrame)
                throw ParseError(lineNo, "self-loop " + toks[1]);
            t.edges.push_back(e);
        } else {
            throw ParseError(lineNo, "unknown keyword '" + kw + "'");
        }
    }
    if (!sawFrames) throw ParseError(0, "missing FRAMES line");

    // resolve references now so parse errors carry context
    auto resolvable = [&](const std::string& name, int frame) {
        int lookupFrame = frame;
        auto region = t.regionOfFrame(frame);
        if (region == Template::Region::Invalid) return false;
        if (region == Template::Region::Chunk2) lookupFrame = frame - t.cFrames;
        for (const auto& v : t.vars)
            if (v.name == name && v.frame == lookupFrame) return true;
        return false;
    };
    for (const auto& e : t.edges) {
        if (!resolvable(e.fromName, e.fromFrame))
            throw ParseError(0, "unknown variable reference " + e.fromName + ":" +
                                    std::to_string(e.fromFrame));
        if (!resolvable(e.toName, e.toFrame))
            throw ParseError(0, "unknown variable reference " + e.toName + ":" +
                                    std::to_string(e.toFrame));
    }
    return t;
}

Template parseTemplate(const std::string& text) {
    std::istringstream is(text);
    return parseTemplate(is);
}

Template loadTemplateFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open template file: " + path);
    return parseTemplate(in);
}

std::string printTemplate(const Template& t) {
    std::ostringstream os;
    os << "FRAMES P=" << t.pFrames << " C=" << t.cFrames << " E=" << t.eFrames << '\n';
    for (const auto& v : t.vars) {
        os << "VAR " << v.name << " frame=" << v.frame << " card=" << v.cardinality;
        if (v.hint >= 0) os << " hint=" << v.hint;
        os << '\n';
    }
    for (const auto& e : t.edges)
        os << "EDGE " << e.fromName << ':' << e.fromFrame << " -> " << e.toName << ':'
           << e.toFrame << '\n';
    return os.str();
}

// -------------------------------------------------------------- validation

namespace {

using Region = Template::Region;

// region adjacency allowed for a directed edge (either direction)
bool regionsCompatible(Region a, Region b) {
    if (a == Region::Invalid || b == Region::Invalid) return false;
    if (a == b) return a != Region::Chunk2; // chunk-2-internal edges are redundant copies
    auto ord = [](Region r) {
        switch (r) {
            case Region::Prologue: return 0;
            case Region::Chunk1: return 1;
            case Region::Chunk2: return 2;
            case Region::Epilogue: return 3;
            default: return -1;
        }
    };
    return std::abs(ord(a) - ord(b)) == 1;
}

} // namespace

std::vector<Diagnostic> validate(const Template& t) {
    std::vector<Diagnostic> diags;
    auto flag = [&](const std::string& m) { diags.push_back({m}); };

    if (t.cFrames < 1) flag("chunk must span at least one frame");
    if (t.pFrames == 0 && t.eFrames == 0)
        flag("either P or E (but not both) may be empty");

    bool hasChunkVar = false;
    std::map<std::pair<std::string, int>, const TemplateVar*> byRef;
    for (const auto& v : t.vars) {
        if (v.cardinality < 2)
            flag("variable " + v.name + ":" + std::to_string(v.frame) +
                 " has cardinality < 2");
        auto region = t.regionOfFrame(v.frame);
        if (region == Region::Invalid)
            flag("variable " + v.name + " at frame " + std::to_string(v.frame) +
                 " lies outside the canvas");
        if (region == Region::Chunk1) hasChunkVar = true;
        byRef[{v.name, v.frame}] = &v;
    }
    if (!hasChunkVar) flag("chunk declares no variables");

    for (const auto& e : t.edges) {
        auto ra = t.regionOfFrame(e.fromFrame);
        auto rb = t.regionOfFrame(e.toFrame);
        if (!regionsCompatible(ra, rb)) {
            flag("edge " + e.fromName + ":" + std::to_string(e.fromFrame) + " -> " +
                 e.toName + ":" + std::to_string(e.toFrame) +
                 " spans non-adjacent regions");
            continue;
        }
        auto resolve = [&](const std::string& name, int frame) {
            int f = frame;
            if (t.regionOfFrame(frame) == Region::Chunk2) f -= t.cFrames;
            return byRef.count({name, f}) > 0;
        };
        if (!resolve(e.fromName, e.fromFrame) || !resolve(e.toName, e.toFrame))
            flag("edge references an undeclared variable: " + e.fromName + ":" +
                 std::to_string(e.fromFrame) + " -> " + e.toName + ":" +
                 std::to_string(e.toFrame));
    }
    if (!diags.empty()) return diags;

    // Acyclicity of small unrolls. k=1 catches intra-partition cycles, k=2
    // catches forward/backward inter-chunk cycles, k=3 catches the rare
    // longer-range combinations.
    for (int k = 1; k <= 3; ++k) {
        try {
            auto u = unroll(t, k);
            u.graph.topologicalOrder();
        } catch (const ModelError& e) {
            flag(std::string("unroll k=") + std::to_string(k) + ": " + e.what());
            break;
        }
    }
    return diags;
}

void requireValid(const Template& t) {
    auto diags = validate(t);
    if (diags.empty()) return;
    std::string msg = "invalid template:";
    for (const auto& d : diags) msg += "\n  " + d.message;
    throw ModelError(msg);
}

// --------------------------------------------------------------- unrolling

NodeId UnrolledGraph::pNode(int slot) const { return slot; }

NodeId UnrolledGraph::chunkNode(int copy, int slot) const {
    return pVarCount + copy * cVarCount + slot;
}

NodeId UnrolledGraph::eNode(int slot) const { return pVarCount + k * cVarCount + slot; }

std::vector<NodeId> UnrolledGraph::prologueNodes() const {
    std::vector<NodeId> out(static_cast<std::size_t>(pVarCount));
    for (int i = 0; i < pVarCount; ++i) out[i] = pNode(i);
    return out;
}

std::vector<NodeId> UnrolledGraph::chunkNodes(int copy) const {
    std::vector<NodeId> out(static_cast<std::size_t>(cVarCount));
    for (int i = 0; i < cVarCount; ++i) out[i] = chunkNode(copy, i);
    return out;
}

std::vector<NodeId> UnrolledGraph::epilogueNodes() const {
    std::vector<NodeId> out(static_cast<std::size_t>(eVarCount));
    for (int i = 0; i < eVarCount; ++i) out[i] = eNode(i);
    return out;
}

UnrolledGraph unroll(const Template& t, int k) {
    if (k < 1) throw InputError("unroll: k must be >= 1");

    using Region = Template::Region;
    std::vector<const TemplateVar*> pVars, cVars, eVars;
    for (const auto& v : t.vars) {
        switch (t.regionOfFrame(v.frame)) {
            case Region::Prologue: pVars.push_back(&v); break;
            case Region::Chunk1: cVars.push_back(&v); break;
            case Region::Epilogue: eVars.push_back(&v); break;
            default:
                throw ModelError("variable " + v.name + " in an invalid region");
        }
    }

    UnrolledGraph out;
    out.k = k;
    out.pVarCount = static_cast<int>(pVars.size());
    out.cVarCount = static_cast<int>(cVars.size());
    out.eVarCount = static_cast<int>(eVars.size());
    out.sliceCount = t.pFrames + k * t.cFrames + t.eFrames;

    // epilogue frames move by (k-2) chunks relative to the two-chunk canvas
    const int eShift = (k - 2) * t.cFrames;

    std::vector<NodeInfo> infos;
    auto push = [&](const TemplateVar& v, int frame, int region, int slot) {
        NodeInfo n;
        n.name = v.name;
        n.frame = frame;
        n.cardinality = v.cardinality;
        n.hint = v.hint;
        infos.push_back(n);
        out.regionOf.push_back(region);
        out.frameOf.push_back(frame);
        out.slotOf.push_back(slot);
    };
    for (std::size_t i = 0; i < pVars.size(); ++i)
        push(*pVars[i], pVars[i]->frame, UnrolledGraph::kPrologue, static_cast<int>(i));
    for (int copy = 0; copy < k; ++copy)
        for (std::size_t i = 0; i < cVars.size(); ++i)
            push(*cVars[i], cVars[i]->frame + copy * t.cFrames, copy, static_cast<int>(i));
    for (std::size_t i = 0; i < eVars.size(); ++i)
        push(*eVars[i], eVars[i]->frame + eShift, UnrolledGraph::kEpilogue,
             static_cast<int>(i));

    out.graph = DGraph(std::move(infos));

    // (name, canvas frame) -> slot within region
    std::map<std::pair<std::string, int>, int> pSlot, cSlot, eSlot;
    for (std::size_t i = 0; i < pVars.size(); ++i)
        pSlot[{pVars[i]->name, pVars[i]->frame}] = static_cast<int>(i);
    for (std::size_t i = 0; i < cVars.size(); ++i)
        cSlot[{cVars[i]->name, cVars[i]->frame}] = static_cast<int>(i);
    for (std::size_t i = 0; i < eVars.size(); ++i)
        eSlot[{eVars[i]->name, eVars[i]->frame}] = static_cast<int>(i);

    // A canvas endpoint maps, per chunk copy, to a node of the unrolled graph
    // (or none when the referenced copy does not exist at this k).
    auto instantiate = [&](const std::string& name, int frame, int copy) -> NodeId {
        switch (t.regionOfFrame(frame)) {
            case Region::Prologue: return out.pNode(pSlot.at({name, frame}));
            case Region::Chunk1: {
                if (copy < 0 || copy >= k) return -1;
                return out.chunkNode(copy, cSlot.at({name, frame}));
            }
            case Region::Chunk2: {
                if (copy + 1 < 0 || copy + 1 >= k) return -1;
                return out.chunkNode(copy + 1, cSlot.at({name, frame - t.cFrames}));
            }
            case Region::Epilogue: return out.eNode(eSlot.at({name, frame}));
            default: return -1;
        }
    };

    for (const auto& e : t.edges) {
        auto ra = t.regionOfFrame(e.fromFrame);
        auto rb = t.regionOfFrame(e.toFrame);
        auto touches = [&](Region r) { return ra == r || rb == r; };

        int firstCopy = 0, lastCopy = 0;
        if (touches(Region::Chunk2)) {
            if (touches(Region::Epilogue)) {
                // E^CE anchors chunk copy 2 on the last copy
                firstCopy = lastCopy = k - 2;
            } else {
                // E^CC between consecutive copies
                firstCopy = 0;
                lastCopy = k - 2;
            }
        } else if (ra == Region::Chunk1 && rb == Region::Chunk1) {
            firstCopy = 0;
            lastCopy = k - 1; // intra-chunk edges repeat per copy
        }
        // P-internal, P-C1 and E-internal edges stay at their single spot

        for (int copy = firstCopy; copy <= lastCopy; ++copy) {
            NodeId a = instantiate(e.fromName, e.fromFrame, copy);
            NodeId b = instantiate(e.toName, e.toFrame, copy);
            if (a < 0 || b < 0) continue;
            out.graph.addEdge(a, b);
        }
    }
    return out;
}

int moralSpan(const Template& t) {
    // measured on a 4-copy unroll so both fringes have interior context
    auto u = unroll(t, 4);
    auto moral = moralize(u.graph);
    int span = 1;
    for (const auto& [a, b] : moral.edges()) {
        int ra = u.regionOf[a], rb = u.regionOf[b];
        if (ra < 0 || rb < 0) continue;
        span = std::max(span, std::abs(ra - rb));
    }
    return span;
}

} // namespace dgmtri
