// Python bindings for the main operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "dgmtri/errors.hpp"
#include "dgmtri/pipeline.hpp"

namespace py = pybind11;
using namespace dgmtri;

namespace {

QualityKind kindOf(const std::string& j) { return parseQualityKind(j); }

Direction directionOf(const std::string& d) {
    if (d == "left") return Direction::Left;
    if (d == "right") return Direction::Right;
    if (d == "both") return Direction::Both;
    throw InputError("unknown direction '" + d + "'");
}

PipelineOptions makeOptions(int M, int S, const std::string& j, const std::string& direction,
                            bool basicInterface, int k, std::uint64_t kVirtual,
                            const std::string& heuristics, std::uint64_t seed,
                            long maxStates) {
    PipelineOptions o;
    o.M = M;
    o.S = S;
    o.j = kindOf(j);
    o.direction = directionOf(direction);
    o.basicInterface = basicInterface;
    o.k = k;
    o.kVirtual = kVirtual;
    o.maxStates = maxStates;
    HeuristicChain chain = parseChain(heuristics);
    chain.seed = seed;
    o.engine.strategies = {chain};
    return o;
}

py::object jsonToPy(const nlohmann::ordered_json& j) {
    py::module_ json = py::module_::import("json");
    return json.attr("loads")(j.dump());
}

} // namespace

PYBIND11_MODULE(_dgmtri, m) {
    m.doc() = "boundary-based triangulation of dynamic graphical model templates";

    py::register_exception<ParseError>(m, "TemplateParseError", PyExc_ValueError);
    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

    m.def("parse_template", [](const std::string& text) { return printTemplate(parseTemplate(text)); },
          py::arg("text"), "Parse template text and return its canonical form.");

    m.def("validate", [](const std::string& text) {
        std::vector<std::string> out;
        for (const auto& d : validate(parseTemplate(text))) out.push_back(d.message);
        return out;
    }, py::arg("text"), "Diagnostics for a template; empty means well-formed.");

    m.def("unroll_stats", [](const std::string& text, int k) {
        Template t = parseTemplate(text);
        requireValid(t);
        auto u = unroll(t, k);
        auto moral = moralize(u.graph);
        py::dict d;
        d["nodes"] = u.graph.nodeCount();
        d["edges"] = u.graph.edgeCount();
        d["moral_edges"] = moral.edgeCount();
        d["slices"] = u.sliceCount;
        return d;
    }, py::arg("text"), py::arg("k") = 1, "Node/edge counts of the k-fold unroll.");

    m.def("moralized_edges", [](const std::string& text, int k) {
        Template t = parseTemplate(text);
        requireValid(t);
        auto u = unroll(t, k);
        auto moral = moralize(u.graph);
        std::vector<std::pair<std::string, std::string>> out;
        auto label = [&](NodeId v) {
            return moral.info(v).name + ":" + std::to_string(moral.info(v).frame);
        };
        for (const auto& [a, b] : moral.edges()) out.emplace_back(label(a), label(b));
        return out;
    }, py::arg("text"), py::arg("k") = 1);

    m.def("boundary", [](const std::string& text, int M, const std::string& j,
                         const std::string& direction, bool basic, long maxStates) {
        Template t = parseTemplate(text);
        auto rep = runBoundaryReport(
            t, makeOptions(M, 1, j, direction, basic, 1, 500, "fillin,size", 1, maxStates));
        return jsonToPy(rep.toJson());
    }, py::arg("text"), py::arg("M") = 1, py::arg("j") = "size",
       py::arg("direction") = "both", py::arg("basic") = false, py::arg("max_states") = -1,
       "Run the boundary search and return the report as a dict.");

    m.def("partition", [](const std::string& text, int M, int S, const std::string& j) {
        Template t = parseTemplate(text);
        auto rep = runPartitionReport(
            t, makeOptions(M, S, j, "both", false, 1, 500, "fillin,size", 1, -1));
        return jsonToPy(rep.toJson());
    }, py::arg("text"), py::arg("M") = 1, py::arg("S") = 1, py::arg("j") = "size");

    m.def("triangulate", [](const std::string& text, int M, int S, const std::string& j,
                            int k, std::uint64_t kVirtual, bool basic,
                            const std::string& heuristics, std::uint64_t seed) {
        Template t = parseTemplate(text);
        auto rep = runPipeline(
            t, makeOptions(M, S, j, "both", basic, k, kVirtual, heuristics, seed, -1));
        return jsonToPy(rep.toJson());
    }, py::arg("text"), py::arg("M") = 1, py::arg("S") = 1, py::arg("j") = "size",
       py::arg("k") = 1, py::arg("k_virtual") = 500, py::arg("basic") = false,
       py::arg("heuristics") = "fillin,size", py::arg("seed") = 1,
       "Full pipeline: boundary, partition, triangulate, assemble, verify, score.");

    m.def("generate", [](int nodes, double density, bool backward, std::uint64_t seed,
                         int cardMin, int cardMax) {
        GenParams p;
        p.nodesPerSlice = nodes;
        p.edgeDensity = density;
        p.allowBackward = backward;
        p.seed = seed;
        p.cardMin = cardMin;
        p.cardMax = cardMax;
        return printTemplate(generateTemplate(p));
    }, py::arg("nodes") = 5, py::arg("density") = 0.25, py::arg("backward") = false,
       py::arg("seed") = 1, py::arg("card_min") = 2, py::arg("card_max") = 50,
       "Emit a random template in the text format.");
}
