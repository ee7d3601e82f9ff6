// End-to-end drivers and machine-readable reports.

#include "dgmtri/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "dgmtri/errors.hpp"

namespace dgmtri {

namespace {

std::string canonicalDigest(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull; // FNV-1a
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string nodeLabel(const UGraph& g, NodeId v) {
    return g.info(v).name + ":" + std::to_string(g.info(v).frame);
}

InterfaceReport interfaceReport(const BoundaryResult& r) {
    InterfaceReport out;
    out.initialSize = r.initialSize;
    out.initialQuality = r.initialQuality.value();
    out.bestSize = static_cast<int>(r.interfaceNodes.size());
    out.bestQuality = r.quality.value();
    out.statesVisited = r.statesVisited;
    out.bestNodes = r.interfaceLabels;
    return out;
}

} // namespace

RunReport runBoundaryReport(const Template& t, const PipelineOptions& opts) {
    using Clock = std::chrono::steady_clock;
    auto start = Clock::now();

    RunReport rep;
    rep.inputDigest = printTemplate(t);
    for (const auto& d : validate(t)) rep.diagnostics.push_back(d.message);
    if (!rep.diagnostics.empty()) return rep;

    rep.M = opts.M;
    rep.S = opts.S;
    rep.qualityKind = qualityKindName(opts.j);
    rep.basicInterface = opts.basicInterface;

    SearchOptions sopts;
    sopts.runSearch = !opts.basicInterface;
    sopts.maxStates = opts.maxStates;
    sopts.engine = &opts.engine;

    auto run = bestBoundary(t, opts.M, opts.j, opts.direction, sopts);
    if (run.left) rep.left = interfaceReport(*run.left);
    if (run.right) rep.right = interfaceReport(*run.right);
    rep.chosenDirection = run.best.direction == Direction::Left ? "left" : "right";
    rep.chosenQuality = run.best.quality.value();
    rep.totalSeconds = std::chrono::duration<double>(Clock::now() - start).count();
    rep.withTimings = opts.withTimings;
    return rep;
}

namespace {

void fillPartitionSection(RunReport& rep, const RepartitionedTemplate& rt) {
    rep.pNodes = static_cast<int>(rt.pPrime.size());
    rep.cNodes = static_cast<int>(rt.cPrime.size());
    rep.eNodes = static_cast<int>(rt.ePrime.size());
    rep.admissible = rt.lengths.formula();
    CanvasView view = rt.view();
    for (auto [off, slot] : rt.cumInterface) {
        NodeId id = view.nodeAt({Pos::Kind::Chunk, rt.S + off, slot});
        rep.interfaceNodes.push_back(nodeLabel(rt.canvasMoral, id));
    }
}

} // namespace

RunReport runPartitionReport(const Template& t, const PipelineOptions& opts) {
    RunReport rep;
    rep.inputDigest = printTemplate(t);
    for (const auto& d : validate(t)) rep.diagnostics.push_back(d.message);
    if (!rep.diagnostics.empty()) return rep;

    rep.M = opts.M;
    rep.S = opts.S;
    rep.qualityKind = qualityKindName(opts.j);
    rep.basicInterface = opts.basicInterface;

    SearchOptions sopts;
    sopts.runSearch = !opts.basicInterface;
    sopts.maxStates = opts.maxStates;
    sopts.engine = &opts.engine;
    auto run = bestBoundary(t, opts.M, opts.j, opts.direction, sopts);
    if (run.left) rep.left = interfaceReport(*run.left);
    if (run.right) rep.right = interfaceReport(*run.right);
    rep.chosenDirection = run.best.direction == Direction::Left ? "left" : "right";
    rep.chosenQuality = run.best.quality.value();

    auto rt = partitionTemplate(t, opts.M, opts.S, run.best);
    fillPartitionSection(rep, rt);
    return rep;
}

RunReport runPipeline(const Template& t, const PipelineOptions& opts) {
    using Clock = std::chrono::steady_clock;
    auto start = Clock::now();

    RunReport rep;
    rep.inputDigest = printTemplate(t);
    for (const auto& d : validate(t)) rep.diagnostics.push_back(d.message);
    if (!rep.diagnostics.empty()) return rep;

    rep.M = opts.M;
    rep.S = opts.S;
    rep.qualityKind = qualityKindName(opts.j);
    rep.basicInterface = opts.basicInterface;
    rep.k = opts.k;
    rep.kVirtual = opts.kVirtual;

    SearchOptions sopts;
    sopts.runSearch = !opts.basicInterface;
    sopts.maxStates = opts.maxStates;
    sopts.engine = &opts.engine;

    auto run = bestBoundary(t, opts.M, opts.j, opts.direction, sopts);
    if (run.left) rep.left = interfaceReport(*run.left);
    if (run.right) rep.right = interfaceReport(*run.right);
    rep.chosenDirection = run.best.direction == Direction::Left ? "left" : "right";
    rep.chosenQuality = run.best.quality.value();

    EngineSettings engine = opts.engine;
    engine.anytimeOpts.threads = opts.threads;

    auto rt = partitionTemplate(t, opts.M, opts.S, run.best);
    auto blocks = triangulateBlocks(rt, engine);

    // Global quality measures are heuristic: an exact-J tie can still carry a
    // heavier end partition, so the pipeline tries both the searched and the
    // basic partitioning and keeps whichever unrolls lighter.
    if (!opts.basicInterface && !isLocal(opts.j)) {
        SearchOptions basicOpts;
        basicOpts.runSearch = false;
        basicOpts.engine = &opts.engine;
        auto basicRun = bestBoundary(t, opts.M, opts.j, opts.direction, basicOpts);
        auto basicRt = partitionTemplate(t, opts.M, opts.S, basicRun.best);
        auto basicBlocks = triangulateBlocks(basicRt, engine);
        auto searched = virtualWeightModel(rt, blocks).stateSpaceAt(opts.kVirtual);
        auto plain = virtualWeightModel(basicRt, basicBlocks).stateSpaceAt(opts.kVirtual);
        if (plain < searched) {
            rt = std::move(basicRt);
            blocks = std::move(basicBlocks);
            rep.fellBackToBasic = true;
        }
    }
    fillPartitionSection(rep, rt);
    for (const auto& [unit, tp] :
         {std::pair<const PartitionUnit*, const TriangulatedPartition*>{&rt.pUnit, &blocks.p},
          {&rt.cUnit, &blocks.c},
          {&rt.eUnit, &blocks.e}}) {
        PartitionReport pr;
        pr.name = unit->name;
        pr.nodeCount = static_cast<int>(unit->canvasNodes.size());
        pr.maxclique = tp->maxclique;
        pr.maxcliqueWithInterface = tp->maxcliqueWithInterface;
        pr.logWeight = tp->logWeight;
        rep.partitions.push_back(pr);
    }

    auto assembled = assembleUnrolled(rt, opts.k, blocks);
    rep.slices = assembled.slices;
    rep.chordal = assembled.chordal;
    rep.coversAllEdges = assembled.coversAllEdges;
    rep.seamsSeparate = assembled.seamsSeparate;
    rep.maxclique = assembled.maxclique;
    rep.logWeight = assembled.logWeight;

    auto model = virtualWeightModel(rt, blocks);
    rep.virtualLogWeight = model.logWeightAt(opts.kVirtual);

    rep.totalSeconds = std::chrono::duration<double>(Clock::now() - start).count();
    rep.withTimings = opts.withTimings;
    return rep;
}

// ---------------------------------------------------------------- reports

nlohmann::ordered_json RunReport::toJson() const {
    nlohmann::ordered_json j;
    j["input_digest"] = canonicalDigest(inputDigest);
    j["diagnostics"] = diagnostics;
    if (!diagnostics.empty()) return j;
    auto iface = [](const InterfaceReport& r) {
        nlohmann::ordered_json o;
        o["initial_size"] = r.initialSize;
        o["initial_quality"] = r.initialQuality;
        o["best_size"] = r.bestSize;
        o["best_quality"] = r.bestQuality;
        o["states_visited"] = r.statesVisited;
        o["best_nodes"] = r.bestNodes;
        return o;
    };
    j["M"] = M;
    j["S"] = S;
    j["quality"] = qualityKind;
    j["basic_interface"] = basicInterface;
    if (fellBackToBasic) j["fell_back_to_basic"] = true;
    if (left) j["left"] = iface(*left);
    if (right) j["right"] = iface(*right);
    if (!chosenDirection.empty()) {
        j["chosen_direction"] = chosenDirection;
        j["chosen_quality"] = chosenQuality;
    }
    if (pNodes + cNodes + eNodes > 0) {
        j["partition"] = {{"p_nodes", pNodes},
                          {"c_nodes", cNodes},
                          {"e_nodes", eNodes},
                          {"interface", interfaceNodes},
                          {"admissible_lengths", admissible}};
    }
    if (!partitions.empty()) {
        auto& arr = j["triangulation"] = nlohmann::ordered_json::array();
        for (const auto& p : partitions)
            arr.push_back({{"partition", p.name},
                           {"nodes", p.nodeCount},
                           {"maxclique", p.maxclique},
                           {"maxclique_with_interface", p.maxcliqueWithInterface},
                           {"log_weight", p.logWeight}});
    }
    if (slices > 0) {
        j["assembled"] = {{"k", k},
                          {"slices", slices},
                          {"chordal", chordal},
                          {"covers_all_edges", coversAllEdges},
                          {"seams_separate", seamsSeparate},
                          {"maxclique", maxclique},
                          {"log_weight", logWeight},
                          {"k_virtual", kVirtual},
                          {"virtual_log_weight", virtualLogWeight}};
    }
    if (withTimings) j["seconds"] = totalSeconds;
    return j;
}

std::string RunReport::toText() const {
    std::ostringstream os;
    if (!diagnostics.empty()) {
        for (const auto& d : diagnostics) os << "diagnostic: " << d << '\n';
        return os.str();
    }
    os << "M=" << M << " S=" << S << " quality=" << qualityKind
       << (basicInterface ? " (basic interface)" : "")
       << (fellBackToBasic ? " (kept basic partitioning)" : "") << '\n';
    auto showIface = [&](const char* tag, const InterfaceReport& r) {
        os << tag << ": initial size " << r.initialSize << " (quality " << r.initialQuality
           << "), best size " << r.bestSize << " (quality " << r.bestQuality << "), "
           << r.statesVisited << " states\n  nodes:";
        for (const auto& n : r.bestNodes) os << ' ' << n;
        os << '\n';
    };
    if (left) showIface("left", *left);
    if (right) showIface("right", *right);
    if (!chosenDirection.empty())
        os << "chosen: " << chosenDirection << " (quality " << chosenQuality << ")\n";
    if (pNodes + cNodes + eNodes > 0) {
        os << "partition: |P'|=" << pNodes << " |C'|=" << cNodes << " |E'|=" << eNodes
           << "\n  " << admissible << '\n';
    }
    for (const auto& p : partitions)
        os << "  " << p.name << ": nodes=" << p.nodeCount << " maxclique=" << p.maxclique
           << " (with interface " << p.maxcliqueWithInterface << ") logWeight=" << p.logWeight
           << '\n';
    if (slices > 0) {
        os << "assembled k=" << k << " slices=" << slices << ": maxclique=" << maxclique
           << " logWeight=" << logWeight << "\n  chordal=" << (chordal ? "yes" : "no")
           << " cover=" << (coversAllEdges ? "yes" : "no")
           << " separation=" << (seamsSeparate ? "yes" : "no") << "\n  virtual k="
           << kVirtual << " logWeight=" << virtualLogWeight << '\n';
    }
    if (withTimings) os << "seconds: " << totalSeconds << '\n';
    return os.str();
}

// ------------------------------------------------------------------ bench

std::vector<BenchRow> runBench(const BenchOptions& opts) {
    std::vector<BenchRow> rows;
    for (int trial = 0; trial < opts.trials; ++trial) {
        GenParams gp = opts.gen;
        gp.seed = opts.gen.seed + static_cast<std::uint64_t>(trial);
        Template t = generateTemplate(gp);

        PipelineOptions basic = opts.pipeline;
        basic.basicInterface = true;
        basic.M = std::max(opts.pipeline.M, moralSpan(t));
        PipelineOptions bound = basic;
        bound.basicInterface = false;

        auto basicRep = runPipeline(t, basic);
        auto boundRep = runPipeline(t, bound);

        BenchRow row;
        row.seed = gp.seed;
        row.nodes = gp.nodesPerSlice;
        row.backward = gp.allowBackward;
        row.initialLeft = basicRep.left ? basicRep.left->initialSize : 0;
        row.initialRight = basicRep.right ? basicRep.right->initialSize : 0;
        row.basicMaxclique = basicRep.maxclique;
        row.basicWeight = basicRep.virtualLogWeight;
        row.boundaryInterface = static_cast<int>(boundRep.interfaceNodes.size());
        row.boundaryMaxclique = boundRep.maxclique;
        row.boundaryWeight = boundRep.virtualLogWeight;
        rows.push_back(row);
    }
    return rows;
}

std::string benchCsv(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "seed,nodes,backward,initial_left,initial_right,basic_mc,basic_weight,"
          "boundary_iface,boundary_mc,boundary_weight\n";
    for (const auto& r : rows)
        os << r.seed << ',' << r.nodes << ',' << (r.backward ? 1 : 0) << ','
           << r.initialLeft << ',' << r.initialRight << ',' << r.basicMaxclique << ','
           << r.basicWeight << ',' << r.boundaryInterface << ',' << r.boundaryMaxclique
           << ',' << r.boundaryWeight << '\n';
    return os.str();
}

nlohmann::ordered_json benchJson(const std::vector<BenchRow>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows)
        arr.push_back({{"seed", r.seed},
                       {"nodes", r.nodes},
                       {"backward", r.backward},
                       {"initial_left", r.initialLeft},
                       {"initial_right", r.initialRight},
                       {"basic_mc", r.basicMaxclique},
                       {"basic_weight", r.basicWeight},
                       {"boundary_iface", r.boundaryInterface},
                       {"boundary_mc", r.boundaryMaxclique},
                       {"boundary_weight", r.boundaryWeight}});
    return arr;
}

std::string toDot(const UGraph& g, std::span<const NodeId> highlight) {
    std::vector<char> mark(static_cast<std::size_t>(g.nodeCount()), 0);
    for (NodeId v : highlight) mark[v] = 1;
    std::ostringstream os;
    os << "graph dgm {\n  rankdir=LR;\n";
    for (NodeId v = 0; v < g.nodeCount(); ++v) {
        os << "  n" << v << " [label=\"" << g.info(v).name << ':' << g.info(v).frame << '"';
        if (mark[v]) os << ", style=filled, fillcolor=gray80";
        os << "];\n";
    }
    for (const auto& [u, v] : g.edges()) os << "  n" << u << " -- n" << v << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace dgmtri
