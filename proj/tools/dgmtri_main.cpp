// dgmtri: boundary-based triangulation of dynamic graphical model templates.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dgmtri/errors.hpp"
#include "dgmtri/pipeline.hpp"

using namespace dgmtri;

namespace {

struct CommonArgs {
    std::string file;
    int M = 1;
    int S = 1;
    std::string j = "size";
    std::string direction = "both";
    int k = 1;
    std::uint64_t kVirtual = 500;
    bool basicInterface = false;
    std::string heuristics = "fillin,size";
    double budgetSeconds = 0.0;
    std::uint64_t seed = 1;
    int exhaustiveLimit = 10;
    long maxStates = -1;
    int threads = 1;
    bool json = false;
    bool timings = false;
    std::string optimize = "mc";
    std::string dotPath;
};

void addCommonFlags(CLI::App* cmd, CommonArgs& a, bool wantsEngine) {
    cmd->add_option("file", a.file, "template file")->required();
    cmd->add_option("--M", a.M, "chunks the boundary may span");
    cmd->add_option("--S", a.S, "chunks skipped between boundaries");
    cmd->add_option("--j", a.j, "quality measure")
        ->check(CLI::IsMember({"size", "fillin", "weight", "global-mc", "global-weight"}));
    cmd->add_option("--direction", a.direction, "search direction")
        ->check(CLI::IsMember({"left", "right", "both"}));
    cmd->add_option("--max-states", a.maxStates, "cap on scored interfaces");
    cmd->add_flag("--basic-interface", a.basicInterface,
                  "use the basic interface, no boundary search");
    cmd->add_flag("--json", a.json, "machine-readable output");
    cmd->add_flag("--timings", a.timings, "include wall times in reports");
    cmd->add_option("--dot", a.dotPath, "write the moralized graph as DOT");
    if (wantsEngine) {
        cmd->add_option("--k", a.k, "number of chunk repetitions to assemble");
        cmd->add_option("--k-virtual", a.kVirtual, "virtual unroll count for weights");
        cmd->add_option("--heuristics", a.heuristics, "comma-separated criterion chain");
        cmd->add_option("--budget", a.budgetSeconds, "anytime budget in seconds");
        cmd->add_option("--seed", a.seed, "random tie-break seed");
        cmd->add_option("--exhaustive-limit", a.exhaustiveLimit,
                        "max nodes for exhaustive order search");
        cmd->add_option("--threads", a.threads, "parallel strategies (wall time only)");
        cmd->add_option("--optimize", a.optimize, "primary objective")
            ->check(CLI::IsMember({"mc", "weight"}));
    }
}

PipelineOptions toPipelineOptions(const CommonArgs& a) {
    PipelineOptions o;
    o.M = a.M;
    o.S = a.S;
    o.j = parseQualityKind(a.j);
    o.direction = a.direction == "left" ? Direction::Left
                  : a.direction == "right" ? Direction::Right
                                           : Direction::Both;
    o.basicInterface = a.basicInterface;
    o.k = a.k;
    o.kVirtual = a.kVirtual;
    o.maxStates = a.maxStates;
    o.withTimings = a.timings;
    o.threads = a.threads;

    HeuristicChain chain = parseChain(a.heuristics);
    chain.seed = a.seed;
    o.engine.strategies = {chain};
    o.engine.anytimeOpts.primary =
        a.optimize == "weight" ? ScorePrimary::Weight : ScorePrimary::Maxclique;
    o.engine.anytimeOpts.exhaustiveNodeLimit = a.exhaustiveLimit;
    if (a.budgetSeconds > 0.0) {
        o.engine.useAnytime = true;
        o.engine.anytimeOpts.budget = std::chrono::duration<double>(a.budgetSeconds);
        o.engine.anytimeOpts.includeExhaustive = true;
        o.engine.anytimeOpts.randomRestarts = 8;
        o.engine.strategies = {chain, parseChain("weight,fillin"), parseChain("size,fillin")};
        o.engine.strategies[1].seed = a.seed;
        o.engine.strategies[2].seed = a.seed;
    }
    return o;
}

void emit(const RunReport& rep, bool json) {
    if (json)
        std::cout << rep.toJson().dump(2) << '\n';
    else
        std::cout << rep.toText();
}

void maybeDot(const CommonArgs& a, const Template& t) {
    if (a.dotPath.empty()) return;
    auto u = unroll(t, std::max(2, a.M + 1));
    auto moral = moralize(u.graph);
    std::ofstream out(a.dotPath);
    if (!out) throw InputError("cannot write DOT file: " + a.dotPath);
    out << toDot(moral);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"boundary-based triangulation for dynamic graphical model templates"};
    app.require_subcommand(1);

    CommonArgs check, unrollArgs, moralizeArgs, boundary, partition, triangulate, score;
    struct {
        int nodes = 5;
        int cardMin = 2, cardMax = 50;
        double density = 0.25;
        bool backward = false;
        std::uint64_t seed = 1;
    } gen;
    struct {
        int trials = 10;
        bool json = false;
        CommonArgs common;
        int nodes = 5;
        double density = 0.25;
        bool backward = false;
        std::uint64_t seed = 1;
    } bench;

    auto* cmdCheck = app.add_subcommand("check", "validate a template");
    cmdCheck->add_option("file", check.file, "template file")->required();
    cmdCheck->add_flag("--json", check.json, "machine-readable output");

    auto* cmdUnroll = app.add_subcommand("unroll", "print an unrolled graph");
    cmdUnroll->add_option("file", unrollArgs.file, "template file")->required();
    cmdUnroll->add_option("--k", unrollArgs.k, "chunk copies");
    cmdUnroll->add_option("--dot", unrollArgs.dotPath, "write DOT instead of text");

    auto* cmdMoralize = app.add_subcommand("moralize", "print a moralized unrolled graph");
    cmdMoralize->add_option("file", moralizeArgs.file, "template file")->required();
    cmdMoralize->add_option("--k", moralizeArgs.k, "chunk copies");
    cmdMoralize->add_option("--dot", moralizeArgs.dotPath, "write DOT instead of text");

    auto* cmdBoundary = app.add_subcommand("boundary", "find the best boundary");
    addCommonFlags(cmdBoundary, boundary, false);

    auto* cmdPartition = app.add_subcommand("partition", "repartition around the boundary");
    addCommonFlags(cmdPartition, partition, false);

    auto* cmdTriangulate =
        app.add_subcommand("triangulate", "full pipeline with verification");
    addCommonFlags(cmdTriangulate, triangulate, true);

    auto* cmdScore = app.add_subcommand("score", "pipeline scores only");
    addCommonFlags(cmdScore, score, true);

    auto* cmdRandgen = app.add_subcommand("randgen", "emit a random template");
    cmdRandgen->add_option("--nodes", gen.nodes, "nodes per slice");
    cmdRandgen->add_option("--card-min", gen.cardMin, "minimum cardinality");
    cmdRandgen->add_option("--card-max", gen.cardMax, "maximum cardinality");
    cmdRandgen->add_option("--density", gen.density, "edge probability");
    cmdRandgen->add_flag("--backward", gen.backward, "allow backward temporal edges");
    cmdRandgen->add_option("--seed", gen.seed, "generator seed");

    auto* cmdBench = app.add_subcommand("bench", "basic vs boundary over random templates");
    cmdBench->add_option("--trials", bench.trials, "number of templates");
    cmdBench->add_option("--nodes", bench.nodes, "nodes per slice");
    cmdBench->add_option("--density", bench.density, "edge probability");
    cmdBench->add_flag("--backward", bench.backward, "allow backward temporal edges");
    cmdBench->add_option("--seed", bench.seed, "first template seed");
    cmdBench->add_option("--M", bench.common.M, "chunks the boundary may span");
    cmdBench->add_option("--S", bench.common.S, "chunks skipped between boundaries");
    cmdBench->add_option("--j", bench.common.j, "quality measure");
    cmdBench->add_option("--heuristics", bench.common.heuristics, "criterion chain");
    cmdBench->add_flag("--json", bench.json, "JSON rows instead of CSV");

    try {
        app.parse(argc, argv);

        if (cmdCheck->parsed()) {
            Template t = loadTemplateFile(check.file);
            auto diags = validate(t);
            if (check.json) {
                nlohmann::ordered_json j;
                j["diagnostics"] = nlohmann::ordered_json::array();
                for (const auto& d : diags) j["diagnostics"].push_back(d.message);
                std::cout << j.dump(2) << '\n';
            } else {
                for (const auto& d : diags) std::cout << "diagnostic: " << d.message << '\n';
            }
            if (!diags.empty()) return 1;
            std::cout << "ok\n";
            return 0;
        }
        if (cmdUnroll->parsed() || cmdMoralize->parsed()) {
            CommonArgs& a = cmdUnroll->parsed() ? unrollArgs : moralizeArgs;
            Template t = loadTemplateFile(a.file);
            requireValid(t);
            auto u = unroll(t, std::max(1, a.k));
            if (cmdUnroll->parsed()) {
                if (!a.dotPath.empty()) {
                    auto moral = moralize(u.graph); // direction-free rendering
                    std::ofstream out(a.dotPath);
                    out << toDot(moral);
                } else {
                    std::cout << u.graph.dump();
                }
            } else {
                auto moral = moralize(u.graph);
                if (!a.dotPath.empty()) {
                    std::ofstream out(a.dotPath);
                    out << toDot(moral);
                } else {
                    std::cout << moral.dump();
                }
            }
            return 0;
        }
        if (cmdBoundary->parsed()) {
            Template t = loadTemplateFile(boundary.file);
            emit(runBoundaryReport(t, toPipelineOptions(boundary)), boundary.json);
            maybeDot(boundary, t);
            return 0;
        }
        if (cmdPartition->parsed()) {
            Template t = loadTemplateFile(partition.file);
            auto rep = runPartitionReport(t, toPipelineOptions(partition));
            emit(rep, partition.json);
            maybeDot(partition, t);
            return rep.diagnostics.empty() ? 0 : 1;
        }
        if (cmdTriangulate->parsed() || cmdScore->parsed()) {
            CommonArgs& a = cmdTriangulate->parsed() ? triangulate : score;
            Template t = loadTemplateFile(a.file);
            auto rep = runPipeline(t, toPipelineOptions(a));
            if (cmdScore->parsed() && rep.diagnostics.empty() && !a.json) {
                std::cout << "maxclique=" << rep.maxclique << " logWeight=" << rep.logWeight
                          << " virtual(k=" << rep.kVirtual << ")=" << rep.virtualLogWeight
                          << '\n';
            } else {
                emit(rep, a.json);
            }
            maybeDot(a, t);
            return rep.diagnostics.empty() ? 0 : 1;
        }
        if (cmdRandgen->parsed()) {
            GenParams p;
            p.nodesPerSlice = gen.nodes;
            p.cardMin = gen.cardMin;
            p.cardMax = gen.cardMax;
            p.edgeDensity = gen.density;
            p.allowBackward = gen.backward;
            p.seed = gen.seed;
            std::cout << printTemplate(generateTemplate(p));
            return 0;
        }
        if (cmdBench->parsed()) {
            BenchOptions opts;
            opts.trials = bench.trials;
            opts.gen.nodesPerSlice = bench.nodes;
            opts.gen.edgeDensity = bench.density;
            opts.gen.allowBackward = bench.backward;
            opts.gen.seed = bench.seed;
            opts.pipeline = toPipelineOptions(bench.common);
            auto rows = runBench(opts);
            if (bench.json)
                std::cout << benchJson(rows).dump(2) << '\n';
            else
                std::cout << benchCsv(rows);
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
