#ifndef DGMTRI_PIPELINE_HPP
#define DGMTRI_PIPELINE_HPP

#include <optional>
#include <string>

#include "dgmtri/assemble.hpp"
#include "dgmtri/boundary.hpp"
#include "dgmtri/randgen.hpp"
#include "dgmtri/repartition.hpp"

#include <json.hpp>

namespace dgmtri {

struct PipelineOptions {
    int M = 1;
    int S = 1;
    QualityKind j = QualityKind::Size;
    Direction direction = Direction::Both;
    bool basicInterface = false; // skip the boundary search
    int k = 1;                   // repetitions for the assembled graph
    std::uint64_t kVirtual = 500;
    EngineSettings engine;
    long maxStates = -1;
    bool verify = true;
    bool withTimings = false;
    int threads = 1;
};

struct InterfaceReport {
    int initialSize = 0;
    double initialQuality = 0.0;
    int bestSize = 0;
    double bestQuality = 0.0;
    long statesVisited = 0;
    std::vector<std::string> bestNodes; // "name:frame" labels
};

struct PartitionReport {
    std::string name;
    int nodeCount = 0;
    int maxclique = 0;
    int maxcliqueWithInterface = 0;
    double logWeight = 0.0;
};

struct RunReport {
    std::string inputDigest; // template text, canonical form
    std::vector<std::string> diagnostics;

    std::optional<InterfaceReport> left, right;
    std::string chosenDirection;
    double chosenQuality = 0.0;

    int M = 1, S = 1;
    std::string qualityKind;
    bool basicInterface = false;

    bool fellBackToBasic = false; // global-J pipelines keep the lighter of
                                  // searched and basic partitionings

    int pNodes = 0, cNodes = 0, eNodes = 0;
    std::vector<std::string> interfaceNodes;
    std::string admissible;

    std::vector<PartitionReport> partitions;

    int k = 1;
    int slices = 0;
    bool chordal = false;
    bool coversAllEdges = false;
    bool seamsSeparate = false;
    int maxclique = 0;
    double logWeight = 0.0;
    std::uint64_t kVirtual = 500;
    double virtualLogWeight = 0.0;

    double totalSeconds = 0.0;
    bool withTimings = false;

    nlohmann::ordered_json toJson() const;
    std::string toText() const;
};

// check -> boundary -> partition -> triangulate -> assemble -> score
RunReport runPipeline(const Template& t, const PipelineOptions& opts);

// boundary stage only (cmdBoundary)
RunReport runBoundaryReport(const Template& t, const PipelineOptions& opts);

// partition stage only (cmdPartition)
RunReport runPartitionReport(const Template& t, const PipelineOptions& opts);

struct BenchRow {
    std::uint64_t seed = 0;
    int nodes = 0;
    bool backward = false;
    int initialLeft = 0, initialRight = 0;
    int basicMaxclique = 0;
    double basicWeight = 0.0;
    int boundaryInterface = 0;
    int boundaryMaxclique = 0;
    double boundaryWeight = 0.0;
};

struct BenchOptions {
    int trials = 10;
    GenParams gen;
    PipelineOptions pipeline;
};

std::vector<BenchRow> runBench(const BenchOptions& opts);
std::string benchCsv(const std::vector<BenchRow>& rows);
nlohmann::ordered_json benchJson(const std::vector<BenchRow>& rows);

// DOT rendering of a moralized unroll, optionally highlighting an interface.
std::string toDot(const UGraph& g, std::span<const NodeId> highlight = {});

} // namespace dgmtri

#endif
