#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "dgmtri/errors.hpp"
#include "dgmtri/repartition.hpp"
#include "oracles.hpp"

using namespace dgmtri;

namespace {

Template fixture(const std::string& name) {
    return loadTemplateFile(std::string(DGMTRI_FIXTURES) + "/" + name + ".dgm");
}

using KeyEdge = std::pair<std::pair<std::string, int>, std::pair<std::string, int>>;

std::set<KeyEdge> keyedEdges(const UGraph& g,
                             const std::vector<std::pair<std::string, int>>& keys) {
    std::set<KeyEdge> out;
    for (const auto& [a, b] : g.edges()) {
        auto ka = keys[a], kb = keys[b];
        if (kb < ka) std::swap(ka, kb);
        out.insert({ka, kb});
    }
    return out;
}

std::set<KeyEdge> directMoralEdges(const Template& t, int copies) {
    auto u = unroll(t, copies);
    auto moral = moralize(u.graph);
    std::vector<std::pair<std::string, int>> keys;
    for (NodeId v = 0; v < moral.nodeCount(); ++v)
        keys.emplace_back(moral.info(v).name, moral.info(v).frame);
    return keyedEdges(moral, keys);
}

} // namespace

TEST_CASE("chain with the basic boundary is the identity repartition") {
    auto t = fixture("chain");
    SearchOptions opts;
    opts.runSearch = false; // basic interface
    auto run = bestBoundary(t, 1, QualityKind::Size, Direction::Left, opts);
    auto rt = partitionTemplate(t, 1, 1, run.best);
    CHECK(rt.pPrime.size() == 1); // P only, nothing advanced
    CHECK(rt.cPrime.size() == 1); // one chunk copy
    CHECK(rt.ePrime.size() == 2); // the other copy plus E
    CHECK(rt.cumAdvanced.empty());
    CHECK(rt.cumInterface.size() == 1);
}

TEST_CASE("hourglass repartition around the waist") {
    auto t = fixture("hourglass");
    auto run = bestBoundary(t, 1, QualityKind::Size, Direction::Both);
    REQUIRE(run.best.interfaceNodes.size() == 1);
    auto rt = partitionTemplate(t, 1, 1, run.best);
    // P' gains the two pre-waist nodes of the next copy
    CHECK(rt.pPrime.size() == 7);
    CHECK(rt.cPrime.size() == 5);
    CHECK(rt.ePrime.size() == 8);
    // the three blocks tile the once-unrolled graph
    CHECK(rt.pPrime.size() + rt.cPrime.size() + rt.ePrime.size() == 20);
}

TEST_CASE("admissible lengths follow the arithmetic") {
    auto t = fixture("chain");
    SearchOptions opts;
    opts.runSearch = false;
    auto run = bestBoundary(t, 1, QualityKind::Size, Direction::Left, opts);
    auto rt = partitionTemplate(t, 1, 1, run.best);
    // T = 1 + (1 + k) + 1 for k >= 1
    for (int T : {4, 5, 6, 9})
        CHECK(rt.lengths.admits(T));
    CHECK_FALSE(rt.lengths.admits(3));
    CHECK_FALSE(rt.lengths.admits(2));

    auto rt2 = partitionTemplate(t, 3, 2, run.best);
    // T = 1 + (3 + 2k) + 1
    CHECK(rt2.lengths.admits(7));
    CHECK(rt2.lengths.admits(9));
    CHECK_FALSE(rt2.lengths.admits(8));
    CHECK_FALSE(rt2.lengths.admits(5));
}

TEST_CASE("connected cuts on a chain region") {
    auto t = fixture("chain");
    auto u = unroll(t, 3);
    auto moral = moralize(u.graph);
    // boundary between copy 0 and copy 1
    std::vector<Edge> boundary{{u.chunkNode(0, 0), u.chunkNode(1, 0)}};
    std::vector<NodeId> region;
    for (int c = 0; c < 3; ++c) region.push_back(u.chunkNode(c, 0));
    auto left = lCut(moral, boundary, region);
    CHECK(left == std::vector<NodeId>{u.chunkNode(0, 0)});
    auto right = rCut(moral, boundary, region);
    CHECK(right == std::vector<NodeId>{u.chunkNode(1, 0), u.chunkNode(2, 0)});

    // a boundary that does not disconnect: cut one rail of the ladder only
    auto ladder = unroll(fixture("ladder"), 3);
    auto lmoral = moralize(ladder.graph);
    std::vector<Edge> bogus{{ladder.chunkNode(0, 0), ladder.chunkNode(1, 0)}};
    std::vector<NodeId> lregion;
    for (int c = 0; c < 3; ++c)
        for (NodeId v : ladder.chunkNodes(c)) lregion.push_back(v);
    std::sort(lregion.begin(), lregion.end());
    CHECK_THROWS_AS(lCut(lmoral, bogus, lregion), ModelError);
}

TEST_CASE("hourglass left cut equals P-prime minus P") {
    auto t = fixture("hourglass");
    auto run = bestBoundary(t, 1, QualityKind::Size, Direction::Left);
    auto rt = partitionTemplate(t, 1, 1, run.best);

    // instantiate the first boundary on the once-unrolled graph and take the
    // connected left cut of the chunk region
    auto u = unroll(t, 2);
    auto moral = moralize(u.graph);
    CanvasView view(u, false);
    std::vector<NodeId> ifaceImg, advImg;
    for (auto [off, slot] : rt.cumInterface)
        ifaceImg.push_back(view.nodeAt({Pos::Kind::Chunk, off, slot}));
    for (auto [off, slot] : rt.cumAdvanced)
        advImg.push_back(view.nodeAt({Pos::Kind::Chunk, off, slot}));
    std::vector<char> leftSide(static_cast<std::size_t>(moral.nodeCount()), 0);
    for (NodeId v : u.prologueNodes()) leftSide[v] = 1;
    for (NodeId v : advImg) leftSide[v] = 1;
    std::vector<Edge> boundary;
    for (const auto& [a, b] : moral.edges())
        if (leftSide[a] != leftSide[b]) boundary.emplace_back(a, b);

    std::vector<NodeId> region;
    for (int c = 0; c < 2; ++c)
        for (NodeId v : u.chunkNodes(c)) region.push_back(v);
    std::sort(region.begin(), region.end());

    auto cut = lCut(moral, boundary, region);
    std::sort(advImg.begin(), advImg.end());
    CHECK(cut == advImg); // L-cut(E1, C^{1:M}) = P' \ P
}

TEST_CASE("cut pieces partition the region") {
    auto t = fixture("ladder");
    auto u = unroll(t, 3);
    auto moral = moralize(u.graph);
    std::vector<Edge> boundary;
    std::vector<char> left(static_cast<std::size_t>(moral.nodeCount()), 0);
    for (NodeId v : u.prologueNodes()) left[v] = 1;
    for (NodeId v : u.chunkNodes(0)) left[v] = 1;
    for (const auto& [a, b] : moral.edges())
        if (left[a] != left[b]) boundary.emplace_back(a, b);
    std::vector<NodeId> region;
    for (int c = 0; c < 3; ++c)
        for (NodeId v : u.chunkNodes(c)) region.push_back(v);
    std::sort(region.begin(), region.end());
    auto l = lCut(moral, boundary, region);
    auto r = rCut(moral, boundary, region);
    CHECK(l.size() + r.size() == region.size());
}

TEST_CASE("both instantiated boundaries separate") {
    for (const char* name : {"chain", "ladder", "hourglass", "vee", "xy", "backchain"}) {
        for (int M : {1, 2}) {
            for (int S : {1, 2}) {
                CAPTURE(name);
                CAPTURE(M);
                CAPTURE(S);
                auto t = fixture(name);
                auto run = bestBoundary(t, M, QualityKind::Size, Direction::Both);
                // partitionTemplate asserts seam separation internally
                CHECK_NOTHROW(partitionTemplate(t, M, S, run.best));
            }
        }
    }
}

TEST_CASE("pattern reunroll matches the direct moralized unroll") {
    for (const char* name : {"chain", "ladder", "hourglass", "vee", "xy", "backchain"}) {
        for (int M : {1, 2}) {
            for (int S : {1, 2}) {
                auto t = fixture(name);
                auto run = bestBoundary(t, M, QualityKind::Size, Direction::Both);
                auto rt = partitionTemplate(t, M, S, run.best);
                for (int k : {1, 2, 3}) {
                    CAPTURE(name);
                    CAPTURE(M);
                    CAPTURE(S);
                    CAPTURE(k);
                    auto re = reunrollFromPatterns(rt, k);
                    auto direct = directMoralEdges(t, M + k * S);
                    CHECK(keyedEdges(re.graph, re.nodeKeys) == direct);
                }
            }
        }
    }
}

TEST_CASE("reunroll works for right-direction boundaries") {
    auto t = fixture("xy");
    auto run = bestBoundary(t, 1, QualityKind::Size, Direction::Right);
    REQUIRE(run.right);
    CHECK(run.right->direction == Direction::Right);
    auto rt = partitionTemplate(t, 1, 1, *run.right);
    CHECK(rt.reversedView);
    for (int k : {1, 2, 4}) {
        CAPTURE(k);
        auto re = reunrollFromPatterns(rt, k);
        auto direct = directMoralEdges(t, 1 + k);
        CHECK(keyedEdges(re.graph, re.nodeKeys) == direct);
    }
}

TEST_CASE("unit interfaces are consistent across the seams") {
    auto t = fixture("hourglass");
    auto run = bestBoundary(t, 1, QualityKind::Size, Direction::Both);
    auto rt = partitionTemplate(t, 1, 1, run.best);

    // the C' unit's left and right interfaces are images of the same pattern
    CHECK(rt.cUnit.leftInterfaceLocal.size() == rt.cumInterface.size());
    CHECK(rt.cUnit.rightInterfaceLocal.size() == rt.cumInterface.size());
    CHECK(rt.pUnit.rightInterfaceLocal.size() == rt.cumInterface.size());
    CHECK(rt.eUnit.leftInterfaceLocal.size() == rt.cumInterface.size());
    // interfaces live inside their unit graphs
    for (NodeId v : rt.cUnit.leftInterfaceLocal) {
        CHECK(v >= 0);
        CHECK(v < rt.cUnit.graph.nodeCount());
    }
}
