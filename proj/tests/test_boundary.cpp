#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "dgmtri/boundary.hpp"
#include "dgmtri/errors.hpp"
#include "dgmtri/randgen.hpp"
#include "oracles.hpp"

using namespace dgmtri;

namespace {

Template fixture(const std::string& name) {
    return loadTemplateFile(std::string(DGMTRI_FIXTURES) + "/" + name + ".dgm");
}

std::set<std::string> labels(const UGraph& g, const std::vector<NodeId>& nodes) {
    std::set<std::string> out;
    for (NodeId v : nodes)
        out.insert(g.info(v).name + ":" + std::to_string(g.info(v).frame));
    return out;
}

std::set<std::string> names(const UGraph& g, const std::vector<NodeId>& nodes) {
    std::set<std::string> out;
    for (NodeId v : nodes) out.insert(g.info(v).name);
    return out;
}

} // namespace

TEST_CASE("split interfaces on the chain and ladder") {
    auto chain = unroll(fixture("chain"), 3);
    auto moral = moralize(chain.graph);
    auto li = leftInterfaceAt(chain, moral, 1);
    CHECK(names(moral, li) == std::set<std::string>{"A"});
    CHECK(li.size() == 1);

    auto ladder = unroll(fixture("ladder"), 3);
    auto lmoral = moralize(ladder.graph);
    auto lli = leftInterfaceAt(ladder, lmoral, 1);
    CHECK(lli.size() == 2);
    CHECK(names(lmoral, lli) == std::set<std::string>{"A", "B"});
}

TEST_CASE("moralization pulls the co-parent into the left interface") {
    // C:t+1 has parents A:t and B:t+1, so B:t+1 joins via the marriage
    auto u = unroll(fixture("vee"), 3);
    auto moral = moralize(u.graph);
    auto li = leftInterfaceAt(u, moral, 2); // split before the middle copy
    std::set<std::string> got = names(moral, li);
    CHECK(got == std::set<std::string>{"B", "C"});
    CHECK(li.size() == 2);
    auto ri = rightInterfaceAt(u, moral, 2);
    CHECK(names(moral, ri) == std::set<std::string>{"A"});
}

TEST_CASE("hourglass split interfaces") {
    auto u = unroll(fixture("hourglass"), 3);
    auto moral = moralize(u.graph);
    auto ri = rightInterfaceAt(u, moral, 1);
    CHECK(names(moral, ri) == std::set<std::string>{"C", "D"});
    auto li = leftInterfaceAt(u, moral, 1);
    CHECK(names(moral, li) == std::set<std::string>{"A", "B"});
}

TEST_CASE("xy fixture shows the left/right asymmetry") {
    auto u = unroll(fixture("xy"), 3);
    auto moral = moralize(u.graph);
    CHECK(leftInterfaceAt(u, moral, 2).size() == 1);  // {X:t+1}
    CHECK(rightInterfaceAt(u, moral, 2).size() == 2); // {X:t, Y:t}
}

TEST_CASE("the hourglass waist separates the frames around it") {
    auto t = fixture("hourglass");
    auto u = unroll(t, 2);
    auto moral = moralize(u.graph);
    // sep = the waist of the first chunk copy; sides split by frame
    std::vector<NodeId> sep, left, right;
    for (NodeId v = 0; v < moral.nodeCount(); ++v) {
        if (moral.info(v).name == "E" && moral.info(v).frame == 4)
            sep.push_back(v);
        else if (moral.info(v).frame < 4)
            left.push_back(v);
        else
            right.push_back(v);
    }
    REQUIRE(sep.size() == 1);
    CHECK(isSeparator(moral, sep, left, right));
    CHECK(oracles::separatesByComponents(moral, sep, left, right));
    // and against the unsplit graph it fails
    std::vector<NodeId> nosep;
    std::vector<NodeId> all = left;
    all.push_back(sep[0]);
    CHECK_FALSE(isSeparator(moral, nosep, all, right));
}

TEST_CASE("local quality measures") {
    std::vector<NodeInfo> infos{{"a", 0, 2, -1}, {"b", 0, 10, -1}, {"c", 0, 3, -1}};
    UGraph g(infos);
    g.addEdge(0, 1);
    g.addEdge(1, 2);
    g.addEdge(0, 2);
    std::vector<NodeId> tri{0, 1, 2};
    CHECK(jFillin(tri, g) == 0.0);
    UGraph bare(infos);
    CHECK(jFillin(tri, bare) == 3.0);
    std::vector<NodeId> ab{0, 1};
    CHECK(jWeight(ab, g) == doctest::Approx(std::log10(20.0)).epsilon(1e-12));
    CHECK(jSize(ab) == 2.0);
}

TEST_CASE("weight qualities with equal products compare equal") {
    std::vector<NodeInfo> infos{
        {"a", 0, 2, -1}, {"b", 0, 10, -1}, {"c", 0, 4, -1}, {"d", 0, 5, -1}};
    UGraph g(infos);
    Quality q1, q2;
    q1.kind = q2.kind = QualityKind::Weight;
    q1.big = BigUint(1);
    q1.big.mulSmall(2);
    q1.big.mulSmall(10);
    q2.big = BigUint(1);
    q2.big.mulSmall(4);
    q2.big.mulSmall(5);
    CHECK(q1 == q2);
    q2.big.mulSmall(2);
    CHECK(q1 < q2);
}

TEST_CASE("chain boundary cannot improve on the singleton") {
    Window w(fixture("chain"), 1, false);
    auto res = boundarySearch(w, QualityKind::Size, {});
    CHECK(res.initialSize == 1);
    CHECK(res.interfaceNodes.size() == 1);
    CHECK(res.quality.count == 1);
}

TEST_CASE("hourglass boundary finds the waist") {
    Window w(fixture("hourglass"), 1, false);
    SearchOptions opts;
    opts.checkSeparation = true;
    auto res = boundarySearch(w, QualityKind::Size, opts);
    CHECK(res.initialSize == 2);
    REQUIRE(res.interfaceNodes.size() == 1);
    CHECK(w.moral().info(res.interfaceNodes[0]).name == "E");
    CHECK(res.statesVisited > 1);
}

TEST_CASE("ladder boundary stays at two") {
    Window w(fixture("ladder"), 1, false);
    auto res = boundarySearch(w, QualityKind::Size, {});
    CHECK(res.initialSize == 2);
    CHECK(res.interfaceNodes.size() == 2);

    // brute-force minimum over all separators of the window
    int brute = oracles::bruteMinSeparatorSize(w.moral(), w.leftContext(), w.rightContext(),
                                               w.regionNodes());
    CHECK(brute == 2);
}

TEST_CASE("search minimum equals the brute-force separator minimum") {
    for (const char* name : {"chain", "ladder", "hourglass", "vee", "xy", "backchain"}) {
        CAPTURE(name);
        Window w(fixture(name), 1, false);
        auto res = boundarySearch(w, QualityKind::Size, {});
        int brute = oracles::bruteMinSeparatorSize(w.moral(), w.leftContext(),
                                                   w.rightContext(), w.regionNodes());
        CHECK(static_cast<int>(res.quality.count) == brute);
    }
}

TEST_CASE("every visited interface separates the window") {
    for (const char* name : {"chain", "ladder", "hourglass", "vee", "xy", "backchain"}) {
        CAPTURE(name);
        for (bool reversed : {false, true}) {
            Window w(fixture(name), 1, reversed);
            SearchOptions opts;
            opts.checkSeparation = true; // throws on a violation
            std::vector<std::vector<NodeId>> visited;
            opts.visitedSink = &visited;
            CHECK_NOTHROW(boundarySearch(w, QualityKind::Size, opts));
            CHECK_FALSE(visited.empty());
        }
    }
}

TEST_CASE("memoization changes the state count, never the result") {
    for (const char* name : {"hourglass", "ladder", "vee", "xy"}) {
        CAPTURE(name);
        Window w(fixture(name), 1, false);
        SearchOptions with, without;
        without.memoize = false;
        auto a = boundarySearch(w, QualityKind::Size, with);
        auto b = boundarySearch(w, QualityKind::Size, without);
        CHECK(a.quality.count == b.quality.count);
        CHECK(a.interfaceNodes == b.interfaceNodes);
    }
}

TEST_CASE("left and right searches agree on local quality (parity)") {
    for (const char* name : {"chain", "ladder", "hourglass", "vee", "xy", "backchain"}) {
        for (auto kind : {QualityKind::Size, QualityKind::Fillin, QualityKind::Weight}) {
            CAPTURE(name);
            CAPTURE(qualityKindName(kind));
            auto run = bestBoundary(fixture(name), 1, kind, Direction::Both);
            REQUIRE(run.left);
            REQUIRE(run.right);
            CHECK(Quality::compare(run.left->quality, run.right->quality) == 0);
        }
    }
}

TEST_CASE("xy searches from both sides converge to the singleton") {
    auto run = bestBoundary(fixture("xy"), 1, QualityKind::Size, Direction::Both);
    REQUIRE(run.left);
    REQUIRE(run.right);
    CHECK(run.left->initialSize == 1);
    CHECK(run.right->initialSize == 2);
    CHECK(run.left->quality.count == 1);
    CHECK(run.right->quality.count == 1);
    CHECK(run.best.direction == Direction::Left); // tie prefers left
}

TEST_CASE("result quality never exceeds the initial interface quality") {
    for (const char* name : {"chain", "ladder", "hourglass", "vee", "xy"}) {
        for (int M : {1, 2}) {
            CAPTURE(name);
            auto run = bestBoundary(fixture(name), M, QualityKind::Size, Direction::Both);
            CHECK(run.left->quality.count <=
                  static_cast<std::uint64_t>(run.left->initialSize));
            CHECK(run.right->quality.count <=
                  static_cast<std::uint64_t>(run.right->initialSize));
        }
    }
}

TEST_CASE("boundary patterns live within the span") {
    for (const char* name : {"hourglass", "ladder", "vee"}) {
        for (int M : {1, 2, 3}) {
            CAPTURE(name);
            Window w(fixture(name), M, false);
            auto res = boundarySearch(w, QualityKind::Size, {});
            for (auto [off, slot] : res.interfacePattern) {
                CHECK(off >= 0);
                CHECK(off < M);
                (void)slot;
            }
            for (auto [off, slot] : res.advancedPattern) {
                CHECK(off >= 0);
                CHECK(off < M);
                (void)slot;
            }
        }
    }
}

TEST_CASE("parity holds on random templates") {
    for (int trial = 0; trial < 12; ++trial) {
        GenParams p;
        p.nodesPerSlice = 4;
        p.edgeDensity = 0.3;
        p.allowBackward = trial % 2 == 1;
        p.seed = 1000 + static_cast<std::uint64_t>(trial);
        auto t = generateTemplate(p);
        int M = std::max(1, moralSpan(t));
        for (auto kind : {QualityKind::Size, QualityKind::Fillin, QualityKind::Weight}) {
            CAPTURE(trial);
            CAPTURE(qualityKindName(kind));
            auto run = bestBoundary(t, M, kind, Direction::Both);
            CHECK(Quality::compare(run.left->quality, run.right->quality) == 0);
        }
    }
}

TEST_CASE("M below the moral span is rejected") {
    auto t = parseTemplate(
        "FRAMES P=1 C=1 E=1\n"
        "VAR A frame=0 card=2\n"
        "VAR X frame=0 card=2\n"
        "VAR A frame=1 card=2\n"
        "VAR X frame=1 card=2\n"
        "VAR A frame=3 card=2\n"
        "VAR X frame=3 card=2\n"
        "EDGE A:0 -> X:1\n"
        "EDGE A:1 -> X:2\n"
        "EDGE A:2 -> X:3\n"
        "EDGE A:1 -> X:0\n"
        "EDGE A:2 -> X:1\n"
        "EDGE A:3 -> X:2\n");
    REQUIRE(moralSpan(t) == 2);
    CHECK_THROWS_AS(Window(t, 1, false), ModelError);
    CHECK_NOTHROW(Window(t, 2, false));
}

TEST_CASE("global quality is deterministic and matches the local oracle") {
    Window w(fixture("hourglass"), 1, false);
    EngineSettings engine;
    SearchOptions opts;
    opts.engine = &engine;
    auto res = boundarySearch(w, QualityKind::GlobalMaxclique, opts);
    auto res2 = boundarySearch(w, QualityKind::GlobalMaxclique, opts);
    CHECK(res.quality.count == res2.quality.count);
    CHECK(res.interfaceNodes == res2.interfaceNodes);

    // the waist interface implies the 5-node staircase partition whose
    // exhaustive-order maxclique is 3 (it contains a chordless 5-cycle)
    std::vector<NodeId> waist = res.interfaceNodes;
    if (w.moral().info(waist.front()).name == "E") {
        double mc = jGlobal(waist, w, engine, QualityKind::GlobalMaxclique);
        CHECK(mc == 3.0);
    }
}

TEST_CASE("chain global maxclique is 2") {
    Window w(fixture("chain"), 1, false);
    EngineSettings engine;
    auto run = boundarySearch(w, QualityKind::Size, {});
    double mc = jGlobal(run.interfaceNodes, w, engine, QualityKind::GlobalMaxclique);
    CHECK(mc == 2.0);
}

TEST_CASE("state cap truncates the search deterministically") {
    Window w(fixture("hourglass"), 2, false);
    SearchOptions capped;
    capped.maxStates = 3;
    auto a = boundarySearch(w, QualityKind::Size, capped);
    auto b = boundarySearch(w, QualityKind::Size, capped);
    CHECK(a.statesVisited == 3);
    CHECK(a.interfaceNodes == b.interfaceNodes);
}
