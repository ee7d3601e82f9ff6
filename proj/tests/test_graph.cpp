#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dgmtri/errors.hpp"
#include "dgmtri/graph.hpp"
#include "oracles.hpp"

using namespace dgmtri;

namespace {

std::vector<NodeInfo> plainNodes(int n, int card = 2) {
    std::vector<NodeInfo> out;
    for (int i = 0; i < n; ++i)
        out.push_back({std::string(1, static_cast<char>('a' + i)), 0, card, -1});
    return out;
}

UGraph path3() {
    UGraph g(plainNodes(3));
    g.addEdge(0, 1);
    g.addEdge(1, 2);
    return g;
}

UGraph cycle4() {
    UGraph g(plainNodes(4));
    g.addEdge(0, 1);
    g.addEdge(1, 2);
    g.addEdge(2, 3);
    g.addEdge(3, 0);
    return g;
}

std::uint64_t rngState = 42;
std::uint64_t nextRand() {
    rngState += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = rngState;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

UGraph randomGraph(int n, double density) {
    UGraph g(plainNodes(n));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if ((nextRand() >> 11) * 0x1.0p-53 < density) g.addEdge(a, b);
    return g;
}

std::vector<NodeId> randomOrder(int n) {
    std::vector<NodeId> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = n - 1; i > 0; --i)
        std::swap(order[i], order[nextRand() % static_cast<std::uint64_t>(i + 1)]);
    return order;
}

} // namespace

TEST_CASE("moralize drops directions and marries co-parents") {
    // a->b, a->c: no shared child, no marriage
    DGraph g1(plainNodes(3));
    g1.addEdge(0, 1);
    g1.addEdge(0, 2);
    auto m1 = moralize(g1);
    CHECK(m1.edgeCount() == 2);
    CHECK(m1.hasEdge(0, 1));
    CHECK(m1.hasEdge(0, 2));

    // a->c, b->c: parents of c marry
    DGraph g2(plainNodes(3));
    g2.addEdge(0, 2);
    g2.addEdge(1, 2);
    auto m2 = moralize(g2);
    CHECK(m2.edgeCount() == 3);
    CHECK(m2.hasEdge(0, 1));
}

TEST_CASE("moralize diamond matches the brute-force closure") {
    DGraph g(plainNodes(4));
    g.addEdge(0, 1);
    g.addEdge(0, 2);
    g.addEdge(1, 3);
    g.addEdge(2, 3);
    auto m = moralize(g);
    auto expected = oracles::bruteMoralEdges(g);
    auto got = m.edges();
    CHECK(std::set<Edge>(got.begin(), got.end()) == expected);
    CHECK(m.hasEdge(1, 2)); // the married pair
    CHECK(m.edgeCount() == 5);
}

TEST_CASE("moral edge count never drops below the directed count") {
    for (int trial = 0; trial < 20; ++trial) {
        DGraph g(plainNodes(8));
        for (int a = 0; a < 8; ++a)
            for (int b = a + 1; b < 8; ++b)
                if (nextRand() % 3 == 0) g.addEdge(a, b);
        auto m = moralize(g);
        CHECK(m.edgeCount() >= g.edgeCount());
        // every co-parent pair adjacent
        for (NodeId child = 0; child < g.nodeCount(); ++child) {
            const auto& ps = g.parents(child);
            for (std::size_t i = 0; i < ps.size(); ++i)
                for (std::size_t j = i + 1; j < ps.size(); ++j)
                    CHECK(m.hasEdge(ps[i], ps[j]));
        }
    }
}

TEST_CASE("induced subgraph keeps exactly the selected structure") {
    auto p = path3();
    std::vector<NodeId> ac{0, 2};
    auto sub = inducedSubgraph(p, ac);
    CHECK(sub.nodeCount() == 2);
    CHECK(sub.edgeCount() == 0);

    UGraph tri(plainNodes(3));
    tri.addEdge(0, 1);
    tri.addEdge(1, 2);
    tri.addEdge(0, 2);
    std::vector<NodeId> all{0, 1, 2};
    auto same = inducedSubgraph(tri, all);
    CHECK(same.edgeCount() == 3);

    auto c4 = cycle4();
    std::vector<NodeId> abc{0, 1, 2};
    auto path = inducedSubgraph(c4, abc);
    CHECK(path.edgeCount() == 2);
    CHECK(path.hasEdge(0, 1));
    CHECK(path.hasEdge(1, 2));

    std::vector<NodeId> bad{0, 7};
    CHECK_THROWS_AS(inducedSubgraph(p, bad), InputError);
}

TEST_CASE("isSeparator on paths") {
    auto p = path3();
    std::vector<NodeId> b{1}, a{0}, c{2};
    CHECK(isSeparator(p, b, a, c));
    std::vector<NodeId> none{}, ab{0, 1};
    CHECK_FALSE(isSeparator(p, none, ab, c));
    std::vector<NodeId> overlap{1}, alsoOne{1};
    CHECK_THROWS_AS(isSeparator(p, overlap, alsoOne, c), InputError);
}

TEST_CASE("eliminate on a path") {
    auto p = path3();
    std::vector<NodeId> endpointsFirst{0, 1, 2};
    auto r1 = eliminate(p, endpointsFirst);
    CHECK(r1.fill.empty());
    CHECK(r1.maxcliqueSize == 2);

    std::vector<NodeId> middleFirst{1, 0, 2};
    auto r2 = eliminate(p, middleFirst);
    CHECK(r2.fill == std::vector<Edge>{{0, 2}});
    CHECK(r2.maxcliqueSize == 3);

    std::vector<NodeId> dup{1, 1};
    CHECK_THROWS_AS(eliminate(p, dup), InputError);
}

TEST_CASE("eliminate a 4-cycle") {
    auto c4 = cycle4();
    std::vector<NodeId> order{0, 1, 2, 3};
    auto r = eliminate(c4, order);
    CHECK(r.fill == std::vector<Edge>{{1, 3}});
    CHECK(r.maxcliqueSize == 3);
}

TEST_CASE("partial elimination leaves a completed residual") {
    auto p = path3();
    std::vector<NodeId> onlyMiddle{1};
    auto r = eliminate(p, onlyMiddle);
    CHECK(r.fill == std::vector<Edge>{{0, 2}});
    CHECK(r.cliques.size() == 1);
    CHECK(r.cliques[0] == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("fill oracle agrees with eliminate on random graphs") {
    for (int trial = 0; trial < 60; ++trial) {
        auto g = randomGraph(10, 0.3);
        auto order = randomOrder(10);
        auto elim = eliminate(g, order);
        auto oracle = fillOracle(g, order);
        CHECK(oracle == elim.fill);
        CHECK(oracle == oracles::bruteFill(g, order));
    }
}

TEST_CASE("fill oracle matches the path condition directly") {
    auto p = path3();
    std::vector<NodeId> order{1, 0, 2};
    CHECK(fillOracle(p, order) == std::vector<Edge>{{0, 2}});
}

TEST_CASE("eliminating along a perfect order of a chordal graph adds nothing") {
    UGraph g(plainNodes(4));
    g.addEdge(0, 1);
    g.addEdge(1, 2);
    g.addEdge(2, 3);
    g.addEdge(3, 0);
    g.addEdge(1, 3); // chord
    auto [order, chordal] = mcs(g);
    REQUIRE(chordal);
    std::vector<NodeId> peo(order.rbegin(), order.rend());
    CHECK(eliminate(g, peo).fill.empty());
}

TEST_CASE("mcs chordality verdicts") {
    UGraph tri(plainNodes(3));
    tri.addEdge(0, 1);
    tri.addEdge(1, 2);
    tri.addEdge(0, 2);
    CHECK(mcs(tri).second);
    CHECK_FALSE(mcs(cycle4()).second);
    auto chorded = cycle4();
    chorded.addEdge(1, 3);
    CHECK(mcs(chorded).second);
}

TEST_CASE("the filled graph of any elimination is chordal") {
    for (int trial = 0; trial < 30; ++trial) {
        auto g = randomGraph(9, 0.35);
        auto order = randomOrder(9);
        auto elim = eliminate(g, order);
        CHECK(mcs(filledGraph(g, elim)).second);
    }
}

TEST_CASE("maximal cliques of chordal graphs") {
    UGraph tri(plainNodes(3));
    tri.addEdge(0, 1);
    tri.addEdge(1, 2);
    tri.addEdge(0, 2);
    auto cs = maximalCliques(tri);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0] == std::vector<NodeId>{0, 1, 2});

    auto ps = maximalCliques(path3());
    REQUIRE(ps.size() == 2);
    CHECK(ps[0] == std::vector<NodeId>{0, 1});
    CHECK(ps[1] == std::vector<NodeId>{1, 2});

    auto chorded = cycle4();
    chorded.addEdge(1, 3);
    auto qs = maximalCliques(chorded);
    CHECK(qs == oracles::bruteMaximalCliques(chorded));

    CHECK_THROWS_AS(maximalCliques(cycle4()), ModelError);
}

TEST_CASE("maximal cliques cover every edge and never nest") {
    for (int trial = 0; trial < 25; ++trial) {
        auto g = randomGraph(9, 0.3);
        auto order = randomOrder(9);
        auto filled = filledGraph(g, eliminate(g, order));
        auto cliques = maximalCliques(filled);
        CHECK(cliques == oracles::bruteMaximalCliques(filled));
        for (const auto& [u, v] : filled.edges()) {
            bool covered = false;
            for (const auto& c : cliques)
                if (std::binary_search(c.begin(), c.end(), u) &&
                    std::binary_search(c.begin(), c.end(), v))
                    covered = true;
            CHECK(covered);
        }
        for (std::size_t i = 0; i < cliques.size(); ++i)
            for (std::size_t j = 0; j < cliques.size(); ++j)
                if (i != j)
                    CHECK_FALSE(std::includes(cliques[i].begin(), cliques[i].end(),
                                              cliques[j].begin(), cliques[j].end()));
    }
}

TEST_CASE("logWeight sums clique state spaces in log10") {
    std::vector<NodeInfo> infos{{"a", 0, 2, -1}, {"b", 0, 10, -1}};
    UGraph g(infos);
    g.addEdge(0, 1);
    std::vector<std::vector<NodeId>> one{{0, 1}};
    CHECK(logWeight(one, g) == doctest::Approx(std::log10(20.0)).epsilon(1e-12));

    std::vector<NodeInfo> infos2{{"a", 0, 10, -1}, {"b", 0, 10, -1}};
    UGraph g2(infos2);
    std::vector<std::vector<NodeId>> two{{0}, {1}};
    CHECK(logWeight(two, g2) == doctest::Approx(std::log10(20.0)).epsilon(1e-12));

    std::vector<std::vector<NodeId>> none;
    CHECK_THROWS_AS(logWeight(none, g), InputError);
}

TEST_CASE("big integers track exact state spaces") {
    BigUint a(7);
    a.mulSmall(1000000007ull);
    BigUint b(7000000049ull);
    CHECK(a == b);
    a.add(BigUint(1));
    CHECK(b < a);
    a.sub(BigUint(1));
    CHECK(a == b);
    // 50^40 stays exact
    BigUint big(1);
    for (int i = 0; i < 40; ++i) big.mulSmall(50);
    CHECK(big.toString() ==
          "90949470177292823791503906250000000000000000000000000000000000000000");
    CHECK(big.log10() == doctest::Approx(40.0 * std::log10(50.0)).epsilon(1e-12));
}
