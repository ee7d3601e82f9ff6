// Seeded random template generation.

#include "dgmtri/randgen.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "dgmtri/errors.hpp"

namespace dgmtri {

namespace {

// local PRNG so templates are reproducible across standard libraries
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
    int between(int lo, int hi) { return lo + below(hi - lo + 1); }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    bool coin(double p) { return unit() < p; }
};

std::string varName(int slot) {
    std::string name;
    int s = slot;
    do {
        name.insert(name.begin(), static_cast<char>('a' + s % 26));
        s = s / 26 - 1;
    } while (s >= 0);
    return name;
}

struct Draw {
    std::vector<std::pair<int, int>> intra; // (fromSlot, toSlot), topo order respected
    std::vector<std::pair<int, int>> inter; // (fromSlot, toSlot) forward
    std::vector<char> interBackward;        // per inter edge
};

Draw drawEdges(Rng& rng, const GenParams& p) {
    const int n = p.nodesPerSlice;
    Draw d;

    // random topological order over the slice keeps intra edges acyclic
    std::vector<int> rank(static_cast<std::size_t>(n));
    std::iota(rank.begin(), rank.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(rank[i], rank[rng.below(i + 1)]);

    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (rng.coin(p.edgeDensity)) {
                if (rank[a] < rank[b])
                    d.intra.emplace_back(a, b);
                else
                    d.intra.emplace_back(b, a);
            }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (rng.coin(p.edgeDensity)) {
                d.inter.emplace_back(a, b);
                d.interBackward.push_back(0); // direction decided after the draw
            }

    // connect the slice: link isolated components along the topological order
    std::vector<int> comp(static_cast<std::size_t>(n));
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int x) {
        return comp[x] == x ? x : comp[x] = find(comp[x]);
    };
    for (auto [a, b] : d.intra) comp[find(a)] = find(b);
    std::vector<int> bySlot(static_cast<std::size_t>(n));
    std::iota(bySlot.begin(), bySlot.end(), 0);
    std::sort(bySlot.begin(), bySlot.end(), [&](int a, int b) { return rank[a] < rank[b]; });
    for (std::size_t i = 1; i < bySlot.size(); ++i) {
        int a = bySlot[i - 1], b = bySlot[i];
        if (find(a) != find(b)) {
            d.intra.emplace_back(a, b);
            comp[find(a)] = find(b);
        }
    }

    // keep at least one temporal edge so the chunks are coupled
    if (d.inter.empty()) {
        d.inter.emplace_back(bySlot.front(), bySlot.front());
        d.interBackward.push_back(0);
    }
    return d;
}

Template buildTemplate(const Draw& d, const std::vector<int>& cards, const GenParams& p) {
    Template t;
    t.pFrames = 1;
    t.cFrames = 1;
    t.eFrames = 1;
    const int n = p.nodesPerSlice;
    // canvas frames: P=0, chunk copy 1 = 1, copy 2 = 2, E = 3
    for (int frame : {0, 1, 3})
        for (int s = 0; s < n; ++s)
            t.vars.push_back({varName(s), frame, cards[static_cast<std::size_t>(s)], -1});

    auto addIntra = [&](int frame) {
        for (auto [a, b] : d.intra)
            t.edges.push_back({varName(a), frame, varName(b), frame});
    };
    addIntra(0);
    addIntra(1);
    addIntra(3);
    // temporal edges instantiate at every seam: P->C1, C1->C2, C2->E
    for (std::size_t i = 0; i < d.inter.size(); ++i) {
        auto [a, b] = d.inter[i];
        bool back = d.interBackward[i];
        for (int from : {0, 1, 2}) {
            int to = from + 1;
            if (back)
                t.edges.push_back({varName(b), to, varName(a), from});
            else
                t.edges.push_back({varName(a), from, varName(b), to});
        }
    }
    return t;
}

} // namespace

Template generateTemplate(const GenParams& p) {
    if (p.nodesPerSlice < 1) throw InputError("randgen: nodesPerSlice must be >= 1");
    if (p.cardMin < 2 || p.cardMax < p.cardMin)
        throw InputError("randgen: cardinality range must satisfy 2 <= min <= max");
    if (p.edgeDensity < 0.0 || p.edgeDensity > 1.0)
        throw InputError("randgen: edge density must lie in [0, 1]");

    Rng rng(p.seed);
    std::vector<int> cards(static_cast<std::size_t>(p.nodesPerSlice));
    for (auto& c : cards) c = rng.between(p.cardMin, p.cardMax);

    constexpr int kRetries = 100;
    for (int attempt = 0; attempt < kRetries; ++attempt) {
        Draw d = drawEdges(rng, p);
        // Flip temporal edges backward one at a time, keeping only flips that
        // leave small unrolls acyclic; dense draws would otherwise almost
        // never pass a wholesale resample.
        if (p.allowBackward) {
            for (std::size_t i = 0; i < d.inter.size(); ++i) {
                if (!rng.coin(0.5)) continue;
                d.interBackward[i] = 1;
                Template probe = buildTemplate(d, cards, p);
                if (!validate(probe).empty()) d.interBackward[i] = 0;
            }
        }
        Template t = buildTemplate(d, cards, p);
        if (!validate(t).empty()) continue;
        bool acyclicDeep = true;
        for (int k = 4; k <= 5 && acyclicDeep; ++k)
            acyclicDeep = unroll(t, k).graph.isAcyclic();
        if (acyclicDeep) return t;
    }
    throw ModelError("randgen: could not draw an acyclic template within the retry limit");
}

} // namespace dgmtri
