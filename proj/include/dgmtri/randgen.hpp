#ifndef DGMTRI_RANDGEN_HPP
#define DGMTRI_RANDGEN_HPP

#include <cstdint>

#include "dgmtri/template.hpp"

namespace dgmtri {

// Random one-slice-per-partition templates for property suites and benches.
// Intra- and inter-slice candidate edges draw the same density, and the
// prologue/epilogue replicate the chunk slice so every seam repeats.
struct GenParams {
    int nodesPerSlice = 5;
    int cardMin = 2;
    int cardMax = 50;
    double edgeDensity = 0.25;
    bool allowBackward = false;
    std::uint64_t seed = 1;
};

Template generateTemplate(const GenParams& p);

} // namespace dgmtri

#endif
