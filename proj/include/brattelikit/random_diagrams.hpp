#pragma once

#include <cstdint>

#include "brattelikit/renormalization.hpp"

namespace brattelikit {

// All test randomness flows through these seeded generators; no ambient
// entropy anywhere in the library.
struct RandomDiagramOptions {
    int max_vertices = 4;
    int depth = 6;
    long long max_entry = 2;
};

BiInfiniteDiagram random_diagram(uint64_t seed, const RandomDiagramOptions& opts = {});

// Diagram plus exact solved weights on both sides, probWeight-normalized.
WeightedBundle random_bundle(uint64_t seed, const RandomDiagramOptions& opts = {});

}  // namespace brattelikit
