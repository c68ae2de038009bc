#include "brattelikit/random_diagrams.hpp"

#include <random>

#include "brattelikit/errors.hpp"

namespace brattelikit {

namespace {

// No all-zero row or column: every vertex keeps an edge in both directions.
IntMatrix random_matrix(std::mt19937_64& rng, int rows, int cols, long long max_entry) {
    std::uniform_int_distribution<long long> entry(0, max_entry);
    IntMatrix m(rows, cols, 0LL);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m.at(r, c) = entry(rng);
    for (int r = 0; r < rows; ++r)
        if (m.row_sum(r) == 0) m.at(r, static_cast<int>(rng() % static_cast<uint64_t>(cols))) = 1;
    for (int c = 0; c < cols; ++c)
        if (m.col_sum(c) == 0) m.at(static_cast<int>(rng() % static_cast<uint64_t>(rows)), c) = 1;
    return m;
}

}  // namespace

BiInfiniteDiagram random_diagram(uint64_t seed, const RandomDiagramOptions& opts) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> verts(1, opts.max_vertices);

    int weld = verts(rng);
    std::vector<IntMatrix> pos;
    int prev = weld;
    for (int k = 1; k <= opts.depth; ++k) {
        int n = verts(rng);
        pos.push_back(random_matrix(rng, n, prev, opts.max_entry));
        prev = n;
    }
    // Negative side, stored convention: level -j matrix is |V_{-j+1}| x |V_{-j}|.
    std::vector<IntMatrix> neg;
    prev = weld;
    for (int j = 1; j <= opts.depth; ++j) {
        int n = verts(rng);
        neg.push_back(random_matrix(rng, prev, n, opts.max_entry));
        prev = n;
    }
    return BiInfiniteDiagram(MatrixSource::explicit_window(std::move(pos), TailPolicy::Identity, false),
                             MatrixSource::explicit_window(std::move(neg), TailPolicy::Identity, true), weld);
}

WeightedBundle random_bundle(uint64_t seed, const RandomDiagramOptions& opts) {
    BiInfiniteDiagram d = random_diagram(seed, opts);
    WeightFunction wp = solve_weight(positive_part(d), opts.depth + 4, NumericMode::Exact);
    WeightFunction wm = solve_weight(negative_part(d), opts.depth + 4, NumericMode::Exact);
    auto [wpn, wmn] = biinfinite_normalize(wp, wm);
    return WeightedBundle{std::move(d), std::move(wpn), std::move(wmn), EdgeOrders(), EdgeOrders(),
                          "random-" + std::to_string(seed)};
}

}  // namespace brattelikit
