#include "brattelikit/examples.hpp"

#include <cmath>

#include "brattelikit/errors.hpp"

namespace brattelikit {

namespace {

WeightFunction constant_exact_levels(const std::vector<Rational>& level0, int depth) {
    std::vector<std::vector<Rational>> lv(static_cast<size_t>(depth) + 1, level0);
    return WeightFunction::exact(std::move(lv));
}

}  // namespace

ExampleBundle fibonacci(int depth) {
    IntMatrix f(2, 2, {1, 1, 1, 0});
    BiInfiniteDiagram d(MatrixSource::stationary({f}), MatrixSource::stationary({f}), 2);
    WeightFunction wp = pf_weights(positive_part(d), depth, NumericMode::Float);
    WeightFunction wm = pf_weights(negative_part(d), depth, NumericMode::Float);
    auto [wpn, wmn] = biinfinite_normalize(wp, wm);

    ExampleBundle out{WeightedBundle{d, wpn, wmn, EdgeOrders(), EdgeOrders(), "fibonacci"}, {}};
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    out.expected = {
        {"t1", std::log(phi), 1e-12, "", "log((1+sqrt5)/2)"},
        {"w0[0]", (std::sqrt(5.0) - 1.0) / 2.0, 1e-12, "", "PF eigenvector of [[1,1],[1,0]], sum-normalized"},
        {"w0[1]", (3.0 - std::sqrt(5.0)) / 2.0, 1e-12, "", "PF eigenvector of [[1,1],[1,0]], sum-normalized"},
        {"stack1.height[0]", 2, 0, "", "two edges into the first level-1 vertex"},
        {"stack1.height[1]", 1, 0, "", "one edge into the second level-1 vertex"},
        {"normalize.scale", 1.0 / (std::pow(phi, -2) + std::pow(phi, -4)), 1e-12, "",
         "1/(phi^-2 + phi^-4), the level-0 pairing"},
        {"expansion", phi, 1e-12, "", "PF root of the period block"},
    };
    return out;
}

ExampleBundle chacon(int depth) {
    BiInfiniteDiagram d(MatrixSource::stationary({mpn_matrix(3, 1)}),
                        MatrixSource::stationary({IntMatrix::identity(2)}), 2);
    WeightFunction wp = pf_weights(positive_part(d), depth, NumericMode::Exact);
    WeightFunction wm = constant_exact_levels({Rational(1, 2), Rational(1, 2)}, depth);
    auto [wpn, wmn] = biinfinite_normalize(wp, wm);

    ExampleBundle out{WeightedBundle{d, wpn, wmn, EdgeOrders(), EdgeOrders(), "chacon"}, {}};
    out.expected = {
        {"w0[0]", 2.0 / 3.0, 0, "2/3", "solve [[3,0],[1,1]] xi = 3 xi, sum-normalized"},
        {"w0[1]", 1.0 / 3.0, 0, "1/3", "solve [[3,0],[1,1]] xi = 3 xi, sum-normalized"},
        {"atomic[0]", 0, 0, "0", "fixed vector of [[3,0],[1,1]] at eigenvalue 1"},
        {"atomic[1]", 1, 0, "1", "fixed vector of [[3,0],[1,1]] at eigenvalue 1"},
        {"stack1.height[0]", 4, 0, "", "path count into the first level-1 vertex"},
        {"stack1.height[1]", 1, 0, "", "path count into the second level-1 vertex"},
        {"expansion", 3, 0, "3", "PF root of M(3,1)"},
        {"periodic.components", 1, 0, "", "single confined chain down the second vertex"},
    };
    return out;
}

ExampleBundle mpn_family(long long p, const std::string& n_rule, int depth) {
    MatrixSource pos = MatrixSource::programmatic(
        "mpn-family", {{"p", std::to_string(p)}, {"nRule", n_rule}});
    BiInfiniteDiagram d(std::move(pos), MatrixSource::stationary({IntMatrix::identity(2)}), 2);
    WeightFunction wp = solve_weight(positive_part(d), depth, NumericMode::Exact);
    WeightFunction wm = constant_exact_levels({Rational(1, 2), Rational(1, 2)}, depth);
    auto [wpn, wmn] = biinfinite_normalize(wp, wm);

    ExampleBundle out{WeightedBundle{d, wpn, wmn, EdgeOrders(), EdgeOrders(),
                                     "mpn-" + std::to_string(p) + "-" + n_rule},
                      {}};
    out.expected = {
        {"periodic.components", 1, 0, "", "single confined chain down the second vertex"},
    };
    if (n_rule == "1")
        out.expected.push_back({"series.limit", 1.5, 1e-9, "3/2", "geometric sum of 3^-i"});
    return out;
}

ExampleBundle odometer(long long p, int depth) {
    IntMatrix m(1, 1, {p});
    BiInfiniteDiagram d(MatrixSource::stationary({m}), MatrixSource::stationary({m}), 1);
    WeightFunction wp = pf_weights(positive_part(d), depth, NumericMode::Exact);
    WeightFunction wm = pf_weights(negative_part(d), depth, NumericMode::Exact);
    auto [wpn, wmn] = biinfinite_normalize(wp, wm);

    ExampleBundle out{WeightedBundle{d, wpn, wmn, EdgeOrders(), EdgeOrders(),
                                     "odometer-" + std::to_string(p)},
                      {}};
    out.expected = {
        {"t1", std::log(static_cast<double>(p)), 1e-12, "", "log p: widths shrink by p each level"},
        {"expansion", static_cast<double>(p), 0, std::to_string(p), "the scalar block"},
    };
    return out;
}

ExampleBundle single_vertex_often(int depth) {
    MatrixSource pos = MatrixSource::programmatic("single-vertex-often", {});
    BiInfiniteDiagram d(std::move(pos), MatrixSource::stationary({IntMatrix::identity(2)}), 2);
    WeightFunction wp = solve_weight(positive_part(d), depth, NumericMode::Exact);
    WeightFunction wm = constant_exact_levels({Rational(1, 2), Rational(1, 2)}, depth);
    auto [wpn, wmn] = biinfinite_normalize(wp, wm);

    ExampleBundle out{WeightedBundle{d, wpn, wmn, EdgeOrders(), EdgeOrders(), "single-vertex-often"}, {}};
    out.expected = {
        {"funnel.meet", 0, 0, "", "one vertex per funnel level"},
    };
    return out;
}

ExampleBundle block_diagonal_chains(int depth) {
    IntMatrix f(4, 4,
                {1, 1, 0, 0,
                 1, 0, 0, 0,
                 0, 0, 1, 1,
                 0, 0, 1, 0});
    BiInfiniteDiagram d(MatrixSource::stationary({f}), MatrixSource::stationary({f}), 4);
    WeightFunction wp = solve_weight(positive_part(d), depth, NumericMode::Exact);
    WeightFunction wm = solve_weight(negative_part(d), depth, NumericMode::Exact);
    auto [wpn, wmn] = biinfinite_normalize(wp, wm);

    ExampleBundle out{WeightedBundle{d, wpn, wmn, EdgeOrders(), EdgeOrders(), "block-diagonal"}, {}};
    out.expected = {
        {"cone.lower", 0.1, 0, "", "two invariant rays keep the diameter large"},
    };
    return out;
}

std::vector<std::string> example_names() {
    return {"fibonacci",          "chacon",        "odometer-2",     "odometer-3",
            "single-vertex-often", "mpn-divergent-3", "mpn-constant-3", "block-diagonal"};
}

ExampleBundle example_by_name(const std::string& name, int depth) {
    auto dd = [&](int dflt) { return depth > 0 ? depth : dflt; };
    if (name == "fibonacci") return fibonacci(dd(40));
    if (name == "chacon") return chacon(dd(40));
    if (name == "odometer-2") return odometer(2, dd(40));
    if (name == "odometer-3") return odometer(3, dd(40));
    if (name == "single-vertex-often") return single_vertex_often(dd(40));
    if (name == "mpn-divergent-3") return mpn_family(3, "p^((i+1)^2-1)", dd(36));
    if (name == "mpn-constant-3") return mpn_family(3, "1", dd(36));
    if (name == "block-diagonal") return block_diagonal_chains(dd(64));
    throw Error("unknown example: " + name);
}

}  // namespace brattelikit
