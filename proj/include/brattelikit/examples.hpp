#pragma once

#include "brattelikit/renormalization.hpp"

namespace brattelikit {

// Expected values ship with a basis note (closed form or derivation) and a
// tolerance; tests refuse entries without a basis.
struct ExpectedValue {
    std::string name;
    double value = 0;
    double tol = 0;
    std::string exact;  // rational literal when applicable
    std::string basis;
};

struct ExampleBundle {
    WeightedBundle bundle;
    std::vector<ExpectedValue> expected;
};

// Stationary [[1,1],[1,0]] on both sides; golden-ratio eigendata.
ExampleBundle fibonacci(int depth = 40);

// M(3,1) positive part over an identity negative part; transitive but not
// minimal, carrying one atomic and one non-atomic invariant weight.
ExampleBundle chacon(int depth = 40);

// M(p, n_i) at levels (i+1)^2-1, M(p,1) elsewhere, identity negative side.
// n_rule: integer constant literal or "p^((i+1)^2-1)".
ExampleBundle mpn_family(long long p, const std::string& n_rule, int depth = 36);

// Stationary [[p]]: the p-adic odometer.
ExampleBundle odometer(long long p, int depth = 40);

// Two vertices away from levels {2^m - 1, 2^m}, where the diagram funnels
// through a single vertex and the 1x1 block [[2]].
ExampleBundle single_vertex_often(int depth = 40);

// Two decoupled Fibonacci chains; the cone keeps two extreme rays and meet
// depths are provably infinite.
ExampleBundle block_diagonal_chains(int depth = 64);

std::vector<std::string> example_names();
ExampleBundle example_by_name(const std::string& name, int depth = -1);

}  // namespace brattelikit
