#pragma once

#include <map>
#include <vector>

#include "brattelikit/diagram.hpp"

namespace brattelikit {

// One edge of a one-sided diagram: level k edges run from V_{k-1} (source)
// to V_k (range); copy distinguishes parallel edges counted by the matrix
// entry.
struct Edge {
    int level = 0;
    int source = 0;
    int range = 0;
    long long copy = 0;
    bool operator==(const Edge&) const = default;
};

struct FinitePath {
    std::vector<Edge> edges;  // e_1..e_k, composable
    int start = 0;            // s(e_1), kept explicit so depth-0 paths exist

    int depth() const { return static_cast<int>(edges.size()); }
    int end_vertex() const { return edges.empty() ? start : edges.back().range; }
    bool operator==(const FinitePath&) const = default;
};

enum class OrderPolicy { LeftToRight, RightToLeft };

// Total orders on each r^{-1}(v) and s^{-1}(v). Orders are generated from a
// policy (so stationary diagrams get stationary orders at any depth) with
// optional explicit per-vertex permutations layered on top.
class EdgeOrders {
public:
    explicit EdgeOrders(OrderPolicy policy = OrderPolicy::LeftToRight) : policy_(policy) {}

    OrderPolicy policy() const { return policy_; }

    // perm[i] = index into the canonical (source,copy)-ascending enumeration.
    void set_incoming_perm(int level, int vertex, std::vector<int> perm);
    // perm over the canonical (range,copy)-ascending enumeration of s^{-1}(v).
    void set_outgoing_perm(int level, int vertex, std::vector<int> perm);
    bool has_overrides() const { return !in_perm_.empty() || !out_perm_.empty(); }

    // r^{-1}(v) for v at level k >= 1, in <=_r order.
    std::vector<Edge> incoming(const DiagramSide& side, int level, int v) const;
    // s^{-1}(v) for v at level k >= 0 (edges at level k+1), in <=_s order.
    std::vector<Edge> outgoing(const DiagramSide& side, int level, int v) const;

    long long incoming_count(const DiagramSide& side, int level, int v) const;
    // Position of an edge inside the incoming order at its range vertex.
    long long incoming_position(const DiagramSide& side, const Edge& e) const;
    Edge incoming_at(const DiagramSide& side, int level, int v, long long idx) const;

    const std::map<std::pair<int, int>, std::vector<int>>& incoming_overrides() const { return in_perm_; }
    const std::map<std::pair<int, int>, std::vector<int>>& outgoing_overrides() const { return out_perm_; }

private:
    OrderPolicy policy_;
    std::map<std::pair<int, int>, std::vector<int>> in_perm_, out_perm_;
};

// All of S(v): paths from V_0 into v, sorted by the induced order (compare at
// the deepest level of disagreement). Throws if |S(v)| exceeds `cap`.
std::vector<FinitePath> enumerate_S(const DiagramSide& side, const EdgeOrders& orders, int level, int v,
                                    long long cap = 2'000'000);

bool is_maximal(const DiagramSide& side, const EdgeOrders& orders, const FinitePath& p);
bool is_minimal(const DiagramSide& side, const EdgeOrders& orders, const FinitePath& p);

// Path into v choosing the first (resp. last) incoming edge at every level.
FinitePath minimal_path_into(const DiagramSide& side, const EdgeOrders& orders, int level, int v);
FinitePath maximal_path_into(const DiagramSide& side, const EdgeOrders& orders, int level, int v);

}  // namespace brattelikit
