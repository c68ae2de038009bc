#include "brattelikit/ordering.hpp"

#include <algorithm>

#include "brattelikit/errors.hpp"

namespace brattelikit {

namespace {

std::vector<Edge> apply_perm(std::vector<Edge> canonical, const std::vector<int>* perm, OrderPolicy policy,
                             const char* what) {
    if (perm) {
        if (perm->size() != canonical.size()) throw Error(std::string("order permutation size mismatch for ") + what);
        std::vector<Edge> out(canonical.size());
        std::vector<char> used(canonical.size(), 0);
        for (size_t i = 0; i < perm->size(); ++i) {
            int idx = (*perm)[i];
            if (idx < 0 || static_cast<size_t>(idx) >= canonical.size() || used[static_cast<size_t>(idx)])
                throw Error(std::string("order permutation is not a bijection for ") + what);
            used[static_cast<size_t>(idx)] = 1;
            out[i] = canonical[static_cast<size_t>(idx)];
        }
        return out;
    }
    if (policy == OrderPolicy::RightToLeft) std::reverse(canonical.begin(), canonical.end());
    return canonical;
}

}  // namespace

void EdgeOrders::set_incoming_perm(int level, int vertex, std::vector<int> perm) {
    in_perm_[{level, vertex}] = std::move(perm);
}

void EdgeOrders::set_outgoing_perm(int level, int vertex, std::vector<int> perm) {
    out_perm_[{level, vertex}] = std::move(perm);
}

std::vector<Edge> EdgeOrders::incoming(const DiagramSide& side, int level, int v) const {
    if (level < 1) throw Error("incoming edges exist only at levels >= 1");
    IntMatrix m = side.matrix_at(level);
    if (v < 0 || v >= m.rows()) throw Error("vertex index out of range");
    std::vector<Edge> canonical;
    for (int s = 0; s < m.cols(); ++s)
        for (long long c = 0; c < m.at(v, s); ++c) canonical.push_back(Edge{level, s, v, c});
    auto it = in_perm_.find({level, v});
    return apply_perm(std::move(canonical), it == in_perm_.end() ? nullptr : &it->second, policy_, "incoming order");
}

std::vector<Edge> EdgeOrders::outgoing(const DiagramSide& side, int level, int v) const {
    if (level < 0) throw Error("vertex level must be >= 0");
    IntMatrix m = side.matrix_at(level + 1);
    if (v < 0 || v >= m.cols()) throw Error("vertex index out of range");
    std::vector<Edge> canonical;
    for (int r = 0; r < m.rows(); ++r)
        for (long long c = 0; c < m.at(r, v); ++c) canonical.push_back(Edge{level + 1, v, r, c});
    auto it = out_perm_.find({level, v});
    return apply_perm(std::move(canonical), it == out_perm_.end() ? nullptr : &it->second, policy_, "outgoing order");
}

long long EdgeOrders::incoming_count(const DiagramSide& side, int level, int v) const {
    return side.matrix_at(level).row_sum(v);
}

long long EdgeOrders::incoming_position(const DiagramSide& side, const Edge& e) const {
    auto order = incoming(side, e.level, e.range);
    for (size_t i = 0; i < order.size(); ++i)
        if (order[i] == e) return static_cast<long long>(i);
    throw Error("edge not found in its incoming order");
}

Edge EdgeOrders::incoming_at(const DiagramSide& side, int level, int v, long long idx) const {
    auto order = incoming(side, level, v);
    if (idx < 0 || static_cast<size_t>(idx) >= order.size()) throw Error("incoming order index out of range");
    return order[static_cast<size_t>(idx)];
}

std::vector<FinitePath> enumerate_S(const DiagramSide& side, const EdgeOrders& orders, int level, int v,
                                    long long cap) {
    {
        auto counts = path_count_vector(side, level);
        if (counts[static_cast<size_t>(v)] > cap) throw Error("path set too large to enumerate");
    }
    if (level == 0) return {FinitePath{{}, v}};
    std::vector<FinitePath> out;
    for (const Edge& e : orders.incoming(side, level, v)) {
        for (FinitePath q : enumerate_S(side, orders, level - 1, e.source, cap)) {
            q.edges.push_back(e);
            out.push_back(std::move(q));
        }
    }
    return out;
}

bool is_maximal(const DiagramSide& side, const EdgeOrders& orders, const FinitePath& p) {
    for (const Edge& e : p.edges) {
        auto order = orders.incoming(side, e.level, e.range);
        if (!(order.back() == e)) return false;
    }
    return true;
}

bool is_minimal(const DiagramSide& side, const EdgeOrders& orders, const FinitePath& p) {
    for (const Edge& e : p.edges) {
        auto order = orders.incoming(side, e.level, e.range);
        if (!(order.front() == e)) return false;
    }
    return true;
}

namespace {
FinitePath extreme_path_into(const DiagramSide& side, const EdgeOrders& orders, int level, int v, bool last) {
    FinitePath p;
    std::vector<Edge> rev;
    int cur = v;
    for (int k = level; k >= 1; --k) {
        auto order = orders.incoming(side, k, cur);
        Edge e = last ? order.back() : order.front();
        rev.push_back(e);
        cur = e.source;
    }
    p.start = cur;
    p.edges.assign(rev.rbegin(), rev.rend());
    return p;
}
}  // namespace

FinitePath minimal_path_into(const DiagramSide& side, const EdgeOrders& orders, int level, int v) {
    return extreme_path_into(side, orders, level, v, false);
}

FinitePath maximal_path_into(const DiagramSide& side, const EdgeOrders& orders, int level, int v) {
    return extreme_path_into(side, orders, level, v, true);
}

}  // namespace brattelikit
