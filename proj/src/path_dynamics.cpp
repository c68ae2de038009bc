#include "brattelikit/path_dynamics.hpp"

#include <algorithm>
#include <set>

#include "brattelikit/errors.hpp"

namespace brattelikit {

namespace {

// Matches the path's vertex trace against a scanned chain; extension only
// applies when the whole observed suffix is confined.
const PeriodicComponentCandidate* component_of(const std::vector<PeriodicComponentCandidate>& comps,
                                               const FinitePath& p) {
    for (const auto& c : comps) {
        if (c.start_level >= p.depth()) continue;
        bool match = true;
        for (int lvl = c.start_level; lvl <= p.depth() && match; ++lvl) {
            int pv = lvl == 0 ? p.start : p.edges[static_cast<size_t>(lvl - 1)].range;
            match = pv == c.vertex_by_level[static_cast<size_t>(lvl - c.start_level)];
        }
        if (match) return &c;
    }
    return nullptr;
}

FinitePath component_extreme(const DiagramSide& side, const EdgeOrders& orders,
                             const PeriodicComponentCandidate& comp, int depth, bool maximal) {
    FinitePath p = maximal ? maximal_path_into(side, orders, comp.start_level,
                                               comp.vertex_by_level.front())
                           : minimal_path_into(side, orders, comp.start_level, comp.vertex_by_level.front());
    for (int lvl = comp.start_level + 1; lvl <= depth; ++lvl) {
        // Confined levels have a single incoming edge; order is irrelevant.
        auto in = orders.incoming(side, lvl, comp.vertex_by_level[static_cast<size_t>(lvl - comp.start_level)]);
        p.edges.push_back(in.front());
    }
    return p;
}

StepResult step(const DiagramSide& side, const EdgeOrders& orders, const TruncatedPath& p, int depth_budget,
                const StepOptions& opts, bool forward) {
    int depth = p.prefix.depth();
    if (depth < 1) throw Error("cannot step an empty path");
    if (depth_budget < depth) throw Error("depth budget below current prefix depth");

    for (int l = 1; l <= depth; ++l) {
        const Edge& e = p.prefix.edges[static_cast<size_t>(l - 1)];
        auto order = orders.incoming(side, e.level, e.range);
        auto it = std::find(order.begin(), order.end(), e);
        if (it == order.end()) throw Error("path edge not found in its incoming order");
        bool at_end = forward ? (it + 1 == order.end()) : (it == order.begin());
        if (at_end) continue;
        Edge next = forward ? *(it + 1) : *(it - 1);
        FinitePath below = forward ? minimal_path_into(side, orders, l - 1, next.source)
                                   : maximal_path_into(side, orders, l - 1, next.source);
        TruncatedPath out = p;
        out.prefix.start = below.start;
        for (int j = 0; j < l - 1; ++j) out.prefix.edges[static_cast<size_t>(j)] = below.edges[static_cast<size_t>(j)];
        out.prefix.edges[static_cast<size_t>(l - 1)] = next;
        return {StepStatus::Ok, out};
    }

    if (opts.extend_periodic) {
        auto comps = periodic_component_scan(side, depth);
        if (const auto* c = component_of(comps, p.prefix)) {
            TruncatedPath out = p;
            out.prefix = component_extreme(side, orders, *c, depth, !forward);
            return {StepStatus::Ok, out};
        }
    }
    if (forward && p.tag == TailTag::MaxTail) return {StepStatus::MaximalPath, p};
    if (!forward && p.tag == TailTag::MinTail) return {StepStatus::MinimalPath, p};
    return {StepStatus::NeedsDepth, p};
}

}  // namespace

StepResult successor(const DiagramSide& side, const EdgeOrders& orders, const TruncatedPath& p,
                     int depth_budget, const StepOptions& opts) {
    return step(side, orders, p, depth_budget, opts, true);
}

StepResult predecessor(const DiagramSide& side, const EdgeOrders& orders, const TruncatedPath& p,
                       int depth_budget, const StepOptions& opts) {
    return step(side, orders, p, depth_budget, opts, false);
}

OrbitResult orbit(const DiagramSide& side, const EdgeOrders& orders, const TruncatedPath& start, long steps,
                  int depth_budget, const StepOptions& opts) {
    OrbitResult out;
    out.states.push_back(start);
    out.itinerary.push_back(start.prefix.start);
    bool forward = steps >= 0;
    long want = forward ? steps : -steps;
    for (long i = 0; i < want; ++i) {
        StepResult r = forward ? successor(side, orders, out.states.back(), depth_budget, opts)
                               : predecessor(side, orders, out.states.back(), depth_budget, opts);
        if (r.status != StepStatus::Ok) {
            out.terminal = r.status;
            return out;
        }
        out.states.push_back(r.path);
        out.itinerary.push_back(r.path.prefix.start);
        ++out.steps_done;
    }
    return out;
}

std::vector<PeriodicComponentCandidate> periodic_component_scan(const DiagramSide& side, int depth) {
    std::vector<PeriodicComponentCandidate> comps;
    if (depth < 1) return comps;

    // Confinement is checked on an extended horizon: a genuine component's
    // chain persists arbitrarily deep, while depth-edge artifacts break.
    int horizon = std::max(2 * depth, depth + 8);
    std::vector<IntMatrix> mats;
    for (int k = 1; k <= horizon; ++k) {
        try {
            mats.push_back(side.matrix_at(k));
        } catch (const Error&) {
            horizon = k - 1;
            break;
        }
    }
    if (horizon < depth) horizon = depth;  // unreachable for valid diagrams

    std::set<std::pair<int, int>> seen;  // (start_level, vertex at depth)
    int top_count = side.vertex_count(horizon);
    for (int u = 0; u < top_count; ++u) {
        std::vector<int> chain_rev{u};
        int lvl = horizon;
        while (lvl >= 1) {
            const IntMatrix& m = mats[static_cast<size_t>(lvl - 1)];
            int vtx = chain_rev.back();
            int src = -1;
            bool single = true;
            for (int c = 0; c < m.cols() && single; ++c) {
                long long e = m.at(vtx, c);
                if (e == 0) continue;
                if (e > 1 || src != -1) single = false;
                else src = c;
            }
            if (!single || src == -1) break;
            chain_rev.push_back(src);
            --lvl;
        }
        if (lvl > depth) continue;  // confinement does not reach the report depth
        PeriodicComponentCandidate c;
        c.start_level = lvl;
        // chain_rev runs horizon..lvl; keep the reported part lvl..depth.
        for (int j = lvl; j <= depth; ++j)
            c.vertex_by_level.push_back(chain_rev[static_cast<size_t>(horizon - j)]);
        c.top_vertex = c.vertex_by_level.back();
        if (!seen.insert({c.start_level, c.top_vertex}).second) continue;
        c.period = path_count_vector(side, lvl)[static_cast<size_t>(c.vertex_by_level.front())];
        comps.push_back(std::move(c));
    }
    return comps;
}

MinimalityCertificate minimality_certificate(const DiagramSide& side, int depth) {
    MinimalityCertificate cert;
    for (int a = 0; a < depth; ++a) {
        IntMatrix block = side.matrix_at(a + 1);
        for (int b = a + 1; b <= depth; ++b) {
            if (b > a + 1) block = saturating_product(block, side.matrix_at(b));
            if (block.all_positive()) {
                cert.verdict = MinimalityCertificate::Verdict::Minimal;
                cert.block_from = a;
                cert.block_to = b;
                cert.block = block;
                return cert;
            }
        }
    }
    auto comps = periodic_component_scan(side, depth);
    if (!comps.empty()) {
        cert.verdict = MinimalityCertificate::Verdict::NotMinimal;
        cert.components = std::move(comps);
        return cert;
    }
    cert.verdict = MinimalityCertificate::Verdict::Inconclusive;
    return cert;
}

std::optional<TransitivityEvidence> transitivity_evidence(const DiagramSide& side, int depth) {
    IntMatrix block = side.matrix_at(1);
    for (int m = 1; m <= depth; ++m) {
        if (m > 1) block = saturating_product(block, side.matrix_at(m));
        for (int u = 0; u < block.rows(); ++u) {
            bool all = true;
            for (int c = 0; c < block.cols() && all; ++c) all = block.at(u, c) > 0;
            if (all) return TransitivityEvidence{m, u};
        }
    }
    return std::nullopt;
}

ComponentReport component_report(const DiagramSide& side, int depth) {
    ComponentReport rep;
    rep.depth = depth;
    rep.periodic_components = periodic_component_scan(side, depth);
    rep.minimality = minimality_certificate(side, depth);
    rep.transitivity = transitivity_evidence(side, depth);
    return rep;
}

namespace {

std::vector<char> step_support(const IntMatrix& m, const std::vector<char>& from) {
    std::vector<char> to(static_cast<size_t>(m.rows()), 0);
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            if (m.at(r, c) != 0 && from[static_cast<size_t>(c)]) {
                to[static_cast<size_t>(r)] = 1;
                break;
            }
    return to;
}

bool intersects(const std::vector<char>& a, const std::vector<char>& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] && b[i]) return true;
    return false;
}

}  // namespace

MeetResult meet_depth(const BiInfiniteDiagram& d, long k, int v, int w, int cap) {
    int n = d.vertex_count(k);
    if (v < 0 || v >= n || w < 0 || w >= n) throw Error("vertex index out of range");
    if (v == w) return {MeetResult::Kind::Value, 0, cap};

    std::vector<char> a(static_cast<size_t>(n), 0), b(static_cast<size_t>(n), 0);
    a[static_cast<size_t>(v)] = 1;
    b[static_cast<size_t>(w)] = 1;

    // Support-cycle detection proves a genuinely empty meet for stationary
    // positive parts (e.g. block-diagonal chains).
    auto period = d.positive_source().stationary_period();
    bool cycle_checkable = period && d.positive_source().kind() == MatrixSource::Kind::Stationary && k >= 0;
    std::set<std::tuple<long, std::vector<char>, std::vector<char>>> seen;

    for (int m = 1; m <= cap; ++m) {
        IntMatrix step = d.step_matrix(k + m - 1);
        a = step_support(step, a);
        b = step_support(step, b);
        if (intersects(a, b)) return {MeetResult::Kind::Value, m, cap};
        if (cycle_checkable && k + m >= 1) {
            long phase = (d.shift_offset() + k + m - 1) % *period;
            if (!seen.insert({phase, a, b}).second) return {MeetResult::Kind::Infinite, -1, cap};
        }
    }
    return {MeetResult::Kind::Unknown, -1, cap};
}

MeetResult meet_depth_max(const BiInfiniteDiagram& d, long k, int cap) {
    int n = d.vertex_count(k);
    MeetResult out{MeetResult::Kind::Value, 0, cap};
    bool unknown = false;
    for (int v = 0; v < n; ++v)
        for (int w = v + 1; w < n; ++w) {
            MeetResult r = meet_depth(d, k, v, w, cap);
            if (r.kind == MeetResult::Kind::Infinite) return r;
            if (r.kind == MeetResult::Kind::Unknown) unknown = true;
            else out.value = std::max(out.value, r.value);
        }
    if (unknown) return {MeetResult::Kind::Unknown, -1, cap};
    return out;
}

}  // namespace brattelikit
