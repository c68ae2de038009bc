#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "test_common.hpp"

using namespace brattelikit;
using tc::chacon_diagram;
using tc::fib_diagram;

namespace {

// Independent oracle: enumerate actual paths (one per edge copy) from both
// vertices and look for a pair meeting at the same vertex.
int brute_meet(const BiInfiniteDiagram& d, long k, int v, int w, int cap) {
    if (v == w) return 0;
    std::vector<int> pv{v}, pw{w};  // endpoints of all enumerated paths
    for (int m = 1; m <= cap; ++m) {
        IntMatrix step = d.step_matrix(k + m - 1);
        auto extend = [&](const std::vector<int>& paths) {
            std::vector<int> next;
            for (int endpoint : paths)
                for (int r = 0; r < step.rows(); ++r)
                    for (long long c = 0; c < step.at(r, endpoint); ++c) next.push_back(r);
            return next;
        };
        pv = extend(pv);
        pw = extend(pw);
        std::set<int> ends(pv.begin(), pv.end());
        for (int e : pw)
            if (ends.count(e)) return m;
    }
    return -1;
}

TruncatedPath min_path(const DiagramSide& side, const EdgeOrders& ord, int depth, int vertex,
                       TailTag tag = TailTag::Free) {
    return TruncatedPath{minimal_path_into(side, ord, depth, vertex), tag};
}

}  // namespace

TEST_CASE("a non-maximal first edge advances alone") {
    auto fib = fib_diagram();
    auto side = positive_part(fib);
    EdgeOrders ord;
    auto p = min_path(side, ord, 3, 0);
    REQUIRE_FALSE(is_maximal(side, ord, p.prefix));
    auto r = successor(side, ord, p, 3);
    REQUIRE(r.status == StepStatus::Ok);
    CHECK(r.path.prefix.edges[1] == p.prefix.edges[1]);
    CHECK(r.path.prefix.edges[2] == p.prefix.edges[2]);
    CHECK_FALSE(r.path.prefix.edges[0] == p.prefix.edges[0]);
}

TEST_CASE("the successor orbit tours a tower in enumeration order") {
    auto fib = fib_diagram();
    auto side = positive_part(fib);
    EdgeOrders ord;
    auto tower = enumerate_S(side, ord, 3, 0);
    TruncatedPath p{tower.front(), TailTag::Free};
    auto orb = orbit(side, ord, p, static_cast<long>(tower.size()) - 1, 3);
    REQUIRE(orb.steps_done == static_cast<long>(tower.size()) - 1);
    for (size_t i = 0; i < tower.size(); ++i) CHECK(orb.states[i].prefix == tower[i]);
    CHECK(orb.states.back().prefix == maximal_path_into(side, ord, 3, 0));
    // One more step runs out of observable depth.
    auto r = successor(side, ord, orb.states.back(), 3);
    CHECK(r.status == StepStatus::NeedsDepth);
}

TEST_CASE("successor and predecessor invert each other") {
    auto ch = chacon_diagram();
    auto side = positive_part(ch);
    EdgeOrders ord;
    for (int v = 0; v < 2; ++v)
        for (const auto& path : enumerate_S(side, ord, 3, v)) {
            TruncatedPath p{path, TailTag::Free};
            auto s = successor(side, ord, p, 3);
            if (s.status != StepStatus::Ok) continue;
            auto back = predecessor(side, ord, s.path, 3);
            REQUIRE(back.status == StepStatus::Ok);
            CHECK(back.path.prefix == path);
        }
}

TEST_CASE("the maximal prefix steps back to the minimal one") {
    auto fib = fib_diagram();
    auto side = positive_part(fib);
    EdgeOrders ord;
    auto tower = enumerate_S(side, ord, 3, 0);
    TruncatedPath p{tower.back(), TailTag::Free};
    auto orb = orbit(side, ord, p, -(static_cast<long>(tower.size()) - 1), 3);
    REQUIRE(orb.steps_done == static_cast<long>(tower.size()) - 1);
    CHECK(orb.states.back().prefix == tower.front());
}

TEST_CASE("the rightmost chacon path is a fixed point under the periodic extension") {
    auto ch = chacon_diagram();
    auto side = positive_part(ch);
    EdgeOrders ord;
    auto p = TruncatedPath{maximal_path_into(side, ord, 5, 1), TailTag::MaxTail};
    REQUIRE(is_minimal(side, ord, p.prefix));  // single incoming edge per level

    auto r = successor(side, ord, p, 5);
    CHECK(r.status == StepStatus::MaximalPath);

    StepOptions opts;
    opts.extend_periodic = true;
    auto orb = orbit(side, ord, p, 5, 5, opts);
    REQUIRE(orb.steps_done == 5);
    for (const auto& st : orb.states) CHECK(st.prefix == p.prefix);
}

TEST_CASE("a depth-4 minimal path visits every depth-3 cylinder once") {
    auto fib = fib_diagram();
    auto side = positive_part(fib);
    EdgeOrders ord;
    auto p = min_path(side, ord, 4, 0);
    auto orb = orbit(side, ord, p, 7, 4);  // |S(v1,3)| + |S(v2,3)| - 1
    REQUIRE(orb.steps_done == 7);
    std::set<std::vector<int>> seen;
    for (const auto& st : orb.states) {
        std::vector<int> key{st.prefix.start};
        for (int i = 0; i < 3; ++i) {
            key.push_back(st.prefix.edges[static_cast<size_t>(i)].source);
            key.push_back(st.prefix.edges[static_cast<size_t>(i)].range);
            key.push_back(static_cast<int>(st.prefix.edges[static_cast<size_t>(i)].copy));
        }
        seen.insert(key);
    }
    CHECK(seen.size() == 8);  // all depth-3 paths
    auto r = successor(side, ord, orb.states.back(), 4);
    CHECK(r.status == StepStatus::NeedsDepth);
}

TEST_CASE("orbit with zero steps returns the start") {
    auto fib = fib_diagram();
    auto side = positive_part(fib);
    EdgeOrders ord;
    auto p = min_path(side, ord, 2, 0);
    auto orb = orbit(side, ord, p, 0, 2);
    CHECK(orb.states.size() == 1);
    CHECK(orb.itinerary == std::vector<int>{p.prefix.start});
}

TEST_CASE("periodic component scan") {
    SUBCASE("chacon has exactly one component at every depth") {
        auto ch = chacon_diagram();
        auto side = positive_part(ch);
        for (int depth = 1; depth <= 20; ++depth) {
            auto comps = periodic_component_scan(side, depth);
            REQUIRE(comps.size() == 1);
            CHECK(comps[0].period == 1);
            CHECK(comps[0].start_level == 0);
            CHECK(comps[0].top_vertex == 1);
        }
    }
    SUBCASE("fibonacci has none at any depth") {
        auto fib = fib_diagram();
        auto side = positive_part(fib);
        for (int depth = 1; depth <= 16; ++depth) CHECK(periodic_component_scan(side, depth).empty());
    }
    SUBCASE("identity tails head a component at every truncation vertex") {
        auto fib = fib_diagram();
        std::vector<IntMatrix> window;
        for (int k = 1; k <= 3; ++k) window.push_back(fib.matrix_at(k));
        MatrixSource pos = MatrixSource::explicit_window(std::move(window), TailPolicy::Identity);
        BiInfiniteDiagram trunc(std::move(pos), MatrixSource::stationary({IntMatrix::identity(2)}), 2);
        auto side = positive_part(trunc);
        auto comps = periodic_component_scan(side, 8);
        REQUIRE(comps.size() == 2);
        for (const auto& c : comps) {
            // Chains may dip below the truncation level where the matrices
            // already force a single incoming edge.
            CHECK(c.start_level <= 3);
            auto cs = path_count_vector(side, c.start_level);
            CHECK(c.period == cs[static_cast<size_t>(c.vertex_by_level.front())]);
        }
    }
    SUBCASE("one-off single-incoming rows do not flag") {
        auto ex = block_diagonal_chains(8);
        auto side = positive_part(ex.bundle.diagram);
        CHECK(periodic_component_scan(side, 8).empty());
    }
}

TEST_CASE("minimality certificate") {
    auto fib = fib_diagram();
    auto mc = minimality_certificate(positive_part(fib), 8);
    REQUIRE(mc.verdict == MinimalityCertificate::Verdict::Minimal);
    CHECK(mc.block_from == 0);
    CHECK(mc.block_to == 2);
    CHECK(*mc.block == IntMatrix(2, 2, {2, 1, 1, 1}));

    auto ch = chacon_diagram();
    auto mcc = minimality_certificate(positive_part(ch), 8);
    REQUIRE(mcc.verdict == MinimalityCertificate::Verdict::NotMinimal);
    CHECK(mcc.components.size() == 1);

    auto svo = single_vertex_often(12);
    auto mcs = minimality_certificate(positive_part(svo.bundle.diagram), 12);
    CHECK(mcs.verdict == MinimalityCertificate::Verdict::Minimal);

    auto bd = block_diagonal_chains(12);
    auto mcb = minimality_certificate(positive_part(bd.bundle.diagram), 12);
    CHECK(mcb.verdict == MinimalityCertificate::Verdict::Inconclusive);
}

TEST_CASE("component reports combine scan, minimality, and transitivity") {
    auto ch = tc::chacon_diagram();
    auto rep = component_report(positive_part(ch), 12);
    CHECK(rep.periodic_components.size() == 1);
    CHECK(rep.minimality.verdict == MinimalityCertificate::Verdict::NotMinimal);
    REQUIRE(rep.transitivity.has_value());  // transitive and not minimal
    CHECK(rep.transitivity->level == 1);
    CHECK(rep.transitivity->vertex == 0);

    auto fib = tc::fib_diagram();
    auto repf = component_report(positive_part(fib), 12);
    CHECK(repf.periodic_components.empty());
    CHECK(repf.minimality.verdict == MinimalityCertificate::Verdict::Minimal);
    CHECK(repf.transitivity.has_value());

    auto bd = block_diagonal_chains(12);
    auto repb = component_report(positive_part(bd.bundle.diagram), 12);
    CHECK_FALSE(repb.transitivity.has_value());  // two decoupled chains
}

TEST_CASE("meet depth works across the weld") {
    auto fib = tc::fib_diagram();
    CHECK(meet_depth(fib, -2, 0, 1, 8).value == 1);
    CHECK(meet_depth_max(fib, -3, 8).value == 1);
}

TEST_CASE("meet depth basics") {
    auto fib = fib_diagram();
    CHECK(meet_depth(fib, 0, 0, 0, 8).value == 0);
    CHECK(meet_depth(fib, 0, 0, 1, 8).value == 1);
    CHECK(meet_depth_max(fib, 0, 8).value == 1);

    auto ch = chacon_diagram();
    CHECK(meet_depth(ch, 0, 0, 1, 8).value == 1);

    auto od = odometer(2, 8);
    CHECK(meet_depth_max(od.bundle.diagram, 3, 8).value == 0);

    auto bd = block_diagonal_chains(8);
    auto r = meet_depth(bd.bundle.diagram, 0, 0, 2, 16);
    CHECK(r.kind == MeetResult::Kind::Infinite);
    CHECK(meet_depth_max(bd.bundle.diagram, 0, 16).kind == MeetResult::Kind::Infinite);
    CHECK(meet_depth(bd.bundle.diagram, 0, 0, 1, 16).value == 1);
}

TEST_CASE("meet depth agrees with brute-force path-pair enumeration") {
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        RandomDiagramOptions opts;
        opts.max_vertices = 3;
        opts.depth = 6;
        auto d = random_diagram(seed, opts);
        int n = d.vertex_count(0);
        for (int v = 0; v < n; ++v)
            for (int w = v; w < n; ++w) {
                auto fast = meet_depth(d, 0, v, w, 6);
                int slow = brute_meet(d, 0, v, w, 6);
                if (slow < 0) CHECK(fast.kind != MeetResult::Kind::Value);
                else {
                    REQUIRE(fast.kind == MeetResult::Kind::Value);
                    CHECK(fast.value == slow);
                }
            }
    }
}

TEST_CASE("meet depth commutes with shifting") {
    MatrixSource mpn = MatrixSource::programmatic("mpn-family", {{"p", "3"}, {"nRule", "1"}});
    BiInfiniteDiagram d(std::move(mpn), MatrixSource::stationary({IntMatrix::identity(2)}), 2);
    for (long k = 0; k <= 6; ++k) {
        auto direct = meet_depth_max(d, k, 12);
        auto shifted = meet_depth_max(d.shifted(k), 0, 12);
        REQUIRE(direct.kind == MeetResult::Kind::Value);
        CHECK(direct.value == shifted.value);
    }
}
