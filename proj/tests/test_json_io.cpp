#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "brattelikit/certifier.hpp"
#include "brattelikit/json_io.hpp"
#include "test_common.hpp"

using namespace brattelikit;

TEST_CASE("diagram specs round-trip") {
    auto check_roundtrip = [](const BiInfiniteDiagram& d) {
        Json j = diagram_to_json(d);
        auto back = diagram_from_json(j);
        CHECK(back.weld_size() == d.weld_size());
        for (int k = -8; k <= 8; ++k) {
            if (k == 0) continue;
            CHECK(back.matrix_at(k) == d.matrix_at(k));
        }
    };
    auto fib = tc::fib_diagram();
    check_roundtrip(fib);
    check_roundtrip(fib.shifted(3));
    auto ch = tc::chacon_diagram();
    check_roundtrip(ch);
    auto mpn = mpn_family(3, "p^((i+1)^2-1)", 12);
    check_roundtrip(mpn.bundle.diagram);
    auto svo = single_vertex_often(12);
    check_roundtrip(svo.bundle.diagram);
    check_roundtrip(random_diagram(4));
}

TEST_CASE("the documented shorthand parses") {
    Json j = Json::parse(R"json({
        "weldSize": 2,
        "positive": {"kind": "programmatic", "ruleId": "mpn-family",
                     "params": {"p": 3, "nRule": "p^((i+1)^2-1)"}},
        "negative": {"kind": "stationary",
                     "period": [{"rows": 2, "cols": 2, "data": [1, 0, 0, 1]}]}
    })json");
    auto d = diagram_from_json(j);
    CHECK(d.matrix_at(3) == mpn_matrix(3, 27));
    CHECK(d.matrix_at(-1) == IntMatrix::identity(2));
}

TEST_CASE("weights round-trip in both modes") {
    auto ch = chacon(6);
    Json j = weights_to_json(ch.bundle.w_plus);
    CHECK(j["numericMode"] == "exact");
    CHECK(j["levels"][0]["weights"][0] == "2/3");
    auto back = weights_from_json(j);
    REQUIRE(back.is_exact());
    for (int k = 0; k <= 6; ++k) CHECK(back.level_q(k) == ch.bundle.w_plus.level_q(k));

    auto fib = fibonacci(6);
    Json jf = weights_to_json(fib.bundle.w_plus);
    auto backf = weights_from_json(jf);
    for (int k = 0; k <= 6; ++k) CHECK(backf.level_d(k) == fib.bundle.w_plus.level_d(k));
}

TEST_CASE("orders round-trip with policy shorthand and permutations") {
    EdgeOrders o(OrderPolicy::RightToLeft);
    o.set_incoming_perm(2, 1, {1, 0, 2, 3});
    o.set_outgoing_perm(0, 0, {2, 0, 1});
    Json j = orders_to_json(o);
    auto back = orders_from_json(j);
    CHECK(back.policy() == OrderPolicy::RightToLeft);
    CHECK(back.incoming_overrides() == o.incoming_overrides());
    CHECK(back.outgoing_overrides() == o.outgoing_overrides());

    auto dflt = orders_from_json(Json::parse(R"({"policy":"default-left-right"})"));
    CHECK(dflt.policy() == OrderPolicy::LeftToRight);
}

TEST_CASE("reports serialize") {
    auto fib = fibonacci(24);
    auto v = validate(fib.bundle.diagram, 6);
    CHECK(validation_to_json(v)["valid"] == true);

    auto sched = renorm_times_with_heights(fib.bundle.diagram, fib.bundle.w_plus, fib.bundle.w_minus, 4);
    Json js = schedule_to_json(sched);
    CHECK(js["times"].size() == 4);
    CHECK(js["times"][0].contains("rescaledHeights"));

    auto rep = unique_weight_report(positive_part(fib.bundle.diagram), 32, 1e-10);
    Json jr = unique_report_to_json(rep);
    CHECK(jr["verdict"] == "UniqueNonAtomic");

    auto series = mpn_weight_series(3, "1", 6);
    CHECK(mpn_series_to_json(series)["unboundedTrend"] == false);

    Certificate cert = certify(fib.bundle);
    Json jc = certificate_to_json(cert);
    CHECK(jc["verdict"] == "UNIQUELY_ERGODIC");
    CHECK(jc["oracleAgrees"] == true);
    CHECK(jc.contains("witness"));
    CHECK(jc.contains("quantities"));
    CHECK(jc["config"]["nTerms"] == 100);
}

TEST_CASE("orbit records carry the start symbol and prefix") {
    auto fib = tc::fib_diagram();
    auto side = positive_part(fib);
    EdgeOrders ord;
    TruncatedPath p{minimal_path_into(side, ord, 3, 0), TailTag::Free};
    Json j = orbit_record(0, p);
    CHECK(j["step"] == 0);
    CHECK(j["startVertexIndex"] == p.prefix.start);
    CHECK(j["prefixEdges"].size() == 3);
}

TEST_CASE("certificates are deterministic given the config") {
    auto fib = fibonacci(36);
    auto a = certificate_to_json(certify(fib.bundle)).dump();
    auto b = certificate_to_json(certify(fib.bundle)).dump();
    CHECK(a == b);
}
