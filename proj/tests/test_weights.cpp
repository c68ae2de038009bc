#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "test_common.hpp"

using namespace brattelikit;
using tc::chacon_diagram;
using tc::fib_diagram;

TEST_CASE("fibonacci PF weights") {
    auto fib = fib_diagram();
    auto side = positive_part(fib);
    auto w = pf_weights(side, 60, NumericMode::Float);
    auto w0 = w.level_d(0);
    CHECK(tc::approx_eq(w0[0], (std::sqrt(5.0) - 1.0) / 2.0, 1e-12));
    CHECK(tc::approx_eq(w0[1], (3.0 - std::sqrt(5.0)) / 2.0, 1e-12));

    auto pf = pf_eigendata(side);
    CHECK(tc::approx_eq(pf.lambda, (1.0 + std::sqrt(5.0)) / 2.0, 1e-12));
    CHECK_FALSE(pf.lambda_q.has_value());  // irrational root

    auto rep = validate_weight(side, w, 60, 1e-12);
    CHECK(rep.recursion_ok);
    CHECK(rep.edge_sums_ok);
    CHECK(rep.cond3 == WeightValidationReport::CondIII::Pass);
    CHECK(rep.positive);
    CHECK(rep.probability);

    // Edge weights out of the first vertex: ratios of consecutive levels.
    auto w1 = w.level_d(1);
    CHECK(tc::approx_eq(w1[0] / w0[0], (std::sqrt(5.0) - 1.0) / 2.0, 1e-12));
    CHECK(tc::approx_eq(w1[1] / w0[0], (3.0 - std::sqrt(5.0)) / 2.0, 1e-12));
}

TEST_CASE("chacon PF weights are exact rationals") {
    auto ch = chacon_diagram();
    auto side = positive_part(ch);
    auto w = pf_weights(side, 20, NumericMode::Exact);
    REQUIRE(w.is_exact());
    CHECK(w.level_q(0)[0] == Rational(2, 3));
    CHECK(w.level_q(0)[1] == Rational(1, 3));
    CHECK(w.level_q(1)[0] == Rational(2, 9));
    CHECK(w.level_q(1)[1] == Rational(1, 9));

    auto pf = pf_eigendata(side);
    REQUIRE(pf.lambda_q.has_value());
    CHECK(*pf.lambda_q == 3);
    REQUIRE(pf.second_ray_q.has_value());
    CHECK((*pf.second_ray_q)[0] == 0);
    CHECK((*pf.second_ray_q)[1] == 1);

    auto rep = validate_weight(side, w, 20, 1e-12);
    CHECK(rep.recursion_ok);
    CHECK(rep.max_recursion_residual == 0);
}

TEST_CASE("scalar blocks") {
    IntMatrix two(1, 1, {2});
    BiInfiniteDiagram d(MatrixSource::stationary({two}), MatrixSource::stationary({two}), 1);
    auto pf = pf_eigendata(positive_part(d));
    CHECK(*pf.lambda_q == 2);
    auto w = pf_weights(positive_part(d), 4, NumericMode::Exact);
    CHECK(w.level_q(0)[0] == 1);
    CHECK(w.level_q(2)[0] == Rational(1, 4));
}

TEST_CASE("the atomic chacon weight carries its mass on the periodic chain") {
    auto ch = chacon_diagram();
    auto side = positive_part(ch);
    std::vector<std::vector<Rational>> levels(21, {Rational(0), Rational(1)});
    auto w = WeightFunction::exact(std::move(levels));
    auto rep = validate_weight(side, w, 20, 1e-12);
    CHECK(rep.recursion_ok);
    CHECK(rep.edge_sums_ok);
    CHECK(rep.nonperiodic_max_final == 0);
    REQUIRE(rep.periodic_carriers.size() == 1);
    CHECK(rep.periodic_carriers[0] == 1);
    CHECK(rep.cond3 == WeightValidationReport::CondIII::Pass);

    // The atomic ray is fixed by the transposed matrix, exactly.
    auto fixed = tc::chacon_matrix().apply_transposed<Rational>({Rational(0), Rational(1)});
    CHECK(fixed == std::vector<Rational>{Rational(0), Rational(1)});
}

TEST_CASE("invariance violations are reported") {
    auto fib = fib_diagram();
    auto side = positive_part(fib);
    std::vector<std::vector<double>> levels(3, {0.5, 0.5});
    auto w = WeightFunction::floating(std::move(levels));
    auto rep = validate_weight(side, w, 2, 1e-9);
    CHECK_FALSE(rep.recursion_ok);
    CHECK(rep.max_recursion_residual > 0.1);
}

TEST_CASE("cone contraction for fibonacci") {
    auto fib = fib_diagram();
    auto cone = invariant_cone(positive_part(fib), 60);
    CHECK(cone.hilbert_diameter < 1e-10);
    CHECK(std::isinf(cone.diameter_history[0]));  // disjoint basis supports
    for (size_t i = 1; i < cone.diameter_history.size(); ++i)
        CHECK(cone.diameter_history[i] <= cone.diameter_history[i - 1] + 1e-12);
}

TEST_CASE("block-diagonal cones keep two rays") {
    auto bd = block_diagonal_chains(60);
    auto cone = invariant_cone(positive_part(bd.bundle.diagram), 60);
    for (size_t i = 0; i < cone.diameter_history.size(); ++i) CHECK(cone.diameter_history[i] > 0.1);
}

TEST_CASE("zero rows degenerate the cone") {
    MatrixSource pos = MatrixSource::explicit_window({IntMatrix(2, 2, {1, 1, 0, 0})}, TailPolicy::Identity);
    BiInfiniteDiagram d(std::move(pos), MatrixSource::stationary({IntMatrix::identity(2)}), 2);
    CHECK_THROWS_AS(invariant_cone(positive_part(d), 2), DegenerateConeError);
}

TEST_CASE("unique weight reports") {
    SUBCASE("fibonacci: unique non-atomic") {
        auto fib = fib_diagram();
        auto rep = unique_weight_report(positive_part(fib), 60, 1e-10);
        CHECK(rep.verdict == UniqueWeightReport::Verdict::UniqueNonAtomic);
        CHECK(rep.periodic_components.empty());
        CHECK(tc::approx_eq(rep.limit_ray[0], 0.6180339887498949, 1e-10));
    }
    SUBCASE("chacon: atomic and non-atomic rays, exactly") {
        auto ch = chacon_diagram();
        auto rep = unique_weight_report(positive_part(ch), 20, 1e-10);
        CHECK(rep.verdict == UniqueWeightReport::Verdict::MultipleOrAtomic);
        REQUIRE(rep.non_atomic_ray.has_value());
        CHECK((*rep.non_atomic_ray)[0] == Rational(2, 3));
        CHECK((*rep.non_atomic_ray)[1] == Rational(1, 3));
        REQUIRE(rep.atomic_ray.has_value());
        CHECK((*rep.atomic_ray)[0] == 0);
        CHECK((*rep.atomic_ray)[1] == 1);
        REQUIRE(rep.periodic_components.size() == 1);
    }
    SUBCASE("block diagonal: stabilized multi-ray cone") {
        auto bd = block_diagonal_chains(40);
        auto rep = unique_weight_report(positive_part(bd.bundle.diagram), 40, 1e-10);
        CHECK(rep.verdict == UniqueWeightReport::Verdict::MultipleOrAtomic);
        CHECK(rep.cone_stabilized);
    }
    SUBCASE("divergent family: periodic carrier") {
        auto mpn = mpn_family(3, "p^((i+1)^2-1)", 20);
        auto rep = unique_weight_report(positive_part(mpn.bundle.diagram), 20, 1e-10);
        CHECK(rep.verdict == UniqueWeightReport::Verdict::MultipleOrAtomic);
    }
}

TEST_CASE("anchored weight series of the M(p,n) family") {
    SUBCASE("constant rule is a geometric sum") {
        auto rep = mpn_weight_series(3, "1", 20);
        CHECK_FALSE(rep.unbounded_trend);
        // S_20 = (3 - 3^-20)/2 exactly.
        Rational expect = (Rational(3) - Rational(1) / Rational(BigInt("3486784401"))) / 2;
        CHECK(rep.partial_sums.back() == expect);
        CHECK(rep.partial_sums.back() < Rational(3, 2));
        // Consistent with PF data after anchoring w(v1) = 1: (2/3 + 1/3)/(2/3) = 3/2.
        CHECK(tc::approx_eq(rep.partial_sums.back().get_d(), 1.5, 1e-9));
    }
    SUBCASE("divergent rule flags by depth 8") {
        auto rep = mpn_weight_series(3, "p^((i+1)^2-1)", 8);
        CHECK(rep.unbounded_trend);
        REQUIRE(rep.special_indices.size() == 2);
        CHECK(rep.special_indices[0] == 3);
        CHECK(rep.special_indices[1] == 8);
        CHECK(rep.special_jumps[0] == 1);
        CHECK(rep.special_jumps[1] == 1);
    }
    SUBCASE("deep series stay exact past int64") {
        auto rep = mpn_weight_series(3, "p^((i+1)^2-1)", 50);
        CHECK(rep.unbounded_trend);
        CHECK(rep.special_indices.back() == 48);
        CHECK(rep.special_jumps.back() == 1);
    }
}

TEST_CASE("bi-infinite normalization") {
    SUBCASE("fibonacci scale") {
        auto fib = fib_diagram();
        auto wp = pf_weights(positive_part(fib), 10, NumericMode::Float);
        auto wm = pf_weights(negative_part(fib), 10, NumericMode::Float);
        auto [a, b] = biinfinite_normalize(wp, wm);
        double phi = (1.0 + std::sqrt(5.0)) / 2.0;
        double scale = 1.0 / (std::pow(phi, -2) + std::pow(phi, -4));
        CHECK(tc::approx_eq(scale, 1.8944271909999159, 1e-12));
        CHECK(tc::approx_eq(b.level_d(0)[0], wm.level_d(0)[0] * scale, 1e-12));
        double pairing = 0;
        for (size_t v = 0; v < 2; ++v) pairing += a.level_d(0)[v] * b.level_d(0)[v];
        CHECK(tc::approx_eq(pairing, 1.0, 1e-12));
    }
    SUBCASE("scalar case") {
        auto wp = WeightFunction::exact({{Rational(1)}});
        auto wm = WeightFunction::exact({{Rational(5)}});
        auto [a, b] = biinfinite_normalize(wp, wm);
        CHECK(b.level_q(0)[0] == 1);
    }
    SUBCASE("disjoint supports cannot pair") {
        auto wp = WeightFunction::exact({{Rational(1), Rational(0)}});
        auto wm = WeightFunction::exact({{Rational(0), Rational(5)}});
        CHECK_THROWS_AS(biinfinite_normalize(wp, wm), ZeroPairingError);
    }
}

TEST_CASE("the constructive solver satisfies the recursion exactly") {
    for (uint64_t seed : {3u, 11u}) {
        auto b = random_bundle(seed);
        auto side = positive_part(b.diagram);
        auto rep = validate_weight(side, b.w_plus, b.w_plus.max_level(), 0);
        CHECK(rep.recursion_ok);
        CHECK(rep.max_recursion_residual == 0);
        CHECK(rep.probability);
        Rational pairing(0);
        for (size_t v = 0; v < b.w_plus.level_q(0).size(); ++v)
            pairing += b.w_plus.level_q(0)[v] * b.w_minus.level_q(0)[v];
        CHECK(pairing == 1);
    }
}
