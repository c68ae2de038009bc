#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "test_common.hpp"

using namespace brattelikit;
using tc::chacon_diagram;

TEST_CASE("fibonacci renormalization times are k log phi") {
    auto ex = fibonacci(32);
    auto sched = renorm_times(ex.bundle.diagram, ex.bundle.w_plus, 30);
    double logphi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
    for (int k = 1; k <= 30; ++k)
        CHECK(tc::approx_eq(sched.t[static_cast<size_t>(k - 1)], k * logphi, 1e-12));
    CHECK_FALSE(sched.bounded_flag);
}

TEST_CASE("scalar diagram times are k log p") {
    auto ex = odometer(2, 20);
    auto sched = renorm_times(ex.bundle.diagram, ex.bundle.w_plus, 16);
    for (int k = 1; k <= 16; ++k)
        CHECK(tc::approx_eq(sched.t[static_cast<size_t>(k - 1)], k * std::log(2.0), 1e-12));
}

TEST_CASE("the atomic weight freezes the renormalization clock") {
    auto ch = chacon_diagram();
    std::vector<std::vector<Rational>> levels(17, {Rational(0), Rational(1)});
    auto atomic = WeightFunction::exact(std::move(levels));
    auto sched = renorm_times(ch, atomic, 16);
    for (double t : sched.t) CHECK(t == 0.0);
    CHECK(sched.bounded_flag);
}

TEST_CASE("rescaled widths are a probability and pair to unit area") {
    auto check_bundle = [](const WeightedBundle& b, int depth, double tol) {
        auto sched = renorm_times_with_heights(b.diagram, b.w_plus, b.w_minus, depth);
        for (int k = 1; k <= depth; ++k) {
            double wsum = 0, area = 0;
            const auto& w = sched.rescaled_widths_d[static_cast<size_t>(k - 1)];
            const auto& h = sched.rescaled_heights_d[static_cast<size_t>(k - 1)];
            for (size_t v = 0; v < w.size(); ++v) {
                wsum += w[v];
                area += w[v] * h[v];
            }
            CHECK(tc::approx_eq(wsum, 1.0, tol));
            CHECK(tc::approx_eq(area, 1.0, tol));
        }
    };
    auto fib = fibonacci(20);
    check_bundle(fib.bundle, 16, 1e-12);
    auto ch = chacon(20);
    check_bundle(ch.bundle, 16, 1e-12);
    auto rnd = random_bundle(5);
    check_bundle(rnd, 8, 1e-12);

    // In exact mode the identities are literal.
    auto sched = renorm_times_with_heights(ch.bundle.diagram, ch.bundle.w_plus, ch.bundle.w_minus, 12);
    for (int k = 1; k <= 12; ++k) {
        Rational wsum(0), area(0);
        const auto& w = sched.rescaled_widths_q[static_cast<size_t>(k - 1)];
        const auto& h = sched.rescaled_heights_q[static_cast<size_t>(k - 1)];
        for (size_t v = 0; v < w.size(); ++v) {
            wsum += w[v];
            area += w[v] * h[v];
        }
        CHECK(wsum == 1);
        CHECK(area == 1);
    }
}

TEST_CASE("shifting a stationary bundle reproduces its weights") {
    auto fib = fibonacci(24);
    auto shifted = shift_weighted(fib.bundle, 5);
    for (int k = 0; k <= 4; ++k) {
        auto a = shifted.w_plus.level_d(k);
        auto b = fib.bundle.w_plus.level_d(k);
        for (size_t v = 0; v < a.size(); ++v) CHECK(tc::approx_eq(a[v], b[v], 1e-12));
    }
    auto hm = shifted.w_minus.level_d(0);
    auto h0 = fib.bundle.w_minus.level_d(0);
    for (size_t v = 0; v < hm.size(); ++v) CHECK(tc::approx_eq(hm[v], h0[v], 1e-12));
}

TEST_CASE("shifting twice composes") {
    auto ch = chacon(24);
    auto once_twice = shift_weighted(shift_weighted(ch.bundle, 1), 1);
    auto direct = shift_weighted(ch.bundle, 2);
    for (int k = 0; k <= 8; ++k) {
        CHECK(once_twice.w_plus.level_q(k) == direct.w_plus.level_q(k));
        CHECK(once_twice.w_minus.level_q(k) == direct.w_minus.level_q(k));
    }

    // Cocycle additivity of the times.
    auto s0 = renorm_times(ch.bundle.diagram, ch.bundle.w_plus, 2);
    auto mid = shift_weighted(ch.bundle, 1);
    auto s1 = renorm_times(mid.diagram, mid.w_plus, 1);
    CHECK(tc::approx_eq(s0.t[1], s0.t[0] + s1.t[0], 1e-12));
}

TEST_CASE("shift by zero is the identity") {
    auto ch = chacon(10);
    auto s = shift_weighted(ch.bundle, 0);
    CHECK(s.w_plus.level_q(3) == ch.bundle.w_plus.level_q(3));
}

TEST_CASE("shifted bundles stay probWeight-normalized") {
    for (uint64_t seed : {2u, 9u}) {
        auto b = random_bundle(seed);
        for (int n = 1; n <= 3; ++n) {
            auto s = shift_weighted(b, n);
            Rational sum(0), pairing(0);
            const auto& w0 = s.w_plus.level_q(0);
            const auto& h0 = s.w_minus.level_q(0);
            for (size_t v = 0; v < w0.size(); ++v) {
                sum += w0[v];
                pairing += w0[v] * h0[v];
            }
            CHECK(sum == 1);
            CHECK(pairing == 1);
        }
    }
}

TEST_CASE("heights follow the matrix recursion") {
    auto ch = chacon(12);
    auto h = heights(ch.bundle.diagram, ch.bundle.w_minus, 6);
    auto h0 = h.level_q(0);
    CHECK(h0 == ch.bundle.w_minus.level_q(0));
    for (int k = 1; k <= 6; ++k)
        CHECK(h.level_q(k) == ch.bundle.diagram.matrix_at(k).apply<Rational>(h.level_q(k - 1)));
    // Chacon heights triple in the first entry: 3^6 h0 + (3^6-1)/2 h1.
    CHECK(h.level_q(6)[0] == h0[0] * 729 + Rational(364) * h0[1]);
}
