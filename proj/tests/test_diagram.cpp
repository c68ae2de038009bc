#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_common.hpp"

using namespace brattelikit;
using tc::chacon_diagram;
using tc::fib_diagram;
using tc::fib_matrix;

TEST_CASE("fibonacci validates with two vertices per level") {
    auto rep = validate(fib_diagram(), 10);
    CHECK(rep.valid);
    for (int c : rep.vertex_counts) CHECK(c == 2);
}

TEST_CASE("dimension chain violations are reported, not thrown") {
    // 2x2 followed by 3x3: the second level expects 2 source vertices.
    MatrixSource pos = MatrixSource::explicit_window(
        {IntMatrix(2, 2, {1, 1, 1, 1}), IntMatrix(3, 3, 1LL)}, TailPolicy::Identity);
    BiInfiniteDiagram d(std::move(pos), MatrixSource::stationary({IntMatrix::identity(2)}), 2);
    auto rep = validate(d, 4);
    CHECK_FALSE(rep.valid);
    bool found = false;
    for (const auto& i : rep.issues)
        if (i.kind == "dimension-mismatch" && i.level == 2) found = true;
    CHECK(found);
}

TEST_CASE("zero rows and zero columns are flagged") {
    MatrixSource pos = MatrixSource::explicit_window({IntMatrix(2, 2, {1, 0, 0, 0})}, TailPolicy::Identity);
    BiInfiniteDiagram d(std::move(pos), MatrixSource::stationary({IntMatrix::identity(2)}), 2);
    auto rep = validate(d, 2);
    CHECK_FALSE(rep.valid);
    bool zero_row = false, zero_col = false;
    for (const auto& i : rep.issues) {
        if (i.kind == "zero-row" && i.level == 1) zero_row = true;
        if (i.kind == "zero-column" && i.level == 1) zero_col = true;
    }
    CHECK(zero_row);
    CHECK(zero_col);
}

TEST_CASE("matrix_at returns the stationary and family matrices") {
    CHECK(fib_diagram().matrix_at(5) == fib_matrix());
    CHECK(chacon_diagram().matrix_at(3) == mpn_matrix(3, 1));

    MatrixSource mpn = MatrixSource::programmatic("mpn-family", {{"p", "3"}, {"nRule", "p^((i+1)^2-1)"}});
    BiInfiniteDiagram d(std::move(mpn), MatrixSource::stationary({IntMatrix::identity(2)}), 2);
    CHECK(d.matrix_at(3) == mpn_matrix(3, 27));   // special level (1+1)^2-1
    CHECK(d.matrix_at(4) == mpn_matrix(3, 1));
    CHECK(d.matrix_at(8) == mpn_matrix(3, 6561));  // special level (2+1)^2-1
}

TEST_CASE("matrix_at is pure") {
    auto d = chacon_diagram();
    for (int k = -6; k <= 6; ++k) {
        if (k == 0) continue;
        CHECK(d.matrix_at(k) == d.matrix_at(k));
    }
}

TEST_CASE("shift of a stationary diagram is the identity on matrix sequences") {
    auto d = fib_diagram();
    auto s = d.shifted(7);
    for (int k = -8; k <= 8; ++k) {
        if (k == 0) continue;
        CHECK(s.matrix_at(k) == d.matrix_at(k));
    }
}

TEST_CASE("shift moves the level-1 matrix to the negative side") {
    IntMatrix a(2, 2, {1, 1, 1, 0}), b(2, 2, {2, 1, 1, 1}), c(2, 2, {1, 2, 1, 1});
    MatrixSource pos = MatrixSource::explicit_window({a, b, c}, TailPolicy::Identity);
    BiInfiniteDiagram d(std::move(pos), MatrixSource::stationary({IntMatrix::identity(2)}), 2);
    auto s = d.shifted(1);
    CHECK(s.matrix_at(1) == b);
    CHECK(s.matrix_at(2) == c);
    CHECK(s.matrix_at(3) == IntMatrix::identity(2));
    CHECK(s.matrix_at(-1) == a);
    CHECK(s.matrix_at(-2) == IntMatrix::identity(2));
    CHECK(s.vertex_count(0) == 2);
}

TEST_CASE("shifts compose additively") {
    MatrixSource mpn = MatrixSource::programmatic("mpn-family", {{"p", "3"}, {"nRule", "1"}});
    BiInfiniteDiagram d(std::move(mpn), MatrixSource::stationary({IntMatrix::identity(2)}), 2);
    auto s1 = d.shifted(2).shifted(3);
    auto s2 = d.shifted(5);
    for (int k = -7; k <= 7; ++k) {
        if (k == 0) continue;
        CHECK(s1.matrix_at(k) == s2.matrix_at(k));
    }
}

TEST_CASE("the divergent family matches the stationary window along i(i+1)") {
    MatrixSource mpn = MatrixSource::programmatic("mpn-family", {{"p", "3"}, {"nRule", "p^((i+1)^2-1)"}});
    BiInfiniteDiagram d(std::move(mpn), MatrixSource::stationary({IntMatrix::identity(2)}), 2);
    for (long i : {4L, 5L, 6L}) {
        auto s = d.shifted(i * (i + 1));
        for (long k = 1; k <= i - 1; ++k) {
            CHECK(s.matrix_at(k) == mpn_matrix(3, 1));
            CHECK(s.matrix_at(-k) == mpn_matrix(3, 1));
        }
    }
}

TEST_CASE("telescoping blocks multiply") {
    SUBCASE("single-level block is the identity operation") {
        auto t = telescope(fib_diagram(), {1, 2});
        CHECK(t.matrix_at(2) == fib_matrix());
    }
    SUBCASE("fibonacci every 2 becomes stationary [[2,1],[1,1]]") {
        auto t = telescope(fib_diagram(), {2, 4, 6});
        CHECK(t.positive_source().kind() == MatrixSource::Kind::Stationary);
        CHECK(t.matrix_at(1) == IntMatrix(2, 2, {2, 1, 1, 1}));
        CHECK(t.matrix_at(5) == IntMatrix(2, 2, {2, 1, 1, 1}));
    }
    SUBCASE("chacon every 2 becomes stationary [[9,4],[0,1]]") {
        auto t = telescope(chacon_diagram(), {2, 4});
        CHECK(t.matrix_at(1) == IntMatrix(2, 2, {9, 4, 0, 1}));
    }
    SUBCASE("non-uniform cuts stay lazy and correct") {
        auto t = telescope(chacon_diagram(), {1, 3});
        CHECK(t.matrix_at(1) == mpn_matrix(3, 1));
        CHECK(t.matrix_at(2) == IntMatrix(2, 2, {9, 4, 0, 1}));
        CHECK(t.matrix_at(3) == mpn_matrix(3, 1));  // beyond the last cut, unblocked
    }
}

TEST_CASE("path counts follow the matrix recursion") {
    auto fibd = fib_diagram();
    auto c1 = path_count_vector(positive_part(fibd), 1);
    CHECK(c1 == std::vector<long long>{2, 1});

    auto chd = chacon_diagram();
    for (int k = 1; k <= 20; ++k) {
        auto c = path_count_vector(positive_part(chd), k);
        CHECK(c[1] == 1);  // the rightmost vertex keeps a single incoming path
    }

    // All-ones level: every entry equals the previous total.
    MatrixSource pos = MatrixSource::explicit_window({IntMatrix(3, 2, 1LL)}, TailPolicy::Identity);
    BiInfiniteDiagram d(std::move(pos), MatrixSource::stationary({IntMatrix::identity(2)}), 2);
    auto c = path_count_vector(positive_part(d), 1);
    CHECK(c == std::vector<long long>{2, 2, 2});
}

TEST_CASE("telescoping commutes with path counting") {
    auto d = fib_diagram();
    auto t = telescope(d, {2, 4, 6});
    auto lhs = path_count_vector(positive_part(t), 3);
    auto rhs = path_count_vector(positive_part(d), 6);
    CHECK(lhs == rhs);
}

TEST_CASE("tail policies control life past the window") {
    IntMatrix a(2, 2, {1, 1, 1, 0});
    auto fail_src = MatrixSource::explicit_window({a}, TailPolicy::Fail);
    BiInfiniteDiagram d(fail_src, MatrixSource::stationary({IntMatrix::identity(2)}), 2);
    CHECK(d.matrix_at(1) == a);
    CHECK_THROWS_AS(d.matrix_at(2), TailPolicyError);
    CHECK_THROWS_AS(d.shifted(1).matrix_at(1), TailPolicyError);
    // Fetch failures surface as validation issues, not exceptions.
    auto rep = validate(d, 4);
    CHECK_FALSE(rep.valid);

    auto repeat_src = MatrixSource::explicit_window({a}, TailPolicy::Repeat);
    BiInfiniteDiagram dr(repeat_src, MatrixSource::stationary({IntMatrix::identity(2)}), 2);
    CHECK(dr.matrix_at(5) == a);
}

TEST_CASE("weld mismatches are reported") {
    MatrixSource pos = MatrixSource::stationary({IntMatrix::identity(2)});
    MatrixSource neg = MatrixSource::stationary({IntMatrix::identity(3)});
    BiInfiniteDiagram d(std::move(pos), std::move(neg), 2);
    auto rep = validate(d, 2);
    CHECK_FALSE(rep.valid);
    bool found = false;
    for (const auto& i : rep.issues)
        if (i.kind == "weld-mismatch") found = true;
    CHECK(found);
}

TEST_CASE("the divergent family overflows int64 entries at level 48") {
    MatrixSource mpn = MatrixSource::programmatic("mpn-family", {{"p", "3"}, {"nRule", "p^((i+1)^2-1)"}});
    BiInfiniteDiagram d(std::move(mpn), MatrixSource::stationary({IntMatrix::identity(2)}), 2);
    CHECK(d.matrix_at(47) == mpn_matrix(3, 1));
    CHECK_THROWS_AS(d.matrix_at(48), OverflowError);
}

TEST_CASE("random diagrams validate") {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        auto d = random_diagram(seed);
        auto rep = validate(d, 6);
        CHECK(rep.valid);
    }
}

TEST_CASE("negative side of the welded diagram reads transposed") {
    // Stored negative matrices feed the one-sided view transposed, so the
    // view recursion matches an ordinary diagram.
    auto d = chacon_diagram();
    auto neg = negative_part(d);
    CHECK(neg.matrix_at(1) == IntMatrix::identity(2));
    CHECK(neg.vertex_count(0) == 2);

    IntMatrix g(2, 3, {1, 0, 1, 0, 1, 1});
    MatrixSource negsrc = MatrixSource::explicit_window({g}, TailPolicy::Identity, true);
    BiInfiniteDiagram d2(MatrixSource::stationary({IntMatrix::identity(2)}), std::move(negsrc), 2);
    CHECK(d2.matrix_at(-1) == g);
    CHECK(negative_part(d2).matrix_at(1) == g.transpose());
    CHECK(d2.vertex_count(-1) == 3);
    CHECK(d2.matrix_at(-2) == IntMatrix::identity(3));
}
