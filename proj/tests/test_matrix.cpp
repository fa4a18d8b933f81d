#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "vacua/matrix.hpp"

using namespace vacua;

TEST_CASE("rational parse and format round-trip") {
    CHECK(rat_str(rat(3, 6)) == "1/2");
    CHECK(rat_str(rat(-4, 2)) == "-2");
    CHECK(rat_str(Rat(0)) == "0");
    CHECK(*rat_parse("7/3") == rat(7, 3));
    CHECK(*rat_parse("-5") == rat(-5));
    CHECK(!rat_parse("").has_value());
    CHECK(rat_pow(rat(2, 3), 3) == rat(8, 27));
    CHECK(rat_pow(rat(2), -2) == rat(1, 4));
}

TEST_CASE("rref, rank and kernel on a singular matrix") {
    Matrix m(3, 4);
    // rows: (1 2 3 4), (2 4 6 8), (0 1 0 1)
    long rows[3][4] = {{1, 2, 3, 4}, {2, 4, 6, 8}, {0, 1, 0, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) m.at(i, j) = rows[i][j];
    CHECK(rank(m) == 2);
    auto ker = kernel_basis(m);
    REQUIRE(ker.size() == 2);
    for (const auto& v : ker) {
        for (int i = 0; i < 3; ++i) {
            Rat s(0);
            for (int j = 0; j < 4; ++j) s += m.at(i, j) * v[j];
            CHECK(is_zero(s));
        }
    }
}

TEST_CASE("inverse of random integer matrices") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 2 + int(rng() % 4);
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.at(i, j) = long(rng() % 11) - 5;
        auto inv = inverse(m);
        if (!inv) continue;
        CHECK(m * *inv == Matrix::identity(n));
        CHECK(*inv * m == Matrix::identity(n));
    }
}

TEST_CASE("solve returns a consistent solution or detects inconsistency") {
    Matrix m(2, 3);
    m.at(0, 0) = 1;
    m.at(0, 1) = 1;
    m.at(1, 0) = 2;
    m.at(1, 1) = 2;
    Vec b = {Rat(1), Rat(2)};
    auto x = solve(m, b);
    REQUIRE(x.has_value());
    CHECK(m * *x == b);

    Vec bad = {Rat(1), Rat(3)};
    CHECK(!solve(m, bad).has_value());
}

TEST_CASE("streaming row echelon matches dense kernel") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 6; ++trial) {
        int rows = 5 + int(rng() % 6), cols = 4 + int(rng() % 5);
        Matrix m(rows, cols);
        RowEchelon re(cols);
        for (int i = 0; i < rows; ++i) {
            SparseVec s;
            for (int j = 0; j < cols; ++j) {
                long v = long(rng() % 7) - 3;
                m.at(i, j) = v;
                if (v != 0) s.add(j, Rat(v));
            }
            re.add_row(std::move(s));
        }
        CHECK(re.rank() == rank(m));
        auto k1 = re.kernel();
        auto k2 = kernel_basis(m);
        REQUIRE(k1.size() == k2.size());
        // both bases are reduced against the same pivot structure
        for (size_t i = 0; i < k1.size(); ++i) {
            Vec prod(rows, Rat(0));
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c) prod[r] += m.at(r, c) * k1[i][c];
            CHECK(vec_is_zero(prod));
        }
    }
}

TEST_CASE("sparse vector accumulation keeps sorted nonzero invariant") {
    SparseVec s;
    s.add(3, Rat(2));
    s.add(1, Rat(5));
    s.add(3, Rat(-2));
    REQUIRE(s.nz.size() == 1);
    CHECK(s.nz[0].first == 1);
    CHECK(s.nz[0].second == Rat(5));
}
