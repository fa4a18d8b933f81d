#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vacua/sphere.hpp"

#include <map>
#include <stdexcept>
#include <vector>

using namespace vacua;

namespace {

Rat dot_row(const SparseVec& row, const Vec& psi) {
    Rat v(0);
    for (const auto& [col, val] : row.nz) v += val * psi[col];
    return v;
}

// Independent closed-form rule for admissible sl2 triples: the classical
// Clebsch-Gordan window cut down by the level, with parity.
long rule(long l, long a, long b, long c) {
    if ((a + b + c) % 2 != 0) return 0;
    if (c < std::abs(a - b)) return 0;
    if (c > std::min(a + b, 2 * l - a - b)) return 0;
    return 1;
}

}  // namespace

TEST_CASE("function basis and exact expansions") {
    std::vector<Rat> pts{Rat(0), Rat(1), rat(5, 2)};

    auto basis1 = function_basis({Rat(3)}, 1);
    CHECK(basis1.size() == 2);  // {1, (z-3)^{-1}}
    CHECK(basis1[0].pole == -1);
    CHECK(basis1[1].order == 1);

    auto basis = function_basis(pts, 2);
    CHECK(basis.size() == 1 + 3 * 2);

    PointedSphere S = make_sphere(pts, {Weight{0}, Weight{0}, Weight{0}});

    // The constant expands to the exact series 1 everywhere.
    for (int j = 0; j < 3; ++j) {
        FormalSeries one = expand_function(S, RationalFunction{-1, 0}, j, 6);
        CHECK(one.is_exact());
        CHECK(one.coeff(0) == Rat(1));
        CHECK(one.coeff_or_zero(1) == Rat(0));
    }

    // (z-1)^{-1} at 0 is -1/(1-z): every coefficient -1.
    FormalSeries g = expand_function(S, RationalFunction{1, 1}, 0, 5);
    for (int m = 0; m <= 5; ++m) CHECK(g.coeff(m) == Rat(-1));

    // Series-division oracle: the expansion times the expanded denominator is 1.
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            for (int k = 1; k <= 2; ++k) {
                FormalSeries e = expand_function(S, RationalFunction{i, k}, j, 8);
                FormalSeries lin =
                    FormalSeries::monomial(1) + FormalSeries(S.points[j] - S.points[i]);
                CHECK((e * lin.pow(k)).agrees_with(FormalSeries(Rat(1)), 6));
            }

    // At its own point the pole is an exact monomial.
    FormalSeries own = expand_function(S, RationalFunction{2, 2}, 2, 5);
    CHECK(own.is_exact());
    CHECK(own.coeff(-2) == Rat(1));

    CHECK_THROWS_AS(make_sphere({Rat(1), Rat(1)}, {Weight{0}, Weight{0}}), std::invalid_argument);
    CHECK_THROWS_AS(function_basis({Rat(1), Rat(1)}, 1), std::invalid_argument);
    CHECK_THROWS_AS(function_basis({Rat(0)}, 0), std::invalid_argument);
}

TEST_CASE("one-point gauge systems at degree zero") {
    LieAlgebra g = build_lie_data('A', 1);
    ModulePool pool(g, 1);

    // Vacuum label: every row vanishes on the trivial top, leaving <0|.
    GaugeSystem vac = gauge_matrix(pool, standard_sphere({Weight{0}}), 1, 0);
    CHECK(vac.window.dim == 1);
    RowEchelon e0(vac.window.dim);
    for (const auto& r : vac.rows) e0.add_row(r);
    CHECK(e0.nullity() == 1);

    // Nonzero label: the zero-mode rows act irreducibly, no invariant covector.
    GaugeSystem fund = gauge_matrix(pool, standard_sphere({Weight{1}}), 1, 0);
    CHECK(fund.window.dim == 2);
    RowEchelon e1(fund.window.dim);
    for (const auto& r : fund.rows) e1.add_row(r);
    CHECK(e1.nullity() == 0);
}

TEST_CASE("two-point spaces detect dual label pairs") {
    LieAlgebra g = build_lie_data('A', 1);
    for (long level : {1L, 2L}) {
        ModulePool pool(g, level);
        for (long a = 0; a <= level; ++a)
            for (long b = 0; b <= level; ++b) {
                PointedSphere S = standard_sphere({Weight{a}, Weight{b}});
                VacuaBasis V = vacua_basis(pool, S, 2, 2);
                // A-series rank 1 labels are self-dual: nonzero only on equal pairs.
                CHECK(V.dim() == (a == b ? 1 : 0));
                CHECK(V.dim_next == V.dim());
            }
    }
}

TEST_CASE("three-point dimensions match the closed fusion rule") {
    LieAlgebra g = build_lie_data('A', 1);
    for (long level : {1L, 2L, 3L}) {
        ModulePool pool(g, level);
        std::map<std::tuple<long, long, long>, int> table;
        for (long a = 0; a <= level; ++a)
            for (long b = 0; b <= level; ++b)
                for (long c = 0; c <= level; ++c) {
                    int n = fusion_dim(pool, Weight{a}, Weight{b}, Weight{c});
                    CHECK(n == rule(level, a, b, c));
                    table[{a, b, c}] = n;
                }
        // Permutation symmetry of the computed table.
        for (const auto& [key, n] : table) {
            auto [a, b, c] = key;
            CHECK(table.at({b, a, c}) == n);
            CHECK(table.at({a, c, b}) == n);
        }
    }

    // Pinned values: the parity obstruction and a level-2 admissible triple.
    ModulePool p1(g, 1);
    CHECK(fusion_dim(p1, Weight{1}, Weight{1}, Weight{0}) == 1);
    CHECK(fusion_dim(p1, Weight{1}, Weight{1}, Weight{1}) == 0);
    ModulePool p2(g, 2);
    CHECK(fusion_dim(p2, Weight{1}, Weight{1}, Weight{2}) == 1);
    CHECK(fusion_dim(p2, Weight{2}, Weight{2}, Weight{2}) == 0);  // cut by the level, not parity

    CHECK_THROWS_AS(fusion_dim(p1, Weight{2}, Weight{0}, Weight{0}), std::invalid_argument);
}

TEST_CASE("rank-two three-point spaces") {
    LieAlgebra g = build_lie_data('A', 2);
    ModulePool pool(g, 1);
    // 3 (x) 3bar contains the trivial module once; 3 (x) 3 contains only 3bar.
    CHECK(fusion_dim(pool, Weight{1, 0}, Weight{0, 1}, Weight{0, 0}) == 1);
    CHECK(fusion_dim(pool, Weight{1, 0}, Weight{1, 0}, Weight{1, 0}) == 1);
    CHECK(fusion_dim(pool, Weight{1, 0}, Weight{1, 0}, Weight{0, 0}) == 0);
    CHECK(fusion_dim(pool, Weight{1, 0}, Weight{0, 1}, Weight{1, 0}) == 0);
}

TEST_CASE("dimension is independent of the marked points") {
    LieAlgebra g = build_lie_data('A', 1);
    ModulePool pool(g, 2);
    std::vector<Weight> labels{Weight{1}, Weight{1}, Weight{2}};

    VacuaBasis base = vacua_basis(pool, standard_sphere(labels), 2, 2);
    CHECK(base.dim() == 1);

    // A translated-and-scaled configuration and a lopsided one.
    PointedSphere moved = make_sphere({Rat(5), rat(7, 2), Rat(-3)}, labels);
    CHECK(vacua_basis(pool, moved, 2, 2).dim() == 1);
    PointedSphere wide = make_sphere({rat(-1, 3), Rat(0), Rat(17)}, labels);
    CHECK(vacua_basis(pool, wide, 2, 2).dim() == 1);

    // Permuting the (point, label) pairs.
    VacuaBasis sw = vacua_basis(pool, standard_sphere({Weight{2}, Weight{1}, Weight{1}}), 2, 2);
    CHECK(sw.dim() == base.dim());
}

TEST_CASE("every element annihilates every generated gauge row") {
    LieAlgebra g = build_lie_data('A', 1);
    ModulePool pool(g, 1);
    PointedSphere S = standard_sphere({Weight{1}, Weight{1}, Weight{0}});
    VacuaBasis V = vacua_basis(pool, S, 2, 2);
    CHECK(V.dim() == 1);

    GaugeSystem sys = gauge_matrix(pool, S, V.K, V.D);
    CHECK(sys.window.dim == V.window.dim);
    for (const VacuaElement& psi : V.elements)
        for (const SparseVec& row : sys.rows) CHECK(is_zero(dot_row(row, psi.coeffs)));

    // Row bookkeeping: one row per (X, function, admissible state), nonzero
    // rows only, bounded by dim(g) * (N K + 1) * window.
    int admissible = 0;
    for (int b = 0; b < int(sys.window.degrees.size()); ++b) {
        int sum = 0;
        for (int x : sys.window.degrees[b]) sum += x;
        admissible += g.dim * sys.window.block_dim(b);          // the constant function
        for (int k = 1; k <= sys.pole_order; ++k)
            if (sum + k <= V.D) admissible += 3 * g.dim * sys.window.block_dim(b);
    }
    CHECK(int(sys.rows.size()) <= admissible);
    CHECK(int(sys.rows.size()) <= g.dim * (3 * V.K + 1) * sys.window.dim);
    CHECK(int(sys.rows.size()) > 0);
}

TEST_CASE("propagation inserts a vacuum point without changing the space") {
    LieAlgebra g = build_lie_data('A', 1);
    ModulePool pool(g, 1);
    PointedSphere S = standard_sphere({Weight{1}, Weight{1}, Weight{0}});
    VacuaBasis V = vacua_basis(pool, S, 2, 2);

    VacuaBasis W = propagate(pool, V, Rat(7));
    CHECK(W.dim() == V.dim());
    CHECK(W.sphere.size() == 4);
    CHECK(W.sphere.labels.back() == Weight{0});

    // The lift restricts to the original element on v (x) |0>.
    for (int e = 0; e < V.dim(); ++e)
        for (int u = 0; u < V.window.dim; ++u) {
            auto [dv, iv] = V.window.decode(u);
            dv.push_back(0);
            iv.push_back(0);
            CHECK(W.elements[e].coeffs[W.window.flat_index(dv, iv)] == V.elements[e].coeffs[u]);
        }

    // The lifted elements satisfy the enlarged gauge conditions exactly.
    GaugeSystem sys = gauge_matrix(pool, W.sphere, W.K, W.D);
    for (const VacuaElement& psi : W.elements)
        for (const SparseVec& row : sys.rows) CHECK(is_zero(dot_row(row, psi.coeffs)));

    CHECK_THROWS_AS(propagate(pool, V, Rat(1)), std::invalid_argument);

    // A zero-dimensional space stays zero-dimensional.
    VacuaBasis Z = vacua_basis(pool, standard_sphere({Weight{1}, Weight{1}, Weight{1}}), 2, 2);
    CHECK(Z.dim() == 0);
    CHECK(propagate(pool, Z, rat(1, 2)).dim() == 0);
}

TEST_CASE("coordinate changes act projectively on vacua lines") {
    LieAlgebra g = build_lie_data('A', 1);
    ModulePool pool(g, 1);
    PointedSphere S = standard_sphere({Weight{1}, Weight{1}, Weight{0}});
    VacuaBasis V = vacua_basis(pool, S, 2, 2);
    REQUIRE(V.dim() == 1);
    const VacuaElement& psi = V.elements[0];

    // Identity coordinates leave the element untouched.
    std::vector<FormalSeries> id(3, FormalSeries::monomial(1));
    CHECK(apply_coordinate_change(S, V.window, psi, id, V.K).coeffs == psi.coeffs);

    // A global scaling maps the line to the line computed in the new
    // coordinates: compare by cross-multiplication.
    std::vector<FormalSeries> sc(3, FormalSeries::monomial(1, Rat(3)));
    VacuaElement scaled = apply_coordinate_change(S, V.window, psi, sc, V.K);
    PointedSphere S2 = S;
    S2.coords = sc;
    VacuaBasis V2 = vacua_basis(pool, S2, 2, 2);
    REQUIRE(V2.dim() == 1);
    const Vec& a = scaled.coeffs;
    const Vec& b = V2.elements[0].coeffs;
    bool nonzero = false;
    for (int i = 0; i < int(a.size()); ++i)
        for (int k = 0; k < int(a.size()); ++k) {
            CHECK(a[i] * b[k] == a[k] * b[i]);
            nonzero = nonzero || sgn(a[i]) != 0;
        }
    CHECK(nonzero);

    // Composite rule: applying g then h equals applying h o g in one step.
    std::vector<FormalSeries> hs, gs, hg;
    for (int j = 0; j < 3; ++j) {
        FormalSeries h = FormalSeries::monomial(1, Rat(2)) + FormalSeries::monomial(2, rat(1, j + 2));
        FormalSeries gg = FormalSeries::monomial(1) + FormalSeries::monomial(3, Rat(j));
        hs.push_back(h);
        gs.push_back(gg);
        hg.push_back(h.compose(gg));
    }
    VacuaElement step1 = apply_coordinate_change(S, V.window, psi, gs, V.K);
    PointedSphere Sg = S;
    Sg.coords = gs;
    VacuaElement step2 = apply_coordinate_change(Sg, V.window, step1, hs, V.K);
    VacuaElement direct = apply_coordinate_change(S, V.window, psi, hg, V.K);
    CHECK(step2.coeffs == direct.coeffs);

    // An under-certified coordinate cannot produce the operator.
    FormalSeries lowcert = FormalSeries::monomial(1) + FormalSeries::monomial(2);
    lowcert.truncate(2);
    std::vector<FormalSeries> bad(3, lowcert);
    CHECK_THROWS_AS(apply_coordinate_change(S, V.window, psi, bad, V.K), std::out_of_range);
}
