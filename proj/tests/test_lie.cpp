#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vacua/lie.hpp"

using namespace vacua;

namespace {

Matrix casimir(const LieAlgebra& g, const FiniteModule& m) {
    Matrix c(m.dim, m.dim);
    for (int a = 0; a < g.dim; ++a)
        for (int b = 0; b < g.dim; ++b) {
            const Rat& k = g.form_inv.at(a, b);
            if (is_zero(k)) continue;
            c = c + m.action[a] * m.action[b] * k;
        }
    return c;
}

}  // namespace

TEST_CASE("A1 and A2 root data") {
    auto a1 = build_lie_data('A', 1);
    CHECK(a1.dim == 3);
    CHECK(a1.dual_coxeter == 2);
    CHECK(a1.theta == Weight{2});
    CHECK(a1.pair_weights(a1.theta, a1.theta) == Rat(2));
    CHECK(a1.basis_names[a1.theta_index] == "E12");

    auto a2 = build_lie_data('A', 2);
    CHECK(a2.dim == 8);
    CHECK(a2.dual_coxeter == 3);
    CHECK(a2.theta == Weight{1, 1});
    CHECK(a2.pair_weights(a2.theta, a2.theta) == Rat(2));
    CHECK(a2.basis_names[a2.theta_index] == "E13");
    // theta against rho doubles the dual Coxeter relation (theta, theta+2rho) = 2 h*
    CHECK(a2.pair_weights(a2.theta, a2.theta) + Rat(2) * a2.pair_weights(a2.theta, a2.rho) ==
          Rat(2) * Rat(a2.dual_coxeter));
}

TEST_CASE("invariant form is ad-invariant and the bracket closes") {
    for (int rank : {1, 2}) {
        auto g = build_lie_data('A', rank);
        for (int a = 0; a < g.dim; ++a)
            for (int b = 0; b < g.dim; ++b) {
                Matrix br = g.basis[a] * g.basis[b] - g.basis[b] * g.basis[a];
                Vec c = g.coords(br);  // throws if not in the span
                Matrix recon(g.n, g.n);
                for (int t = 0; t < g.dim; ++t)
                    if (!is_zero(c[t])) recon = recon + g.basis[t] * c[t];
                CHECK(recon == br);
            }
        // ([x,y],z) + (y,[x,z]) = 0 seen through the Gram matrix
        for (int x = 0; x < g.dim; ++x)
            for (int y = 0; y < g.dim; ++y)
                for (int z = 0; z < g.dim; ++z) {
                    Matrix xy = g.basis[x] * g.basis[y] - g.basis[y] * g.basis[x];
                    Matrix xz = g.basis[x] * g.basis[z] - g.basis[z] * g.basis[x];
                    Rat s(0);
                    for (int p = 0; p < g.n; ++p)
                        for (int q = 0; q < g.n; ++q)
                            s += xy.at(p, q) * g.basis[z].at(q, p) + g.basis[y].at(p, q) * xz.at(q, p);
                    CHECK(is_zero(s));
                }
    }
}

TEST_CASE("label sets are lexicographic and bounded by the level") {
    auto a1 = build_lie_data('A', 1);
    CHECK(label_set(a1, 0) == std::vector<Weight>{{0}});
    CHECK(label_set(a1, 2) == std::vector<Weight>{{0}, {1}, {2}});
    CHECK(label_set(a1, 3).size() == 4);

    auto a2 = build_lie_data('A', 2);
    CHECK(label_set(a2, 1) == std::vector<Weight>{{0, 0}, {0, 1}, {1, 0}});
    CHECK(label_set(a2, 2).size() == 6);
    for (const auto& w : label_set(a2, 2)) CHECK(weight_in_label_set(a2, w, 2));
    CHECK(!weight_in_label_set(a2, {2, 1}, 2));
}

TEST_CASE("dagger is an involution fixing the label set") {
    auto a2 = build_lie_data('A', 2);
    CHECK(dagger(Weight{1, 0}) == Weight{0, 1});
    CHECK(dagger(Weight{2}) == Weight{2});
    for (const auto& w : label_set(a2, 2)) {
        CHECK(dagger(dagger(w)) == w);
        CHECK(weight_in_label_set(a2, dagger(w), 2));
    }
}

TEST_CASE("conformal weights, A1 spot values") {
    auto a1 = build_lie_data('A', 1);
    CHECK(conformal_weight(a1, {0}, 1) == Rat(0));
    CHECK(conformal_weight(a1, {1}, 1) == rat(1, 4));
    CHECK(conformal_weight(a1, {1}, 2) == rat(3, 16));
    CHECK(conformal_weight(a1, {2}, 2) == rat(1, 2));
    // closed form n(n+2)/4(l+2)
    for (long n = 0; n <= 3; ++n)
        for (long l = n; l <= 4; ++l)
            CHECK(conformal_weight(a1, {n}, l) == Rat(n * (n + 2)) / Rat(4 * (l + 2)));
}

TEST_CASE("irreps carry the right dimension and commutation relations") {
    auto a1 = build_lie_data('A', 1);
    for (long n = 0; n <= 3; ++n) {
        auto m = irrep(a1, {n});
        CHECK(m.dim == int(n) + 1);
        CHECK(m.weights[m.highest_index] == Weight{n});
        CHECK(m.weights[m.lowest_index] == Weight{-n});
    }

    auto a2 = build_lie_data('A', 2);
    CHECK(irrep(a2, {0, 0}).dim == 1);
    CHECK(irrep(a2, {1, 0}).dim == 3);
    CHECK(irrep(a2, {0, 1}).dim == 3);
    CHECK(irrep(a2, {1, 1}).dim == 8);
    CHECK(irrep(a2, {2, 0}).dim == 6);

    // module action represents the bracket
    for (int rank : {1, 2}) {
        auto g = build_lie_data('A', rank);
        Weight w(rank, 0);
        w[0] = 1;
        if (rank == 2) w[1] = 1;
        auto m = irrep(g, w);
        for (int a = 0; a < g.dim; ++a)
            for (int b = 0; b < g.dim; ++b) {
                Matrix lhs = m.action[a] * m.action[b] - m.action[b] * m.action[a];
                Vec c = g.coords(g.basis[a] * g.basis[b] - g.basis[b] * g.basis[a]);
                Matrix rhs(m.dim, m.dim);
                for (int t = 0; t < g.dim; ++t)
                    if (!is_zero(c[t])) rhs = rhs + m.action[t] * c[t];
                CHECK(lhs == rhs);
            }
    }
}

TEST_CASE("Casimir eigenvalue (lambda, lambda + 2 rho)") {
    auto a1 = build_lie_data('A', 1);
    for (long n = 1; n <= 3; ++n) {
        auto m = irrep(a1, {n});
        Matrix c = casimir(a1, m);
        CHECK(c == Matrix::identity(m.dim) * rat(n * (n + 2), 2));
    }
    auto a2 = build_lie_data('A', 2);
    auto adj = irrep(a2, {1, 1});
    CHECK(casimir(a2, adj) == Matrix::identity(8) * Rat(6));
}

TEST_CASE("invariant pairing: invariance, perfection, normalization") {
    for (auto [rank, wraw] : {std::pair<int, Weight>{1, {2}}, {1, {1}}, {2, {1, 0}}, {2, {1, 1}}}) {
        auto g = build_lie_data('A', rank);
        auto v = irrep(g, wraw);
        auto vd = irrep(g, dagger(wraw));
        auto p = invariant_pairing(g, v, vd);

        for (int a = 0; a < g.dim; ++a)
            CHECK((v.action[a].transpose() * p.form + p.form * vd.action[a]).is_zero());

        CHECK(inverse(p.form).has_value());

        // invariant vector: annihilated by the diagonal action, pairing value 1
        for (int a = 0; a < g.dim; ++a)
            CHECK((v.action[a] * p.invariant + p.invariant * vd.action[a].transpose()).is_zero());
        Rat val(0);
        for (int i = 0; i < v.dim; ++i)
            for (int j = 0; j < v.dim; ++j) val += p.form.at(i, j) * p.invariant.at(i, j);
        CHECK(val == Rat(1));
        CHECK(sgn(p.invariant.at(v.highest_index, vd.lowest_index)) > 0);
    }

    // trivial label: the invariant vector is the pure tensor of vacua
    auto g = build_lie_data('A', 1);
    auto v0 = irrep(g, {0});
    auto p0 = invariant_pairing(g, v0, v0);
    CHECK(p0.form.at(0, 0) == Rat(1));
    CHECK(p0.invariant.at(0, 0) == Rat(1));
}
