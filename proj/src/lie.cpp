#include "vacua/lie.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace vacua {

namespace {

Matrix unit_matrix(int n, int i, int j) {
    Matrix m(n, n);
    m.at(i, j) = 1;
    return m;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Rat trace_product(const Matrix& a, const Matrix& b) {
    Rat s(0);
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) s += a.at(i, k) * b.at(k, i);
    return s;
}

}  // namespace

Vec LieAlgebra::coords(const Matrix& x) const {
    // Off-diagonal entries read off the root-vector coefficients; the
    // traceless diagonal decomposes over H_i by partial sums.
    Vec c(dim, Rat(0));
    int idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) c[idx++] = x.at(i, j);
    Rat partial(0);
    Rat tr(0);
    for (int i = 0; i < n; ++i) tr += x.at(i, i);
    if (!is_zero(tr)) throw std::invalid_argument("coords: matrix not traceless");
    for (int i = 0; i < rank; ++i) {
        partial += x.at(i, i);
        c[idx++] = partial;
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) c[idx++] = x.at(j, i);
    return c;
}

Rat LieAlgebra::pair_weights(const Weight& a, const Weight& b) const {
    if (int(a.size()) != rank || int(b.size()) != rank)
        throw std::invalid_argument("pair_weights: wrong rank");
    Rat s(0);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
            if (a[i] != 0 && b[j] != 0) s += Rat(a[i]) * weight_form.at(i, j) * Rat(b[j]);
    return s;
}

LieAlgebra build_lie_data(char series, int rank) {
    if (series != 'A') throw std::invalid_argument("only the A-series is supported");
    if (rank < 1) throw std::invalid_argument("rank must be positive");
    LieAlgebra g;
    g.series = 'A';
    g.rank = rank;
    g.n = rank + 1;
    g.dim = g.n * g.n - 1;
    g.dual_coxeter = rank + 1;

    g.cartan = Matrix(rank, rank);
    for (int i = 0; i < rank; ++i) {
        g.cartan.at(i, i) = 2;
        if (i + 1 < rank) {
            g.cartan.at(i, i + 1) = -1;
            g.cartan.at(i + 1, i) = -1;
        }
    }
    auto inv = inverse(g.cartan);
    g.weight_form = *inv;

    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j) {
            g.basis.push_back(unit_matrix(g.n, i, j));
            g.basis_names.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
        }
    for (int i = 0; i < rank; ++i) {
        Matrix h(g.n, g.n);
        h.at(i, i) = 1;
        h.at(i + 1, i + 1) = -1;
        g.basis.push_back(h);
        g.basis_names.push_back("H" + std::to_string(i + 1));
    }
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j) {
            g.basis.push_back(unit_matrix(g.n, j, i));
            g.basis_names.push_back("F" + std::to_string(i + 1) + std::to_string(j + 1));
        }

    g.basis_ad_weight.resize(g.dim);
    for (int a = 0; a < g.dim; ++a) {
        Weight w(rank, 0);
        for (int i = 0; i < rank; ++i) {
            Matrix c = commutator(g.basis[g.cartan_begin() + i], g.basis[a]);
            // eigenvalue of ad(H_i); zero matrix for Cartan elements
            Rat ev(0);
            for (int p = 0; p < g.n && is_zero(ev); ++p)
                for (int q = 0; q < g.n; ++q)
                    if (!is_zero(g.basis[a].at(p, q))) {
                        ev = c.at(p, q) / g.basis[a].at(p, q);
                        break;
                    }
            w[i] = rat_to_long(ev);
        }
        g.basis_ad_weight[a] = w;
    }

    g.form = Matrix(g.dim, g.dim);
    for (int a = 0; a < g.dim; ++a)
        for (int b = 0; b < g.dim; ++b) g.form.at(a, b) = trace_product(g.basis[a], g.basis[b]);
    g.form_inv = *inverse(g.form);

    g.theta = Weight(rank, 0);
    if (rank == 1) {
        g.theta[0] = 2;
    } else {
        g.theta[0] = 1;
        g.theta[rank - 1] = 1;
    }
    g.rho = Weight(rank, 1);
    g.theta_index = rank - 1;  // E_{1,n} position in the lex order over i<j
    return g;
}

std::vector<Weight> label_set(const LieAlgebra& g, long level) {
    if (level < 0) throw std::invalid_argument("level must be nonnegative");
    std::vector<Weight> out;
    Weight w(g.rank, 0);
    // enumerate nonnegative coordinates with (theta, w) <= level
    while (true) {
        if (g.theta_pairing(w) <= Rat(level)) out.push_back(w);
        int i = g.rank - 1;
        for (; i >= 0; --i) {
            ++w[i];
            if (g.theta_pairing(w) <= Rat(level)) break;
            // coordinate overshoots for every completion; reset and carry
            w[i] = 0;
        }
        if (i < 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

Weight dagger(const Weight& w) {
    Weight r(w.rbegin(), w.rend());
    return r;
}

bool weight_in_label_set(const LieAlgebra& g, const Weight& w, long level) {
    if (int(w.size()) != g.rank) return false;
    for (long c : w)
        if (c < 0) return false;
    return g.theta_pairing(w) <= Rat(level);
}

Rat conformal_weight(const LieAlgebra& g, const Weight& lambda, long level) {
    Rat num = g.pair_weights(lambda, lambda) + Rat(2) * g.pair_weights(lambda, g.rho);
    return num / (Rat(2) * Rat(g.dual_coxeter + level));
}

namespace {

// Kronecker action of x on tensor factor slot k of an m-fold tensor power.
void apply_slot(const Matrix& x, int n, int m, int slot, const Vec& v, Vec& out) {
    // component index decomposes as i_0 * n^{m-1} + ... + i_{m-1}
    long stride = 1;
    for (int s = m - 1; s > slot; --s) stride *= n;
    long block = stride * n;
    for (long base = 0; base < long(v.size()); base += block)
        for (long off = 0; off < stride; ++off)
            for (int i = 0; i < n; ++i) {
                const Rat& xv = v[base + i * stride + off];
                if (is_zero(xv)) continue;
                for (int j = 0; j < n; ++j)
                    if (!is_zero(x.at(j, i))) out[base + j * stride + off] += x.at(j, i) * xv;
            }
}

Vec act_tensor(const Matrix& x, int n, int m, const Vec& v) {
    Vec out(v.size(), Rat(0));
    for (int slot = 0; slot < m; ++slot) apply_slot(x, n, m, slot, v, out);
    return out;
}

}  // namespace

FiniteModule irrep(const LieAlgebra& g, const Weight& lambda) {
    if (int(lambda.size()) != g.rank) throw std::invalid_argument("irrep: wrong rank");
    for (long c : lambda)
        if (c < 0) throw std::invalid_argument("irrep: weight not dominant");

    // Ambient space: tensor power of the defining representation holding a
    // highest weight vector of weight lambda (product of wedge-power vectors).
    int m = 0;
    for (int k = 0; k < g.rank; ++k) m += int(lambda[k]) * (k + 1);

    long ambient = 1;
    for (int i = 0; i < m; ++i) {
        ambient *= g.n;
        if (ambient > 20000000L) throw std::length_error("irrep: weight too large");
    }

    FiniteModule mod;
    mod.highest = lambda;

    if (m == 0) {  // trivial module
        mod.dim = 1;
        mod.weights = {Weight(g.rank, 0)};
        mod.action.assign(g.dim, Matrix(1, 1));
        mod.highest_index = mod.lowest_index = 0;
        return mod;
    }

    // Highest weight vector: product over fundamental factors of the
    // antisymmetrized word e_1 ^ ... ^ e_{k+1}.
    Vec hw(ambient, Rat(0));
    {
        std::vector<std::pair<long, Rat>> terms = {{0, Rat(1)}};
        for (int k = 0; k < g.rank; ++k)
            for (long c = 0; c < lambda[k]; ++c) {
                std::vector<int> pi(k + 1);
                for (int i = 0; i <= k; ++i) pi[i] = i;
                std::vector<std::pair<long, Rat>> wedge;
                do {
                    int inv = 0;
                    for (int a = 0; a <= k; ++a)
                        for (int b = a + 1; b <= k; ++b)
                            if (pi[a] > pi[b]) ++inv;
                    long idx = 0;
                    for (int a = 0; a <= k; ++a) idx = idx * g.n + pi[a];
                    wedge.emplace_back(idx, (inv % 2) ? Rat(-1) : Rat(1));
                } while (std::next_permutation(pi.begin(), pi.end()));
                long wedge_width = 1;
                for (int a = 0; a <= k; ++a) wedge_width *= g.n;
                std::vector<std::pair<long, Rat>> next;
                for (auto& [i0, c0] : terms)
                    for (auto& [i1, c1] : wedge) next.emplace_back(i0 * wedge_width + i1, c0 * c1);
                terms = std::move(next);
            }
        for (auto& [i, c] : terms) hw[i] += c;
    }

    // Generate by simple lowering operators, keeping an echelonized span.
    std::vector<Vec> basis_vecs;
    std::vector<Weight> weights;
    RowEchelon span{int(ambient)};

    auto weight_of = [&](const Vec& v) {
        Weight w(g.rank, 0);
        for (int i = 0; i < g.rank; ++i) {
            Vec hv = act_tensor(g.basis[g.cartan_begin() + i], g.n, m, v);
            // v is a weight vector: hv = ev * v
            for (long p = 0; p < ambient; ++p)
                if (!is_zero(v[p])) {
                    w[i] = rat_to_long(hv[p] / v[p]);
                    break;
                }
        }
        return w;
    };

    span.add_row(SparseVec::from_dense(hw));
    basis_vecs.push_back(hw);
    weights.push_back(weight_of(hw));

    std::vector<int> lowering;
    for (int i = 0; i < g.rank; ++i) {
        // F_i = E_{i+2,i+1} block: find it by name
        Matrix f(g.n, g.n);
        f.at(i + 1, i) = 1;
        lowering.push_back(0);
        for (int a = 0; a < g.dim; ++a)
            if (g.basis[a] == f) lowering.back() = a;
    }

    for (size_t head = 0; head < basis_vecs.size(); ++head) {
        for (int li : lowering) {
            Vec nv = act_tensor(g.basis[li], g.n, m, basis_vecs[head]);
            if (vec_is_zero(nv)) continue;
            if (span.add_row(SparseVec::from_dense(nv))) {
                basis_vecs.push_back(nv);
                weights.push_back(weight_of(nv));
            }
        }
    }

    mod.dim = int(basis_vecs.size());
    mod.weights = weights;
    mod.highest_index = 0;

    Weight lowest(g.rank);
    {
        Weight rev = dagger(lambda);
        for (int i = 0; i < g.rank; ++i) lowest[i] = -rev[i];
    }
    mod.lowest_index = -1;
    for (int i = 0; i < mod.dim; ++i)
        if (weights[i] == lowest) {
            if (mod.lowest_index >= 0) throw std::logic_error("irrep: lowest weight space not a line");
            mod.lowest_index = i;
        }
    if (mod.lowest_index < 0) throw std::logic_error("irrep: lowest weight vector not found");

    // Express images of basis vectors back in the generated basis: solve on a
    // fixed set of pivot coordinates, then verify against the full vector.
    std::vector<int> piv;
    {
        Matrix rb(mod.dim, int(ambient));
        for (int i = 0; i < mod.dim; ++i)
            for (long p = 0; p < ambient; ++p) rb.at(i, int(p)) = basis_vecs[i][p];
        if (rref(rb, &piv) != mod.dim) throw std::logic_error("irrep: basis not independent");
    }
    Matrix pivmat(mod.dim, mod.dim);
    for (int i = 0; i < mod.dim; ++i)
        for (int j = 0; j < mod.dim; ++j) pivmat.at(i, j) = basis_vecs[j][piv[i]];
    Matrix pivinv = *inverse(pivmat);

    mod.action.assign(g.dim, Matrix(mod.dim, mod.dim));
    for (int a = 0; a < g.dim; ++a) {
        for (int j = 0; j < mod.dim; ++j) {
            Vec img = act_tensor(g.basis[a], g.n, m, basis_vecs[j]);
            Vec rhs(mod.dim);
            for (int i = 0; i < mod.dim; ++i) rhs[i] = img[piv[i]];
            Vec x = pivinv * rhs;
            Vec recon(ambient, Rat(0));
            for (int t = 0; t < mod.dim; ++t) axpy(recon, x[t], basis_vecs[t]);
            if (recon != img) throw std::logic_error("irrep: action left the module span");
            for (int i = 0; i < mod.dim; ++i) mod.action[a].at(i, j) = x[i];
        }
    }
    return mod;
}

InvariantPairing invariant_pairing(const LieAlgebra& g, const FiniteModule& v,
                                   const FiniteModule& vdag) {
    if (dagger(v.highest) != vdag.highest)
        throw std::invalid_argument("invariant_pairing: modules are not dual labels");
    int d = v.dim;
    if (vdag.dim != d) throw std::logic_error("invariant_pairing: dimension mismatch");

    // Unknown B with B(X u, w) + B(u, X w) = 0 for generators X.
    std::vector<int> gens;
    for (int i = 0; i < g.rank; ++i) {
        gens.push_back(g.cartan_begin() + i);
        Matrix e(g.n, g.n), f(g.n, g.n);
        e.at(i, i + 1) = 1;
        f.at(i + 1, i) = 1;
        for (int a = 0; a < g.dim; ++a) {
            if (g.basis[a] == e) gens.push_back(a);
            if (g.basis[a] == f) gens.push_back(a);
        }
    }

    RowEchelon rows(d * d);
    for (int x : gens) {
        const Matrix& ax = v.action[x];
        const Matrix& bx = vdag.action[x];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                SparseVec r;
                for (int p = 0; p < d; ++p) {
                    if (!is_zero(ax.at(p, i))) r.add(p * d + j, ax.at(p, i));
                    if (!is_zero(bx.at(p, j))) r.add(i * d + p, bx.at(p, j));
                }
                if (!r.empty()) rows.add_row(std::move(r));
            }
    }
    auto ker = rows.kernel();
    if (ker.size() != 1) throw std::logic_error("invariant_pairing: pairing space is not a line");

    Matrix b(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b.at(i, j) = ker[0][i * d + j];
    // scale so B(highest, lowest-dual) = 1, then fix the overall sign from
    // the positivity of the invariant vector's highest(x)lowest coefficient
    Rat pivot = b.at(v.highest_index, vdag.lowest_index);
    if (is_zero(pivot)) throw std::logic_error("invariant_pairing: degenerate normal entry");
    b = b * (Rat(1) / pivot);

    auto binv = inverse(b);
    if (!binv) throw std::logic_error("invariant_pairing: pairing not perfect");
    // invariant vector = dual-bases tensor, scaled to pairing value 1
    Matrix w = binv->transpose() * rat(1, d);
    if (sgn(w.at(v.highest_index, vdag.lowest_index)) < 0) {
        b = b * Rat(-1);
        w = w * Rat(-1);
    }
    return {b, w};
}

}  // namespace vacua
