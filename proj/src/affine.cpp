#include "vacua/affine.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <tuple>

namespace vacua {

namespace {

using VKey = std::pair<Mono, int>;
using VermaVec = std::map<VKey, Rat>;

void vadd(VermaVec& v, const VKey& k, const Rat& c) {
    if (is_zero(c)) return;
    auto [it, fresh] = v.emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (is_zero(it->second)) v.erase(it);
    }
}

void vaxpy(VermaVec& y, const Rat& c, const VermaVec& x) {
    for (const auto& [k, u] : x) vadd(y, k, c * u);
}

// Straightening context: structure constants, the top module, the level,
// and a memo for repeated single-mode applications.
struct Straightener {
    const LieAlgebra* g;
    const FiniteModule* rep;
    Rat level;
    std::vector<std::vector<Vec>> sc;  // coords of [X_a, X_b]
    std::map<std::tuple<int, int, VKey>, VermaVec> memo;

    explicit Straightener(const LieAlgebra& lie, const FiniteModule& top, long lev)
        : g(&lie), rep(&top), level(lev) {
        sc.assign(lie.dim, std::vector<Vec>(lie.dim));
        for (int a = 0; a < lie.dim; ++a)
            for (int b = 0; b < lie.dim; ++b)
                sc[a][b] = lie.coords(lie.basis[a] * lie.basis[b] - lie.basis[b] * lie.basis[a]);
    }

    // X_a(m) applied to the basis vector (mono, k), result in normal form.
    const VermaVec& apply1(int a, int m, const VKey& key) {
        auto probe = memo.find({a, m, key});
        if (probe != memo.end()) return probe->second;
        VermaVec out;
        const Mono& mono = key.first;
        int k = key.second;
        if (mono.f.empty()) {
            if (m < 0) {
                Mono nm;
                nm.f = {{-m, a}};
                vadd(out, {nm, k}, Rat(1));
            } else if (m == 0) {
                const Matrix& A = rep->action[a];
                for (int j = 0; j < rep->dim; ++j) vadd(out, {Mono{}, j}, A.at(j, k));
            }
            // m > 0 annihilates the top row of the module
        } else {
            auto head = mono.f.front();
            Mono rest;
            rest.f.assign(mono.f.begin() + 1, mono.f.end());
            if (m < 0 && factor_before({-m, a}, head)) {
                Mono nm;
                nm.f.reserve(mono.f.size() + 1);
                nm.f.push_back({-m, a});
                nm.f.insert(nm.f.end(), mono.f.begin(), mono.f.end());
                vadd(out, {nm, k}, Rat(1));
            } else {
                // commute X_a(m) past the head factor X_b(-n1)
                auto [n1, b] = head;
                const VermaVec& tail = apply1(a, m, {rest, k});
                for (const auto& [tk, tc] : tail) vaxpy(out, tc, apply1(b, -n1, tk));
                const Vec& br = sc[a][b];
                for (int c = 0; c < g->dim; ++c)
                    if (!vacua::is_zero(br[c])) vaxpy(out, br[c], apply1(c, m - n1, {rest, k}));
                if (m == n1) vadd(out, {rest, k}, Rat(m) * level * g->form.at(a, b));
            }
        }
        return memo.emplace(std::make_tuple(a, m, key), std::move(out)).first->second;
    }

    VermaVec apply(int a, int m, const VermaVec& v) {
        VermaVec out;
        for (const auto& [k, c] : v) vaxpy(out, c, apply1(a, m, k));
        return out;
    }
};

}  // namespace

GradedModule::GradedModule(const LieAlgebra& g, long level, const Weight& lambda, int cutoff)
    : g_(&g), level_(level), lambda_(lambda), cutoff_(cutoff) {
    if (cutoff < 0) throw std::invalid_argument("GradedModule: negative cutoff");
    if (!weight_in_label_set(g, lambda, level))
        throw std::invalid_argument("GradedModule: weight not in the level-bounded label set");
    rep_ = irrep(g, lambda);
    delta_ = vacua::conformal_weight(g, lambda, level);
    build_bases();

    long verma_total = 0;
    for (int d = 0; d <= cutoff_; ++d) verma_total += verma_dim(d);
    if (verma_total > 200000)
        throw std::invalid_argument("GradedModule: cutoff beyond configured resource limit");

    build_null();
    build_modes();
}

void GradedModule::build_bases() {
    // Factors in normal-form order: mode descending, basis index ascending.
    std::vector<std::pair<int, int>> factors;
    for (int n = cutoff_; n >= 1; --n)
        for (int a = 0; a < g_->dim; ++a) factors.push_back({n, a});

    vbasis_.assign(cutoff_ + 1, {});
    vindex_.assign(cutoff_ + 1, {});
    for (int d = 0; d <= cutoff_; ++d) {
        std::vector<Mono> monos;
        Mono cur;
        // Depth-first over weakly increasing factor positions.
        std::function<void(size_t, int)> rec = [&](size_t from, int rem) {
            if (rem == 0) {
                monos.push_back(cur);
                return;
            }
            for (size_t i = from; i < factors.size(); ++i) {
                if (factors[i].first > rem) continue;
                cur.f.push_back(factors[i]);
                rec(i, rem - factors[i].first);
                cur.f.pop_back();
            }
        };
        rec(0, d);
        for (const Mono& m : monos)
            for (int k = 0; k < rep_.dim; ++k) {
                vindex_[d][{m, k}] = int(vbasis_[d].size());
                vbasis_[d].push_back({m, k});
            }
    }
}

void GradedModule::build_null() {
    Straightener st(*g_, rep_, level_);

    null_rows_.assign(cutoff_ + 1, Matrix());
    null_pivots_.assign(cutoff_ + 1, {});
    quot_cols_.assign(cutoff_ + 1, {});
    dims_.assign(cutoff_ + 1, 0);

    long dj = level_ - rat_to_long(g_->theta_pairing(lambda_)) + 1;

    auto to_dense = [&](int d, const VermaVec& v) {
        Vec out(verma_dim(d), Rat(0));
        for (const auto& [k, c] : v) out[vindex_[d].at(k)] = c;
        return out;
    };
    auto to_sparse_verma = [&](int d, const Vec& v) {
        VermaVec out;
        for (int i = 0; i < int(v.size()); ++i)
            if (!vacua::is_zero(v[i])) out.emplace(vbasis_[d][i], v[i]);
        return out;
    };

    // Null spans per degree, echelonized as they grow.
    std::vector<std::vector<Vec>> span(cutoff_ + 1);
    if (dj <= cutoff_) {
        VermaVec j{{{Mono{}, rep_.highest_index}, Rat(1)}};
        for (long i = 0; i < dj; ++i) j = st.apply(g_->theta_index, -1, j);
        if (j.empty()) throw std::logic_error("GradedModule: singular vector vanished in the Verma module");

        // Degree dj: close the singular vector under the zero modes.
        {
            RowEchelon ech{verma_dim(int(dj))};
            std::vector<Vec> queue{to_dense(int(dj), j)};
            ech.add_row(SparseVec::from_dense(queue[0]));
            span[dj].push_back(queue[0]);
            while (!queue.empty()) {
                Vec w = std::move(queue.back());
                queue.pop_back();
                VermaVec wv = to_sparse_verma(int(dj), w);
                for (int a = 0; a < g_->dim; ++a) {
                    Vec img = to_dense(int(dj), st.apply(a, 0, wv));
                    if (ech.add_row(SparseVec::from_dense(img))) {
                        span[dj].push_back(img);
                        queue.push_back(std::move(img));
                    }
                }
            }
        }
        // Higher degrees: apply negative modes to lower null spans.
        for (int d = int(dj) + 1; d <= cutoff_; ++d) {
            RowEchelon ech{verma_dim(d)};
            for (int n = 1; d - n >= dj; ++n)
                for (const Vec& w : span[d - n]) {
                    VermaVec wv = to_sparse_verma(d - n, w);
                    for (int a = 0; a < g_->dim; ++a) {
                        Vec img = to_dense(d, st.apply(a, -n, wv));
                        if (ech.add_row(SparseVec::from_dense(img))) span[d].push_back(img);
                    }
                }
        }
    }

    offsets_.assign(cutoff_ + 2, 0);
    for (int d = 0; d <= cutoff_; ++d) {
        Matrix rows(int(span[d].size()), verma_dim(d));
        for (int i = 0; i < rows.rows(); ++i)
            for (int c = 0; c < rows.cols(); ++c) rows.at(i, c) = span[d][i][c];
        std::vector<int> piv;
        int rk = rref(rows, &piv);
        Matrix reduced(rk, verma_dim(d));
        for (int i = 0; i < rk; ++i)
            for (int c = 0; c < reduced.cols(); ++c) reduced.at(i, c) = rows.at(i, c);
        null_rows_[d] = std::move(reduced);
        null_pivots_[d] = piv;
        std::vector<bool> is_piv(verma_dim(d), false);
        for (int p : piv) is_piv[p] = true;
        for (int c = 0; c < verma_dim(d); ++c)
            if (!is_piv[c]) quot_cols_[d].push_back(c);
        dims_[d] = int(quot_cols_[d].size());
        offsets_[d + 1] = offsets_[d] + dims_[d];
    }
    total_ = offsets_[cutoff_ + 1];
}

void GradedModule::build_modes() {
    Straightener st(*g_, rep_, level_);
    modes_.assign(g_->dim, std::vector<std::vector<Matrix>>(2 * cutoff_ + 1,
                                                            std::vector<Matrix>(cutoff_ + 1)));
    for (int a = 0; a < g_->dim; ++a)
        for (int n = -cutoff_; n <= cutoff_; ++n)
            for (int d = 0; d <= cutoff_; ++d) {
                int dt = d - n;
                if (dt < 0) {
                    modes_[a][n + cutoff_][d] = Matrix(0, dims_[d]);
                    continue;
                }
                if (dt > cutoff_) continue;  // stays default-empty: truncation boundary
                Matrix m(dims_[dt], dims_[d]);
                for (int j = 0; j < dims_[d]; ++j) {
                    const VKey& key = vbasis_[d][quot_cols_[d][j]];
                    const VermaVec& img = st.apply1(a, n, key);
                    Vec dense(verma_dim(dt), Rat(0));
                    for (const auto& [k, c] : img) dense[vindex_[dt].at(k)] = c;
                    Vec q = reduce(dt, dense);
                    for (int i = 0; i < dims_[dt]; ++i) m.at(i, j) = q[i];
                }
                modes_[a][n + cutoff_][d] = std::move(m);
            }
}

int GradedModule::dim(int d) const {
    if (d < 0 || d > cutoff_) throw std::out_of_range("GradedModule: degree outside window");
    return dims_[d];
}

int GradedModule::offset(int d) const {
    if (d < 0 || d > cutoff_) throw std::out_of_range("GradedModule: degree outside window");
    return offsets_[d];
}

const std::vector<std::pair<Mono, int>>& GradedModule::verma_basis(int d) const {
    if (d < 0 || d > cutoff_) throw std::out_of_range("GradedModule: degree outside window");
    return vbasis_[d];
}

int GradedModule::quotient_column(int d, int j) const { return quot_cols_.at(d).at(j); }

Weight GradedModule::state_weight(int d, int j) const {
    const auto& [mono, top] = verma_basis(d)[quotient_column(d, j)];
    Weight w = rep_.weights[top];
    for (const auto& factor : mono.f)
        for (int i = 0; i < g_->rank; ++i) w[i] += g_->basis_ad_weight[factor.second][i];
    return w;
}

Vec GradedModule::reduce(int d, const Vec& verma_coords) const {
    if (int(verma_coords.size()) != verma_dim(d))
        throw std::invalid_argument("reduce: coordinate length mismatch");
    Vec v = verma_coords;
    const Matrix& rows = null_rows_[d];
    for (int i = 0; i < rows.rows(); ++i) {
        const Rat c = v[null_pivots_[d][i]];
        if (vacua::is_zero(c)) continue;
        for (int j = 0; j < rows.cols(); ++j) v[j] -= c * rows.at(i, j);
    }
    Vec out(dims_[d]);
    for (int j = 0; j < dims_[d]; ++j) out[j] = v[quot_cols_[d][j]];
    return out;
}

int GradedModule::null_dim(int d) const { return verma_dim(d) - dims_[d]; }

const Matrix& GradedModule::mode(int a, int n, int d) const {
    if (a < 0 || a >= g_->dim) throw std::out_of_range("mode: basis index");
    if (d < 0 || d > cutoff_) throw std::out_of_range("mode: degree outside window");
    if (n < -cutoff_ || n > cutoff_) throw std::out_of_range("mode: mode outside window");
    if (d - n > cutoff_)
        throw std::out_of_range("mode: target degree beyond truncation window");
    return modes_[a][n + cutoff_][d];
}

Vec GradedModule::act(int a, int n, int d, const Vec& v) const { return mode(a, n, d) * v; }

Matrix GradedModule::sugawara(int n, int d) const {
    if (d < 0 || d > cutoff_) throw std::out_of_range("sugawara: degree outside window");
    if (d - n > cutoff_)
        throw std::out_of_range("sugawara: target degree beyond truncation window");
    if (d - n < 0) return Matrix(0, dims_[d]);

    Matrix acc(dims_[d - n], dims_[d]);
    const Matrix& G = g_->form_inv;
    for (int m = n - d; m <= d; ++m) {
        // The factor with the larger mode acts first; at a tie both orders
        // are averaged.  All intermediate degrees stay inside the window.
        int p = std::max(m, n - m), q = std::min(m, n - m);
        for (int a = 0; a < g_->dim; ++a)
            for (int b = 0; b < g_->dim; ++b) {
                const Rat& w = G.at(a, b);
                if (vacua::is_zero(w)) continue;
                if (m < n - m) {
                    // normal order X_a(m) X_b(n-m): apply X_b(n-m) first
                    acc = acc + mode(a, m, d - p) * mode(b, p, d) * w;
                } else if (m > n - m) {
                    // normal order X_b(n-m) X_a(m): apply X_a(m) first
                    acc = acc + mode(b, q, d - p) * mode(a, p, d) * w;
                } else {
                    Matrix half = mode(a, m, d - m) * mode(b, m, d) +
                                  mode(b, m, d - m) * mode(a, m, d);
                    acc = acc + half * (w * rat(1, 2));
                }
            }
    }
    return acc * rat(1, 2 * (g_->dual_coxeter + level_));
}

Matrix GradedModule::t_op(const FormalSeries& l, bool allow_raising) const {
    if (!l.is_exact() && l.order() < cutoff_ + 2)
        throw std::out_of_range("t_op: series not certified through the retained modes");
    Matrix t(total_, total_);
    for (const auto& [e, c] : l.terms()) {
        int k = e - 1;  // xi^{k+1} d/dxi pairs with L_k
        if (k < 0 && !allow_raising)
            throw std::domain_error("t_op: raising modes need allow_raising");
        for (int d = 0; d <= cutoff_; ++d) {
            int dt = d - k;
            if (dt < 0 || dt > cutoff_) continue;
            Matrix blk = sugawara(k, d);
            for (int i = 0; i < blk.rows(); ++i)
                for (int j = 0; j < blk.cols(); ++j)
                    t.at(offsets_[dt] + i, offsets_[d] + j) += c * blk.at(i, j);
        }
    }
    return t;
}

ModePolynomial bracket(const LieAlgebra& g, const ModePolynomial& x, const ModePolynomial& y) {
    ModePolynomial out;
    std::map<std::pair<int, int>, Rat> acc;  // (a, n) -> coefficient
    for (const auto& s : x.terms)
        for (const auto& t : y.terms) {
            Vec br = g.coords(g.basis[s.a] * g.basis[t.a] - g.basis[t.a] * g.basis[s.a]);
            for (int c = 0; c < g.dim; ++c)
                if (!is_zero(br[c])) acc[{c, s.n + t.n}] += s.c * t.c * br[c];
            if (s.n + t.n == 0) out.central += s.c * t.c * Rat(s.n) * g.form.at(s.a, t.a);
        }
    for (const auto& [key, c] : acc)
        if (!is_zero(c)) out.terms.push_back({key.first, key.second, c});
    return out;
}

std::map<int, Vec> apply_mode_polynomial(const GradedModule& M, const ModePolynomial& p, int d,
                                         const Vec& v) {
    std::map<int, Vec> out;
    auto add = [&](int deg, const Vec& w) {
        auto [it, fresh] = out.emplace(deg, w);
        if (!fresh)
            for (size_t i = 0; i < w.size(); ++i) it->second[i] += w[i];
    };
    for (const auto& t : p.terms) {
        if (d - t.n < 0) continue;
        Vec w = M.act(t.a, t.n, d, v);
        for (Rat& c : w) c *= t.c;
        add(d - t.n, w);
    }
    if (!is_zero(p.central)) {
        Vec w = v;
        for (Rat& c : w) c *= p.central * Rat(M.level());
        add(d, w);
    }
    return out;
}

ModulePairing build_pairing(const GradedModule& M, const GradedModule& Mdag) {
    if (&M.algebra() != &Mdag.algebra() || M.level() != Mdag.level() ||
        M.cutoff() != Mdag.cutoff() || dagger(M.label()) != Mdag.label())
        throw std::invalid_argument("build_pairing: modules are not a dagger pair at a common cutoff");

    ModulePairing P;
    P.block.resize(M.cutoff() + 1);
    P.block_inv.resize(M.cutoff() + 1);
    P.block[0] = invariant_pairing(M.algebra(), M.top(), Mdag.top()).form;

    for (int d = 1; d <= M.cutoff(); ++d) {
        Matrix B(M.dim(d), Mdag.dim(d));
        for (int j = 0; j < M.dim(d); ++j) {
            const auto& [mono, k] = M.verma_basis(d)[M.quotient_column(d, j)];
            auto [n, a] = mono.f.front();
            Mono rest;
            rest.f.assign(mono.f.begin() + 1, mono.f.end());
            // locate (rest, k) in the Verma basis of degree d-n and reduce
            Vec lift(M.verma_dim(d - n), Rat(0));
            int pos = -1;
            const auto& vb = M.verma_basis(d - n);
            for (int i = 0; i < int(vb.size()); ++i)
                if (vb[i].first == rest && vb[i].second == k) {
                    pos = i;
                    break;
                }
            if (pos < 0) throw std::logic_error("build_pairing: stripped monomial not found");
            lift[pos] = Rat(1);
            Vec r = M.reduce(d - n, lift);
            // row_j = -(r^T B_{d-n}) A  with  A = X_a(n) on the dagger module
            Vec rb(Mdag.dim(d - n), Rat(0));
            for (int c = 0; c < Mdag.dim(d - n); ++c)
                for (int i = 0; i < M.dim(d - n); ++i) rb[c] += r[i] * P.block[d - n].at(i, c);
            const Matrix& A = Mdag.mode(a, n, d);
            for (int c = 0; c < Mdag.dim(d); ++c) {
                Rat s(0);
                for (int i = 0; i < Mdag.dim(d - n); ++i) s += rb[i] * A.at(i, c);
                B.at(j, c) = -s;
            }
        }
        P.block[d] = std::move(B);
    }
    for (int d = 0; d <= M.cutoff(); ++d) {
        auto inv = inverse(P.block[d]);
        if (!inv) throw std::logic_error("build_pairing: degenerate degree block");
        P.block_inv[d] = std::move(*inv);
    }
    return P;
}

ScaledOp coordinate_change_operator(const GradedModule& M, const FormalSeries& h) {
    VectorField l = formal_log(h, M.cutoff() + 2);
    // The factorization h = (a xi) o flow(tail) yields the operator
    // exp(-T[tail]) a^{-L_0}; pulling the scale to the left conjugates each
    // tail mode k by a^{-k}, keeping every entry rational.
    FormalSeries twisted = FormalSeries::zero(l.tail.order());
    for (const auto& [e, c] : l.tail.terms()) twisted.set(e, c * rat_pow(l.scale, -(e - 1)));
    Matrix t = M.t_op(twisted);
    // T strictly lowers degree, so the exponential truncates exactly.
    Matrix acc = Matrix::identity(M.total_dim());
    Matrix pw = Matrix::identity(M.total_dim());
    Rat fact(1);
    for (int k = 1; k <= M.cutoff(); ++k) {
        pw = pw * t;
        if (pw.is_zero()) break;
        fact *= -k;
        acc = acc + pw * (Rat(1) / fact);
    }
    return ScaledOp{l.scale, std::move(acc)};
}

Matrix conjugate_by_scale(const GradedModule& M, const Rat& b, const Matrix& u) {
    Matrix out(u.rows(), u.cols());
    for (int d = 0; d <= M.cutoff(); ++d)
        for (int e = 0; e <= M.cutoff(); ++e) {
            Rat f = rat_pow(b, d - e);
            for (int i = 0; i < M.dim(d); ++i)
                for (int j = 0; j < M.dim(e); ++j) {
                    const Rat& v = u.at(M.offset(d) + i, M.offset(e) + j);
                    if (!is_zero(v)) out.at(M.offset(d) + i, M.offset(e) + j) = f * v;
                }
        }
    return out;
}

ScaledOp compose_ops(const GradedModule& M, const ScaledOp& x, const ScaledOp& y) {
    // a^{-L0} U b^{-L0} V = (ab)^{-L0} (b^{L0} U b^{-L0}) V
    return ScaledOp{x.scale * y.scale, conjugate_by_scale(M, y.scale, x.op) * y.op};
}

ScaledOp invert_op(const GradedModule& M, const ScaledOp& x) {
    auto inv = inverse(x.op);
    if (!inv) throw std::invalid_argument("invert_op: singular operator");
    Rat s = Rat(1) / x.scale;
    return ScaledOp{s, conjugate_by_scale(M, s, *inv)};
}

}  // namespace vacua
