#include "vacua/sphere.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace vacua {

namespace {

void check_points(const std::vector<Rat>& points) {
    if (points.empty()) throw std::invalid_argument("at least one marked point is required");
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j]) throw std::invalid_argument("marked points must be pairwise distinct");
}

}  // namespace

PointedSphere make_sphere(std::vector<Rat> points, std::vector<Weight> labels) {
    check_points(points);
    if (points.size() != labels.size())
        throw std::invalid_argument("one label per marked point is required");
    return PointedSphere{std::move(points), std::move(labels), {}};
}

PointedSphere standard_sphere(std::vector<Weight> labels) {
    std::vector<Rat> pts;
    for (size_t j = 0; j < labels.size(); ++j) pts.emplace_back(long(j));
    return make_sphere(std::move(pts), std::move(labels));
}

std::vector<RationalFunction> function_basis(const std::vector<Rat>& points, int K) {
    check_points(points);
    if (K < 1) throw std::invalid_argument("pole order bound must be at least 1");
    std::vector<RationalFunction> out;
    out.push_back(RationalFunction{-1, 0});
    for (int j = 0; j < int(points.size()); ++j)
        for (int k = 1; k <= K; ++k) out.push_back(RationalFunction{j, k});
    return out;
}

FormalSeries expand_function(const PointedSphere& S, const RationalFunction& f, int j, int order) {
    if (j < 0 || j >= S.size()) throw std::invalid_argument("expansion point out of range");
    const bool plain = S.coords.empty();
    if (f.pole < 0) return FormalSeries(Rat(1));
    int margin = plain ? order : order + f.order + 6;
    FormalSeries base = pole_expansion(S.points[j], S.points[f.pole], f.order, margin);
    if (plain) return base;
    FormalSeries hinv = S.coords[j].inverse_under_composition(margin);
    return base.compose(hinv);
}

const GradedModule& ModulePool::get(const Weight& lambda, int cutoff) {
    auto key = std::make_pair(lambda, cutoff);
    auto it = cache_.find(key);
    if (it == cache_.end())
        it = cache_.emplace(key, std::make_unique<GradedModule>(*g_, level_, lambda, cutoff)).first;
    return *it->second;
}

TensorWindow TensorWindow::build(std::vector<const GradedModule*> slots, int total_degree) {
    TensorWindow w;
    w.slot = std::move(slots);
    w.total = total_degree;
    const int n = w.slots();
    std::vector<int> dv(n, 0);
    // All multidegrees with bounded total, deepest blocks first.
    std::vector<std::vector<int>> all;
    std::function<void(int, int)> gen = [&](int pos, int left) {
        if (pos == n) {
            all.push_back(dv);
            return;
        }
        for (int d = 0; d <= left; ++d) {
            dv[pos] = d;
            gen(pos + 1, left - d);
        }
        dv[pos] = 0;
    };
    gen(0, total_degree);
    std::sort(all.begin(), all.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
        int sa = 0, sb = 0;
        for (int x : a) sa += x;
        for (int x : b) sb += x;
        if (sa != sb) return sa > sb;
        return a < b;
    });
    w.degrees = std::move(all);
    w.offset.resize(w.degrees.size());
    for (int b = 0; b < int(w.degrees.size()); ++b) {
        w.offset[b] = w.dim;
        w.block_of[w.degrees[b]] = b;
        int prod = 1;
        for (int j = 0; j < n; ++j) prod *= w.slot[j]->dim(w.degrees[b][j]);
        w.dim += prod;
    }
    return w;
}

int TensorWindow::block_dim(int b) const {
    int prod = 1;
    for (int j = 0; j < slots(); ++j) prod *= slot[j]->dim(degrees[b][j]);
    return prod;
}

int TensorWindow::index(int b, const std::vector<int>& iv) const {
    int idx = 0;
    for (int j = 0; j < slots(); ++j) idx = idx * slot[j]->dim(degrees[b][j]) + iv[j];
    return offset[b] + idx;
}

int TensorWindow::flat_index(const std::vector<int>& dv, const std::vector<int>& iv) const {
    auto it = block_of.find(dv);
    if (it == block_of.end()) throw std::out_of_range("multidegree outside the window");
    return index(it->second, iv);
}

std::pair<std::vector<int>, std::vector<int>> TensorWindow::decode(int flat) const {
    int b = int(std::upper_bound(offset.begin(), offset.end(), flat) - offset.begin()) - 1;
    int rest = flat - offset[b];
    std::vector<int> iv(slots(), 0);
    for (int j = slots() - 1; j >= 0; --j) {
        int dj = slot[j]->dim(degrees[b][j]);
        iv[j] = rest % dj;
        rest /= dj;
    }
    return {degrees[b], iv};
}

namespace {

// Rows of the gauge system over an explicit window; slots may be built at any
// cutoff >= the window total.
GaugeSystem gauge_rows(std::vector<const GradedModule*> slots, const PointedSphere& S, int K,
                       int total) {
    const LieAlgebra& g = slots[0]->algebra();
    const int N = S.size();
    GaugeSystem sys;
    sys.window = TensorWindow::build(std::move(slots), total);
    sys.pole_order = std::min(K, total);
    const TensorWindow& W = sys.window;

    std::vector<RationalFunction> funcs = function_basis(S.points, K);
    for (const RationalFunction& f : funcs) {
        if (f.order > sys.pole_order) continue;
        // Expansion of f at every point, certified beyond any contributing mode.
        std::vector<FormalSeries> exp_at;
        exp_at.reserve(N);
        for (int j = 0; j < N; ++j) exp_at.push_back(expand_function(S, f, j, total + 1));
        for (int a = 0; a < g.dim; ++a) {
            for (int b = 0; b < int(W.degrees.size()); ++b) {
                const std::vector<int>& dv = W.degrees[b];
                int sum = 0;
                for (int x : dv) sum += x;
                if (sum + f.order > total) continue;  // raising would leave the window
                const int bdim = W.block_dim(b);
                std::vector<int> iv(N, 0);
                for (int r = 0; r < bdim; ++r) {
                    // Row for the state (dv, iv).
                    std::map<int, Rat> acc;
                    for (int j = 0; j < N; ++j) {
                        std::vector<int> dv2 = dv;
                        std::vector<int> iv2 = iv;
                        for (const auto& [n, c] : exp_at[j].terms()) {
                            if (n > dv[j]) break;
                            const Matrix& m = W.slot[j]->mode(a, n, dv[j]);
                            if (m.rows() == 0) continue;
                            dv2[j] = dv[j] - n;
                            int blk = W.block_of.at(dv2);
                            for (int t = 0; t < m.rows(); ++t) {
                                const Rat& mv = m.at(t, iv[j]);
                                if (sgn(mv) == 0) continue;
                                iv2[j] = t;
                                acc[W.index(blk, iv2)] += c * mv;
                            }
                            iv2[j] = iv[j];
                        }
                        dv2[j] = dv[j];
                    }
                    SparseVec row;
                    for (auto& [col, val] : acc)
                        if (sgn(val) != 0) row.nz.emplace_back(col, val);
                    if (!row.empty()) sys.rows.push_back(std::move(row));
                    // Advance the odometer over per-slot basis indices.
                    for (int j = N - 1; j >= 0; --j) {
                        if (++iv[j] < W.slot[j]->dim(dv[j])) break;
                        iv[j] = 0;
                    }
                }
            }
        }
    }
    return sys;
}

std::vector<const GradedModule*> fetch_slots(ModulePool& pool, const PointedSphere& S,
                                             int cutoff) {
    std::vector<const GradedModule*> slots;
    slots.reserve(S.size());
    for (const Weight& w : S.labels) slots.push_back(&pool.get(w, cutoff));
    return slots;
}

std::vector<Vec> kernel_of(const GaugeSystem& sys) {
    RowEchelon ech(sys.window.dim);
    for (const SparseVec& row : sys.rows) ech.add_row(row);
    return ech.kernel();
}

}  // namespace

GaugeSystem gauge_matrix(ModulePool& pool, const PointedSphere& S, int K, int D) {
    if (K < 1 || D < 0) throw std::invalid_argument("truncation parameters out of range");
    return gauge_rows(fetch_slots(pool, S, std::max(D, 1)), S, K, D);
}

long sl2_fusion_rule(long level, long a, long b, long c) {
    if ((a + b + c) % 2 != 0) return 0;
    long lo = std::abs(a - b);
    long hi = std::min(a + b, 2 * level - a - b);
    return (lo <= c && c <= hi) ? 1 : 0;
}

VacuaBasis vacua_basis(ModulePool& pool, const PointedSphere& S, int D, int K) {
    if (D < 1 || K < 1) throw std::invalid_argument("truncation parameters must be at least 1");
    const LieAlgebra& g = pool.algebra();
    for (const Weight& w : S.labels)
        if (!weight_in_label_set(g, w, pool.level()))
            throw std::invalid_argument("label outside the level-" + std::to_string(pool.level()) +
                                        " alcove");
    const bool rule_applies = (S.size() == 3 && g.rank == 1 && S.coords.empty());
    long ruled = 0;
    if (rule_applies)
        ruled = sl2_fusion_rule(pool.level(), S.labels[0][0], S.labels[1][0], S.labels[2][0]);

    const int kEscalations = 4;
    int n_lo = -1, n_hi = -1;
    for (int step = 0; step <= kEscalations; ++step) {
        const int d = D + step, k = K + step;
        std::vector<const GradedModule*> slots = fetch_slots(pool, S, d + 1);
        GaugeSystem lo = gauge_rows(slots, S, k, d);
        std::vector<Vec> ker = kernel_of(lo);
        n_lo = int(ker.size());
        n_hi = int(kernel_of(gauge_rows(slots, S, k + 1, d + 1)).size());
        bool ok = (n_lo == n_hi) && (!rule_applies || n_lo == ruled);
        if (!ok) continue;
        VacuaBasis out;
        out.sphere = S;
        out.D = d;
        out.K = k;
        out.dim_next = n_hi;
        out.window = std::move(lo.window);
        out.elements.reserve(ker.size());
        for (Vec& v : ker) out.elements.push_back(VacuaElement{std::move(v)});
        return out;
    }
    std::ostringstream msg;
    msg << "vacua dimension unstabilized: " << n_lo << " then " << n_hi
        << " at the resource cap (D,K)=(" << (D + kEscalations) << "," << (K + kEscalations)
        << ")";
    throw std::runtime_error(msg.str());
}

int fusion_dim(ModulePool& pool, const Weight& a, const Weight& b, const Weight& c) {
    PointedSphere S = make_sphere({Rat(0), Rat(1), Rat(2)}, {a, b, c});
    return vacua_basis(pool, S, 2, 2).dim();
}

VacuaBasis propagate(ModulePool& pool, const VacuaBasis& basis, const Rat& q_new) {
    for (const Rat& q : basis.sphere.points)
        if (q == q_new) throw std::invalid_argument("propagation point coincides with a marked point");
    PointedSphere S2 = basis.sphere;
    S2.points.push_back(q_new);
    S2.labels.push_back(Weight(pool.algebra().rank, 0));
    if (!S2.coords.empty()) S2.coords.push_back(FormalSeries::monomial(1));

    VacuaBasis lifted = vacua_basis(pool, S2, basis.D, basis.K);
    if (lifted.dim() != basis.dim()) {
        std::ostringstream msg;
        msg << "propagation changed the dimension: " << basis.dim() << " -> " << lifted.dim();
        throw std::logic_error(msg.str());
    }
    // Restriction v |-> v (x) |0> of each enlarged element, as columns.
    Matrix A(basis.window.dim, lifted.dim());
    for (int u = 0; u < basis.window.dim; ++u) {
        auto [dv, iv] = basis.window.decode(u);
        dv.push_back(0);
        iv.push_back(0);
        int col = lifted.window.flat_index(dv, iv);
        for (int e = 0; e < lifted.dim(); ++e) A.at(u, e) = lifted.elements[e].coeffs[col];
    }
    std::vector<VacuaElement> out;
    out.reserve(basis.dim());
    for (const VacuaElement& psi : basis.elements) {
        auto x = solve(A, psi.coeffs);
        if (!x) throw std::logic_error("propagation lift is inconsistent at this truncation");
        Vec lift(lifted.window.dim, Rat(0));
        for (int e = 0; e < lifted.dim(); ++e) axpy(lift, (*x)[e], lifted.elements[e].coeffs);
        out.push_back(VacuaElement{std::move(lift)});
    }
    lifted.elements = std::move(out);
    return lifted;
}

namespace {

// psi'(v) = psi(G v) on the window, G acting on slot j as scale^{-d} U by
// blocks; U only lowers the slot degree, so the window absorbs every term.
Vec slot_covector_transform(const TensorWindow& W, int j, const ScaledOp& G, const Vec& psi) {
    const GradedModule& M = *W.slot[j];
    Vec out(W.dim, Rat(0));
    std::vector<int> iv(W.slots(), 0);
    for (int b = 0; b < int(W.degrees.size()); ++b) {
        const std::vector<int>& dv = W.degrees[b];
        const int dj = dv[j];
        const int bdim = W.block_dim(b);
        for (int dp = 0; dp <= dj; ++dp) {
            if (M.dim(dp) == 0) continue;
            std::vector<int> dv2 = dv;
            dv2[j] = dp;
            const int blk = W.block_of.at(dv2);
            const Rat s = rat_pow(G.scale, -dp);
            std::fill(iv.begin(), iv.end(), 0);
            std::vector<int> iv2 = iv;
            for (int r = 0; r < bdim; ++r) {
                Rat acc(0);
                iv2 = iv;
                for (int t = 0; t < M.dim(dp); ++t) {
                    const Rat& uv = G.op.at(M.offset(dp) + t, M.offset(dj) + iv[j]);
                    if (sgn(uv) == 0) continue;
                    iv2[j] = t;
                    acc += uv * psi[W.index(blk, iv2)];
                }
                if (sgn(acc) != 0) out[W.index(b, iv)] += s * acc;
                for (int p = W.slots() - 1; p >= 0; --p) {
                    if (++iv[p] < W.slot[p]->dim(dv[p])) break;
                    iv[p] = 0;
                }
            }
        }
    }
    return out;
}

}  // namespace

VacuaElement apply_coordinate_change(const PointedSphere& S, const TensorWindow& window,
                                     const VacuaElement& psi, const std::vector<FormalSeries>& h,
                                     int K) {
    if (int(h.size()) != S.size()) throw std::invalid_argument("one coordinate change per point");
    if (int(psi.coeffs.size()) != window.dim)
        throw std::invalid_argument("element does not live on the given window");
    Vec cur = psi.coeffs;
    for (int j = 0; j < S.size(); ++j) {
        ScaledOp G = coordinate_change_operator(*window.slot[j], h[j]);
        cur = slot_covector_transform(window, j, G, cur);
    }
    PointedSphere S2 = S;
    if (S2.coords.empty()) S2.coords.assign(S.size(), FormalSeries::monomial(1));
    for (int j = 0; j < S.size(); ++j) S2.coords[j] = h[j].compose(S2.coords[j]);

    GaugeSystem check = gauge_rows(window.slot, S2, K, window.total);
    for (const SparseVec& row : check.rows) {
        Rat v(0);
        for (const auto& [col, val] : row.nz) v += val * cur[col];
        if (sgn(v) != 0)
            throw std::logic_error("transformed element fails a transformed gauge condition");
    }
    return VacuaElement{std::move(cur)};
}

}  // namespace vacua
