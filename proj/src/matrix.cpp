#include "vacua/matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace vacua {

Rat dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    Rat s(0);
    for (size_t i = 0; i < a.size(); ++i)
        if (!vacua::is_zero(a[i]) && !vacua::is_zero(b[i])) s += a[i] * b[i];
    return s;
}

void axpy(Vec& y, const Rat& c, const Vec& x) {
    if (y.size() != x.size()) throw std::invalid_argument("axpy: size mismatch");
    if (vacua::is_zero(c)) return;
    for (size_t i = 0; i < x.size(); ++i)
        if (!vacua::is_zero(x[i])) y[i] += c * x[i];
}

bool vec_is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& r) { return is_zero(r); });
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matmul: shape mismatch");
    Matrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Rat& v = at(i, k);
            if (vacua::is_zero(v)) continue;
            for (int j = 0; j < o.cols_; ++j)
                if (!vacua::is_zero(o.at(k, j))) r.at(i, j) += v * o.at(k, j);
        }
    return r;
}

Vec Matrix::operator*(const Vec& v) const {
    if (int(v.size()) != cols_) throw std::invalid_argument("matvec: shape mismatch");
    Vec r(rows_, Rat(0));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (!vacua::is_zero(at(i, j)) && !vacua::is_zero(v[j])) r[i] += at(i, j) * v[j];
    return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matadd: shape mismatch");
    Matrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matsub: shape mismatch");
    Matrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

Matrix Matrix::operator*(const Rat& c) const {
    Matrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * c;
    return r;
}

bool Matrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Rat& r) { return vacua::is_zero(r); });
}

int rref(Matrix& m, std::vector<int>* pivot_cols) {
    int rank = 0;
    for (int col = 0; col < m.cols() && rank < m.rows(); ++col) {
        int piv = -1;
        for (int i = rank; i < m.rows(); ++i)
            if (!vacua::is_zero(m.at(i, col))) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (int j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(rank, j));
        Rat inv = Rat(1) / m.at(rank, col);
        for (int j = col; j < m.cols(); ++j) m.at(rank, j) *= inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == rank || is_zero(m.at(i, col))) continue;
            Rat f = m.at(i, col);
            for (int j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(rank, j);
        }
        if (pivot_cols) pivot_cols->push_back(col);
        ++rank;
    }
    return rank;
}

int rank(Matrix m) { return rref(m); }

std::vector<Vec> kernel_basis(const Matrix& m_in) {
    Matrix m = m_in;
    std::vector<int> piv;
    int r = rref(m, &piv);
    std::vector<bool> is_piv(m.cols(), false);
    for (int c : piv) is_piv[c] = true;
    std::vector<Vec> basis;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_piv[f]) continue;
        Vec v(m.cols(), Rat(0));
        v[f] = 1;
        for (int i = 0; i < r; ++i) v[piv[i]] = -m.at(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    int n = m.rows();
    Matrix aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = 1;
    }
    if (rref(aug) != n) return std::nullopt;
    // rref pivots land on the left block iff m is invertible
    for (int i = 0; i < n; ++i)
        if (aug.at(i, i) != Rat(1)) return std::nullopt;
    Matrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
    return inv;
}

std::optional<Vec> solve(const Matrix& m, const Vec& b) {
    if (int(b.size()) != m.rows()) throw std::invalid_argument("solve: shape mismatch");
    Matrix aug(m.rows(), m.cols() + 1);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols()) = b[i];
    }
    std::vector<int> piv;
    int r = rref(aug, &piv);
    if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;  // inconsistent
    Vec x(m.cols(), Rat(0));
    for (int i = 0; i < r; ++i) x[piv[i]] = aug.at(i, m.cols());
    return x;
}

void SparseVec::add(int col, const Rat& v) {
    if (vacua::is_zero(v)) return;
    auto it = std::lower_bound(nz.begin(), nz.end(), col,
                               [](const auto& p, int c) { return p.first < c; });
    if (it != nz.end() && it->first == col) {
        it->second += v;
        if (vacua::is_zero(it->second)) nz.erase(it);
    } else {
        nz.insert(it, {col, v});
    }
}

Vec SparseVec::dense(int cols) const {
    Vec v(cols, Rat(0));
    for (const auto& [c, x] : nz) v[c] = x;
    return v;
}

SparseVec SparseVec::from_dense(const Vec& v) {
    SparseVec s;
    for (int i = 0; i < int(v.size()); ++i)
        if (!vacua::is_zero(v[i])) s.nz.emplace_back(i, v[i]);
    return s;
}

namespace {
// r -= c * p, sparse merge
void sparse_axpy(SparseVec& r, const Rat& c, const SparseVec& p) {
    if (vacua::is_zero(c)) return;
    SparseVec out;
    out.nz.reserve(r.nz.size() + p.nz.size());
    size_t i = 0, j = 0;
    while (i < r.nz.size() || j < p.nz.size()) {
        if (j == p.nz.size() || (i < r.nz.size() && r.nz[i].first < p.nz[j].first)) {
            out.nz.push_back(r.nz[i++]);
        } else if (i == r.nz.size() || p.nz[j].first < r.nz[i].first) {
            out.nz.emplace_back(p.nz[j].first, -c * p.nz[j].second);
            ++j;
        } else {
            Rat v = r.nz[i].second - c * p.nz[j].second;
            if (!vacua::is_zero(v)) out.nz.emplace_back(r.nz[i].first, std::move(v));
            ++i, ++j;
        }
    }
    r = std::move(out);
}
}  // namespace

bool RowEchelon::add_row(SparseVec row) {
    while (!row.empty()) {
        int lead = row.nz.front().first;
        if (lead >= cols_) throw std::out_of_range("RowEchelon: column out of range");
        auto it = rows_.find(lead);
        if (it == rows_.end()) {
            Rat inv = Rat(1) / row.nz.front().second;
            for (auto& [c, v] : row.nz) v *= inv;
            rows_.emplace(lead, std::move(row));
            reduced_ = false;
            return true;
        }
        sparse_axpy(row, row.nz.front().second, it->second);
    }
    return false;
}

void RowEchelon::back_substitute() {
    if (reduced_) return;
    for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
        for (auto jt = rows_.begin(); jt->first != it->first; ++jt) {
            auto& row = jt->second;
            auto pos = std::lower_bound(row.nz.begin(), row.nz.end(), it->first,
                                        [](const auto& p, int c) { return p.first < c; });
            if (pos != row.nz.end() && pos->first == it->first)
                sparse_axpy(row, pos->second, it->second);
        }
    }
    reduced_ = true;
}

std::vector<Vec> RowEchelon::kernel() {
    back_substitute();
    std::vector<Vec> basis;
    for (int f = 0; f < cols_; ++f) {
        if (rows_.count(f)) continue;
        Vec v(cols_, Rat(0));
        v[f] = 1;
        for (const auto& [p, row] : rows_) {
            auto pos = std::lower_bound(row.nz.begin(), row.nz.end(), f,
                                        [](const auto& q, int c) { return q.first < c; });
            if (pos != row.nz.end() && pos->first == f) v[p] = -pos->second;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace vacua
