#pragma once

// Exact dense/sparse linear algebra over Rat: row reduction, kernels,
// inverses and a streaming row-echelon accumulator for large constraint
// systems whose rows are generated on the fly.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "vacua/rational.hpp"

namespace vacua {

using Vec = std::vector<Rat>;

Rat dot(const Vec& a, const Vec& b);
void axpy(Vec& y, const Rat& c, const Vec& x);  // y += c*x
bool vec_is_zero(const Vec& v);

class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, Rat(0)) {}
    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rat& at(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const Rat& at(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    Matrix transpose() const;
    Matrix operator*(const Matrix& o) const;
    Vec operator*(const Vec& v) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(const Rat& c) const;
    bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
    bool operator!=(const Matrix& o) const { return !(*this == o); }
    bool is_zero() const;

private:
    int rows_, cols_;
    std::vector<Rat> a_;
};

// In-place reduced row echelon form; returns rank, appends pivot columns.
int rref(Matrix& m, std::vector<int>* pivot_cols = nullptr);

int rank(Matrix m);

// Basis of {x : m x = 0}, one vector per non-pivot column, deterministic order.
std::vector<Vec> kernel_basis(const Matrix& m);

std::optional<Matrix> inverse(const Matrix& m);

// One solution of m x = b, or nullopt if inconsistent.
std::optional<Vec> solve(const Matrix& m, const Vec& b);

// Sparse row: strictly increasing column indices, nonzero values.
struct SparseVec {
    std::vector<std::pair<int, Rat>> nz;

    void add(int col, const Rat& v);  // accumulate, keeps invariant
    bool empty() const { return nz.empty(); }
    Vec dense(int cols) const;
    static SparseVec from_dense(const Vec& v);
};

// Streaming Gaussian eliminator over a fixed column count.  Rows are folded
// in one at a time; rank and null space are available at any point.
class RowEchelon {
public:
    explicit RowEchelon(int cols) : cols_(cols) {}

    // Returns true when the row increased the rank.
    bool add_row(SparseVec row);

    int rank() const { return int(rows_.size()); }
    int cols() const { return cols_; }
    int nullity() const { return cols_ - rank(); }

    // Basis of the common null space of all added rows.
    std::vector<Vec> kernel();

private:
    void back_substitute();

    int cols_;
    std::map<int, SparseVec> rows_;  // pivot column -> row with that pivot, leading 1
    bool reduced_ = true;
};

}  // namespace vacua
