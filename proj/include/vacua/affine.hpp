#pragma once

// Degree-truncated integrable highest-weight modules of the affine algebra
// g (x) C((xi)) + C c at a fixed level: per-degree bases obtained as a
// generalized Verma module modulo the null submodule generated by the
// singular vector X_theta(-1)^{level-(theta,lambda)+1} |lambda>, exact mode
// action matrices, Sugawara Virasoro operators, the pairing with the
// dagger-weight module, and formal coordinate-change operators.

#include <map>
#include <utility>
#include <vector>

#include "vacua/formal_series.hpp"
#include "vacua/lie.hpp"
#include "vacua/matrix.hpp"

namespace vacua {

// Product X_{a1}(-n1) ... X_{ak}(-nk) of negative modes in normal form:
// factors sorted by mode descending, then by basis index ascending.
struct Mono {
    std::vector<std::pair<int, int>> f;  // (n, a) with n >= 1, meaning X_a(-n)

    int degree() const {
        int d = 0;
        for (const auto& [n, a] : f) d += n;
        return d;
    }
    bool operator<(const Mono& o) const { return f < o.f; }
    bool operator==(const Mono& o) const { return f == o.f; }
};

// (n, a) precedes (n', a') inside a normal-form monomial.
inline bool factor_before(const std::pair<int, int>& x, const std::pair<int, int>& y) {
    return x.first > y.first || (x.first == y.first && x.second <= y.second);
}

class GradedModule {
public:
    GradedModule(const LieAlgebra& g, long level, const Weight& lambda, int cutoff);

    const LieAlgebra& algebra() const { return *g_; }
    long level() const { return level_; }
    const Weight& label() const { return lambda_; }
    int cutoff() const { return cutoff_; }
    const FiniteModule& top() const { return rep_; }
    const Rat& conformal_weight() const { return delta_; }

    int dim(int d) const;
    int offset(int d) const;  // position of H(d) inside the flat sum over degrees
    int total_dim() const { return total_; }

    // Verma data, exposed for the pairing recursion and for tests.
    const std::vector<std::pair<Mono, int>>& verma_basis(int d) const;
    int verma_dim(int d) const { return int(verma_basis(d).size()); }
    // Index of the quotient basis vector d, j inside the Verma basis of degree d.
    int quotient_column(int d, int j) const;
    // Quotient coordinates of a Verma coordinate vector at degree d.
    Vec reduce(int d, const Vec& verma_coords) const;
    int null_dim(int d) const;

    // Cartan weight of the j-th basis state of H(d), in fundamental-weight
    // coordinates; basis states are weight vectors because the retained Verma
    // monomials are.
    Weight state_weight(int d, int j) const;

    // Matrix of X_a(n) : H(d) -> H(d-n).  Degrees outside [0, cutoff] are a
    // truncation error, except that a target degree < 0 returns the zero map
    // onto a zero-dimensional space.
    const Matrix& mode(int a, int n, int d) const;
    Vec act(int a, int n, int d, const Vec& v) const;

    // Sugawara operator L_n : H(d) -> H(d-n); the normal-ordered sum over
    // split modes is finite on each graded piece, with every intermediate
    // degree retained inside [0, cutoff] whenever source and target are.
    Matrix sugawara(int n, int d) const;

    // T[l] = sum_k l_k L_k for l(xi) = sum_k l_k xi^{k+1}, as one matrix on
    // the flat sum of the retained degrees.  Modes with k >= 1 lower degree
    // and stay inside the window; a term with k < 0 writes only the blocks
    // whose source and target degrees are both retained, and is accepted
    // only with allow_raising = true.
    Matrix t_op(const FormalSeries& l, bool allow_raising = false) const;

private:
    void build_bases();
    void build_null();
    void build_modes();

    const LieAlgebra* g_;
    long level_;
    Weight lambda_;
    int cutoff_;
    FiniteModule rep_;
    Rat delta_;

    std::vector<std::vector<std::pair<Mono, int>>> vbasis_;      // per degree
    std::vector<std::map<std::pair<Mono, int>, int>> vindex_;    // per degree
    std::vector<Matrix> null_rows_;                              // RREF rows per degree
    std::vector<std::vector<int>> null_pivots_;                  // pivot Verma columns
    std::vector<std::vector<int>> quot_cols_;                    // non-pivot Verma columns
    std::vector<int> dims_;
    std::vector<int> offsets_;
    int total_ = 0;

    // modes_[a][n + cutoff][d] : H(d) -> H(d-n), cached on demand is not
    // needed: all are assembled during construction.
    std::vector<std::vector<std::vector<Matrix>>> modes_;
};

// Formal sum of terms X_a (x) xi^n plus a central summand.
struct ModeTerm {
    int a;
    int n;
    Rat c;
};
struct ModePolynomial {
    std::vector<ModeTerm> terms;
    Rat central{0};
};

// Bracket per the affine commutation relations:
// [X(n), Y(m)] = [X,Y](n+m) + c (X,Y) n delta_{n+m,0}.
ModePolynomial bracket(const LieAlgebra& g, const ModePolynomial& x, const ModePolynomial& y);

// Apply a mode polynomial to a vector at degree d; the central element acts
// as level * Id.  Returns per-degree components keyed by target degree.
std::map<int, Vec> apply_mode_polynomial(const GradedModule& M, const ModePolynomial& p, int d,
                                         const Vec& v);

// Per-degree pairing matrices H_lambda(d) x H_{lambda^dagger}(d) -> Rat,
// determined by adjointness (X(n)u|v) + (u|X(-n)v) = 0, degree
// orthogonality, and value 1 on the invariant vector of the degree-0 block.
struct ModulePairing {
    std::vector<Matrix> block;      // B_d, dim_lambda(d) x dim_dagger(d)
    std::vector<Matrix> block_inv;  // B_d^{-1}
};
ModulePairing build_pairing(const GradedModule& M, const GradedModule& Mdag);

// Coordinate-change operator in factored form a^{-L_0} U: the scale acts on
// H(d) as a^{-(Delta + d)} (kept symbolic), U is an exact matrix on the flat
// degree sum.  Products follow from moving scales across matrices, which
// multiplies a (d', d) block by b^{d' - d}.
struct ScaledOp {
    Rat scale{1};
    Matrix op;
};

ScaledOp coordinate_change_operator(const GradedModule& M, const FormalSeries& h);
Matrix conjugate_by_scale(const GradedModule& M, const Rat& b, const Matrix& u);
ScaledOp compose_ops(const GradedModule& M, const ScaledOp& x, const ScaledOp& y);
ScaledOp invert_op(const GradedModule& M, const ScaledOp& x);

}  // namespace vacua
