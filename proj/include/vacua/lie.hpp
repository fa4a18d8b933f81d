#pragma once

// Finite-dimensional simple Lie algebra layer, A-series.
//
// The algebra is realized by traceless (r+1)x(r+1) matrices over Rat with the
// invariant form (X,Y) = Tr(XY); this normalizes the highest root theta to
// (theta,theta) = 2.  Weights are held in fundamental-weight coordinates, so
// dominant integral weights are vectors of nonnegative integers and the form
// on weight space is the inverse Cartan matrix.

#include <string>
#include <vector>

#include "vacua/matrix.hpp"
#include "vacua/rational.hpp"

namespace vacua {

using Weight = std::vector<long>;  // fundamental-weight coordinates

struct LieAlgebra {
    char series;       // 'A'
    int rank;          // r
    int n;             // r + 1, size of defining matrices
    int dim;           // (r+1)^2 - 1
    int dual_coxeter;  // r + 1

    Matrix cartan;       // r x r
    Matrix weight_form;  // inverse Cartan: (omega_i, omega_j)

    // Basis order: E_{ij} for i<j lex, then H_1..H_r, then E_{ji} for i<j lex.
    std::vector<Matrix> basis;              // defining-rep matrices
    std::vector<std::string> basis_names;
    std::vector<Weight> basis_ad_weight;    // ad-action weight of each element
    Matrix form;      // dim x dim Gram matrix of the invariant form
    Matrix form_inv;  // yields the dual basis for Sugawara sums

    Weight theta;     // highest root
    Weight rho;       // all-ones
    int theta_index;  // basis index of the theta root vector

    int cartan_begin() const { return dim_raise(); }
    int dim_raise() const { return n * (n - 1) / 2; }

    // Coordinates of a traceless matrix in the fixed basis.
    Vec coords(const Matrix& x) const;

    Rat pair_weights(const Weight& a, const Weight& b) const;
    Rat theta_pairing(const Weight& a) const { return pair_weights(theta, a); }
};

LieAlgebra build_lie_data(char series, int rank);

// Dominant integral weights with (theta, lambda) <= level, lexicographic.
std::vector<Weight> label_set(const LieAlgebra& g, long level);

// Involution lambda -> -w0(lambda); coordinate reversal for the A-series.
Weight dagger(const Weight& w);

bool weight_in_label_set(const LieAlgebra& g, const Weight& w, long level);

// ((lambda, lambda) + 2 (lambda, rho)) / (2 (dual_coxeter + level))
Rat conformal_weight(const LieAlgebra& g, const Weight& lambda, long level);

struct FiniteModule {
    Weight highest;
    int dim;
    std::vector<Weight> weights;   // per basis vector
    std::vector<Matrix> action;    // per lie-algebra basis element
    int highest_index;
    int lowest_index;
};

// Irreducible module with highest weight lambda, exact rational matrices.
FiniteModule irrep(const LieAlgebra& g, const Weight& lambda);

struct InvariantPairing {
    Matrix form;        // B(u_i, v_j) on V_lambda x V_dagger
    Matrix invariant;   // coefficients of the invariant vector in V_lambda (x) V_dagger
};

// Unique-up-to-scale invariant bilinear pairing, normalized so the invariant
// vector has pairing value 1 and positive highest(x)lowest coefficient.
InvariantPairing invariant_pairing(const LieAlgebra& g, const FiniteModule& v,
                                   const FiniteModule& vdag);

}  // namespace vacua
