#pragma once

#include "vacua/affine.hpp"

#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace vacua {

// The constant function 1 (pole < 0) or (z - q_{pole})^{-order}.  Together
// these span the functions on the line that are regular away from the marked
// points and at infinity: N*K + 1 of them for poles of order at most K.
struct RationalFunction {
    int pole = -1;
    int order = 0;
};

// N pairwise-distinct finite rational points carrying labels, each with the
// formal coordinate xi_j = z - q_j by default; a nonempty coords vector
// re-coordinatizes point j to h_j(xi_j).
struct PointedSphere {
    std::vector<Rat> points;
    std::vector<Weight> labels;
    std::vector<FormalSeries> coords;  // empty: identity at every point

    int size() const { return int(points.size()); }
};

PointedSphere make_sphere(std::vector<Rat> points, std::vector<Weight> labels);
PointedSphere standard_sphere(std::vector<Weight> labels);  // points 0..N-1

// {1} then (z - q_j)^{-k}, j-major, k = 1..K.
std::vector<RationalFunction> function_basis(const std::vector<Rat>& points, int K);

// Laurent expansion of f in the coordinate at point j, certified through
// exponent `order`; exact monomial at the pole's own point under identity
// coordinates, composed with the inverse coordinate otherwise.
FormalSeries expand_function(const PointedSphere& S, const RationalFunction& f, int j, int order);

// Shared store of graded modules keyed by (label, cutoff).
class ModulePool {
public:
    ModulePool(const LieAlgebra& g, long level) : g_(&g), level_(level) {}

    const LieAlgebra& algebra() const { return *g_; }
    long level() const { return level_; }
    const GradedModule& get(const Weight& lambda, int cutoff);

private:
    const LieAlgebra* g_;
    long level_;
    std::map<std::pair<Weight, int>, std::unique_ptr<GradedModule>> cache_;
};

// Truncated tensor product over all multidegrees of bounded total degree,
// flattened deterministically: blocks ordered by total degree descending then
// lexicographically, slot indices row-major inside a block.  The descending
// order makes streaming elimination consume the deepest states first.
struct TensorWindow {
    std::vector<const GradedModule*> slot;
    int total = 0;
    std::vector<std::vector<int>> degrees;  // multidegree per block
    std::vector<int> offset;                // flat offset per block
    std::map<std::vector<int>, int> block_of;
    int dim = 0;

    static TensorWindow build(std::vector<const GradedModule*> slots, int total_degree);

    int slots() const { return int(slot.size()); }
    int block_dim(int b) const;
    int index(int b, const std::vector<int>& iv) const;
    int flat_index(const std::vector<int>& dv, const std::vector<int>& iv) const;
    // (multidegree, per-slot basis indices) of a flat position.
    std::pair<std::vector<int>, std::vector<int>> decode(int flat) const;
};

// Rows express <Psi|(X (x) f)|v> = 0 over the window; a row is generated only
// when every contributing mode keeps all intermediate states inside the
// window, i.e. states of total degree at most D - k for a pole of order k,
// so every stored row is exact.  Rows conserve the total Cartan weight and
// the Cartan zero-mode rows force covectors to vanish off the zero-weight
// sector, so only rows with sector-0 image are materialized and solutions are
// sought with support on `sector` (flat indices of the zero-weight states).
struct GaugeSystem {
    TensorWindow window;
    std::vector<SparseVec> rows;
    int pole_order;  // poles of order <= this contributed rows
    std::vector<int> sector;
};

GaugeSystem gauge_matrix(ModulePool& pool, const PointedSphere& S, int K, int D);

// Common null space of the rows over covectors supported on the zero-weight
// sector, inflated back to full window coordinates.
std::vector<Vec> gauge_kernel(const GaugeSystem& sys);

// Covector on a TensorWindow, flat coordinates.
struct VacuaElement {
    Vec coeffs;
};

struct VacuaBasis {
    PointedSphere sphere;
    int D = 0, K = 0;   // accepted truncation
    int dim_next = 0;   // dimension recomputed at (D+1, K+1); certificate
    TensorWindow window;
    std::vector<VacuaElement> elements;

    int dim() const { return int(elements.size()); }
};

// Null space of the gauge system over the covectors of the window.  The
// dimension is accepted once two successive truncations agree (and, for three
// rank-one points, once it matches the closed fusion rule); otherwise (D, K)
// escalate a bounded number of times before an "unstabilized" error reporting
// both dimensions.
VacuaBasis vacua_basis(ModulePool& pool, const PointedSphere& S, int D, int K);

// 1 iff |a-b| <= c <= min(a+b, 2*level - a - b) and a + b + c is even.
long sl2_fusion_rule(long level, long a, long b, long c);

// Dimension at the standard three points (0, 1, 2) with labels (a, b, c).
int fusion_dim(ModulePool& pool, const Weight& a, const Weight& b, const Weight& c);

// Adjoins a new point with label 0 and lifts every element: the lift is the
// unique combination of the enlarged basis restricting to the given element
// under v |-> v (x) |0>.  Dimensions must agree.
VacuaBasis propagate(ModulePool& pool, const VacuaBasis& basis, const Rat& q_new);

// Transforms a covector on `window` satisfying the gauge conditions of S into
// one for S re-coordinatized by eta_j = h_j(current coordinate), acting slot
// by slot through the scaled coordinate-change operators with the constant
// scale^{-Delta} prefactor dropped (an overall factor on the line the element
// spans).  The result is checked against freshly generated gauge rows for the
// transformed expansions.
VacuaElement apply_coordinate_change(const PointedSphere& S, const TensorWindow& window,
                                     const VacuaElement& psi, const std::vector<FormalSeries>& h,
                                     int K);

}  // namespace vacua
