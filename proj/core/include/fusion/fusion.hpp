#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fusion/coproduct.hpp"
#include "fusion/matrix.hpp"
#include "fusion/module.hpp"

namespace fusion {

// An ordered list of (level, reduced-basis index) module coordinates.
struct SubspaceBasis {
    std::vector<std::pair<long, size_t>> entries;
    std::vector<std::string> labels;
    size_t dim() const { return entries.size(); }
};

// Basis of M / C1(M), where C1(M) is spanned by x(-n) M over all generators x
// and n >= weight(x).  The cutoff must leave at least two empty levels above
// the last surviving one, otherwise NotStabilizedError is thrown.
SubspaceBasis special_subspace(const Module& m, long cutoff);

// Basis of the depth-d quotient: the module modulo the span of all products
// of lowering modes of total level-lowering greater than d.  For modules
// generated by their highest-weight vector this is the span of levels <= d.
SubspaceBasis depth_quotient(const Module& m, long depth, long cutoff);

// Products of coproduct lowering actions of total degree > d applied to every
// basis tensor with headroom.  Their vanishing is the depth-d condition;
// singular-vector reductions of the factors are built into the reduced
// coordinates of the tensor space.
std::vector<TensorElement> depth_relations(const TensorSpace& space, long depth, const Rat& w);

// Translation relations tying the two coproduct gauges together, one per
// lowering mode and basis tensor with headroom.
std::vector<TensorElement> translation_relations(const TensorSpace& space, long depth,
                                                 const Rat& w);

// Full relation set defining the depth-d fusion quotient on the truncation.
std::vector<TensorElement> generate_relations(const TensorSpace& space, long depth, const Rat& w);

struct FusionResult {
    // Computation context, kept for mode actions between quotients.
    std::shared_ptr<const TensorSpace> space;
    std::shared_ptr<const QuotientSpace> quotient;
    std::vector<TensorElement> relations;

    std::vector<std::string> basis;        // representative labels
    std::vector<size_t> rep_coords;        // representative coordinates in `space`
    size_t dimension = 0;
    RatMatrix l0_matrix;                   // column j = image of basis vector j
    JordanReport jordan;
    std::map<Rat, size_t> graded_dims;     // generalized L(0) eigenvalue -> count
    std::vector<std::map<std::string, Rat>> spurious_states;
    size_t relation_count = 0;
    long stabilized_at = 0;
    Rat w;
    long depth = 0;
    std::map<std::string, RatMatrix> zero_modes;  // weight-1 generator zero modes
};

// Depth-d fusion quotient of m1 x m2 at insertion point w, truncated at lmax.
// Runs at lmax and lmax+1 and accepts only if dimension, basis labels, graded
// dimensions and the L(0) matrix repeat; throws NotStabilizedError otherwise.
// Throws InternalCheckError if the projected candidate set
// special_subspace(m1) x depth_quotient(m2, d) fails to span the quotient.
FusionResult fuse(std::shared_ptr<const Module> m1, std::shared_ptr<const Module> m2, long depth,
                  const Rat& w, long lmax);

// Matrix of the coproduct action of x(n) from the source quotient basis to
// the target quotient basis.  Source and target must share modules, w and
// lmax; the action must map the source relation span into the target one
// (checked; a violation reports a depth mismatch).
RatMatrix mode_action(const FusionResult& source, int gen, long n, const FusionResult& target);

// Documented floor for the truncation level of a fusion run.
long fuse_lmax_floor(const Module& m1, const Module& m2, long depth);

}  // namespace fusion
