#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "fusion/algebra.hpp"
#include "fusion/matrix.hpp"
#include "fusion/rational.hpp"

namespace fusion {

// Defining data of a highest-weight module: central parameters live in the
// presentation, the highest weight and the zero-mode eigenvalues here, and
// the module itself is the Verma cover modulo the listed singular relations.
struct ModuleSpec {
    std::shared_ptr<const AlgebraPresentation> presentation;
    Rat highest_weight;                     // L(0) eigenvalue of the hw vector
    std::map<int, Rat> zero_mode_values;    // generator id -> eigenvalue on the hw vector
    std::vector<AlgebraElement> singular_relations;  // homogeneous lowering elements

    static ModuleSpec virasoro(const Rat& c, const Rat& h,
                               std::vector<AlgebraElement> relations = {});
    static ModuleSpec heisenberg_fock(const Rat& lambda);  // weight lambda^2/2
};

// Element of the module as level-graded coefficient vectors over the reduced
// (quotient) bases.  Levels with no entry are zero.
struct GradedVector {
    std::map<long, std::vector<Rat>> levels;

    bool is_zero() const;
    void add_scaled(long level, size_t index, const Rat& c, size_t dim);
    void add_scaled(const GradedVector& v, const Rat& c);
    bool operator==(const GradedVector& o) const { return levels == o.levels; }
};

// A constructed highest-weight module.  Level data (Verma bases, singular
// submodule, quotient projections) is computed lazily and memoized behind a
// lock; all observable results are independent of evaluation order.
class Module {
public:
    explicit Module(ModuleSpec spec);

    const ModuleSpec& spec() const { return spec_; }
    const AlgebraPresentation& pres() const { return *spec_.presentation; }

    // Verma (PBW) basis words of the given level, in canonical basis order.
    const std::vector<Word>& verma_basis(long level) const;

    // Quotient of the Verma level by the singular submodule at that level.
    const QuotientSpace& level_space(long level) const;

    // Reduced basis labels ("L(-2)L(-1)|hw") of the level; size = dimension.
    std::vector<std::string> level_basis(long level) const;
    size_t level_dim(long level) const;

    std::string word_hw_label(const Word& w) const;

    GradedVector highest_weight_vector() const;

    // Exact mode action with reduction to canonical representatives.
    GradedVector act(const Mode& m, const GradedVector& v) const;

    // Verma-coordinate evaluation of an enveloping-algebra element applied to
    // the highest-weight vector: level -> coefficient vector over verma_basis.
    std::map<long, std::vector<Rat>> evaluate_verma(const AlgebraElement& e) const;

    // Contravariant (Shapovalov) form on the Verma level basis.
    RatMatrix gram_matrix(long level) const;

    // Kernel of the level Gram form, kept only when strictly annihilated by
    // the raising modes x(1), x(2) of every generator; canonical scale.
    std::vector<AlgebraElement> find_singular_vectors(long level) const;

private:
    ModuleSpec spec_;
    mutable std::mutex mutex_;
    mutable std::map<long, std::vector<Word>> verma_cache_;
    mutable std::map<long, std::unique_ptr<QuotientSpace>> space_cache_;

    const std::vector<Word>& verma_basis_locked(long level) const;
};

// Detects singular vectors of the Verma cover up to max_level and returns the
// defining relations (new generators only, not descendants of earlier ones).
std::vector<AlgebraElement> auto_detect_singular(const ModuleSpec& verma_spec, long max_level);

long element_level(const AlgebraElement& e);  // homogeneous lowering elements

}  // namespace fusion
