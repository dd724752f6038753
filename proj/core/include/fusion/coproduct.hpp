#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fusion/module.hpp"

namespace fusion {

// f(t) = t^a (t - w)^b with w a nonzero exact rational.
struct RationalMonomial {
    long a;
    long b;
    Rat w;
};

enum class ExpandAt { zero, infinity };

// First `order` terms of the Laurent expansion of f about t = 0 (ExpandAt::zero,
// powers ascending from t^a) or t = infinity (descending from t^{a+b}).
// Returned as (power of t, coefficient) pairs.
std::vector<std::pair<long, Rat>> iota_expand(const RationalMonomial& f, ExpandAt dir,
                                              size_t order);

// Basis of the level-truncated tensor product of two modules.  Coordinates are
// ordered by total level, then by second-factor level, then by basis indices;
// this makes the lexicographically earliest coordinates the ones supported on
// the lowest levels with the first factor carrying the excess.
class TensorSpace {
public:
    TensorSpace(std::shared_ptr<const Module> m1, std::shared_ptr<const Module> m2, long lmax);

    struct Coord {
        long l1;
        size_t i1;
        long l2;
        size_t i2;
        friend auto operator<=>(const Coord&, const Coord&) = default;
    };

    const Module& left() const { return *m1_; }
    const Module& right() const { return *m2_; }
    std::shared_ptr<const Module> left_ptr() const { return m1_; }
    std::shared_ptr<const Module> right_ptr() const { return m2_; }
    long lmax() const { return lmax_; }

    size_t dim() const { return coords_.size(); }
    const Coord& coord(size_t k) const { return coords_[k]; }
    size_t index_of(const Coord& c) const;  // throws if absent
    bool contains(const Coord& c) const;
    std::string label(size_t k) const;  // "L(-1)|hw ⊗ |hw"

private:
    std::shared_ptr<const Module> m1_, m2_;
    long lmax_;
    std::vector<Coord> coords_;
    std::map<Coord, size_t> index_;
};

// Sparse exact vector in a TensorSpace.
struct TensorElement {
    const TensorSpace* space = nullptr;
    std::map<size_t, Rat> coeffs;

    bool is_zero() const;
    void add(size_t k, const Rat& c);
    void add_scaled(const TensorElement& o, const Rat& c);
    std::vector<Rat> dense() const;
    bool operator==(const TensorElement& o) const;
};

TensorElement tensor_unit(const TensorSpace& space, size_t k);

// Coproduct action with insertion points (w, 0): the sum
//   sum_m binom(k,m) w^{k-m} (v_m x 1) + (1 x v_k),
// where k is the field index of the generator mode x(n) and v_m runs over the
// field modes acting on the first factor.  Valid for every n; throws
// TruncationError when a term would leave the truncation.
TensorElement delta2(const TensorSpace& space, int gen, long n, const Rat& w,
                     const TensorElement& x);

// Mirror action with insertion points (0, -w):
//   (v_k x 1) + sum_m binom(k,m) (-w)^{k-m} (1 x v_m).
TensorElement delta1(const TensorSpace& space, int gen, long n, const Rat& w,
                     const TensorElement& x);

// Residue of the two coproducts against each other for a lowering mode x(n),
// n <= -1: delta1 minus the expansion of delta2 terms that survive the
// depth-d quotient.  The dropped tail is exactly the depth relation imposed
// separately, so on the depth-d quotient this vector must vanish.
TensorElement translation_relation(const TensorSpace& space, int gen, long n, const Rat& w,
                                   const TensorElement& x, long depth);

}  // namespace fusion
