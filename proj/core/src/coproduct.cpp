#include "fusion/coproduct.hpp"

#include "fusion/errors.hpp"

namespace fusion {

std::vector<std::pair<long, Rat>> iota_expand(const RationalMonomial& f, ExpandAt dir,
                                              size_t order) {
    if (f.w == 0) throw UsageError("iota_expand: insertion point w must be nonzero");
    std::vector<std::pair<long, Rat>> out;
    for (size_t m = 0; m < order; ++m) {
        if (f.b >= 0 && m > static_cast<size_t>(f.b)) break;  // polynomial case terminates
        const Rat bin = binomial(f.b, m);
        if (dir == ExpandAt::zero) {
            // (t-w)^b = sum_m binom(b,m) (-w)^{b-m} t^m
            out.emplace_back(f.a + static_cast<long>(m),
                             bin * rat_pow(-f.w, f.b - static_cast<long>(m)));
        } else {
            // (t-w)^b = sum_m binom(b,m) (-w)^m t^{b-m}
            out.emplace_back(f.a + f.b - static_cast<long>(m), bin * rat_pow(-f.w, m));
        }
    }
    return out;
}

TensorSpace::TensorSpace(std::shared_ptr<const Module> m1, std::shared_ptr<const Module> m2,
                         long lmax)
    : m1_(std::move(m1)), m2_(std::move(m2)), lmax_(lmax) {
    if (lmax < 0) throw UsageError("truncation level must be >= 0");
    for (long total = 0; total <= lmax; ++total)
        for (long l2 = 0; l2 <= total; ++l2) {
            const long l1 = total - l2;
            const size_t d1 = m1_->level_dim(l1);
            const size_t d2 = m2_->level_dim(l2);
            for (size_t i1 = 0; i1 < d1; ++i1)
                for (size_t i2 = 0; i2 < d2; ++i2) {
                    index_[Coord{l1, i1, l2, i2}] = coords_.size();
                    coords_.push_back(Coord{l1, i1, l2, i2});
                }
        }
}

size_t TensorSpace::index_of(const Coord& c) const {
    auto it = index_.find(c);
    if (it == index_.end()) throw TruncationError("tensor coordinate outside the truncation");
    return it->second;
}

bool TensorSpace::contains(const Coord& c) const { return index_.count(c) > 0; }

std::string TensorSpace::label(size_t k) const {
    const Coord& c = coords_[k];
    return m1_->level_basis(c.l1)[c.i1] + " ⊗ " + m2_->level_basis(c.l2)[c.i2];
}

bool TensorElement::is_zero() const {
    for (const auto& [k, c] : coeffs)
        if (c != 0) return false;
    return true;
}

void TensorElement::add(size_t k, const Rat& c) {
    if (c == 0) return;
    auto it = coeffs.emplace(k, Rat(0)).first;
    it->second += c;
    if (it->second == 0) coeffs.erase(it);
}

void TensorElement::add_scaled(const TensorElement& o, const Rat& c) {
    for (const auto& [k, v] : o.coeffs) add(k, v * c);
}

std::vector<Rat> TensorElement::dense() const {
    std::vector<Rat> v(space->dim(), Rat(0));
    for (const auto& [k, c] : coeffs) v[k] = c;
    return v;
}

bool TensorElement::operator==(const TensorElement& o) const {
    TensorElement d = *this;
    d.add_scaled(o, Rat(-1));
    return d.is_zero();
}

TensorElement tensor_unit(const TensorSpace& space, size_t k) {
    TensorElement e;
    e.space = &space;
    e.add(k, Rat(1));
    return e;
}

namespace {

// Shared worker: applies the mode (gen, n) on one factor and the binomial
// m-sum with insertion point z on the other.  `sum_on_first` selects which
// factor carries the sum.
TensorElement coproduct_action(const TensorSpace& space, int gen, long n, const Rat& z,
                               bool sum_on_first, const TensorElement& x) {
    const Module& m1 = space.left();
    const Module& m2 = space.right();
    const auto& pres = m1.pres();
    const int weight = pres.generator(gen).weight;
    const long k = n + weight - 1;  // field index of x(n)

    TensorElement out;
    out.space = &space;
    for (const auto& [idx, c] : x.coeffs) {
        const auto& co = space.coord(idx);
        // Plain mode on one factor.
        {
            const Module& target = sum_on_first ? m2 : m1;
            GradedVector gv;
            gv.add_scaled(sum_on_first ? co.l2 : co.l1, sum_on_first ? co.i2 : co.i1, Rat(1),
                          target.level_dim(sum_on_first ? co.l2 : co.l1));
            GradedVector image = target.act(Mode{gen, n}, gv);
            for (const auto& [lev, vec] : image.levels)
                for (size_t j = 0; j < vec.size(); ++j) {
                    if (vec[j] == 0) continue;
                    const auto coord = sum_on_first ? TensorSpace::Coord{co.l1, co.i1, lev, j}
                                                    : TensorSpace::Coord{lev, j, co.l2, co.i2};
                    if (coord.l1 + coord.l2 > space.lmax())
                        throw TruncationError("coproduct action leaves the truncation");
                    out.add(space.index_of(coord), c * vec[j]);
                }
        }
        // Binomial sum of field modes v_m on the other factor.
        const Module& target = sum_on_first ? m1 : m2;
        const long src_level = sum_on_first ? co.l1 : co.l2;
        const size_t src_index = sum_on_first ? co.i1 : co.i2;
        const long m_bound = src_level + weight - 1;  // deeper raising kills the vector
        for (long m = 0; m <= m_bound; ++m) {
            if (k >= 0 && m > k) break;
            const Rat bin = binomial(k, static_cast<unsigned long>(m));
            if (bin == 0) continue;
            const Rat coeff = bin * rat_pow(z, k - m);
            GradedVector gv;
            gv.add_scaled(src_level, src_index, Rat(1), target.level_dim(src_level));
            GradedVector image = target.act(Mode{gen, m - weight + 1}, gv);
            for (const auto& [lev, vec] : image.levels)
                for (size_t j = 0; j < vec.size(); ++j) {
                    if (vec[j] == 0) continue;
                    const auto coord = sum_on_first ? TensorSpace::Coord{lev, j, co.l2, co.i2}
                                                    : TensorSpace::Coord{co.l1, co.i1, lev, j};
                    if (coord.l1 + coord.l2 > space.lmax())
                        throw TruncationError("coproduct action leaves the truncation");
                    out.add(space.index_of(coord), c * coeff * vec[j]);
                }
        }
    }
    return out;
}

}  // namespace

TensorElement delta2(const TensorSpace& space, int gen, long n, const Rat& w,
                     const TensorElement& x) {
    if (w == 0) throw UsageError("insertion point w must be nonzero");
    return coproduct_action(space, gen, n, w, /*sum_on_first=*/true, x);
}

TensorElement delta1(const TensorSpace& space, int gen, long n, const Rat& w,
                     const TensorElement& x) {
    if (w == 0) throw UsageError("insertion point w must be nonzero");
    return coproduct_action(space, gen, n, -w, /*sum_on_first=*/false, x);
}

TensorElement translation_relation(const TensorSpace& space, int gen, long n, const Rat& w,
                                   const TensorElement& x, long depth) {
    if (n >= 0) throw UsageError("translation relation needs a level-lowering mode");
    const int weight = space.left().pres().generator(gen).weight;
    const long k = n + weight - 1;  // field index

    TensorElement out = delta1(space, gen, n, w, x);
    // Subtract sum_m binom(k,m) (-w)^m delta2(v_{k-m}); keep the terms whose
    // mode survives the depth-d quotient (level-lowering <= depth).  For the
    // field index k - m the lowering amount is weight - 1 - (k - m).
    const long m_max = depth + k + 1 - weight;  // lowering <= depth
    for (long m = 0; m <= m_max; ++m) {
        const Rat coeff = binomial(k, static_cast<unsigned long>(m)) * rat_pow(-w, m);
        if (coeff == 0) continue;
        const long mode_index = (k - m) - weight + 1;
        out.add_scaled(delta2(space, gen, mode_index, w, x), -coeff);
    }
    return out;
}

}  // namespace fusion
