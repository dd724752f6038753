#include "fusion/dual.hpp"

#include <algorithm>
#include <set>

#include "fusion/errors.hpp"

namespace fusion {

Rat Functional::pair(const TensorElement& x) const {
    Rat acc(0);
    for (const auto& [k, c] : x.coeffs) {
        auto it = values.find(k);
        if (it != values.end()) acc += it->second * c;
    }
    return acc;
}

TensorElement dual_action_row(const TensorSpace& space, int gen, long n, const Rat& w,
                              const TensorElement& x) {
    const auto& g = space.left().pres().generator(gen);
    TensorElement row = delta2(space, gen, -n, w, x);
    if (g.quasiprimary_sign != 1) {
        TensorElement scaled;
        scaled.space = row.space;
        scaled.add_scaled(row, g.quasiprimary_sign);
        return scaled;
    }
    return row;
}

Functional dual_action(const TensorSpace& space, int gen, long n, const Rat& w,
                       const Functional& psi) {
    Functional out;
    out.space = &space;
    for (size_t k = 0; k < space.dim(); ++k) {
        try {
            const Rat v = psi.pair(dual_action_row(space, gen, n, w, tensor_unit(space, k)));
            if (v != 0) out.values[k] = v;
        } catch (const TruncationError&) {
            // Value not determined inside this truncation.
        }
    }
    return out;
}

namespace {

// Smeared-action consistency family: for each lowering index n <= -1 the
// action smeared with t^{h-1}(t^{-1}-w)^n must agree with its expansion about
// t = 0.  Terms of the expansion that are killed by the annihilation depth
// are dropped; the survivors are substituted via the dual action rows.
std::vector<TensorElement> compat_family(const TensorSpace& space, long depth, const Rat& w) {
    std::vector<TensorElement> rows;
    const auto& pres = space.left().pres();
    for (size_t t = 0; t < space.dim(); ++t) {
        const auto& co = space.coord(t);
        const long headroom = space.lmax() - (co.l1 + co.l2);
        for (size_t gi = 0; gi < pres.num_generators(); ++gi) {
            const int g = static_cast<int>(gi);
            const long h = pres.generator(g).weight;
            for (long n = -1; n >= -headroom; --n) {
                try {
                    TensorElement unit = tensor_unit(space, t);
                    // Direct side: t^{h-1}(t-w)^n expanded as a polynomial in
                    // (t-w) gives a finite combination of the mirror gauge.
                    TensorElement row;
                    row.space = &space;
                    for (long j = 0; j <= h - 1; ++j) {
                        const Rat c = binomial(h - 1, static_cast<unsigned long>(j)) *
                                      rat_pow(w, h - 1 - j);
                        // field index n + j -> mode index n + j - h + 1
                        row.add_scaled(delta1(space, g, n + j - h + 1, w, unit), c);
                    }
                    // Expansion side: modes x(m - n) with m >= 0; those deeper
                    // than the annihilation depth vanish, the rest substitute
                    // their own pairing rows.
                    for (long m = 0; m - n <= depth; ++m) {
                        const Rat c = binomial(n, static_cast<unsigned long>(m)) * rat_pow(-w, m);
                        if (c == 0) continue;
                        row.add_scaled(delta2(space, g, n - m, w, unit), -c);
                    }
                    if (!row.is_zero()) rows.push_back(std::move(row));
                } catch (const TruncationError&) {
                }
            }
        }
    }
    return rows;
}

}  // namespace

DualConstraintSystem compat_constraints(std::shared_ptr<const Module> m1,
                                        std::shared_ptr<const Module> m2, long depth, const Rat& w,
                                        long lmax, bool audit_extra_family) {
    if (w == 0) throw UsageError("insertion point w must be nonzero");
    DualConstraintSystem sys;
    sys.space = std::make_shared<TensorSpace>(m1, m2, lmax);
    sys.depth = depth;
    sys.w = w;
    const TensorSpace& space = *sys.space;

    // Annihilation by raising monomials of degree > depth pairs against the
    // same rows as the depth family of the quotient side.
    std::vector<TensorElement> rows = depth_relations(space, depth, w);
    auto compat = compat_family(space, depth, w);
    rows.insert(rows.end(), std::make_move_iterator(compat.begin()),
                std::make_move_iterator(compat.end()));
    if (audit_extra_family) {
        auto extra = translation_relations(space, depth, w);
        rows.insert(rows.end(), std::make_move_iterator(extra.begin()),
                    std::make_move_iterator(extra.end()));
    }
    sys.equation_count = rows.size();

    std::vector<std::vector<Rat>> dense;
    dense.reserve(rows.size());
    for (const auto& r : rows) dense.push_back(r.dense());
    sys.solved = std::make_shared<QuotientSpace>(space.dim(), dense);
    sys.unknowns = sys.solved->representatives();
    for (size_t k : sys.unknowns) sys.unknown_labels.push_back(space.label(k));

    const SubspaceBasis ss = special_subspace(*m1, lmax);
    const SubspaceBasis dq = depth_quotient(*m2, depth, lmax);
    size_t candidates = 0;
    for (const auto& [l1, i1] : ss.entries)
        for (const auto& [l2, i2] : dq.entries)
            if (space.contains(TensorSpace::Coord{l1, i1, l2, i2})) ++candidates;
    sys.candidate_count = candidates;
    sys.consistent = (sys.solution_dim() == candidates);
    return sys;
}

RatMatrix dual_l0_matrix(const DualConstraintSystem& system) {
    const TensorSpace& space = *system.space;
    const auto& pres = space.left().pres();
    auto cg = pres.conformal_generator();
    if (!cg) throw UsageError("dual L(0) matrix needs a conformal generator");
    const size_t s = system.solution_dim();

    // Solution functionals parametrized by the unknowns.
    std::vector<std::vector<Rat>> sols;
    for (size_t j = 0; j < s; ++j) sols.push_back(system.solved->solution_vector(j));

    RatMatrix m(s, s);
    for (size_t i = 0; i < s; ++i) {
        const auto row =
            dual_action_row(space, *cg, 0, system.w, tensor_unit(space, system.unknowns[i]));
        for (size_t j = 0; j < s; ++j) {
            Rat acc(0);
            for (const auto& [k, c] : row.coeffs) acc += c * sols[j][k];
            m.at(i, j) = acc;
        }
    }
    return m;
}

DualResult solve_dual(std::shared_ptr<const Module> m1, std::shared_ptr<const Module> m2,
                      long depth, const Rat& w, long lmax, bool audit_extra_family) {
    const long floor = fuse_lmax_floor(*m1, *m2, depth);
    if (lmax < floor)
        throw UsageError("lmax " + std::to_string(lmax) + " is below the documented floor " +
                         std::to_string(floor));
    auto base = compat_constraints(m1, m2, depth, w, lmax, audit_extra_family);
    auto check = compat_constraints(m1, m2, depth, w, lmax + 1, audit_extra_family);
    const RatMatrix mb = dual_l0_matrix(base);
    const RatMatrix mc = dual_l0_matrix(check);
    if (base.unknown_labels != check.unknown_labels || !(mb == mc))
        throw NotStabilizedError("dual system did not stabilize between lmax = " +
                                 std::to_string(lmax) + " and " + std::to_string(lmax + 1));
    DualResult res;
    res.unknown_labels = base.unknown_labels;
    res.l0_matrix = mb;
    res.jordan = jordan_structure(mb);
    res.solution_dim = base.solution_dim();
    res.candidate_count = base.candidate_count;
    res.stabilized_at = lmax;
    res.w = w;
    res.depth = depth;
    return res;
}

CrosscheckReport crosscheck(const FusionResult& ngk, const DualResult& dual) {
    CrosscheckReport rep;
    rep.basis_match = (ngk.basis == dual.unknown_labels);
    rep.transpose_match = (ngk.l0_matrix == dual.l0_matrix.transposed());
    rep.jordan_match = (ngk.jordan == dual.jordan);
    return rep;
}

}  // namespace fusion
