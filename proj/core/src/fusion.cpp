#include "fusion/fusion.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "fusion/errors.hpp"

namespace fusion {

namespace {

// All canonical lowering words of the presentation with total level-lowering
// in [1, max_level], grouped by total lowering.
std::vector<std::vector<Word>> lowering_words_by_level(const AlgebraPresentation& pres,
                                                       long max_level) {
    std::vector<std::vector<Word>> by_level(std::max<long>(max_level + 1, 1));
    if (max_level < 1) return by_level;
    std::vector<Mode> modes;
    for (long idx = -max_level; idx <= -1; ++idx)
        for (size_t g = 0; g < pres.num_generators(); ++g)
            modes.push_back(Mode{static_cast<int>(g), idx});
    std::sort(modes.begin(), modes.end(),
              [&](const Mode& a, const Mode& b) { return pres.mode_less(a, b); });
    Word current;
    auto rec = [&](auto&& self, size_t first_allowed, long used) -> void {
        if (used > 0) by_level[used].push_back(current);
        for (size_t k = first_allowed; k < modes.size(); ++k) {
            const long drop = -modes[k].index;
            if (used + drop > max_level) continue;
            current.push_back(modes[k]);
            self(self, k, used + drop);
            current.pop_back();
        }
    };
    rec(rec, 0, 0);
    return by_level;
}

}  // namespace

SubspaceBasis special_subspace(const Module& m, long cutoff) {
    if (cutoff < 2) throw UsageError("special subspace cutoff must be >= 2");
    const auto& pres = m.pres();
    SubspaceBasis out;
    long top_nonempty = 0;
    for (long level = 0; level <= cutoff; ++level) {
        const size_t dim = m.level_dim(level);
        if (dim == 0) continue;
        std::vector<std::vector<Rat>> rows;
        for (size_t g = 0; g < pres.num_generators(); ++g) {
            const long wmin = pres.generator(static_cast<int>(g)).weight;
            for (long n = wmin; n <= level; ++n) {
                const long src = level - n;
                for (size_t i = 0; i < m.level_dim(src); ++i) {
                    GradedVector v;
                    v.add_scaled(src, i, Rat(1), m.level_dim(src));
                    GradedVector img = m.act(Mode{static_cast<int>(g), -n}, v);
                    std::vector<Rat> row(dim, Rat(0));
                    if (auto it = img.levels.find(level); it != img.levels.end()) row = it->second;
                    rows.push_back(std::move(row));
                }
            }
        }
        QuotientSpace q(dim, rows);
        for (size_t col : q.representatives()) {
            out.entries.emplace_back(level, col);
            out.labels.push_back(m.level_basis(level)[col]);
            top_nonempty = level;
        }
    }
    if (cutoff - top_nonempty < 2)
        throw NotStabilizedError("special subspace did not stabilize below the cutoff " +
                                 std::to_string(cutoff));
    return out;
}

SubspaceBasis depth_quotient(const Module& m, long depth, long cutoff) {
    if (depth < 0) throw UsageError("depth must be >= 0");
    if (cutoff < depth) throw UsageError("cutoff must cover the depth");
    // Products of lowering modes of total degree > d wipe out every level
    // above d of a highest-weight module, and nothing at or below d: the
    // quotient is the span of levels <= d.
    SubspaceBasis out;
    for (long level = 0; level <= depth; ++level) {
        const auto labels = m.level_basis(level);
        for (size_t i = 0; i < labels.size(); ++i) {
            out.entries.emplace_back(level, i);
            out.labels.push_back(labels[i]);
        }
    }
    return out;
}

std::vector<TensorElement> depth_relations(const TensorSpace& space, long depth, const Rat& w) {
    std::vector<TensorElement> rows;
    const auto& pres = space.left().pres();
    const auto words = lowering_words_by_level(pres, space.lmax());

    for (size_t t = 0; t < space.dim(); ++t) {
        const auto& co = space.coord(t);
        const long headroom = space.lmax() - (co.l1 + co.l2);
        for (long deg = depth + 1; deg <= headroom; ++deg) {
            for (const Word& u : words[deg]) {
                try {
                    TensorElement v = tensor_unit(space, t);
                    for (auto it = u.rbegin(); it != u.rend(); ++it)
                        v = delta2(space, it->gen, it->index, w, v);
                    if (!v.is_zero()) rows.push_back(std::move(v));
                } catch (const TruncationError&) {
                    // Row reaches beyond the truncation; drop it whole.
                }
            }
        }
    }
    return rows;
}

std::vector<TensorElement> translation_relations(const TensorSpace& space, long depth,
                                                 const Rat& w) {
    std::vector<TensorElement> rows;
    const auto& pres = space.left().pres();
    for (size_t t = 0; t < space.dim(); ++t) {
        const auto& co = space.coord(t);
        const long headroom = space.lmax() - (co.l1 + co.l2);
        for (size_t g = 0; g < pres.num_generators(); ++g)
            for (long n = -1; n >= -headroom; --n) {
                try {
                    TensorElement v = translation_relation(space, static_cast<int>(g), n, w,
                                                           tensor_unit(space, t), depth);
                    if (!v.is_zero()) rows.push_back(std::move(v));
                } catch (const TruncationError&) {
                }
            }
    }
    return rows;
}

std::vector<TensorElement> generate_relations(const TensorSpace& space, long depth, const Rat& w) {
    std::vector<TensorElement> rows = depth_relations(space, depth, w);
    auto tr = translation_relations(space, depth, w);
    rows.insert(rows.end(), std::make_move_iterator(tr.begin()), std::make_move_iterator(tr.end()));
    return rows;
}

long fuse_lmax_floor(const Module& m1, const Module& m2, long depth) {
    long max_sing = 0;
    for (const auto& r : m1.spec().singular_relations)
        max_sing = std::max(max_sing, element_level(r));
    for (const auto& r : m2.spec().singular_relations)
        max_sing = std::max(max_sing, element_level(r));
    return depth + max_sing + 2;
}

namespace {

struct SingleRun {
    std::shared_ptr<const TensorSpace> space;
    std::shared_ptr<const QuotientSpace> quotient;
    std::vector<TensorElement> relations;
    std::vector<size_t> rep_coords;
    std::vector<std::string> labels;
    RatMatrix l0;
    std::map<std::string, RatMatrix> zero_modes;
    JordanReport jordan;
    std::map<Rat, size_t> graded;
    std::vector<std::map<std::string, Rat>> spurious;
};

// Matrix of a quotient-descending operator given by `apply` on unit lifts.
RatMatrix operator_matrix(const TensorSpace& space, const QuotientSpace& q,
                          const std::vector<size_t>& reps,
                          const std::function<TensorElement(const TensorElement&)>& apply) {
    RatMatrix m(reps.size(), reps.size());
    for (size_t j = 0; j < reps.size(); ++j) {
        TensorElement img = apply(tensor_unit(space, reps[j]));
        auto reduced = q.project(img.dense());
        for (size_t i = 0; i < reps.size(); ++i) m.at(i, j) = reduced[i];
    }
    return m;
}

SingleRun run_fusion(std::shared_ptr<const Module> m1, std::shared_ptr<const Module> m2,
                     long depth, const Rat& w, long lmax) {
    SingleRun run;
    run.space = std::make_shared<TensorSpace>(m1, m2, lmax);
    const TensorSpace& space = *run.space;

    run.relations = generate_relations(space, depth, w);
    std::vector<std::vector<Rat>> rows;
    rows.reserve(run.relations.size());
    for (const auto& r : run.relations) rows.push_back(r.dense());
    run.quotient = std::make_shared<QuotientSpace>(space.dim(), rows);
    const QuotientSpace& q = *run.quotient;

    for (size_t col : q.representatives()) run.rep_coords.push_back(col);
    for (size_t col : run.rep_coords) run.labels.push_back(space.label(col));

    // The projected candidate set must span the quotient.
    const SubspaceBasis ss = special_subspace(*m1, lmax);
    const SubspaceBasis dq = depth_quotient(*m2, depth, lmax);
    std::vector<size_t> candidates;
    for (const auto& [l1, i1] : ss.entries)
        for (const auto& [l2, i2] : dq.entries) {
            TensorSpace::Coord c{l1, i1, l2, i2};
            if (space.contains(c)) candidates.push_back(space.index_of(c));
        }
    std::sort(candidates.begin(), candidates.end());
    {
        RatMatrix cand(q.dim(), candidates.size());
        for (size_t j = 0; j < candidates.size(); ++j) {
            auto reduced = q.project(tensor_unit(space, candidates[j]).dense());
            for (size_t i = 0; i < q.dim(); ++i) cand.at(i, j) = reduced[i];
        }
        if (rank(cand) != q.dim())
            throw InternalCheckError(
                "candidate set does not span the fusion quotient (raise lmax or report a bug)");
    }

    // L(0): via the conformal generator when the presentation has one, else
    // through the quadratic zero-mode expression valid on depth quotients.
    const auto& pres = m1->pres();
    if (auto cg = pres.conformal_generator()) {
        run.l0 = operator_matrix(space, q, run.rep_coords, [&](const TensorElement& x) {
            return delta2(space, *cg, 0, w, x);
        });
    }
    for (size_t g = 0; g < pres.num_generators(); ++g) {
        if (pres.generator(static_cast<int>(g)).weight != 1) continue;
        RatMatrix zm = operator_matrix(space, q, run.rep_coords, [&](const TensorElement& x) {
            return delta2(space, static_cast<int>(g), 0, w, x);
        });
        run.zero_modes.emplace(pres.generator(static_cast<int>(g)).name, zm);
    }
    if (!pres.conformal_generator()) {
        // Sugawara zero mode on the depth-d quotient: (1/2) a(0)^2 plus the
        // finitely many a(-k)a(k) with k <= depth that survive the quotient.
        if (run.zero_modes.size() != 1)
            throw InternalCheckError("no conformal structure available for the L(0) matrix");
        const auto& [gname, a0] = *run.zero_modes.begin();
        const int g = pres.generator_id(gname);
        RatMatrix l0 = a0 * a0;
        for (size_t i = 0; i < l0.rows(); ++i)
            for (size_t j = 0; j < l0.cols(); ++j) l0.at(i, j) /= 2;
        for (long k = 1; k <= depth; ++k) {
            RatMatrix c = operator_matrix(space, q, run.rep_coords, [&](const TensorElement& x) {
                return delta2(space, g, -k, w, delta2(space, g, k, w, x));
            });
            for (size_t i = 0; i < l0.rows(); ++i)
                for (size_t j = 0; j < l0.cols(); ++j) l0.at(i, j) += c.at(i, j);
        }
        run.l0 = l0;
    }

    run.jordan = jordan_structure(run.l0);
    for (const auto& b : run.jordan.blocks) {
        size_t total = 0;
        for (size_t s : b.block_sizes) total += s;
        if (total > 0) run.graded[b.eigenvalue] += total;
    }

    // Spurious states: relation-span vectors supported on the candidate set.
    {
        std::set<size_t> cand_set(candidates.begin(), candidates.end());
        std::vector<size_t> rest;
        for (size_t k = 0; k < space.dim(); ++k)
            if (!cand_set.count(k)) rest.push_back(k);
        // Eliminate the non-candidate columns first; surviving rows are the
        // candidate-supported combinations, canonicalized with pivots at the
        // latest candidate coordinates.
        std::vector<size_t> order = rest;
        for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) order.push_back(*it);
        std::vector<std::vector<Rat>> work = rows;
        // Local RREF over the given column order.
        std::vector<size_t> pivots;
        size_t top = 0;
        for (size_t oi = 0; oi < order.size() && top < work.size(); ++oi) {
            const size_t c = order[oi];
            size_t p = top;
            while (p < work.size() && work[p][c] == 0) ++p;
            if (p == work.size()) continue;
            std::swap(work[p], work[top]);
            const Rat inv = Rat(1) / work[top][c];
            for (auto& v : work[top]) v *= inv;
            for (size_t i = 0; i < work.size(); ++i) {
                if (i == top || work[i][c] == 0) continue;
                const Rat f = work[i][c];
                for (size_t j = 0; j < space.dim(); ++j) work[i][j] -= f * work[top][j];
            }
            pivots.push_back(c);
            ++top;
        }
        for (size_t r = 0; r < pivots.size(); ++r) {
            if (!cand_set.count(pivots[r])) continue;
            std::map<std::string, Rat> state;
            for (size_t k = 0; k < space.dim(); ++k)
                if (work[r][k] != 0) state[space.label(k)] = work[r][k];
            run.spurious.push_back(std::move(state));
        }
    }
    return run;
}

}  // namespace

FusionResult fuse(std::shared_ptr<const Module> m1, std::shared_ptr<const Module> m2, long depth,
                  const Rat& w, long lmax) {
    if (w == 0) throw UsageError("insertion point w must be nonzero");
    if (depth < 0) throw UsageError("depth must be >= 0");
    const long floor = fuse_lmax_floor(*m1, *m2, depth);
    if (lmax < floor)
        throw UsageError("lmax " + std::to_string(lmax) + " is below the documented floor " +
                         std::to_string(floor));

    SingleRun base = run_fusion(m1, m2, depth, w, lmax);
    SingleRun check = run_fusion(m1, m2, depth, w, lmax + 1);
    if (base.labels != check.labels || !(base.l0 == check.l0) || base.graded != check.graded)
        throw NotStabilizedError("fusion quotient did not stabilize between lmax = " +
                                 std::to_string(lmax) + " and " + std::to_string(lmax + 1));

    FusionResult res;
    res.space = base.space;
    res.quotient = base.quotient;
    res.relations = std::move(base.relations);
    res.basis = base.labels;
    res.rep_coords = base.rep_coords;
    res.dimension = base.labels.size();
    res.l0_matrix = base.l0;
    res.jordan = base.jordan;
    res.graded_dims = base.graded;
    res.spurious_states = base.spurious;
    res.relation_count = res.relations.size();
    res.stabilized_at = lmax;
    res.w = w;
    res.depth = depth;
    res.zero_modes = base.zero_modes;
    return res;
}

RatMatrix mode_action(const FusionResult& source, int gen, long n, const FusionResult& target) {
    if (source.space->left_ptr() != target.space->left_ptr() ||
        source.space->right_ptr() != target.space->right_ptr() ||
        source.w != target.w || source.space->lmax() != target.space->lmax())
        throw UsageError("mode_action needs matching modules, w and lmax");
    const long shift = -n;  // level-lowering amount of x(n)
    if (target.depth > source.depth + shift)
        throw UsageError("depth mismatch: x(" + std::to_string(n) + ") cannot map depth " +
                         std::to_string(source.depth) + " into depth " +
                         std::to_string(target.depth));

    const TensorSpace& space = *source.space;
    // The action is well defined only if source relations land in the target
    // relation span; verify on every row with headroom.
    for (const auto& r : source.relations) {
        try {
            TensorElement img = delta2(space, gen, n, source.w, r);
            if (!target.quotient->is_zero(img.dense()))
                throw UsageError("depth mismatch: relations do not map into the target quotient");
        } catch (const TruncationError&) {
            // Rows too close to the truncation cannot be checked; the
            // stabilization contract covers them.
        }
    }

    RatMatrix m(target.dimension, source.dimension);
    for (size_t j = 0; j < source.dimension; ++j) {
        TensorElement img = delta2(space, gen, n, source.w, tensor_unit(space, source.rep_coords[j]));
        auto reduced = target.quotient->project(img.dense());
        for (size_t i = 0; i < target.dimension; ++i) m.at(i, j) = reduced[i];
    }
    return m;
}

}  // namespace fusion
