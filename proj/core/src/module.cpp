#include "fusion/module.hpp"

#include <algorithm>

#include "fusion/errors.hpp"

namespace fusion {

namespace {

long word_level(const Word& w) {
    long l = 0;
    for (const auto& m : w) l += -m.index;
    return l;
}

}  // namespace

long element_level(const AlgebraElement& e) {
    long level = -1;
    for (const auto& [w, c] : e) {
        if (c == 0) continue;
        for (const auto& m : w)
            if (m.index >= 0) throw UsageError("singular relation must use lowering modes only");
        const long l = word_level(w);
        if (level == -1) level = l;
        if (l != level) throw UsageError("singular relation is not level-homogeneous");
    }
    if (level <= 0) throw UsageError("singular relation is empty or of level 0");
    return level;
}

ModuleSpec ModuleSpec::virasoro(const Rat& c, const Rat& h, std::vector<AlgebraElement> relations) {
    auto pres = AlgebraPresentation::virasoro(c);
    ModuleSpec spec;
    spec.presentation = pres;
    spec.highest_weight = h;
    spec.zero_mode_values[pres->generator_id("L")] = h;
    spec.singular_relations = std::move(relations);
    return spec;
}

ModuleSpec ModuleSpec::heisenberg_fock(const Rat& lambda) {
    auto pres = AlgebraPresentation::heisenberg();
    ModuleSpec spec;
    spec.presentation = pres;
    spec.highest_weight = lambda * lambda / 2;
    spec.zero_mode_values[pres->generator_id("a")] = lambda;
    return spec;
}

bool GradedVector::is_zero() const {
    for (const auto& [l, v] : levels)
        for (const auto& c : v)
            if (c != 0) return false;
    return true;
}

void GradedVector::add_scaled(long level, size_t index, const Rat& c, size_t dim) {
    if (c == 0) return;
    auto& v = levels.emplace(level, std::vector<Rat>(dim, Rat(0))).first->second;
    v[index] += c;
}

void GradedVector::add_scaled(const GradedVector& o, const Rat& c) {
    if (c == 0) return;
    for (const auto& [l, v] : o.levels) {
        auto& dst = levels.emplace(l, std::vector<Rat>(v.size(), Rat(0))).first->second;
        for (size_t i = 0; i < v.size(); ++i) dst[i] += v[i] * c;
    }
}

Module::Module(ModuleSpec spec) : spec_(std::move(spec)) {
    if (!spec_.presentation) throw UsageError("module needs a presentation");
    // Each defining relation must be homogeneous and lie in the kernel of the
    // Verma Gram form at its level.
    for (const auto& rel : spec_.singular_relations) {
        const long level = element_level(rel);
        const auto& basis = verma_basis(level);
        std::vector<Rat> coords(basis.size(), Rat(0));
        for (const auto& [w, c] : rel) {
            auto it = std::find(basis.begin(), basis.end(), w);
            if (it == basis.end())
                throw UsageError("singular relation contains a non-canonical word");
            coords[it - basis.begin()] = c;
        }
        const RatMatrix g = gram_matrix(level);
        for (size_t i = 0; i < basis.size(); ++i) {
            Rat acc(0);
            for (size_t j = 0; j < basis.size(); ++j) acc += g.at(i, j) * coords[j];
            if (acc != 0)
                throw UsageError("singular relation is not in the Gram kernel at level " +
                                 std::to_string(level));
        }
    }
}

const std::vector<Word>& Module::verma_basis(long level) const {
    std::lock_guard<std::mutex> lock(mutex_);
    return verma_basis_locked(level);
}

const std::vector<Word>& Module::verma_basis_locked(long level) const {
    if (auto it = verma_cache_.find(level); it != verma_cache_.end()) return it->second;
    std::vector<Word> words;
    if (level == 0) {
        words.push_back(Word{});
    } else if (level > 0) {
        // Canonical words are non-decreasing mode sequences; enumerating the
        // first mode in canonical order yields basis order directly.
        const auto& pres = *spec_.presentation;
        std::vector<Mode> modes;  // all lowering modes up to this level
        for (long idx = -level; idx <= -1; ++idx)
            for (size_t g = 0; g < pres.num_generators(); ++g)
                modes.push_back(Mode{static_cast<int>(g), idx});
        std::sort(modes.begin(), modes.end(),
                  [&](const Mode& a, const Mode& b) { return pres.mode_less(a, b); });
        Word current;
        auto rec = [&](auto&& self, size_t first_allowed, long remaining) -> void {
            if (remaining == 0) {
                words.push_back(current);
                return;
            }
            for (size_t k = first_allowed; k < modes.size(); ++k) {
                const long drop = -modes[k].index;
                if (drop > remaining) continue;
                current.push_back(modes[k]);
                self(self, k, remaining - drop);
                current.pop_back();
            }
        };
        rec(rec, 0, level);
    }
    return verma_cache_.emplace(level, std::move(words)).first->second;
}

std::map<long, std::vector<Rat>> Module::evaluate_verma(const AlgebraElement& e) const {
    std::map<long, std::vector<Rat>> out;
    for (const auto& [w, c] : e) {
        if (c == 0) continue;
        // Canonical words split as lowering | zero modes | raising modes.
        size_t i = w.size();
        Rat coeff = c;
        bool killed = false;
        while (i > 0 && w[i - 1].index >= 0) {
            if (w[i - 1].index > 0) {
                killed = true;  // raising mode annihilates the hw vector
                break;
            }
            auto it = spec_.zero_mode_values.find(w[i - 1].gen);
            coeff *= (it == spec_.zero_mode_values.end()) ? Rat(0) : it->second;
            --i;
        }
        if (killed || coeff == 0) continue;
        Word lowering(w.begin(), w.begin() + i);
        const long level = word_level(lowering);
        std::lock_guard<std::mutex> lock(mutex_);
        const auto& basis = verma_basis_locked(level);
        auto it = std::lower_bound(basis.begin(), basis.end(), lowering,
                                   [&](const Word& a, const Word& b) {
                                       return std::lexicographical_compare(
                                           a.begin(), a.end(), b.begin(), b.end(),
                                           [&](const Mode& x, const Mode& y) {
                                               return spec_.presentation->mode_less(x, y);
                                           });
                                   });
        if (it == basis.end() || !(*it == lowering))
            throw InternalCheckError("canonical word missing from Verma basis");
        auto& vec = out.emplace(level, std::vector<Rat>(basis.size(), Rat(0))).first->second;
        vec[it - basis.begin()] += coeff;
    }
    for (auto it = out.begin(); it != out.end();) {
        bool zero = true;
        for (const auto& v : it->second)
            if (v != 0) zero = false;
        it = zero ? out.erase(it) : std::next(it);
    }
    return out;
}

const QuotientSpace& Module::level_space(long level) const {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = space_cache_.find(level); it != space_cache_.end()) return *it->second;
    const auto& basis = verma_basis_locked(level);
    std::vector<std::vector<Rat>> rows;
    for (const auto& rel : spec_.singular_relations) {
        const long rel_level = element_level(rel);
        if (rel_level > level) continue;
        for (const Word& u : verma_basis_locked(level - rel_level)) {
            AlgebraElement shifted = word_times_element(*spec_.presentation, u, rel);
            auto coords = [&]() {
                // evaluate_verma without re-locking: inline evaluation
                std::vector<Rat> row(basis.size(), Rat(0));
                for (const auto& [w, c] : shifted) {
                    if (c == 0) continue;
                    // shifted is a product of lowering words: stays lowering
                    auto it2 = std::find(basis.begin(), basis.end(), w);
                    if (it2 == basis.end())
                        throw InternalCheckError("submodule word missing from Verma basis");
                    row[it2 - basis.begin()] += c;
                }
                return row;
            }();
            rows.push_back(std::move(coords));
        }
    }
    auto space = std::make_unique<QuotientSpace>(basis.size(), rows);
    return *space_cache_.emplace(level, std::move(space)).first->second;
}

std::vector<std::string> Module::level_basis(long level) const {
    const auto& space = level_space(level);
    const auto& basis = verma_basis(level);
    std::vector<std::string> labels;
    for (size_t col : space.representatives()) labels.push_back(word_hw_label(basis[col]));
    return labels;
}

size_t Module::level_dim(long level) const {
    if (level < 0) return 0;
    return level_space(level).dim();
}

std::string Module::word_hw_label(const Word& w) const {
    if (w.empty()) return "|hw";
    std::string s;
    for (const auto& m : w) s += spec_.presentation->mode_label(m);
    return s + "|hw";
}

GradedVector Module::highest_weight_vector() const {
    GradedVector v;
    v.add_scaled(0, 0, Rat(1), 1);
    return v;
}

GradedVector Module::act(const Mode& m, const GradedVector& v) const {
    GradedVector out;
    for (const auto& [level, coeffs] : v.levels) {
        const auto& space = level_space(level);
        const auto& basis = verma_basis(level);
        const long target = level + (-m.index);
        if (target < 0) continue;
        const auto& tspace = level_space(target);
        const auto& tbasis = verma_basis(target);
        for (size_t k = 0; k < coeffs.size(); ++k) {
            if (coeffs[k] == 0) continue;
            Word w{m};
            const Word& rep = basis[space.representatives()[k]];
            w.insert(w.end(), rep.begin(), rep.end());
            auto verma = evaluate_verma(spec_.presentation->normal_order(w));
            auto it = verma.find(target);
            if (it == verma.end()) continue;
            std::vector<Rat> ambient(tbasis.size(), Rat(0));
            for (size_t j = 0; j < tbasis.size(); ++j) ambient[j] = it->second[j];
            auto reduced = tspace.project(ambient);
            for (size_t j = 0; j < reduced.size(); ++j)
                out.add_scaled(target, j, reduced[j] * coeffs[k], reduced.size());
        }
    }
    for (auto it = out.levels.begin(); it != out.levels.end();) {
        bool zero = true;
        for (const auto& c : it->second)
            if (c != 0) zero = false;
        it = zero ? out.levels.erase(it) : std::next(it);
    }
    return out;
}

RatMatrix Module::gram_matrix(long level) const {
    const auto& basis = verma_basis(level);
    const size_t n = basis.size();
    RatMatrix g(n, n);
    const auto& pres = *spec_.presentation;
    for (size_t i = 0; i < n; ++i) {
        auto [sign, aw] = adjoint_word(pres, basis[i]);
        for (size_t j = i; j < n; ++j) {
            Word prod = aw;
            prod.insert(prod.end(), basis[j].begin(), basis[j].end());
            auto verma = evaluate_verma(pres.normal_order(prod));
            Rat value(0);
            if (auto it = verma.find(0); it != verma.end()) value = it->second[0];
            value *= sign;
            g.at(i, j) = value;
            g.at(j, i) = value;
        }
    }
    return g;
}

std::vector<AlgebraElement> Module::find_singular_vectors(long level) const {
    const auto& basis = verma_basis(level);
    const auto kernel = kernel_basis(gram_matrix(level));
    const auto& pres = *spec_.presentation;
    std::vector<AlgebraElement> out;
    for (const auto& vec : kernel) {
        AlgebraElement elem;
        for (size_t i = 0; i < basis.size(); ++i)
            if (vec[i] != 0) elem[basis[i]] = vec[i];
        // Strict singularity: raising modes x(1), x(2) must annihilate it in
        // the Verma cover (sufficient for the Lie-type presets here).
        bool annihilated = true;
        for (size_t g = 0; g < pres.num_generators() && annihilated; ++g)
            for (long n : {1L, 2L}) {
                auto hit = evaluate_verma(
                    word_times_element(pres, Word{Mode{static_cast<int>(g), n}}, elem));
                if (!hit.empty()) {
                    annihilated = false;
                    break;
                }
            }
        if (!annihilated) continue;
        // Scale so the monomial with the lexicographically first label has
        // coefficient 1.
        std::string best;
        Rat lead(0);
        for (const auto& [w, c] : elem) {
            const std::string lbl = pres.word_label(w);
            if (best.empty() || lbl < best) {
                best = lbl;
                lead = c;
            }
        }
        AlgebraElement normalized;
        for (const auto& [w, c] : elem) normalized[w] = c / lead;
        out.push_back(std::move(normalized));
    }
    return out;
}

std::vector<AlgebraElement> auto_detect_singular(const ModuleSpec& verma_spec, long max_level) {
    ModuleSpec plain = verma_spec;
    plain.singular_relations.clear();
    Module verma(plain);
    std::vector<AlgebraElement> found;
    for (long level = 1; level <= max_level; ++level) {
        // Quotient candidate kernel vectors by the submodule generated by the
        // relations found so far; only genuinely new generators are kept.
        ModuleSpec with = plain;
        with.singular_relations = found;
        Module reduced(with);
        for (const auto& sv : verma.find_singular_vectors(level)) {
            std::vector<Rat> ambient(verma.verma_basis(level).size(), Rat(0));
            const auto& basis = verma.verma_basis(level);
            for (const auto& [w, c] : sv) {
                auto it = std::find(basis.begin(), basis.end(), w);
                ambient[it - basis.begin()] = c;
            }
            if (!reduced.level_space(level).is_zero(ambient)) found.push_back(sv);
        }
    }
    return found;
}

}  // namespace fusion
