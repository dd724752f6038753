#include "fusion/algebra.hpp"

#include <algorithm>

#include "fusion/errors.hpp"

namespace fusion {

Rat IndexPoly2::eval(long m, long n) const {
    Rat acc(0);
    for (const auto& t : terms) {
        Rat v = t.c;
        for (unsigned i = 0; i < t.dm; ++i) v *= Rat(m);
        for (unsigned i = 0; i < t.dn; ++i) v *= Rat(n);
        acc += v;
    }
    return acc;
}

Rat IndexPoly1::eval(long m) const {
    Rat acc(0);
    for (const auto& t : terms) {
        Rat v = t.c;
        for (unsigned i = 0; i < t.d; ++i) v *= Rat(m);
        acc += v;
    }
    return acc;
}

AlgebraPresentation::AlgebraPresentation(std::vector<GeneratorSpec> gens,
                                         std::map<std::pair<int, int>, BracketEntry> table,
                                         std::map<std::string, Rat> central_params,
                                         std::optional<int> conformal_gen)
    : gens_(std::move(gens)),
      table_(std::move(table)),
      central_params_(std::move(central_params)),
      conformal_gen_(conformal_gen) {
    for (const auto& g : gens_)
        if (g.weight < 1) throw UsageError("generator weight must be >= 1: " + g.name);
}

std::shared_ptr<const AlgebraPresentation> AlgebraPresentation::virasoro(const Rat& c) {
    std::vector<GeneratorSpec> gens{{"L", 2, true, Rat(1)}};
    // [L(m), L(n)] = (m - n) L(m+n) + c/12 (m^3 - m) delta_{m+n,0}
    BracketEntry e;
    e.terms.push_back({0, IndexPoly2{{{Rat(1), 1, 0}, {Rat(-1), 0, 1}}}});
    e.central = IndexPoly1{{{c / 12, 3}, {-c / 12, 1}}};
    std::map<std::pair<int, int>, BracketEntry> table{{{0, 0}, e}};
    return std::make_shared<AlgebraPresentation>(std::move(gens), std::move(table),
                                                 std::map<std::string, Rat>{{"c", c}},
                                                 std::optional<int>(0));
}

std::shared_ptr<const AlgebraPresentation> AlgebraPresentation::heisenberg() {
    std::vector<GeneratorSpec> gens{{"a", 1, true, Rat(-1)}};
    // [a(m), a(n)] = m delta_{m+n,0}
    BracketEntry e;
    e.central = IndexPoly1{{{Rat(1), 1}}};
    std::map<std::pair<int, int>, BracketEntry> table{{{0, 0}, e}};
    return std::make_shared<AlgebraPresentation>(std::move(gens), std::move(table),
                                                 std::map<std::string, Rat>{}, std::nullopt);
}

std::shared_ptr<const AlgebraPresentation> AlgebraPresentation::preset(const std::string& name,
                                                                       const Rat& central_charge) {
    if (name == "virasoro") return virasoro(central_charge);
    if (name == "heisenberg") return heisenberg();
    throw UsageError("unknown algebra preset: " + name);
}

int AlgebraPresentation::generator_id(const std::string& name) const {
    for (size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name) return static_cast<int>(i);
    throw UsageError("unknown generator: " + name);
}

AlgebraElement AlgebraPresentation::bracket(const Mode& a, const Mode& b) const {
    if (a.gen < 0 || a.gen >= static_cast<int>(gens_.size()) || b.gen < 0 ||
        b.gen >= static_cast<int>(gens_.size()))
        throw UsageError("bracket: generator not in presentation");
    AlgebraElement out;
    auto apply = [&](const BracketEntry& e, long m, long n, const Rat& sign) {
        for (const auto& t : e.terms) {
            Rat c = t.coeff.eval(m, n) * sign;
            if (c == 0) continue;
            Word w{Mode{t.target_gen, m + n}};
            out[w] += c;
        }
        if (e.central && m + n == 0) {
            Rat c = e.central->eval(m) * sign;
            if (c != 0) out[Word{}] += c;
        }
    };
    if (auto it = table_.find({a.gen, b.gen}); it != table_.end()) {
        apply(it->second, a.index, b.index, Rat(1));
    } else if (auto jt = table_.find({b.gen, a.gen}); jt != table_.end()) {
        apply(jt->second, b.index, a.index, Rat(-1));
    }
    for (auto it = out.begin(); it != out.end();)
        it = (it->second == 0) ? out.erase(it) : std::next(it);
    return out;
}

bool AlgebraPresentation::mode_less(const Mode& a, const Mode& b) const {
    if (a.index != b.index) return a.index < b.index;
    return gens_[a.gen].name < gens_[b.gen].name;
}

AlgebraElement AlgebraPresentation::normal_order(const Word& w) const {
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        if (auto it = normal_order_memo_.find(w); it != normal_order_memo_.end())
            return it->second;
    }
    AlgebraElement result;
    // Worklist of (word, coefficient); each swap strictly lowers the
    // inversion count and bracket terms strictly shorten the word.
    std::vector<std::pair<Word, Rat>> work{{w, Rat(1)}};
    while (!work.empty()) {
        auto [word, coeff] = std::move(work.back());
        work.pop_back();
        size_t i = 0;
        bool canonical = true;
        for (; i + 1 < word.size(); ++i) {
            if (mode_less(word[i + 1], word[i])) {
                canonical = false;
                break;
            }
        }
        if (canonical) {
            auto it = result.emplace(std::move(word), Rat(0)).first;
            it->second += coeff;
            continue;
        }
        Word swapped = word;
        std::swap(swapped[i], swapped[i + 1]);
        work.emplace_back(std::move(swapped), coeff);
        AlgebraElement br = bracket(word[i], word[i + 1]);
        for (const auto& [bw, bc] : br) {
            Word repl;
            repl.insert(repl.end(), word.begin(), word.begin() + i);
            repl.insert(repl.end(), bw.begin(), bw.end());
            repl.insert(repl.end(), word.begin() + i + 2, word.end());
            work.emplace_back(std::move(repl), coeff * bc);
        }
    }
    for (auto it = result.begin(); it != result.end();)
        it = (it->second == 0) ? result.erase(it) : std::next(it);
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        normal_order_memo_.emplace(w, result);
    }
    return result;
}

std::string AlgebraPresentation::mode_label(const Mode& m) const {
    return gens_[m.gen].name + "(" + std::to_string(m.index) + ")";
}

std::string AlgebraPresentation::word_label(const Word& w) const {
    if (w.empty()) return "1";
    std::string s;
    for (const auto& m : w) s += mode_label(m);
    return s;
}

void add_scaled(AlgebraElement& into, const AlgebraElement& e, const Rat& c) {
    if (c == 0) return;
    for (const auto& [w, v] : e) {
        auto it = into.emplace(w, Rat(0)).first;
        it->second += v * c;
        if (it->second == 0) into.erase(it);
    }
}

AlgebraElement element_times_word(const AlgebraPresentation& pres, const AlgebraElement& e,
                                  const Word& w) {
    AlgebraElement out;
    for (const auto& [ew, c] : e) {
        Word prod = ew;
        prod.insert(prod.end(), w.begin(), w.end());
        add_scaled(out, pres.normal_order(prod), c);
    }
    return out;
}

AlgebraElement word_times_element(const AlgebraPresentation& pres, const Word& w,
                                  const AlgebraElement& e) {
    AlgebraElement out;
    for (const auto& [ew, c] : e) {
        Word prod = w;
        prod.insert(prod.end(), ew.begin(), ew.end());
        add_scaled(out, pres.normal_order(prod), c);
    }
    return out;
}

std::pair<Rat, Mode> adjoint_mode(const AlgebraPresentation& pres, const Mode& m) {
    const auto& g = pres.generator(m.gen);
    if (!g.quasiprimary)
        throw UsageError("adjoint only supports quasiprimary generators: " + g.name);
    return {g.quasiprimary_sign, Mode{m.gen, -m.index}};
}

std::pair<Rat, Word> adjoint_word(const AlgebraPresentation& pres, const Word& w) {
    Rat sign(1);
    Word out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        auto [s, mode] = adjoint_mode(pres, *it);
        sign *= s;
        out.push_back(mode);
    }
    return {sign, out};
}

}  // namespace fusion
