#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fusion/rational.hpp"

namespace fusion {

// A mode x(n) of a generator field.  Indices are level-adjusted throughout:
// x(-n) raises the conformal weight by n, for every generator.  For the
// Virasoro field this coincides with the usual L(n) labelling.
struct Mode {
    int gen;    // index into the presentation's generator list
    long index;

    // Map-key order only; canonical PBW order is AlgebraPresentation::mode_less.
    friend auto operator<=>(const Mode&, const Mode&) = default;
};

struct GeneratorSpec {
    std::string name;
    int weight;             // conformal weight, >= 1
    bool quasiprimary;      // the only case the adjoint supports
    Rat quasiprimary_sign;  // (-1)^weight
};

// Sparse polynomial in the two mode indices (m, n) with exact coefficients.
struct IndexPoly2 {
    struct Term {
        Rat c;
        unsigned dm, dn;
    };
    std::vector<Term> terms;
    Rat eval(long m, long n) const;
};

// Univariate version, used for central terms.
struct IndexPoly1 {
    struct Term {
        Rat c;
        unsigned d;
    };
    std::vector<Term> terms;
    Rat eval(long m) const;
};

struct BracketTerm {
    int target_gen;
    IndexPoly2 coeff;  // evaluated at (m, n); resulting mode index is m + n
};

struct BracketEntry {
    std::vector<BracketTerm> terms;
    std::optional<IndexPoly1> central;  // contributes central.eval(m) * id when m + n == 0
};

// A product of modes, canonical when sorted by (index ascending, generator
// name ascending): the most level-raising modes stand leftmost.
using Word = std::vector<Mode>;

// Rat-linear combination of words; the empty word is the identity.
using AlgebraElement = std::map<Word, Rat>;

// A Lie-type chiral algebra given by generators and linear bracket data.
// Immutable after construction; the normal-order memo is internally locked,
// so presentations are safe to share across threads.
class AlgebraPresentation {
public:
    AlgebraPresentation(std::vector<GeneratorSpec> gens,
                        std::map<std::pair<int, int>, BracketEntry> table,
                        std::map<std::string, Rat> central_params,
                        std::optional<int> conformal_gen);

    static std::shared_ptr<const AlgebraPresentation> virasoro(const Rat& c);
    static std::shared_ptr<const AlgebraPresentation> heisenberg();
    // Preset lookup by name ("virasoro" takes the central charge).
    static std::shared_ptr<const AlgebraPresentation> preset(const std::string& name,
                                                             const Rat& central_charge);

    size_t num_generators() const { return gens_.size(); }
    const GeneratorSpec& generator(int g) const { return gens_.at(g); }
    int generator_id(const std::string& name) const;
    const std::map<std::string, Rat>& central_params() const { return central_params_; }
    // Index of the conformal generator (the one whose zero mode grades), if any.
    std::optional<int> conformal_generator() const { return conformal_gen_; }

    // [a, b] as a canonical element, central term included when the indices
    // sum to zero.
    AlgebraElement bracket(const Mode& a, const Mode& b) const;

    // PBW rewriting of an arbitrary word into canonical form.
    AlgebraElement normal_order(const Word& w) const;

    // Canonical ordering of modes; true when a must stand strictly left of b.
    bool mode_less(const Mode& a, const Mode& b) const;

    std::string mode_label(const Mode& m) const;
    std::string word_label(const Word& w) const;  // "" -> "1"

private:
    std::vector<GeneratorSpec> gens_;
    std::map<std::pair<int, int>, BracketEntry> table_;
    std::map<std::string, Rat> central_params_;
    std::optional<int> conformal_gen_;

    mutable std::mutex memo_mutex_;
    mutable std::map<Word, AlgebraElement> normal_order_memo_;
};

// Element helpers.
void add_scaled(AlgebraElement& into, const AlgebraElement& e, const Rat& c);
AlgebraElement element_times_word(const AlgebraPresentation& pres, const AlgebraElement& e,
                                  const Word& w);
AlgebraElement word_times_element(const AlgebraPresentation& pres, const Word& w,
                                  const AlgebraElement& e);

// Adjoint of a quasiprimary mode: sign (-1)^weight together with the index
// flip x(n) -> x(-n).  Throws UsageError for non-quasiprimary generators.
std::pair<Rat, Mode> adjoint_mode(const AlgebraPresentation& pres, const Mode& m);

// Adjoint of a word: reversed order, every mode adjointed, signs collected.
std::pair<Rat, Word> adjoint_word(const AlgebraPresentation& pres, const Word& w);

}  // namespace fusion
