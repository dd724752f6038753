#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fusion/errors.hpp"
#include "fusion/module.hpp"

using namespace fusion;

namespace {

// c = -2, h = -1/8 with its level-2 relation detected from the Gram kernel.
Module make_m() {
    auto spec = ModuleSpec::virasoro(Rat(-2), Rat(-1, 8));
    spec.singular_relations = auto_detect_singular(spec, 2);
    return Module(spec);
}

// Independent pairing oracle: act the adjoint modes one at a time on module
// vectors of the Verma cover and read off the hw coefficient.  This route
// goes through graded vectors and level projections, not through a single
// enveloping-algebra rewrite.
Rat pairing_oracle(const Module& verma, const Word& x, const Word& y) {
    GradedVector v = verma.highest_weight_vector();
    for (auto it = y.rbegin(); it != y.rend(); ++it) v = verma.act(*it, v);
    auto [sign, ax] = adjoint_word(verma.pres(), x);
    for (auto it = ax.rbegin(); it != ax.rend(); ++it) v = verma.act(*it, v);
    auto it = v.levels.find(0);
    return it == v.levels.end() ? Rat(0) : it->second[0] * sign;
}

}  // namespace

TEST_CASE("verma basis of level 3 lists partitions largest part first") {
    Module verma(ModuleSpec::virasoro(Rat(-2), Rat(-1, 8)));
    auto labels = verma.level_basis(3);
    REQUIRE(labels.size() == 3);
    CHECK(labels[0] == "L(-3)|hw");
    CHECK(labels[1] == "L(-2)L(-1)|hw");
    CHECK(labels[2] == "L(-1)L(-1)L(-1)|hw");
}

TEST_CASE("level 0 is the highest-weight vector") {
    Module m = make_m();
    CHECK(m.level_basis(0) == std::vector<std::string>{"|hw"});
}

TEST_CASE("the level-2 relation collapses level 2 to one dimension") {
    Module m = make_m();
    REQUIRE(m.spec().singular_relations.size() == 1);
    CHECK(m.level_dim(2) == 1);
    CHECK(m.level_basis(2) == std::vector<std::string>{"L(-2)|hw"});
    // Quotient dimension = Verma dimension minus the submodule rank.
    for (long level = 0; level <= 6; ++level)
        CHECK(m.level_dim(level) ==
              m.verma_basis(level).size() - m.level_space(level).relation_rank());
}

TEST_CASE("mode actions on module vectors") {
    Module m = make_m();
    const int L = m.pres().generator_id("L");
    GradedVector hw = m.highest_weight_vector();

    SUBCASE("L(1) L(-2) hw = 3 L(-1) hw") {
        auto v = m.act(Mode{L, 1}, m.act(Mode{L, -2}, hw));
        GradedVector expect;
        expect.add_scaled(1, 0, Rat(3), 1);
        CHECK(v == expect);
    }
    SUBCASE("L(2) L(-2) hw = (4h + c/2) hw = -3/2 hw") {
        auto v = m.act(Mode{L, 2}, m.act(Mode{L, -2}, hw));
        GradedVector expect;
        expect.add_scaled(0, 0, Rat(-3, 2), 1);
        CHECK(v == expect);
    }
    SUBCASE("L(-1)^2 hw reduces to 1/2 L(-2) hw") {
        auto v = m.act(Mode{L, -1}, m.act(Mode{L, -1}, hw));
        GradedVector expect;
        expect.add_scaled(2, 0, Rat(1, 2), 1);
        CHECK(v == expect);
    }
    SUBCASE("reduction is a projection: acting keeps canonical coordinates") {
        auto v = m.act(Mode{L, -2}, m.act(Mode{L, -1}, hw));
        // Rewriting the reduced vector through the projection changes nothing.
        for (const auto& [level, coeffs] : v.levels) {
            std::vector<Rat> ambient(m.verma_basis(level).size(), Rat(0));
            for (size_t k = 0; k < coeffs.size(); ++k)
                ambient[m.level_space(level).representatives()[k]] = coeffs[k];
            CHECK(m.level_space(level).project(ambient) == coeffs);
        }
    }
}

TEST_CASE("gram matrices at low levels") {
    Module verma(ModuleSpec::virasoro(Rat(-2), Rat(-1, 8)));

    SUBCASE("level 0 is the unit pairing") {
        auto g = verma.gram_matrix(0);
        CHECK(g.at(0, 0) == Rat(1));
    }
    SUBCASE("level 1 is [2h]") {
        auto g = verma.gram_matrix(1);
        CHECK(g.at(0, 0) == Rat(-1, 4));
    }
    SUBCASE("level 2 matches the known degenerate matrix") {
        auto g = verma.gram_matrix(2);
        CHECK(g.at(0, 0) == Rat(-3, 2));
        CHECK(g.at(0, 1) == Rat(-3, 4));
        CHECK(g.at(1, 0) == Rat(-3, 4));
        CHECK(g.at(1, 1) == Rat(-3, 8));
        CHECK(g.at(0, 0) * g.at(1, 1) - g.at(0, 1) * g.at(1, 0) == 0);
    }
}

TEST_CASE("gram matrix agrees with the graded-action oracle") {
    Module verma(ModuleSpec::virasoro(Rat(-2), Rat(-1, 8)));
    for (long level = 1; level <= 4; ++level) {
        const auto& basis = verma.verma_basis(level);
        auto g = verma.gram_matrix(level);
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = 0; j < basis.size(); ++j)
                CHECK(g.at(i, j) == pairing_oracle(verma, basis[i], basis[j]));
    }
}

TEST_CASE("gram matrices are symmetric for sampled weights up to level 5") {
    for (const auto& [c, h] : std::vector<std::pair<Rat, Rat>>{
             {Rat(-2), Rat(-1, 8)}, {Rat(-2), Rat(1, 3)}, {Rat(1), Rat(2, 5)}}) {
        Module verma(ModuleSpec::virasoro(c, h));
        for (long level = 1; level <= 5; ++level) {
            auto g = verma.gram_matrix(level);
            CHECK(g == g.transposed());
        }
    }
}

TEST_CASE("level-2 singular vector of the c=-2, h=-1/8 Verma cover") {
    Module verma(ModuleSpec::virasoro(Rat(-2), Rat(-1, 8)));
    auto found = verma.find_singular_vectors(2);
    REQUIRE(found.size() == 1);
    const int L = verma.pres().generator_id("L");
    AlgebraElement expect;
    expect[Word{Mode{L, -1}, Mode{L, -1}}] = 1;
    expect[Word{Mode{L, -2}}] = Rat(-1, 2);
    CHECK(found[0] == expect);
}

TEST_CASE("level-1 singular vector of the vacuum Verma cover") {
    Module verma(ModuleSpec::virasoro(Rat(-2), Rat(0)));
    auto found = verma.find_singular_vectors(1);
    REQUIRE(found.size() == 1);
    const int L = verma.pres().generator_id("L");
    AlgebraElement expect;
    expect[Word{Mode{L, -1}}] = 1;
    CHECK(found[0] == expect);
}

TEST_CASE("generic weights have no singular vector at level 2") {
    Module verma(ModuleSpec::virasoro(Rat(-2), Rat(1, 3)));
    auto g = verma.gram_matrix(2);
    CHECK(g.at(0, 0) * g.at(1, 1) - g.at(0, 1) * g.at(1, 0) == Rat(-88, 27));
    CHECK(verma.find_singular_vectors(2).empty());
}

TEST_CASE("detected singular vectors sit in the gram kernel and are raised to zero") {
    Module verma(ModuleSpec::virasoro(Rat(-2), Rat(-1, 8)));
    const int L = verma.pres().generator_id("L");
    for (const auto& sv : verma.find_singular_vectors(2)) {
        const long level = element_level(sv);
        for (long n : {1L, 2L}) {
            auto hit = verma.evaluate_verma(
                word_times_element(verma.pres(), Word{Mode{L, n}}, sv));
            CHECK(hit.empty());
        }
        CHECK(level == 2);
    }
}

TEST_CASE("auto detection reports only new generators") {
    auto spec = ModuleSpec::virasoro(Rat(-2), Rat(-1, 8));
    auto found = auto_detect_singular(spec, 4);
    CHECK(found.size() == 1);  // descendants at levels 3, 4 are not re-listed
    CHECK(element_level(found[0]) == 2);
}

TEST_CASE("module construction rejects relations outside the gram kernel") {
    auto spec = ModuleSpec::virasoro(Rat(-2), Rat(-1, 8));
    const int L = spec.presentation->generator_id("L");
    AlgebraElement bogus;
    bogus[Word{Mode{L, -2}}] = 1;
    spec.singular_relations.push_back(bogus);
    CHECK_THROWS_AS(Module{spec}, UsageError);
}

TEST_CASE("heisenberg fock module") {
    Module fock(ModuleSpec::heisenberg_fock(Rat(1)));
    CHECK(fock.spec().highest_weight == Rat(1, 2));
    CHECK(fock.level_dim(0) == 1);
    CHECK(fock.level_dim(4) == 5);  // partitions of 4
    const int a = fock.pres().generator_id("a");
    GradedVector hw = fock.highest_weight_vector();
    // a(0) acts by the momentum; the level-1 pairing is -1 by the adjoint sign.
    GradedVector expect;
    expect.add_scaled(0, 0, Rat(1), 1);
    CHECK(fock.act(Mode{a, 0}, hw) == expect);
    CHECK(fock.gram_matrix(1).at(0, 0) == Rat(-1));
    CHECK(fock.find_singular_vectors(2).empty());
}
