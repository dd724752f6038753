// Acceptance suite: one line per criterion, PASS or FAIL, with timings.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "fusion/dual.hpp"
#include "fusion/report.hpp"

using namespace fusion;
using Clock = std::chrono::steady_clock;

namespace {

std::shared_ptr<const Module> module_m() {
    auto spec = ModuleSpec::virasoro(Rat(-2), Rat(-1, 8));
    spec.singular_relations = auto_detect_singular(spec, 2);
    return std::make_shared<Module>(spec);
}

std::shared_ptr<const Module> module_vacuum() {
    auto spec = ModuleSpec::virasoro(Rat(-2), Rat(0));
    spec.singular_relations = auto_detect_singular(spec, 1);
    return std::make_shared<Module>(spec);
}

struct Criterion {
    int number;
    std::string title;
    double budget_seconds;
    std::function<void(std::ostringstream&)> body;  // throws on failure
};

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

std::string rat_map_to_string(const std::map<std::string, Rat>& m) {
    std::ostringstream os;
    for (const auto& [k, v] : m) os << " (" << rat_to_string(v) << ") " << k << ";";
    return os.str();
}

// ---- criterion bodies -----------------------------------------------------

void criterion1(std::ostringstream&) {
    Module verma(ModuleSpec::virasoro(Rat(-2), Rat(-1, 8)));
    auto g = verma.gram_matrix(2);
    expect(g.at(0, 0) == Rat(-3, 2) && g.at(0, 1) == Rat(-3, 4) && g.at(1, 0) == Rat(-3, 4) &&
               g.at(1, 1) == Rat(-3, 8),
           "level-2 Gram matrix mismatch");
    expect(g.at(0, 0) * g.at(1, 1) - g.at(0, 1) * g.at(1, 0) == 0, "determinant is not zero");
    auto svs = verma.find_singular_vectors(2);
    expect(svs.size() == 1, "expected exactly one singular vector");
    const int L = verma.pres().generator_id("L");
    AlgebraElement expected;
    expected[Word{Mode{L, -1}, Mode{L, -1}}] = 1;
    expected[Word{Mode{L, -2}}] = Rat(-1, 2);
    expect(svs[0] == expected, "singular vector is not L(-1)^2 - 1/2 L(-2)");
}

void criterion2(std::ostringstream&) {
    auto m = module_m();
    auto res = fuse(m, m, 0, Rat(1), fuse_lmax_floor(*m, *m, 0));
    expect(res.dimension == 2, "dimension != 2");
    expect(res.basis == std::vector<std::string>{"|hw ⊗ |hw", "L(-1)|hw ⊗ |hw"},
           "unexpected basis");
    const auto& l0 = res.l0_matrix;
    RatMatrix sq = l0 * l0;
    bool nonzero = false, nilpotent = true;
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) {
            if (l0.at(i, j) != 0) nonzero = true;
            if (sq.at(i, j) != 0) nilpotent = false;
        }
    expect(nonzero && nilpotent, "L(0) is not a nonzero nilpotent");
    expect(res.jordan.blocks.size() == 1 && res.jordan.blocks[0].eigenvalue == Rat(0) &&
               res.jordan.blocks[0].block_sizes == std::vector<size_t>{2},
           "Jordan report is not a single size-2 block at 0");
}

void criterion3(std::ostringstream& note) {
    auto m = module_m();
    auto res = fuse(m, m, 1, Rat(1), fuse_lmax_floor(*m, *m, 1));
    expect(res.dimension == 3, "dimension != 3");
    expect(res.graded_dims == std::map<Rat, size_t>{{Rat(0), 2}, {Rat(1), 1}},
           "graded dims are not {0: 2, 1: 1}");
    std::vector<Rat> eigenvalues;
    for (const auto& b : res.jordan.blocks)
        for (size_t s : b.block_sizes)
            for (size_t k = 0; k < s; ++k) eigenvalues.push_back(b.eigenvalue);
    std::sort(eigenvalues.begin(), eigenvalues.end());
    expect(eigenvalues == std::vector<Rat>{Rat(0), Rat(0), Rat(1)},
           "generalized eigenvalues are not {0, 0, 1}");

    expect(res.spurious_states.size() == 1, "expected exactly one spurious state");
    // Stated target: 2 (L(-1)hw x L(-1)hw) - 1/2 (L(-1)hw x hw) + 1/2 (hw x L(-1)hw),
    // compared up to scale after reduction to the candidate coordinates.
    std::map<std::string, Rat> stated{{"L(-1)|hw ⊗ L(-1)|hw", Rat(2)},
                                      {"L(-1)|hw ⊗ |hw", Rat(-1, 2)},
                                      {"|hw ⊗ L(-1)|hw", Rat(1, 2)}};
    std::map<std::string, Rat> got = res.spurious_states[0];
    const Rat scale = stated.at("L(-1)|hw ⊗ L(-1)|hw") / got.at("L(-1)|hw ⊗ L(-1)|hw");
    for (auto& [k, v] : got) v *= scale;
    if (got != stated) {
        note << "\n       computed spurious state (scaled):" << rat_map_to_string(got)
             << "\n       stated form:" << rat_map_to_string(stated)
             << "\n       the computed |hw ⊗ |hw coefficient is forced by the depth-0"
             << "\n       compatible functionals and by the {0,0,1} spectrum above;"
             << " see notes/decisions.md";
        throw Failure("spurious state differs from the stated vector (extra |hw ⊗ |hw term)");
    }
}

void criterion4(std::ostringstream&) {
    auto m = module_m();
    for (const Rat& w : {Rat(1), Rat(2), Rat(3)}) {
        auto res = solve_dual(m, m, 0, w, fuse_lmax_floor(*m, *m, 0));
        RatMatrix expected(2, 2);
        expected.at(0, 0) = Rat(-1, 4);
        expected.at(0, 1) = w;
        expected.at(1, 0) = Rat(-1, 16) / w;
        expected.at(1, 1) = Rat(1, 4);
        expect(res.l0_matrix == expected, "dual matrix mismatch at w = " + rat_to_string(w));
        expect(res.l0_matrix.at(0, 0) + res.l0_matrix.at(1, 1) == 0, "trace != 0");
        expect(res.l0_matrix.at(0, 0) * res.l0_matrix.at(1, 1) -
                       res.l0_matrix.at(0, 1) * res.l0_matrix.at(1, 0) ==
                   0,
               "det != 0");
    }
}

void criterion5(std::ostringstream&) {
    auto m = module_m();
    for (const Rat& w : {Rat(1), Rat(2)}) {
        auto ngk = fuse(m, m, 0, w, fuse_lmax_floor(*m, *m, 0));
        auto dual = solve_dual(m, m, 0, w, fuse_lmax_floor(*m, *m, 0));
        auto rep = crosscheck(ngk, dual);
        expect(rep.basis_match, "basis pairing mismatch at w = " + rat_to_string(w));
        expect(rep.transpose_match, "transpose mismatch at w = " + rat_to_string(w));
        expect(rep.jordan_match, "Jordan mismatch at w = " + rat_to_string(w));
    }
}

void criterion6(std::ostringstream&) {
    auto v = module_vacuum();
    auto m = module_m();
    auto res = fuse(v, m, 0, Rat(1), fuse_lmax_floor(*v, *m, 0));
    expect(res.dimension == 1, "dimension != 1");
    expect(res.l0_matrix.at(0, 0) == Rat(-1, 8), "L(0) eigenvalue != -1/8");
}

void criterion7(std::ostringstream&) {
    auto f1 = std::make_shared<Module>(ModuleSpec::heisenberg_fock(Rat(1)));
    auto f2 = std::make_shared<Module>(ModuleSpec::heisenberg_fock(Rat(2)));
    auto res = fuse(f1, f2, 0, Rat(1), fuse_lmax_floor(*f1, *f2, 0));
    expect(res.dimension <= 1, "dimension > 1");
    expect(res.dimension == 1, "dimension collapsed to 0");
    expect(res.zero_modes.at("a").at(0, 0) == Rat(3), "a(0) eigenvalue != 3");
}

void criterion8(std::ostringstream&) {
    auto m = module_m();
    auto res = fuse(m, m, 2, Rat(1), fuse_lmax_floor(*m, *m, 2));
    expect(res.dimension == 6, "dimension != 6");
    expect(res.graded_dims == std::map<Rat, size_t>{{Rat(0), 2}, {Rat(1), 1}, {Rat(2), 3}},
           "graded dims are not {0: 2, 1: 1, 2: 3}");
}

void criterion9(std::ostringstream&) {
    // Jacobi identity on all Virasoro triples with |index| <= 4.
    auto vir = AlgebraPresentation::virasoro(Rat(-2));
    const int L = vir->generator_id("L");
    auto commutator = [&](const AlgebraElement& a, const AlgebraElement& b) {
        AlgebraElement out;
        for (const auto& [aw, ac] : a)
            for (const auto& [bw, bc] : b) {
                Word ab = aw;
                ab.insert(ab.end(), bw.begin(), bw.end());
                Word ba = bw;
                ba.insert(ba.end(), aw.begin(), aw.end());
                add_scaled(out, vir->normal_order(ab), ac * bc);
                add_scaled(out, vir->normal_order(ba), -ac * bc);
            }
        return out;
    };
    for (long a = -4; a <= 4; ++a)
        for (long b = -4; b <= 4; ++b)
            for (long c = -4; c <= 4; ++c) {
                AlgebraElement ea, eb, ec;
                ea[Word{Mode{L, a}}] = 1;
                eb[Word{Mode{L, b}}] = 1;
                ec[Word{Mode{L, c}}] = 1;
                AlgebraElement acc = commutator(ea, commutator(eb, ec));
                add_scaled(acc, commutator(eb, commutator(ec, ea)), Rat(1));
                add_scaled(acc, commutator(ec, commutator(ea, eb)), Rat(1));
                expect(acc.empty(), "Jacobi identity failed");
            }

    // Coproduct homomorphism for |index| <= 3 on an lmax = 6 truncation.
    auto m = module_m();
    auto space = std::make_shared<TensorSpace>(m, m, 6);
    for (long a = -3; a <= 3; ++a)
        for (long b = -3; b <= 3; ++b) {
            TensorElement lhs;
            lhs.space = space.get();
            lhs.add_scaled(delta2(*space, L, a + b, Rat(1), tensor_unit(*space, 0)), Rat(a - b));
            if (a + b == 0)
                lhs.add_scaled(tensor_unit(*space, 0), Rat(-2) / 12 * Rat(a * a * a - a));
            auto rhs = delta2(*space, L, a, Rat(1),
                              delta2(*space, L, b, Rat(1), tensor_unit(*space, 0)));
            rhs.add_scaled(delta2(*space, L, b, Rat(1),
                                  delta2(*space, L, a, Rat(1), tensor_unit(*space, 0))),
                           Rat(-1));
            expect(lhs == rhs, "coproduct homomorphism failed");
        }

    // Adjointness for |n| <= 2 against a seeded random functional.
    {
        auto psi_space = std::make_shared<TensorSpace>(m, m, 5);
        std::mt19937 rng(271828);
        std::uniform_int_distribution<int> val(-4, 4);
        Functional psi;
        psi.space = psi_space.get();
        for (size_t k = 0; k < psi_space->dim(); ++k) psi.values[k] = Rat(val(rng));
        for (long n = -2; n <= 2; ++n) {
            Functional moved = dual_action(*psi_space, L, n, Rat(1), psi);
            for (size_t k = 0; k < psi_space->dim(); ++k) {
                const auto& co = psi_space->coord(k);
                if (co.l1 + co.l2 + std::labs(n) + 1 > psi_space->lmax()) continue;
                auto img = delta2(*psi_space, L, -n, Rat(1), tensor_unit(*psi_space, k));
                auto it = moved.values.find(k);
                const Rat lhs = (it == moved.values.end()) ? Rat(0) : it->second;
                expect(lhs == psi.pair(img), "adjointness failed");
            }
        }
    }

    // Determinism: bit-identical reruns of the full pipeline.
    {
        RunConfig cfg;
        cfg.subcommand = "fuse";
        cfg.c = "-2";
        cfg.h1 = cfg.h2 = "-1/8";
        cfg.singular_levels = {2};
        cfg.depth = 0;
        expect(emit(run(cfg), "json") == emit(run(cfg), "json"), "reruns differ");
    }

    // Jordan reports are w-independent for w in {1, 2}.
    for (long d : {0L, 1L}) {
        auto j1 = fuse(m, m, d, Rat(1), fuse_lmax_floor(*m, *m, d)).jordan;
        auto j2 = fuse(m, m, d, Rat(2), fuse_lmax_floor(*m, *m, d)).jordan;
        expect(j1 == j2, "Jordan report depends on w at depth " + std::to_string(d));
    }

    // Depth-quotient dimensions are non-decreasing for d <= 3.
    size_t prev = 0;
    for (long d = 0; d <= 3; ++d) {
        const size_t dim = depth_quotient(*m, d, 6).dim();
        expect(dim >= prev, "depth quotient dimension decreased");
        prev = dim;
    }
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {1, "level-2 Gram matrix and singular vector at c=-2, h=-1/8", 1.0, criterion1},
        {2, "depth-0 self-fusion: dimension 2, nilpotent L(0), size-2 block", 5.0, criterion2},
        {3, "depth-1 self-fusion: dimension 3, grading, spurious state", 30.0, criterion3},
        {4, "dual L(0) matrix at w = 1, 2, 3 with zero trace and determinant", 15.0, criterion4},
        {5, "quotient pipeline transposes onto the dual pipeline (w = 1, 2)", 10.0, criterion5},
        {6, "vacuum module is a unit at depth 0 with eigenvalue -1/8", 5.0, criterion6},
        {7, "fock fusion conserves momentum: dimension 1, a(0) = 3", 2.0, criterion7},
        {8, "depth-2 self-fusion graded dims {0: 2, 1: 1, 2: 3}", 300.0, criterion8},
        {9, "property suites: Jacobi, homomorphism, adjointness, determinism, w, depths", 120.0,
         criterion9},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::ostringstream note;
        const auto start = Clock::now();
        bool pass = true;
        std::string reason;
        try {
            c.body(note);
        } catch (const std::exception& e) {
            pass = false;
            reason = e.what();
        }
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        if (pass && secs >= c.budget_seconds) {
            pass = false;
            reason = "over time budget";
        }
        if (!pass) ++failures;
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(2);
        line << (pass ? "[PASS]" : "[FAIL]") << " criterion " << c.number << ": " << c.title
             << " (" << secs << "s < " << c.budget_seconds << "s)";
        if (!pass) line << " -- " << reason;
        std::cout << line.str() << note.str() << "\n";
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed")
              << "\n";
    return failures;
}
