#include <CLI11.hpp>
#include <iostream>

#include "fusion/errors.hpp"
#include "fusion/report.hpp"

namespace {

void add_common(CLI::App* cmd, fusion::RunConfig& cfg) {
    cmd->add_option("--algebra", cfg.algebra, "Algebra preset: virasoro | heisenberg")
        ->default_val("virasoro");
    cmd->add_option("--central-charge", cfg.c, "Central charge c as p/q (virasoro)")
        ->default_val("0");
    cmd->add_option("--h1", cfg.h1, "Highest weight of the first module (p/q)");
    cmd->add_option("--h2", cfg.h2, "Highest weight of the second module (p/q)");
    cmd->add_option("--lambda1", cfg.lambda1, "Momentum of the first Fock module (heisenberg)");
    cmd->add_option("--lambda2", cfg.lambda2, "Momentum of the second Fock module (heisenberg)");
    cmd->add_option("--singular-level", cfg.singular_levels,
                    "Level to scan for singular vectors (repeatable)");
    cmd->add_option("--auto-singular-max", cfg.auto_singular_max,
                    "Detect all singular vectors up to this level");
    cmd->add_option("--depth", cfg.depth, "Depth d of the quotient")->default_val(0);
    cmd->add_option("--w", cfg.w, "Insertion point w as a nonzero rational")->default_val("1");
    cmd->add_option("--lmax", cfg.lmax, "Truncation level (default: documented floor)");
    cmd->add_option("--format", cfg.format, "Output format: json | text")->default_val("json");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact fusion products of highest-weight modules over Virasoro-type algebras"};
    app.require_subcommand(1);

    fusion::RunConfig cfg;
    auto* singular = app.add_subcommand("singular", "Detect singular vectors of a Verma cover");
    auto* basis = app.add_subcommand("module-basis", "Graded bases of a highest-weight module");
    auto* fuse_cmd = app.add_subcommand("fuse", "Depth-d fusion quotient (quotient pipeline)");
    auto* dual = app.add_subcommand("dual", "Compatible-functional pipeline (dual side)");
    auto* cross = app.add_subcommand("crosscheck", "Run both pipelines and compare");
    for (auto* cmd : {singular, basis, fuse_cmd, dual, cross}) add_common(cmd, cfg);
    fuse_cmd->add_flag("--check-dual", cfg.check_dual, "Also run the dual pipeline and compare");
    for (auto* cmd : {fuse_cmd, dual, cross})
        cmd->add_flag("--audit-extra-family", cfg.audit_extra_family,
                      "Impose the wider smearing family on the dual side");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    try {
        const auto doc = fusion::run(cfg);
        std::cout << fusion::emit(doc, cfg.format);
        return 0;
    } catch (const fusion::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const fusion::NotStabilizedError& e) {
        std::cerr << "not stabilized: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal check failed: " << e.what() << "\n";
        return 3;
    }
}
