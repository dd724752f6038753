#include "fusion/report.hpp"

#include <algorithm>
#include <sstream>

#include "fusion/errors.hpp"

namespace fusion {

namespace {

using nlohmann::json;

json config_echo(const RunConfig& cfg, long effective_lmax) {
    json j;
    j["subcommand"] = cfg.subcommand;
    j["algebra"] = cfg.algebra;
    if (cfg.algebra == "virasoro") {
        j["c"] = cfg.c;
        if (!cfg.h1.empty()) j["h1"] = cfg.h1;
        if (!cfg.h2.empty()) j["h2"] = cfg.h2;
    } else {
        if (!cfg.lambda1.empty()) j["lambda1"] = cfg.lambda1;
        if (!cfg.lambda2.empty()) j["lambda2"] = cfg.lambda2;
    }
    if (!cfg.singular_levels.empty()) j["singular_levels"] = cfg.singular_levels;
    if (cfg.auto_singular_max > 0) j["auto_singular_max"] = cfg.auto_singular_max;
    j["depth"] = cfg.depth;
    j["w"] = cfg.w;
    j["lmax"] = effective_lmax;
    return j;
}

json singular_vector_to_json(const Module& m, const AlgebraElement& sv) {
    json coeffs;
    for (const auto& [word, c] : sv) coeffs[m.pres().word_label(word)] = rat_to_string(c);
    json j;
    j["level"] = element_level(sv);
    j["coefficients"] = coeffs;
    return j;
}

json fusion_to_json(const FusionResult& r) {
    json j;
    j["basis"] = r.basis;
    j["dimension"] = r.dimension;
    j["l0_matrix"] = matrix_to_json(r.l0_matrix);
    j["jordan"] = jordan_to_json(r.jordan);
    json graded;
    for (const auto& [eig, count] : r.graded_dims) graded[rat_to_string(eig)] = count;
    j["graded_dims"] = graded;
    json spurious = json::array();
    for (const auto& state : r.spurious_states) {
        json s;
        for (const auto& [label, c] : state) s[label] = rat_to_string(c);
        spurious.push_back(s);
    }
    j["spurious_states"] = spurious;
    j["relation_count"] = r.relation_count;
    j["stabilized_at"] = r.stabilized_at;
    j["w"] = rat_to_string(r.w);
    j["depth"] = r.depth;
    if (!r.zero_modes.empty()) {
        json zm;
        for (const auto& [name, m] : r.zero_modes) zm[name] = matrix_to_json(m);
        j["zero_modes"] = zm;
    }
    return j;
}

json dual_to_json(const DualResult& r) {
    json j;
    j["unknowns"] = r.unknown_labels;
    j["matrix"] = matrix_to_json(r.l0_matrix);
    j["jordan"] = jordan_to_json(r.jordan);
    j["solution_dim"] = r.solution_dim;
    j["candidate_count"] = r.candidate_count;
    j["stabilized_at"] = r.stabilized_at;
    j["w"] = rat_to_string(r.w);
    j["depth"] = r.depth;
    return j;
}

long effective_lmax(const RunConfig& cfg, const Module& m1, const Module& m2) {
    const long floor = fuse_lmax_floor(m1, m2, cfg.depth);
    return cfg.lmax < 0 ? floor : cfg.lmax;
}

void render_text(const json& j, const std::string& key, int indent, std::ostream& os) {
    const std::string pad(static_cast<size_t>(indent) * 2, ' ');
    if (j.is_object()) {
        if (!key.empty()) os << pad << key << ":\n";
        for (auto it = j.begin(); it != j.end(); ++it)
            render_text(it.value(), it.key(), key.empty() ? indent : indent + 1, os);
    } else if (j.is_array()) {
        if (!key.empty()) os << pad << key << ":\n";
        size_t i = 0;
        for (const auto& v : j) render_text(v, "[" + std::to_string(i++) + "]", indent + 1, os);
    } else {
        os << pad << key << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

}  // namespace

nlohmann::json matrix_to_json(const RatMatrix& m) {
    json rows = json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (size_t jx = 0; jx < m.cols(); ++jx) row.push_back(rat_to_string(m.at(i, jx)));
        rows.push_back(row);
    }
    return rows;
}

nlohmann::json jordan_to_json(const JordanReport& rep) {
    json blocks = json::array();
    for (const auto& b : rep.blocks) {
        json jb;
        jb["eigenvalue"] = rat_to_string(b.eigenvalue);
        jb["block_sizes"] = b.block_sizes;
        blocks.push_back(jb);
    }
    if (!rep.residual_factors.empty()) {
        // Residual factors ride along as pseudo-entries so nothing is lost.
        for (const auto& f : rep.residual_factors) {
            json jf;
            std::vector<std::string> coeffs;
            for (const auto& c : f.coeffs) coeffs.push_back(rat_to_string(c));
            jf["residual_coeffs"] = coeffs;
            jf["multiplicity"] = f.multiplicity;
            blocks.push_back(jf);
        }
    }
    return blocks;
}

std::shared_ptr<const Module> build_module(const RunConfig& cfg, const std::string& h,
                                           const std::string& lambda) {
    ModuleSpec spec;
    if (cfg.algebra == "virasoro") {
        if (h.empty()) throw UsageError("virasoro module needs a highest weight");
        spec = ModuleSpec::virasoro(rat_from_string(cfg.c), rat_from_string(h));
    } else if (cfg.algebra == "heisenberg") {
        if (lambda.empty()) throw UsageError("heisenberg module needs a momentum");
        spec = ModuleSpec::heisenberg_fock(rat_from_string(lambda));
    } else {
        throw UsageError("unknown algebra preset: " + cfg.algebra);
    }

    if (cfg.auto_singular_max > 0) {
        spec.singular_relations = auto_detect_singular(spec, cfg.auto_singular_max);
    } else if (!cfg.singular_levels.empty()) {
        std::vector<long> levels = cfg.singular_levels;
        std::sort(levels.begin(), levels.end());
        ModuleSpec probe = spec;
        for (long level : levels) {
            Module verma(ModuleSpec{spec.presentation, spec.highest_weight, spec.zero_mode_values,
                                    {}});
            Module current(probe);
            for (const auto& sv : verma.find_singular_vectors(level)) {
                const auto& basis = verma.verma_basis(level);
                std::vector<Rat> ambient(basis.size(), Rat(0));
                for (const auto& [word, c] : sv) {
                    auto it = std::find(basis.begin(), basis.end(), word);
                    ambient[it - basis.begin()] = c;
                }
                if (!current.level_space(level).is_zero(ambient))
                    probe.singular_relations.push_back(sv);
            }
        }
        spec.singular_relations = probe.singular_relations;
    }
    return std::make_shared<Module>(spec);
}

nlohmann::json run(const RunConfig& cfg) {
    json doc;
    doc["schema_version"] = 1;

    if (cfg.subcommand == "singular") {
        auto verma_cfg = cfg;
        verma_cfg.singular_levels.clear();
        verma_cfg.auto_singular_max = 0;
        auto verma = build_module(verma_cfg, cfg.h1, cfg.lambda1);
        const long max_level = cfg.auto_singular_max > 0
                                   ? cfg.auto_singular_max
                                   : (cfg.singular_levels.empty()
                                          ? 0
                                          : *std::max_element(cfg.singular_levels.begin(),
                                                              cfg.singular_levels.end()));
        if (max_level <= 0) throw UsageError("singular needs --auto-singular-max or levels");
        auto found = auto_detect_singular(verma->spec(), max_level);
        json vectors = json::array();
        for (const auto& sv : found) vectors.push_back(singular_vector_to_json(*verma, sv));
        doc["singular_vectors"] = vectors;
        doc["config"] = config_echo(cfg, max_level);
        return doc;
    }

    if (cfg.subcommand == "module-basis") {
        auto m = build_module(cfg, cfg.h1, cfg.lambda1);
        const long lmax = cfg.lmax < 0 ? 6 : cfg.lmax;
        json dims, bases;
        for (long level = 0; level <= lmax; ++level) {
            dims[std::to_string(level)] = m->level_dim(level);
            bases[std::to_string(level)] = m->level_basis(level);
        }
        doc["dims"] = dims;
        doc["bases"] = bases;
        doc["config"] = config_echo(cfg, lmax);
        return doc;
    }

    if (cfg.subcommand == "fuse" || cfg.subcommand == "dual" || cfg.subcommand == "crosscheck") {
        auto m1 = build_module(cfg, cfg.h1, cfg.lambda1);
        auto m2 = build_module(cfg, cfg.h2.empty() ? cfg.h1 : cfg.h2,
                               cfg.lambda2.empty() ? cfg.lambda1 : cfg.lambda2);
        const long lmax = effective_lmax(cfg, *m1, *m2);
        const Rat w = rat_from_string(cfg.w);
        doc["config"] = config_echo(cfg, lmax);

        if (cfg.subcommand == "dual") {
            auto dual = solve_dual(m1, m2, cfg.depth, w, lmax, cfg.audit_extra_family);
            doc["dual"] = dual_to_json(dual);
            return doc;
        }

        auto res = fuse(m1, m2, cfg.depth, w, lmax);
        doc["fusion"] = fusion_to_json(res);
        if (cfg.subcommand == "crosscheck" || cfg.check_dual) {
            auto dual = solve_dual(m1, m2, cfg.depth, w, lmax, cfg.audit_extra_family);
            doc["dual"] = dual_to_json(dual);
            const auto rep = crosscheck(res, dual);
            json cc;
            cc["basis_match"] = rep.basis_match;
            cc["transpose_match"] = rep.transpose_match;
            cc["jordan_match"] = rep.jordan_match;
            cc["ok"] = rep.ok();
            doc["crosscheck"] = cc;
            if (!rep.ok())
                throw InternalCheckError("crosscheck mismatch:\n" + emit(doc, "text"));
        }
        return doc;
    }

    throw UsageError("unknown subcommand: " + cfg.subcommand);
}

std::string emit(const nlohmann::json& doc, const std::string& format) {
    if (format == "json") return doc.dump(2) + "\n";
    if (format == "text") {
        std::ostringstream os;
        render_text(doc, "", 0, os);
        return os.str();
    }
    throw UsageError("unknown format: " + format);
}

}  // namespace fusion
