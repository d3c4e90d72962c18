// Command-line front end: every engine behind one binary with exact-rational,
// deterministic, machine-readable output.
//
// Exit codes: 0 success, 1 domain error (structured JSON on stderr), 2 usage.

#include "cosm/builtins.hpp"
#include "cosm/dualnet.hpp"
#include "cosm/oracle.hpp"
#include "cosm/system_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace cosm;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", "cannot write '" + path + "'");
    out << text;
}

Rational parse_rational_arg(const std::string& text, const char* what) {
    auto r = parse_rational(text);
    if (!r) throw Error("bad-params", std::string("cannot parse ") + what + " '" + text + "'");
    return *r;
}

struct CacheLayer {
    std::string dir;  // empty: disabled
    bool bypass = false;

    static CacheLayer from_env(bool no_cache) {
        CacheLayer layer;
        if (const char* env = std::getenv("COSM_CACHE_DIR")) layer.dir = env;
        layer.bypass = no_cache;
        return layer;
    }
    bool enabled() const { return !dir.empty() && !bypass; }

    std::string path_for(const std::string& fingerprint, std::size_t measure,
                         const std::string& context, const std::string& mode) const {
        return dir + "/" + fingerprint + "." + std::to_string(measure) + "." + context + "." + mode +
               ".json";
    }
    std::optional<std::vector<Cost>> load(const CombinationalSystem& sys,
                                          const std::string& fingerprint, std::size_t measure,
                                          const std::string& context, const std::string& mode) const {
        if (!enabled()) return std::nullopt;
        std::ifstream in(path_for(fingerprint, measure, context, mode));
        if (!in) return std::nullopt;
        Json doc = Json::parse(in, nullptr, false);
        if (doc.is_discarded() || !doc.is_object() || !doc.contains("values")) return std::nullopt;
        std::vector<Cost> table(sys.entities.size(), Cost::infinity());
        for (EntityIndex x = 0; x < sys.entities.size(); ++x) {
            const auto& key = sys.entities[x];
            if (!doc["values"].contains(key)) return std::nullopt;
            auto c = Cost::parse(doc["values"][key].get<std::string>());
            if (!c) return std::nullopt;
            table[x] = *c;
        }
        return table;
    }
    void store(const CombinationalSystem& sys, const std::string& fingerprint, std::size_t measure,
               const std::string& context, const std::string& mode,
               const std::vector<Cost>& table) const {
        if (!enabled()) return;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        Json doc;
        doc["values"] = Json::object();
        for (EntityIndex x = 0; x < sys.entities.size(); ++x)
            doc["values"][sys.entities[x]] = table[x].str();
        std::ofstream out(path_for(fingerprint, measure, context, mode));
        if (out) out << doc.dump(2) << "\n";
    }
};

Json derivation_json(const CombinationalSystem& sys, const Expression& witness) {
    Json steps = Json::array();
    for (const AutoOp& step : derivation_steps(sys, witness)) {
        Json js;
        js["op"] = step.op;
        js["left"] = step.left_address;
        js["right"] = step.right_address;
        js["outputs"] = step.output_addresses;
        steps.push_back(js);
    }
    return steps;
}

Json intensity_json(const Intensity& i) { return Json(i.str()); }

Json record_json(const CombinationalSystem& sys, const PatternRecord& rec) {
    Json j;
    j["y"] = sys.entities[rec.y];
    j["z"] = sys.entities[rec.z];
    j["op"] = sys.operators[rec.op].id;
    j["target"] = sys.entities[rec.target];
    j["context"] = rec.context == kNoEntity ? "e" : sys.entities[rec.context];
    Json ints = Json::array();
    for (const auto& i : rec.intensities) ints.push_back(intensity_json(i));
    j["intensities"] = ints;
    switch (rec.classification) {
        case MultipatternClass::Full: j["classification"] = "full"; break;
        case MultipatternClass::Mixed: j["classification"] = "mixed"; break;
        default: j["classification"] = "none"; break;
    }
    if (rec.classification == MultipatternClass::Full) {
        auto [cls, mean] = classify_multipattern(rec.intensities);
        (void)cls;
        if (mean) {
            j["fullIntensity"] =
                Json{{"radicand", to_string(mean->radicand)}, {"rootDegree", mean->degree}};
        }
    }
    return j;
}

Json table_json(const CombinationalSystem& sys, const MetricTable& t) {
    Json j;
    j["construction"] = t.construction;
    Json rows = Json::array();
    for (std::size_t i = 0; i < t.size(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < t.size(); ++k) row.push_back(to_string(t.d[i][k]));
        rows.push_back(row);
    }
    j["table"] = rows;
    (void)sys;
    return j;
}

std::string table_csv(const CombinationalSystem& sys, const MetricTable& t) {
    std::ostringstream os;
    os << "entity";
    for (const auto& id : sys.entities) os << "," << id;
    os << "\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        os << sys.entities[i];
        for (std::size_t k = 0; k < t.size(); ++k) os << "," << to_string(t.d[i][k]);
        os << "\n";
    }
    return os.str();
}

EntityIndex optional_context(const CombinationalSystem& sys, const std::string& ctx) {
    return ctx.empty() ? kNoEntity : sys.entity_index(ctx);
}

void emit(const Json& doc) { std::cout << doc.dump(2) << "\n"; }

int run(int argc, char** argv) {
    CLI::App app{"compositional simplicity analyzer for finite combinational systems"};
    app.require_subcommand(1);
    bool no_cache = false;
    std::size_t threads = 1;
    app.add_flag("--no-cache", no_cache, "bypass the table cache");
    app.add_option("--threads", threads, "worker threads for pairwise computations");

    std::string system_path, entity, context, measure_id, mode = "free", output = "json";
    std::string elements, solver = "exact", target, yid, zid, opid, denominator = "per-measure";
    std::string positions = "left", construction = "tanimoto", alpha_text = "1/2", k_text = "1";
    std::string tol_text = "0", family, fixture, out_path, alphabet = "ab";
    bool frontier_flag = false, diagnose = false, all_scope = false;
    std::size_t iterate = 1, maxlen = 4, depth = 3;
    std::string atom_cost_text = "1", op_cost_text = "1", amplitude_text = "0";
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto add_system = [&](CLI::App* cmd) {
        cmd->add_option("--system", system_path, "system file")->required();
    };

    auto* c_validate = app.add_subcommand("validate", "load and validate a system file");
    add_system(c_validate);

    auto* c_simpl = app.add_subcommand("simplicity", "single-measure simplicity of an entity");
    add_system(c_simpl);
    c_simpl->add_option("--measure", measure_id)->required();
    c_simpl->add_option("--entity", entity)->required();
    c_simpl->add_option("--context", context);
    c_simpl->add_option("--mode", mode)->check(CLI::IsMember({"free", "literal"}));

    auto* c_multi = app.add_subcommand("multiset", "shared-plan cost of a multiset");
    add_system(c_multi);
    c_multi->add_option("--measure", measure_id)->required();
    c_multi->add_option("--elements", elements, "e.g. \"ab:1,aba:2\"")->required();
    c_multi->add_option("--solver", solver)->check(CLI::IsMember({"exact", "greedy"}));

    auto* c_bundle = app.add_subcommand("bundle", "Pareto simplicity bundle of an entity");
    add_system(c_bundle);
    c_bundle->add_option("--entity", entity)->required();
    c_bundle->add_option("--context", context);

    auto* c_pattern = app.add_subcommand("pattern", "pattern records and multipattern frontiers");
    add_system(c_pattern);
    c_pattern->add_option("--target", target)->required();
    c_pattern->add_option("--context", context);
    c_pattern->add_flag("--frontier", frontier_flag, "emit the multipattern frontier");
    c_pattern->add_option("--y", yid);
    c_pattern->add_option("--z", zid);
    c_pattern->add_option("--op", opid);
    c_pattern->add_option("--denominator", denominator)
        ->check(CLI::IsMember({"per-measure", "base"}));
    c_pattern->add_option("--output", output)->check(CLI::IsMember({"json", "csv"}));

    auto* c_hier = app.add_subcommand("hierarchy", "subpattern graph and order diagnostics");
    add_system(c_hier);
    c_hier->add_option("--context", context);
    c_hier->add_option("--positions", positions)->check(CLI::IsMember({"left", "both"}));
    c_hier->add_option("--output", output)->check(CLI::IsMember({"json", "dot"}));
    c_hier->add_flag("--diagnose", diagnose, "include antisymmetry/transitivity diagnostics");

    auto* c_metrics = app.add_subcommand("metrics", "heterarchical metric tables");
    add_system(c_metrics);
    c_metrics->add_option("--alpha", alpha_text, "intensional weight in [0,1]");
    c_metrics->add_option("--construction", construction)
        ->check(CLI::IsMember({"tanimoto", "hutchinson"}));
    c_metrics->add_option("--output", output)->check(CLI::IsMember({"json", "csv"}));

    auto* c_coh = app.add_subcommand("coherence", "dual-network coherence and fixed point");
    add_system(c_coh);
    c_coh->add_option("--k", k_text, "personality parameter")->required();
    c_coh->add_option("--alpha", alpha_text);
    c_coh->add_option("--iterate", iterate, "fixed-point iterations");
    c_coh->add_option("--tol", tol_text, "sup-norm stopping tolerance");

    auto* c_oracle = app.add_subcommand("oracle-check", "engine vs exhaustive enumeration");
    add_system(c_oracle);
    c_oracle->add_flag("--all", all_scope, "check every entity");
    c_oracle->add_option("--entity", entity, "check one entity");

    auto* c_gen = app.add_subcommand("generate", "emit a built-in system");
    c_gen->add_option("--fixture", fixture)->check(CLI::IsMember({"toy1", "toy2", "str1", "gamma"}));
    c_gen->add_option("--family", family)
        ->check(CLI::IsMember({"string-concat", "perturbed-concat", "gamma-system"}));
    c_gen->add_option("--alphabet", alphabet);
    c_gen->add_option("--maxlen", maxlen);
    c_gen->add_option("--depth", depth, "gamma-system tree depth");
    c_gen->add_option("--atom-cost", atom_cost_text);
    c_gen->add_option("--op-cost", op_cost_text);
    c_gen->add_option("--amplitude", amplitude_text);
    auto* seed_opt = c_gen->add_option("--seed", seed, "rng seed (required for perturbed-concat)");
    c_gen->add_option("--out", out_path, "write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cout << app.help();
            return 0;
        }
        std::cerr << e.what() << "\n" << app.help();
        return 2;
    }
    seed_set = seed_opt->count() > 0;

    const CacheLayer cache = CacheLayer::from_env(no_cache);

    if (c_gen->parsed()) {
        CombinationalSystem sys;
        if (!fixture.empty()) {
            if (fixture == "toy1") sys = make_toy1();
            else if (fixture == "toy2") sys = make_toy2();
            else if (fixture == "str1") sys = make_str1();
            else sys = make_gamma_fixture();
        } else if (!family.empty()) {
            if (family == "gamma-system") {
                GammaParams params;
                params.max_leaves = depth + 1;
                sys = generate_gamma_system(params);
            } else {
                StringConcatParams params;
                params.alphabet = alphabet;
                params.max_length = maxlen;
                params.atom_cost = Cost(parse_rational_arg(atom_cost_text, "atom cost"));
                params.op_cost = Cost(parse_rational_arg(op_cost_text, "op cost"));
                if (family == "perturbed-concat") {
                    params.amplitude = parse_rational_arg(amplitude_text, "amplitude");
                    if (params.amplitude > 0 && !seed_set)
                        throw Error("bad-params", "perturbed-concat requires --seed");
                    params.seed = seed;
                }
                sys = generate_string_concat(params);
            }
        } else {
            throw Error("bad-params", "generate needs --fixture or --family");
        }
        const std::string text = serialize_canonical(sys);
        if (out_path.empty())
            std::cout << text;
        else
            write_file(out_path, text);
        return 0;
    }

    CombinationalSystem sys = load_system(read_file(system_path));
    SimplicityEngine engine(sys);
    const std::string fingerprint = system_fingerprint(sys);

    if (c_validate->parsed()) {
        Json doc;
        doc["valid"] = true;
        doc["entities"] = sys.entities.size();
        doc["operators"] = sys.operators.size();
        doc["reactions"] = sys.reactions.size();
        doc["measures"] = sys.measures.size();
        doc["fingerprint"] = fingerprint;
        const FiltrationReport fr = sys.validate_filtration();
        doc["filtration"] = Json{{"present", fr.has_filtration_operator},
                                 {"pairsChecked", fr.pairs_checked},
                                 {"violations", fr.violations}};
        emit(doc);
        return 0;
    }

    if (c_simpl->parsed()) {
        const std::size_t j = sys.measure_index(measure_id);
        const EntityIndex x = sys.entity_index(entity);
        const EntityIndex w = optional_context(sys, context);
        const RelativeMode rmode = mode == "literal" ? RelativeMode::Literal : RelativeMode::FreeContext;
        const std::string ctx_key = context.empty() ? "e" : context;
        Cost value;
        bool from_cache = false;
        if (auto cached = cache.load(sys, fingerprint, j, ctx_key, mode)) {
            value = (*cached)[x];
            from_cache = true;
        } else {
            value = engine.relative_simplicity(j, x, w, rmode);
            const CostTable& table = engine.relative_table(j, w, rmode);
            cache.store(sys, fingerprint, j, ctx_key, mode, table.value);
        }
        Json doc;
        doc["entity"] = entity;
        doc["measure"] = measure_id;
        doc["mode"] = mode;
        doc["context"] = ctx_key;
        doc["value"] = value.str();
        doc["cached"] = from_cache;
        if (!from_cache) {
            if (auto witness = engine.relative_witness(j, x, w, rmode))
                doc["witnessDerivation"] = derivation_json(sys, *witness);
        }
        emit(doc);
        return 0;
    }

    if (c_multi->parsed()) {
        const std::size_t j = sys.measure_index(measure_id);
        Multiset s;
        std::stringstream ss(elements);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const auto colon = item.find(':');
            const std::string id = item.substr(0, colon);
            std::size_t count = 1;
            if (colon != std::string::npos) count = std::stoul(item.substr(colon + 1));
            if (count == 0) throw Error("bad-multiset", "multiplicities must be positive");
            s.counts[sys.entity_index(id)] += count;
        }
        MultisetOptions options;
        options.solver = solver == "greedy" ? MultisetSolver::Greedy : MultisetSolver::Exact;
        const MultisetResult result = multiset_simplicity(sys, j, s, options);
        Json doc;
        doc["value"] = result.value.str();
        doc["normalized"] = result.normalized.str();
        doc["approximate"] = result.approximate;
        doc["freeDuplicates"] = result.free_duplicates;
        Json plan = Json::array();
        for (std::size_t r : result.plan) {
            const Reaction& rx = sys.reactions[r];
            Json jr;
            jr["op"] = sys.operators[rx.op].id;
            jr["left"] = sys.entities[rx.left];
            jr["right"] = sys.entities[rx.right];
            Json products = Json::array();
            for (EntityIndex p : rx.products) products.push_back(sys.entities[p]);
            jr["products"] = products;
            plan.push_back(jr);
        }
        doc["plan"] = plan;
        emit(doc);
        return 0;
    }

    if (c_bundle->parsed()) {
        const EntityIndex x = sys.entity_index(entity);
        const EntityIndex w = optional_context(sys, context);
        const SimplicityBundle b = bundle(sys, x, w);
        Json doc;
        doc["entity"] = entity;
        doc["context"] = context.empty() ? "e" : context;
        Json arr = Json::array();
        for (const auto& v : b.vectors) {
            Json point = Json::array();
            for (const auto& c : v) point.push_back(c.str());
            arr.push_back(point);
        }
        doc["bundle"] = arr;
        emit(doc);
        return 0;
    }

    if (c_pattern->parsed()) {
        const EntityIndex x = sys.entity_index(target);
        const EntityIndex w = optional_context(sys, context);
        const DenominatorMode dmode =
            denominator == "base" ? DenominatorMode::Base : DenominatorMode::PerMeasure;
        std::vector<PatternRecord> records;
        if (frontier_flag) {
            records = multipattern_frontier(sys, engine, x, w, dmode).records;
        } else if (!yid.empty() && !zid.empty() && !opid.empty()) {
            const std::size_t r = resolve_decomposition(sys, sys.entity_index(yid),
                                                        sys.entity_index(zid),
                                                        sys.operator_index(opid), x);
            if (r == CombinationalSystem::kNoReaction)
                throw Error("no-such-decomposition", "identity decompositions carry no record");
            records.push_back(make_pattern_record(sys, engine, r, x, w, dmode));
        } else {
            for (std::size_t r : sys.reactions_producing(x))
                records.push_back(make_pattern_record(sys, engine, r, x, w, dmode));
        }
        if (output == "csv") {
            std::ostringstream os;
            os << "y,z,op,target,classification,intensities\n";
            for (const auto& rec : records) {
                os << sys.entities[rec.y] << "," << sys.entities[rec.z] << ","
                   << sys.operators[rec.op].id << "," << sys.entities[rec.target] << ",";
                os << (rec.classification == MultipatternClass::Full
                           ? "full"
                           : rec.classification == MultipatternClass::Mixed ? "mixed" : "none");
                for (const auto& i : rec.intensities) os << "," << i.str();
                os << "\n";
            }
            std::cout << os.str();
            return 0;
        }
        Json doc;
        doc["target"] = target;
        doc["frontier"] = frontier_flag;
        Json arr = Json::array();
        for (const auto& rec : records) arr.push_back(record_json(sys, rec));
        doc["records"] = arr;
        emit(doc);
        return 0;
    }

    if (c_hier->parsed()) {
        const EntityIndex w = optional_context(sys, context);
        const PositionPolicy policy =
            positions == "both" ? PositionPolicy::Both : PositionPolicy::LeftOnly;
        const SubpatternGraph graph = build_subpattern_graph(sys, engine, w, policy, 0, 1, threads);
        if (output == "dot") {
            std::cout << to_dot(sys, graph);
            return 0;
        }
        Json doc;
        Json edges = Json::array();
        for (EntityIndex x = 0; x < sys.entities.size(); ++x) {
            for (EntityIndex y : graph.successors[x]) {
                const PairQ& cell = graph.q[x][y];
                Json je;
                je["from"] = sys.entities[x];
                je["to"] = sys.entities[y];
                je["intensity"] = cell.best.str();
                const Reaction& rx = sys.reactions[cell.reaction];
                je["witness"] = sys.entities[rx.left == x ? rx.right : rx.left];
                je["op"] = sys.operators[rx.op].id;
                edges.push_back(je);
            }
        }
        doc["edges"] = edges;
        if (diagnose) {
            const OrderDiagnostics diag = order_diagnostics(graph);
            Json jd;
            Json violations = Json::array();
            for (const auto& [a, bb] : diag.antisymmetry_violations)
                violations.push_back(Json::array({sys.entities[a], sys.entities[bb]}));
            jd["antisymmetryViolations"] = violations;
            jd["transitivityDefect"] = to_string(diag.transitivity_defect);
            jd["unwitnessedChains"] = diag.unwitnessed_chains;
            jd["chains"] = diag.chains.size();
            jd["reflexiveNote"] = diag.reflexive_note;
            doc["diagnose"] = jd;
        }
        emit(doc);
        return 0;
    }

    if (c_metrics->parsed()) {
        const Rational alpha = parse_rational_arg(alpha_text, "alpha");
        const SubpatternGraph graph =
            build_subpattern_graph(sys, engine, kNoEntity, PositionPolicy::LeftOnly, 0, 1, threads);
        const TanimotoMetrics tm = tanimoto_metrics(graph, alpha);
        if (construction == "tanimoto") {
            if (output == "csv") {
                std::cout << table_csv(sys, tm.composite);
                return 0;
            }
            Json doc;
            doc["alpha"] = to_string(alpha);
            doc["intensional"] = table_json(sys, tm.intensional);
            doc["extensional"] = table_json(sys, tm.extensional);
            doc["composite"] = table_json(sys, tm.composite);
            emit(doc);
            return 0;
        }
        const MetricTable transport = hutchinson_metrics(graph, tm.composite);
        if (output == "csv") {
            std::cout << table_csv(sys, transport);
            return 0;
        }
        Json doc;
        doc["alpha"] = to_string(alpha);
        doc["ground"] = "tanimoto-composite";
        doc["hutchinson"] = table_json(sys, transport);
        const CorrelationStats stats = correlation_stats(tm.composite, transport);
        Json corr;
        corr["kendallTau"] = stats.kendall_tau ? Json(to_string(*stats.kendall_tau)) : Json();
        corr["pearsonR2"] = stats.pearson_r2 ? Json(to_string(*stats.pearson_r2)) : Json();
        doc["correlation"] = corr;
        emit(doc);
        return 0;
    }

    if (c_coh->parsed()) {
        const Rational alpha = parse_rational_arg(alpha_text, "alpha");
        const Rational k = parse_rational_arg(k_text, "k");
        const Rational tol = parse_rational_arg(tol_text, "tolerance");
        LmiOptions options;
        options.k = k;
        const CoherenceReport report = fixed_point_iteration(sys, engine, alpha, iterate, tol, options);
        Json doc;
        doc["degree"] = to_string(report.final_degree);
        doc["converged"] = report.converged;
        doc["iterations"] = report.trajectory.size();
        Json traj = Json::array();
        for (const auto& step : report.trajectory)
            traj.push_back(Json{{"degree", to_string(step.degree)},
                                {"supChange", to_string(step.sup_change)}});
        doc["trajectory"] = traj;
        doc["residual"] = table_json(sys, report.residual)["table"];
        emit(doc);
        return 0;
    }

    if (c_oracle->parsed()) {
        if (!all_scope && entity.empty())
            throw Error("bad-params", "oracle-check needs --all or --entity");
        std::vector<EntityIndex> scope;
        if (all_scope) {
            for (EntityIndex x = 0; x < sys.entities.size(); ++x) scope.push_back(x);
        } else {
            scope.push_back(sys.entity_index(entity));
        }
        Json mismatches = Json::array();
        std::size_t checked = 0;
        for (std::size_t j = 0; j < sys.measures.size(); ++j) {
            // The engine side consults the cache when present, so a corrupted
            // cache entry surfaces here as a mismatch.
            std::vector<Cost> engine_values(sys.entities.size());
            if (auto cached = cache.load(sys, fingerprint, j, "e", "free")) {
                engine_values = *cached;
            } else {
                engine_values = engine.plain_table(j).value;
            }
            for (EntityIndex x : scope) {
                ++checked;
                const Cost expect = oracle::simplicity(sys, j, x);
                if (expect != engine_values[x]) {
                    mismatches.push_back(Json{{"kind", "simplicity"},
                                              {"measure", sys.measures[j].id},
                                              {"entity", sys.entities[x]},
                                              {"engine", engine_values[x].str()},
                                              {"oracle", expect.str()}});
                }
            }
        }
        for (EntityIndex x : scope) {
            ++checked;
            const SimplicityBundle got = bundle(sys, x);
            const SimplicityBundle expect = oracle::bundle(sys, x);
            if (!(got == expect)) {
                mismatches.push_back(Json{{"kind", "bundle"}, {"entity", sys.entities[x]}});
            }
            if (sys.measures.size() >= 2) {
                const FrontierSet got_f = multipattern_frontier(sys, engine, x);
                const FrontierSet expect_f = oracle::multipattern_frontier(sys, x);
                bool same = got_f.records.size() == expect_f.records.size();
                if (same) {
                    for (const auto& rec : got_f.records) {
                        bool found = false;
                        for (const auto& other : expect_f.records) {
                            if (rec.reaction == other.reaction) found = true;
                        }
                        same = same && found;
                    }
                }
                if (!same)
                    mismatches.push_back(Json{{"kind", "frontier"}, {"entity", sys.entities[x]}});
            }
        }
        Json doc;
        doc["checked"] = checked;
        doc["mismatches"] = mismatches;
        emit(doc);
        return mismatches.empty() ? 0 : 1;
    }

    throw Error("bad-params", "no subcommand executed");
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const cosm::Error& e) {
        cosm::Json err;
        err["code"] = e.code;
        err["message"] = e.message;
        err["path"] = e.path;
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        cosm::Json err;
        err["code"] = "internal";
        err["message"] = e.what();
        err["path"] = "";
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
