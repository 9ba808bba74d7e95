#include "modsys/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "modsys/frontend.hpp"
#include "modsys/semantics_inf.hpp"
#include "modsys/semantics_mt.hpp"
#include "modsys/semantics_op.hpp"

namespace modsys {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SpecDocument load(const std::string& path) {
    return parse_spec(read_file(path), path);
}

json structure_json(const Structure& b) {
    json arr = json::array();
    for (const GroundAtom& a : b.true_atoms()) arr.push_back(a.text());
    return arr;
}

json models_json(const std::vector<Structure>& models) {
    json arr = json::array();
    for (const Structure& b : models) arr.push_back(structure_json(b));
    return arr;
}

json vocab_json(const Vocabulary& v) {
    json arr = json::array();
    for (const Symbol& s : v.symbols()) arr.push_back(s.text());
    return arr;
}

struct CommonArgs {
    std::string file;
    std::string system;
    bool json_out = false;
    bool serial = false;

    EvalOptions opts() const {
        EvalOptions o;
        if (serial) o.exec = Execution::Serial;
        return o;
    }
};

int cmd_check(const CommonArgs& c, std::ostream& out) {
    SpecDocument doc = load(c.file);
    bool all_ok = true;
    json report = json::array();
    for (const std::string& name : doc.system_order) {
        const ModuleExpr e = doc.resolve_system(name);
        const WellFormednessReport r = check_wellformed(e);
        json entry{{"name", name}, {"ok", r.ok}};
        if (r.ok) {
            const Signature sig = signature_of(e);
            entry["sigma"] = vocab_json(sig.sigma);
            entry["epsilon"] = vocab_json(sig.epsilon);
            if (!c.json_out) {
                out << "system " << name << ": ok\n";
                out << "  sigma = " << sig.sigma.text() << "\n";
                out << "  epsilon = " << sig.epsilon.text() << "\n";
            }
        } else {
            all_ok = false;
            json vio = json::array();
            for (const Violation& v : r.violations)
                vio.push_back(json{{"path", v.path}, {"message", v.message}});
            entry["violations"] = vio;
            if (!c.json_out) {
                out << "system " << name << ": " << r.violations.size() << " violation(s)\n";
                for (const Violation& v : r.violations)
                    out << "  at " << v.path << ": " << v.message << "\n";
            }
        }
        report.push_back(entry);
    }
    if (c.json_out) out << json{{"systems", report}, {"ok", all_ok}}.dump(2) << "\n";
    return all_ok ? 0 : 2;
}

int cmd_models(const CommonArgs& c, std::ostream& out, bool operational) {
    SpecDocument doc = load(c.file);
    const ModuleExpr e = doc.resolve_system(c.system);
    const ModelSet ms = operational ? op_models(e, vocab_all(e), doc.domain, c.opts())
                                    : mt_models(e, doc.domain, c.opts());
    if (c.json_out) {
        out << json{{"system", c.system},
                    {"sigma", vocab_json(ms.signature.sigma)},
                    {"epsilon", vocab_json(ms.signature.epsilon)},
                    {"models", models_json(ms.structures)}}
                   .dump(2)
            << "\n";
    } else {
        out << ms.lines();
    }
    return 0;
}

int cmd_expand(const CommonArgs& c, const std::string& instance_name, std::ostream& out) {
    SpecDocument doc = load(c.file);
    const ModuleExpr e = doc.resolve_system(c.system);
    const Signature sig = signature_of(e);
    const InstanceDef& inst = doc.instance(instance_name);
    const Structure a(sig.sigma, doc.domain, inst.atoms);
    const std::vector<Structure> solutions = expand(e, a, c.opts());
    if (c.json_out) {
        out << json{{"system", c.system},
                    {"instance", instance_name},
                    {"solutions", models_json(solutions)}}
                   .dump(2)
            << "\n";
        return 0;
    }
    if (solutions.empty()) {
        out << "none exists\n";
        return 0;
    }
    for (const Structure& b : solutions) out << b.text() << "\n";
    return 0;
}

int cmd_equiv(const CommonArgs& c, std::ostream& out) {
    SpecDocument doc = load(c.file);
    const ModuleExpr e = doc.resolve_system(c.system);
    const ModelSet mt = mt_models(e, doc.domain, c.opts());
    const ModelSet op = op_models(e, vocab_all(e), doc.domain, c.opts());
    const bool equal = mt.structures == op.structures;
    std::vector<Structure> mt_only, op_only;
    std::set_difference(mt.structures.begin(), mt.structures.end(), op.structures.begin(),
                        op.structures.end(), std::back_inserter(mt_only));
    std::set_difference(op.structures.begin(), op.structures.end(), mt.structures.begin(),
                        mt.structures.end(), std::back_inserter(op_only));
    if (c.json_out) {
        out << json{{"system", c.system},
                    {"equal", equal},
                    {"models", mt.structures.size()},
                    {"mt_only", models_json(mt_only)},
                    {"op_only", models_json(op_only)}}
                   .dump(2)
            << "\n";
    } else if (equal) {
        out << "equivalent (" << mt.structures.size() << " models)\n";
    } else {
        out << "NOT equivalent\n";
        for (const Structure& b : mt_only) out << "mt only: " << b.text() << "\n";
        for (const Structure& b : op_only) out << "op only: " << b.text() << "\n";
    }
    return equal ? 0 : 1;
}

int cmd_trace(const CommonArgs& c, const std::string& from, const std::string& to,
              std::ostream& out) {
    SpecDocument doc = load(c.file);
    const ModuleExpr e = doc.resolve_system(c.system);
    const Vocabulary tau = vocab_all(e);
    const Structure b1 = parse_structure(from, tau, doc.domain);
    const Structure b2 = parse_structure(to, tau, doc.domain);
    const auto tree = derivation_trace(e, b1, b2, c.opts());
    if (c.json_out) {
        json j{{"system", c.system}, {"derivable", tree.has_value()}};
        if (tree) j["trace"] = tree->render();
        out << j.dump(2) << "\n";
        return 0;
    }
    if (tree)
        out << tree->render();
    else
        out << "not derivable\n";
    return 0;
}

int cmd_infer(const CommonArgs& c, int max_premise, std::ostream& out) {
    SpecDocument doc = load(c.file);
    const ModuleExpr e = doc.resolve_system(c.system);
    const ModelSet ms = mt_models(e, doc.domain, c.opts());
    const InferenceSet inf =
        ent_inferences(ms.structures, ms.signature.vocab(), doc.domain, max_premise, c.opts());
    if (c.json_out) {
        json arr = json::array();
        for (const Inference& i : inf.inferences()) arr.push_back(i.text());
        out << json{{"system", c.system}, {"max_premise", max_premise}, {"inferences", arr}}.dump(2)
            << "\n";
    } else {
        out << inf.text();
    }
    return 0;
}

int cmd_propagate(const CommonArgs& c, const std::string& assume, int max_premise,
                  const std::string& inf_file, std::ostream& out) {
    SpecDocument doc = load(c.file);
    const ModuleExpr e = doc.resolve_system(c.system);
    const Vocabulary vocab = signature_of(e).vocab();
    InferenceSet inf = [&] {
        if (!inf_file.empty()) return parse_inference_file(read_file(inf_file), vocab, doc.domain);
        const ModelSet ms = mt_models(e, doc.domain, c.opts());
        return ent_inferences(ms.structures, vocab, doc.domain, max_premise, c.opts());
    }();
    const PartialAssignment start = parse_literals(assume, vocab, doc.domain);
    const PropagationResult r = propagate(inf, start);
    if (c.json_out) {
        json lits = json::array();
        for (const Literal& l : r.assignment.literals()) lits.push_back(l.text());
        json j{{"system", c.system}, {"conflict", r.conflict}, {"literals", lits}};
        if (r.conflict) j["conflict_literal"] = r.conflict_literal->text();
        out << j.dump(2) << "\n";
        return 0;
    }
    out << r.text() << "\n";
    return 0;
}

}  // namespace

const char* appendix_msl() {
    return R"(# A guessing module, a primed deterministic copy, and the feedback loop
# that re-introduces the nondeterminism.
domain {u}
vocab {i, a, b, a', b'}

module M0 : sm {
  inputs {i}
  outputs {a, b}
  rules {
    a :- i, not b.
    b :- i, not a.
  }
}

module M1 : sm {
  inputs {i, a, b}
  outputs {a', b'}
  rules {
    a' :- i, not b.
    b' :- i, not a.
  }
}

system M2 = M1[a=a'][b=b'];
system M0again = project {i,a,b} (M1[a=a'][b=b']);

instance itrue { i }
instance ifalse { }
)";
}

int run_selftest(std::ostream& out, bool json_out) {
    struct Check {
        std::string name;
        bool ok;
    };
    std::vector<Check> checks;
    auto record = [&](const std::string& name, bool ok) { checks.push_back({name, ok}); };

    try {
        SpecDocument doc = parse_spec(appendix_msl(), "appendix.msl");
        const Domain& dom = doc.domain;
        const Vocabulary all = doc.declared;
        auto S = [&](const Vocabulary& v, const char* text) {
            return parse_structure(text, v, dom);
        };
        const Vocabulary v_iab{Symbol{"i"}, Symbol{"a"}, Symbol{"b"}};
        const Vocabulary v_i{Symbol{"i"}};
        const Vocabulary v_ab{Symbol{"a"}, Symbol{"b"}};
        const Vocabulary v_primes{Symbol{"a'"}, Symbol{"b'"}};

        // stable_models of P_M0 directly
        LogicProgram pm0;
        pm0.semantics = LpSemantics::StableModel;
        pm0.sigma = v_i;
        pm0.epsilon = v_ab;
        pm0.rules = {
            Rule::normal(RuleAtom{"a", {}},
                         {BodyLiteral{RuleAtom{"i", {}}, false}, BodyLiteral{RuleAtom{"b", {}}, true}}),
            Rule::normal(RuleAtom{"b", {}},
                         {BodyLiteral{RuleAtom{"i", {}}, false}, BodyLiteral{RuleAtom{"a", {}}, true}}),
        };
        {
            const auto sm_true = stable_models(pm0, dom, S(v_i, "{i}"));
            const bool full = sm_true == std::vector<Structure>{S(v_iab, "{a,i}"), S(v_iab, "{b,i}")};
            std::vector<Structure> eps;
            for (const Structure& b : sm_true) eps.push_back(restrict_to(b, v_ab));
            const bool eps_ok = eps == std::vector<Structure>{S(v_ab, "{a}"), S(v_ab, "{b}")};
            record("stable models of P_M0 at i=true are {a},{b}", full && eps_ok);
            const auto sm_false = stable_models(pm0, dom, S(v_i, "{}"));
            record("stable models of P_M0 at i=false are {}",
                   sm_false == std::vector<Structure>{S(v_iab, "{}")});
        }

        const ModuleExpr m0 = doc.resolve_system("M0");
        const ModuleExpr m2 = doc.resolve_system("M2");
        const ModuleExpr m0again = doc.resolve_system("M0again");

        const ModelSet m0_models = mt_models(m0, dom);
        record("models of M0 are {}, {a,i}, {b,i}",
               m0_models.structures == std::vector<Structure>{S(v_iab, "{}"), S(v_iab, "{a,i}"),
                                                              S(v_iab, "{b,i}")});

        // the eight M1 instance rows: deterministic, with the listed models
        {
            const ModuleExpr m1 = doc.resolve_system("M1");
            const Vocabulary v_m1 = signature_of(m1).vocab();
            struct Row {
                const char* instance;
                const char* model;
            };
            const Row rows[] = {
                {"{}", "{}"},           {"{a}", "{a}"},
                {"{b}", "{b}"},         {"{a,b}", "{a,b}"},
                {"{i}", "{a',b',i}"},   {"{a,i}", "{a,a',i}"},
                {"{b,i}", "{b,b',i}"},  {"{a,b,i}", "{a,b,i}"},
            };
            bool rows_ok = true, eps_ok = true;
            for (const Row& row : rows) {
                const auto sols = expand(m1, S(v_iab, row.instance));
                rows_ok = rows_ok && sols.size() == 1 && sols[0] == S(v_m1, row.model);
                if (sols.size() == 1 && !sols[0].holds(GroundAtom{Symbol{"i"}, {}}))
                    eps_ok = eps_ok && restrict_to(sols[0], v_primes) == S(v_primes, "{}");
            }
            record("M1 is deterministic: one model per instance row, as listed", rows_ok);
            record("M1 rows with i false have empty primed output", eps_ok);
        }

        const ModelSet m2_models = mt_models(m2, dom);
        record("models of M2 = M1[a=a'][b=b'] are {}, {a,a',i}, {b,b',i}",
               m2_models.lines() == "{}\n{a,a',i}\n{b,b',i}\n");

        record("project {i,a,b} (M2) equals M0",
               mt_models(m0again, dom).structures == m0_models.structures);

        record("feedback nondeterminism: M2 has exactly 2 models at i=true",
               expand(m2, S(v_i, "{i}")).size() == 2);

        for (const char* name : {"M0", "M2", "M0again"}) {
            const ModuleExpr e = doc.resolve_system(name);
            const ModelSet op = op_models(e, vocab_all(e), dom);
            record(std::string("operational semantics matches models for ") + name,
                   op.structures == mt_models(e, dom).structures);
        }

        {
            const Vocabulary extended =
                voc_union(vocab_all(m2), Vocabulary{Symbol{"z1"}, Symbol{"z2"}});
            record("op-models of M2 unchanged under extended tau",
                   op_models(m2, extended, dom).structures ==
                       op_models(m2, vocab_all(m2), dom).structures);
        }
    } catch (const std::exception& e) {
        record(std::string("selftest aborted: ") + e.what(), false);
    }

    int failed = 0;
    for (const Check& c : checks)
        if (!c.ok) ++failed;
    if (json_out) {
        json arr = json::array();
        for (const Check& c : checks) arr.push_back(json{{"name", c.name}, {"ok", c.ok}});
        out << json{{"checks", arr},
                    {"passed", checks.size() - static_cast<std::size_t>(failed)},
                    {"failed", failed}}
                   .dump(2)
            << "\n";
    } else {
        for (const Check& c : checks) out << (c.ok ? "PASS" : "FAIL") << " " << c.name << "\n";
        out << (failed == 0 ? "selftest: all checks passed"
                            : "selftest: " + std::to_string(failed) + " check(s) failed")
            << "\n";
    }
    return failed == 0 ? 0 : 1;
}

int cli_run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"modsys - the algebra of modular systems over finite structures"};
    app.require_subcommand(1);

    CommonArgs c;
    std::string instance_name, from, to, assume, inf_file;
    int max_premise = 3;

    auto add_common = [&](CLI::App* sub, bool needs_system) {
        sub->add_option("file", c.file, "input .msl document")->required();
        if (needs_system)
            sub->add_option("--system", c.system, "system, formula or module name")->required();
        sub->add_flag("--json", c.json_out, "machine-readable output");
        sub->add_flag("--serial", c.serial, "disable the parallel kernels");
    };

    CLI::App* check = app.add_subcommand("check", "well-formedness and signatures");
    add_common(check, false);
    CLI::App* models = app.add_subcommand("models", "models under the model-theoretic semantics");
    add_common(models, true);
    CLI::App* expand_cmd = app.add_subcommand("expand", "solutions expanding an instance");
    add_common(expand_cmd, true);
    expand_cmd->add_option("--instance", instance_name, "instance block name")->required();
    CLI::App* opm = app.add_subcommand("op-models", "models under the operational semantics");
    add_common(opm, true);
    CLI::App* equiv = app.add_subcommand("equiv", "assert that the two semantics agree");
    add_common(equiv, true);
    CLI::App* trace = app.add_subcommand("trace", "derivation tree for a transition");
    add_common(trace, true);
    trace->add_option("--from", from, "source tau-state, e.g. {i,a}")->required();
    trace->add_option("--to", to, "target tau-state")->required();
    CLI::App* infer = app.add_subcommand("infer", "entailment inference set of a system");
    add_common(infer, true);
    infer->add_option("--max-premise", max_premise, "premise size bound (default 3)");
    CLI::App* prop = app.add_subcommand("propagate", "inference closure of an assumption");
    add_common(prop, true);
    prop->add_option("--assume", assume, "literals, e.g. i,~b")->required();
    prop->add_option("--max-premise", max_premise, "premise size bound (default 3)");
    prop->add_option("--inferences", inf_file, "load inferences from a file instead of Ent");
    CLI::App* selftest = app.add_subcommand("selftest", "run the bundled golden suite");
    bool st_json = false;
    selftest->add_flag("--json", st_json, "machine-readable output");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*check) return cmd_check(c, out);
        if (*models) return cmd_models(c, out, false);
        if (*expand_cmd) return cmd_expand(c, instance_name, out);
        if (*opm) return cmd_models(c, out, true);
        if (*equiv) return cmd_equiv(c, out);
        if (*trace) return cmd_trace(c, from, to, out);
        if (*infer) return cmd_infer(c, max_premise, out);
        if (*prop) return cmd_propagate(c, assume, max_premise, inf_file, out);
        if (*selftest) return run_selftest(out, st_json);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace modsys
