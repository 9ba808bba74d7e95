#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "modsys/cli.hpp"
#include "modsys/frontend.hpp"
#include "modsys/semantics_mt.hpp"

using namespace modsys;

namespace {

const Domain kUnit{"u"};

const char* kExample2 = R"(
domain {u}
vocab {a, b, c, d, b', c'}
module M1 : wf { inputs {b} outputs {a} rules { a :- b. } }
module M2 : wf { inputs {c} outputs {a} rules { a :- c. } }
module M3 : sm { inputs {a} outputs {d} rules { d :- not a. } }
module M4 : p  { inputs {d} outputs {b', c'} rules { (b' | c') <-> ~d. } }
system M = project {a,b,c,d} (((M1 | M2) >> M3 >> M4)[c=c'][b=b']);
formula phiM = exists {b',c'} ((((M1 | M2) & M3) & M4)[b=b'][c=c']);
)";

std::filesystem::path write_temp(const char* name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

int run_cli(std::vector<std::string> args, std::string& out_text) {
    std::ostringstream out, err;
    const int rc = cli_run(std::move(args), out, err);
    out_text = out.str() + err.str();
    return rc;
}

}  // namespace

TEST_CASE("parsing the example-2 document") {
    const SpecDocument doc = parse_spec(kExample2, "example2.msl");
    const ModuleExpr m = doc.resolve_system("M");
    CHECK(m.text() == "project {a,b,c,d} (((M1 | M2) >> M3 >> M4)[c=c'][b=b'])");
    CHECK(check_wellformed(m).ok);
    const Signature sig = signature_of(m);
    CHECK(sig.sigma.empty());
    CHECK(sig.epsilon == Vocabulary{Symbol{"a"}, Symbol{"b"}, Symbol{"c"}, Symbol{"d"}});
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_spec("system M = M1 >> ;", "t.msl"), ParseError);
    CHECK_THROWS_AS(parse_spec("vocab {p} vocab {p/2}", "t.msl"), ParseError);
    CHECK_THROWS_AS(parse_spec("system M = Nope;", "t.msl"), ParseError);
    CHECK_THROWS_AS(parse_spec("domain {u} domain {v}", "t.msl"), ParseError);
    const char* dup_module = R"(
vocab {a}
module A : p { outputs {a} rules { a. } }
module A : p { outputs {a} rules { a. } }
)";
    CHECK_THROWS_AS(parse_spec(dup_module, "t.msl"), ParseError);
    try {
        parse_spec("vocab {p}\nsystem M = ;", "t.msl");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("t.msl:2:") != std::string::npos);
    }
}

TEST_CASE("composition binds tighter than union") {
    // M1 | M2 >> M3 parses as M1 | (M2 >> M3); using disjoint modules so the
    // alternative grouping would be ill-formed
    const SpecDocument doc = parse_spec(R"(
domain {u}
vocab {a, b, c, d, e}
module A : p { inputs {a} outputs {b} rules { b <-> a. } }
module B : p { inputs {c} outputs {d} rules { d <-> c. } }
module C : p { inputs {d} outputs {e} rules { e <-> d. } }
system S = A | B >> C;
)");
    const ModuleExpr s = doc.resolve_system("S");
    REQUIRE(s.kind() == ModuleExpr::Kind::Union);
    CHECK(s.right().kind() == ModuleExpr::Kind::Compose);
}

TEST_CASE("round-trip: parse(render(e)) == e on random expressions") {
    std::mt19937 rng(301);
    testgen::OpCounts counts{};
    const auto pool = testgen::symbol_pool(5);
    ModuleRegistry reg;
    std::vector<PrimitiveModulePtr> prims;
    for (int i = 0; i < 4; ++i) {
        prims.push_back(testgen::random_prim(rng, pool, kUnit, i));
        reg.add(prims.back());
    }
    const Vocabulary declared(pool);
    int round_trips = 0;
    for (int round = 0; round < 60; ++round) {
        const ModuleExpr e = testgen::random_expr(rng, prims, 3, counts);
        const ModuleExpr parsed = parse_algebra(e.text(), reg, declared);
        CHECK(parsed == e);
        ++round_trips;
    }
    CHECK(round_trips == 60);
}

TEST_CASE("the multi-language formula compiles to the algebraic system") {
    const SpecDocument doc = parse_spec(kExample2, "example2.msl");
    const ModelSet algebraic = mt_models(doc.resolve_system("M"), doc.domain);
    const ModelSet compiled = mt_models(doc.resolve_system("phiM"), doc.domain);
    CHECK(algebraic.structures == compiled.structures);
    // frozen by hand from the four primitive tables
    CHECK(algebraic.lines() == "{a,b}\n{a,b,c}\n{a,c}\n{d}\n");
}

TEST_CASE("compile_logic_formula") {
    const SpecDocument doc = parse_spec(kExample2, "example2.msl");
    SUBCASE("a single leaf compiles to a primitive node") {
        const LogicFormula leaf = LogicFormula::leaf(doc.modules.find("M3"));
        const ModuleExpr e = compile_logic_formula(leaf);
        CHECK(e.kind() == ModuleExpr::Kind::Prim);
    }
    SUBCASE("exists compiles to a projection hiding the quantified symbols") {
        const LogicFormula f = LogicFormula::exists(Vocabulary{Symbol{"a"}},
                                                    LogicFormula::leaf(doc.modules.find("M3")));
        const ModuleExpr e = compile_logic_formula(f);
        REQUIRE(e.kind() == ModuleExpr::Kind::Project);
        CHECK(e.onto() == Vocabulary{Symbol{"d"}});
        CHECK(check_wellformed(e).ok);
    }
    SUBCASE("an ill-formed conjunction names the connective") {
        const LogicFormula bad = LogicFormula::conjunction(
            LogicFormula::leaf(doc.modules.find("M1")), LogicFormula::leaf(doc.modules.find("M2")));
        CHECK_THROWS_WITH_AS(compile_logic_formula(bad),
                             doctest::Contains("M1 & M2"), PreconditionError);
    }
}

TEST_CASE("cli output is identical across serial and parallel runs") {
    const auto path = write_temp("modsys_cli_test.msl", kExample2);
    std::string parallel, serial;
    CHECK(run_cli({"models", path.string(), "--system", "M"}, parallel) == 0);
    CHECK(run_cli({"models", path.string(), "--system", "M", "--serial"}, serial) == 0);
    CHECK(parallel == serial);
    CHECK(parallel == "{a,b}\n{a,b,c}\n{a,c}\n{d}\n");
}

TEST_CASE("cli exit codes") {
    const auto good = write_temp("modsys_cli_good.msl", kExample2);
    const auto bad = write_temp("modsys_cli_bad.msl", "system M = ;");
    std::string text;
    CHECK(run_cli({"equiv", good.string(), "--system", "M"}, text) == 0);
    CHECK(run_cli({"models", bad.string(), "--system", "M"}, text) == 2);
    CHECK(run_cli({"models", good.string(), "--system", "Nope"}, text) == 2);
    CHECK(run_cli({"selftest"}, text) == 0);
}

TEST_CASE("cli json models shape") {
    const auto path = write_temp("modsys_cli_json.msl", kExample2);
    std::string text;
    REQUIRE(run_cli({"models", path.string(), "--system", "M", "--json"}, text) == 0);
    CHECK(text.find("\"models\"") != std::string::npos);
    CHECK(text.find("\"sigma\"") != std::string::npos);
}

TEST_CASE("atom ceiling is enforced through the public entry points") {
    const SpecDocument doc = parse_spec(kExample2, "example2.msl");
    const ModuleExpr m = doc.resolve_system("M");
    EvalOptions tight;
    tight.ceiling = 3;  // the system has 6 propositional atoms
    CHECK_THROWS_AS(mt_models(m, doc.domain, tight), EnumerationLimitError);
}
