#include <doctest.h>

#include <random>

#include "generators.hpp"
#include "modsys/logics.hpp"

using namespace modsys;

namespace {

const Domain kUnit{"u"};

// Test-side truth-table oracle, independent of the library's enumeration path.
bool oracle_eval(const PropFormula& f, const std::set<GroundAtom>& truths) {
    using K = PropFormula::Kind;
    switch (f.kind()) {
        case K::True: return true;
        case K::False: return false;
        case K::Atom: return truths.count(f.atom_ref()) > 0;
        case K::Not: return !oracle_eval(f.left(), truths);
        case K::And: return oracle_eval(f.left(), truths) && oracle_eval(f.right(), truths);
        case K::Or: return oracle_eval(f.left(), truths) || oracle_eval(f.right(), truths);
        case K::Implies: return !oracle_eval(f.left(), truths) || oracle_eval(f.right(), truths);
        case K::Iff: return oracle_eval(f.left(), truths) == oracle_eval(f.right(), truths);
    }
    return false;
}

std::vector<Structure> oracle_models(const PropFormula& f, const Vocabulary& v, const Domain& d) {
    std::vector<Structure> out;
    const auto atoms = ground_atoms(v, d);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << atoms.size()); ++m) {
        std::set<GroundAtom> truths;
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (m & (std::uint64_t{1} << i)) truths.insert(atoms[i]);
        if (oracle_eval(f, truths)) out.emplace_back(v, d, std::move(truths));
    }
    std::sort(out.begin(), out.end());
    return out;
}

LogicProgram pm0() {
    LogicProgram p;
    p.semantics = LpSemantics::StableModel;
    p.sigma = Vocabulary{Symbol{"i"}};
    p.epsilon = Vocabulary{Symbol{"a"}, Symbol{"b"}};
    p.rules = {
        Rule::normal(RuleAtom{"a", {}},
                     {BodyLiteral{RuleAtom{"i", {}}, false}, BodyLiteral{RuleAtom{"b", {}}, true}}),
        Rule::normal(RuleAtom{"b", {}},
                     {BodyLiteral{RuleAtom{"i", {}}, false}, BodyLiteral{RuleAtom{"a", {}}, true}}),
    };
    return p;
}

Structure st(const Vocabulary& v, const char* text) { return parse_structure(text, v, kUnit); }

}  // namespace

TEST_CASE("prop_models matches the truth-table oracle on the checker formula") {
    const Vocabulary v{Symbol{"b'"}, Symbol{"c'"}, Symbol{"d"}};
    const PropFormula f = parse_prop_formula("(b' | c') <-> ~d", v, kUnit);
    const auto models = prop_models(f, v, kUnit);
    CHECK(models == oracle_models(f, v, kUnit));
    // frozen from the 8-row truth table: {b'}, {c'}, {b',c'}, {d}
    REQUIRE(models.size() == 4);
    CHECK(models[0].text() == "{b'}");
    CHECK(models[1].text() == "{b',c'}");
    CHECK(models[2].text() == "{c'}");
    CHECK(models[3].text() == "{d}");
}

TEST_CASE("prop_models corner cases") {
    const Vocabulary vp{Symbol{"p"}};
    CHECK(prop_models(PropFormula::constant(true), vp, kUnit).size() == 2);
    const PropFormula contradiction = parse_prop_formula("p & ~p", vp, kUnit);
    CHECK(prop_models(contradiction, vp, kUnit).empty());
    CHECK_THROWS_AS(prop_models(parse_prop_formula("p", vp, kUnit), Vocabulary{Symbol{"q"}}, kUnit),
                    VocabularyMismatchError);
}

TEST_CASE("prop_models of a negation is the complement") {
    std::mt19937 rng(3);
    const auto pool = testgen::symbol_pool(4);
    const Vocabulary v{pool[0], pool[1], pool[2], pool[3]};
    for (int round = 0; round < 20; ++round) {
        const PropFormula f = testgen::random_formula(rng, pool, 4);
        const auto models = prop_models(f, v, kUnit);
        const auto negated = prop_models(PropFormula::negation(f), v, kUnit);
        CHECK(models.size() + negated.size() == 16);
        for (const Structure& b : negated)
            CHECK(!std::binary_search(models.begin(), models.end(), b));
    }
}

TEST_CASE("formula parser precedence and rendering") {
    const Vocabulary v{Symbol{"a"}, Symbol{"b"}, Symbol{"c"}};
    const PropFormula f = parse_prop_formula("a -> b & c <-> ~a | b", v, kUnit);
    // (a -> (b & c)) <-> ((~a) | b)
    CHECK(f.kind() == PropFormula::Kind::Iff);
    CHECK(f.left().kind() == PropFormula::Kind::Implies);
    CHECK(f.right().kind() == PropFormula::Kind::Or);
    const PropFormula again = parse_prop_formula(f.text(), v, kUnit);
    CHECK(again.text() == f.text());
    CHECK_THROWS(parse_prop_formula("a &", v, kUnit));
}

TEST_CASE("grounding") {
    const Domain d2{"1", "2"};
    const Term x{Term::Kind::Variable, "x"}, y{Term::Kind::Variable, "y"};
    SUBCASE("one variable, one instance per element") {
        LogicProgram p;
        p.sigma = Vocabulary{Symbol{"q", 1}};
        p.epsilon = Vocabulary{Symbol{"p", 1}};
        p.rules = {Rule::normal(RuleAtom{"p", {x}}, {BodyLiteral{RuleAtom{"q", {x}}, false}})};
        const LogicProgram g = ground(p, d2);
        REQUIRE(g.rules.size() == 2);
        CHECK(g.rules[0].text() == "p(1) :- q(1).");
        CHECK(g.rules[1].text() == "p(2) :- q(2).");
    }
    SUBCASE("ground program is unchanged") {
        LogicProgram p = pm0();
        const LogicProgram g = ground(p, kUnit);
        REQUIRE(g.rules.size() == p.rules.size());
        for (std::size_t i = 0; i < g.rules.size(); ++i)
            CHECK(g.rules[i].text() == p.rules[i].text());
    }
    SUBCASE("two variables give four instances") {
        LogicProgram p;
        p.sigma = Vocabulary{Symbol{"e", 2}};
        p.epsilon = Vocabulary{Symbol{"p", 1}};
        p.rules = {Rule::normal(RuleAtom{"p", {x}}, {BodyLiteral{RuleAtom{"e", {x, y}}, false}})};
        CHECK(ground(p, d2).rules.size() == 4);
    }
}

TEST_CASE("stable models of the appendix program") {
    const LogicProgram p = pm0();
    const Vocabulary vi = p.sigma;
    const Vocabulary viab = p.all_vocab();
    SUBCASE("candidates at i=true") {
        CHECK(is_stable_model(p, kUnit, st(vi, "{i}"), st(viab, "{i,a}")));
        CHECK(!is_stable_model(p, kUnit, st(vi, "{i}"), st(viab, "{i,a,b}")));
        CHECK(is_stable_model(p, kUnit, st(vi, "{}"), st(viab, "{}")));
    }
    SUBCASE("candidate must expand the facts") {
        CHECK_THROWS_AS(is_stable_model(p, kUnit, st(vi, "{i}"), st(viab, "{a}")),
                        PreconditionError);
    }
    SUBCASE("full enumeration") {
        const auto at_true = stable_models(p, kUnit, st(vi, "{i}"));
        REQUIRE(at_true.size() == 2);
        CHECK(at_true[0].text() == "{a,i}");
        CHECK(at_true[1].text() == "{b,i}");
        const auto at_false = stable_models(p, kUnit, st(vi, "{}"));
        REQUIRE(at_false.size() == 1);
        CHECK(at_false[0].text() == "{}");
    }
    SUBCASE("a bare constraint kills every candidate") {
        LogicProgram p2 = pm0();
        p2.rules.push_back(Rule::constraint({}));
        CHECK(stable_models(p2, kUnit, st(vi, "{i}")).empty());
    }
}

TEST_CASE("choice rules desugar to guessing pairs plus cardinality constraints") {
    LogicProgram p;
    p.semantics = LpSemantics::StableModel;
    p.epsilon = Vocabulary{Symbol{"a"}, Symbol{"b"}, Symbol{"c"}};
    p.rules = {Rule::choice_rule(1, 2, {RuleAtom{"a", {}}, RuleAtom{"b", {}}, RuleAtom{"c", {}}},
                                 {})};
    const auto models = stable_models(p, kUnit, Structure(Vocabulary{}, kUnit, {}));
    // every subset of {a,b,c} of size 1 or 2, projected to the visible atoms
    std::set<std::string> visible;
    const Vocabulary vabc = p.epsilon;
    for (const Structure& b : models) visible.insert(restrict_to(b, vabc).text());
    CHECK(visible ==
          std::set<std::string>{"{a}", "{b}", "{c}", "{a,b}", "{a,c}", "{b,c}"});
}

TEST_CASE("well-founded models") {
    SUBCASE("positive program equals the least model") {
        LogicProgram p;
        p.semantics = LpSemantics::WellFounded;
        p.sigma = Vocabulary{Symbol{"b"}};
        p.epsilon = Vocabulary{Symbol{"a"}};
        p.rules = {Rule::normal(RuleAtom{"a", {}}, {BodyLiteral{RuleAtom{"b", {}}, false}})};
        const auto wf = well_founded_model(p, kUnit, st(p.sigma, "{b}"));
        CHECK(wf.total());
        CHECK(wf.true_atoms.size() == 2);
    }
    SUBCASE("a :- not a leaves a undefined") {
        LogicProgram p;
        p.semantics = LpSemantics::WellFounded;
        p.epsilon = Vocabulary{Symbol{"a"}};
        p.rules = {Rule::normal(RuleAtom{"a", {}}, {BodyLiteral{RuleAtom{"a", {}}, true}})};
        const auto wf = well_founded_model(p, kUnit, Structure(Vocabulary{}, kUnit, {}));
        CHECK(!wf.total());
        CHECK(wf.undefined_atoms == std::set<GroundAtom>{GroundAtom{Symbol{"a"}, {}}});
    }
    SUBCASE("unsupported atoms are false") {
        LogicProgram p;
        p.semantics = LpSemantics::WellFounded;
        p.epsilon = Vocabulary{Symbol{"a"}};
        const auto wf = well_founded_model(p, kUnit, Structure(Vocabulary{}, kUnit, {}));
        CHECK(wf.false_atoms == std::set<GroundAtom>{GroundAtom{Symbol{"a"}, {}}});
    }
    SUBCASE("choice heads are rejected under wf") {
        LogicProgram p;
        p.semantics = LpSemantics::WellFounded;
        p.epsilon = Vocabulary{Symbol{"a"}};
        p.rules = {Rule::choice_rule(0, 1, {RuleAtom{"a", {}}}, {})};
        CHECK_THROWS_AS(well_founded_model(p, kUnit, Structure(Vocabulary{}, kUnit, {})),
                        UnsupportedConstructError);
    }
}

TEST_CASE("module_of_axioms") {
    SUBCASE("wf module admits exactly the total inputs") {
        LogicProgram p;
        p.semantics = LpSemantics::WellFounded;
        p.sigma = Vocabulary{Symbol{"b"}};
        p.epsilon = Vocabulary{Symbol{"a"}};
        p.rules = {Rule::normal(RuleAtom{"a", {}}, {BodyLiteral{RuleAtom{"b", {}}, false}})};
        const auto ext = module_of_axioms(p, kUnit);
        REQUIRE(ext.size() == 2);
        CHECK(ext[0].text() == "{}");
        CHECK(ext[1].text() == "{a,b}");
    }
    SUBCASE("sm module reproduces M0") {
        const auto ext = module_of_axioms(pm0(), kUnit);
        REQUIRE(ext.size() == 3);
        CHECK(ext[0].text() == "{}");
        CHECK(ext[1].text() == "{a,i}");
        CHECK(ext[2].text() == "{b,i}");
    }
    SUBCASE("p module restricted to the visible vocabulary") {
        const Vocabulary vd{Symbol{"d"}};
        const Vocabulary vbc{Symbol{"b'"}, Symbol{"c'"}};
        const PropFormula f =
            parse_prop_formula("(b' | c') <-> ~d", voc_union(vd, vbc), kUnit);
        const auto ext = module_of_axioms(f, vd, vbc, Vocabulary{}, kUnit);
        REQUIRE(ext.size() == 4);
        CHECK(ext[0].text() == "{b'}");
        CHECK(ext[1].text() == "{b',c'}");
        CHECK(ext[2].text() == "{c'}");
        CHECK(ext[3].text() == "{d}");
    }
    SUBCASE("a partial well-founded model admits no expansion for that input") {
        LogicProgram p;
        p.semantics = LpSemantics::WellFounded;
        p.sigma = Vocabulary{Symbol{"b"}};
        p.epsilon = Vocabulary{Symbol{"a"}};
        // with b true the program oscillates, with b false a is simply unfounded
        p.rules = {Rule::normal(RuleAtom{"a", {}}, {BodyLiteral{RuleAtom{"b", {}}, false},
                                                    BodyLiteral{RuleAtom{"a", {}}, true}})};
        const auto ext = module_of_axioms(p, kUnit);
        REQUIRE(ext.size() == 1);
        CHECK(ext[0].text() == "{}");
    }
    SUBCASE("symbol leakage is rejected") {
        LogicProgram p = pm0();
        p.rules.push_back(Rule::fact(RuleAtom{"z", {}}));
        CHECK_THROWS_AS(module_of_axioms(p, kUnit), VocabularyMismatchError);
    }
}

TEST_CASE("stable-model properties on random programs") {
    std::mt19937 rng(17);
    const auto pool = testgen::symbol_pool(4);
    const Vocabulary v{pool[0], pool[1], pool[2], pool[3]};
    std::uniform_int_distribution<int> natoms(0, 3), nrules(0, 5), coin(0, 1);
    for (int round = 0; round < 60; ++round) {
        LogicProgram p;
        p.semantics = LpSemantics::StableModel;
        p.epsilon = v;
        const int k = nrules(rng);
        bool has_negation = false;
        for (int i = 0; i < k; ++i) {
            std::vector<BodyLiteral> body;
            const int nb = natoms(rng);
            for (int j = 0; j < nb; ++j) {
                const bool neg = coin(rng) == 1;
                has_negation = has_negation || neg;
                body.push_back(
                    BodyLiteral{RuleAtom{pool[static_cast<std::size_t>(rng() % 4)].name, {}}, neg});
            }
            p.rules.push_back(
                Rule::normal(RuleAtom{pool[static_cast<std::size_t>(rng() % 4)].name, {}}, body));
        }
        const Structure empty_facts(Vocabulary{}, kUnit, {});
        const auto models = stable_models(p, kUnit, empty_facts);

        // every stable model satisfies the rules read classically
        for (const Structure& m : models) {
            for (const Rule& r : p.rules) {
                bool body_true = true;
                for (const BodyLiteral& l : r.body) {
                    const bool holds = m.holds(GroundAtom{Symbol{l.atom.predicate}, {}});
                    body_true = body_true && (l.negated ? !holds : holds);
                }
                if (body_true) CHECK(m.holds(GroundAtom{Symbol{r.head->predicate}, {}}));
            }
        }

        // well-founded truths sit inside every stable model, falsehoods outside
        LogicProgram wf_p = p;
        wf_p.semantics = LpSemantics::WellFounded;
        const auto wf = well_founded_model(wf_p, kUnit, empty_facts);
        for (const Structure& m : models) {
            for (const GroundAtom& a : wf.true_atoms) CHECK(m.holds(a));
            for (const GroundAtom& a : wf.false_atoms) CHECK(!m.holds(a));
        }

        // negation-free programs: unique stable model = total wf truths
        if (!has_negation) {
            REQUIRE(models.size() == 1);
            CHECK(wf.total());
            CHECK(models[0].true_atoms() == wf.true_atoms);
        }
    }
}
