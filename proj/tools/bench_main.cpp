// Compares the serial reference kernels against the OpenMP ones on the
// enumeration-heavy entry points. Build with -DNDEBUG for honest numbers.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>

#include "modsys/logics.hpp"
#include "modsys/semantics_inf.hpp"
#include "modsys/semantics_mt.hpp"

using namespace modsys;

namespace {

double seconds(void (*body)(Execution), Execution exec, int reps) {
    double best = 1e100;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        body(exec);
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

int g_atoms = 22;

Vocabulary bench_vocab(int n) {
    std::vector<Symbol> syms;
    for (int i = 0; i < n; ++i) syms.push_back(Symbol{"p" + std::to_string(i), 0});
    return Vocabulary(std::move(syms));
}

PropFormula random_formula(const Vocabulary& vocab, std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(vocab.size()) - 1);
    if (depth == 0) {
        return PropFormula::atom(GroundAtom{vocab.symbols()[static_cast<std::size_t>(pick(rng))], {}});
    }
    std::uniform_int_distribution<int> op(0, 4);
    switch (op(rng)) {
        case 0: return PropFormula::negation(random_formula(vocab, rng, depth - 1));
        case 1:
            return PropFormula::conjunction(random_formula(vocab, rng, depth - 1),
                                            random_formula(vocab, rng, depth - 1));
        case 2:
            return PropFormula::disjunction(random_formula(vocab, rng, depth - 1),
                                            random_formula(vocab, rng, depth - 1));
        case 3:
            return PropFormula::implication(random_formula(vocab, rng, depth - 1),
                                            random_formula(vocab, rng, depth - 1));
        default:
            return PropFormula::equivalence(random_formula(vocab, rng, depth - 1),
                                            random_formula(vocab, rng, depth - 1));
    }
}

void bench_prop_models(Execution exec) {
    // conjoining "all atoms true" keeps the model set tiny, so the timing
    // isolates the enumeration kernel rather than materialization
    const Domain dom{"u"};
    const Vocabulary vocab = bench_vocab(g_atoms);
    std::mt19937 rng(7);
    PropFormula phi = random_formula(vocab, rng, 7);
    for (const Symbol& s : vocab.symbols())
        phi = PropFormula::conjunction(phi, PropFormula::atom(GroundAtom{s, {}}));
    EvalOptions opts;
    opts.exec = exec;
    opts.ceiling = 26;
    (void)prop_models(phi, vocab, dom, opts);
}

void bench_expand_coloring(Execution exec) {
    // colourability of the complete graph K5 via guess-and-check (60 ground atoms)
    const Domain dom{"1", "2", "3", "4", "5"};
    LogicProgram p;
    p.semantics = LpSemantics::StableModel;
    p.sigma = Vocabulary{Symbol{"v", 1}, Symbol{"e", 2}};
    p.epsilon = Vocabulary{Symbol{"r", 1}, Symbol{"g", 1}, Symbol{"b", 1}};
    const Term x{Term::Kind::Variable, "x"}, y{Term::Kind::Variable, "y"};
    p.rules.push_back(Rule::choice_rule(
        1, 1, {RuleAtom{"r", {x}}, RuleAtom{"g", {x}}, RuleAtom{"b", {x}}},
        {BodyLiteral{RuleAtom{"v", {x}}, false}}));
    for (const char* colour : {"r", "g", "b"})
        p.rules.push_back(Rule::constraint({BodyLiteral{RuleAtom{colour, {x}}, false},
                                            BodyLiteral{RuleAtom{colour, {y}}, false},
                                            BodyLiteral{RuleAtom{"e", {x, y}}, false}}));
    std::set<GroundAtom> atoms;
    const Symbol v{"v", 1}, e{"e", 2};
    for (int i = 1; i <= 5; ++i) atoms.insert(GroundAtom{v, {std::to_string(i)}});
    for (int i = 1; i <= 5; ++i)
        for (int j = 1; j <= 5; ++j)
            if (i != j) atoms.insert(GroundAtom{e, {std::to_string(i), std::to_string(j)}});
    const Structure facts(p.sigma, dom, atoms);
    EvalOptions opts;
    opts.exec = exec;
    opts.ceiling = 26;
    (void)LpEngine(p, dom).stable_models(facts, opts);
}

void bench_ent(Execution exec) {
    const Domain dom{"u"};
    const Vocabulary vocab = bench_vocab(12);
    std::mt19937 rng(11);
    const PropFormula phi = random_formula(vocab, rng, 5);
    EvalOptions opts;
    opts.exec = exec;
    opts.ceiling = 26;
    const auto ext = prop_models(phi, vocab, dom, {Execution::Serial, 26});
    (void)ent_inferences(ext, vocab, dom, 2, opts);
}

void run(const char* name, void (*body)(Execution), int reps) {
    const double s = seconds(body, Execution::Serial, reps);
    const double p = seconds(body, Execution::Parallel, reps);
    std::printf("%-24s serial %8.1f ms   parallel %8.1f ms   speedup %.2fx\n", name, s * 1e3,
                p * 1e3, s / p);
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) quick = true;
    const int reps = quick ? 1 : 3;
    if (quick) g_atoms = 18;

    std::printf("kernel benchmark (%s)\n", quick ? "quick" : "full");
    run("prop_models", bench_prop_models, reps);
    run("stable_models K5", bench_expand_coloring, reps);
    run("ent_inferences", bench_ent, reps);
    return 0;
}
