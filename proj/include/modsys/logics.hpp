#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modsys/atom_table.hpp"
#include "modsys/options.hpp"
#include "modsys/structures.hpp"

namespace modsys {

// ---------------------------------------------------------------------------
// Propositional formulas over ground atoms.
// ---------------------------------------------------------------------------

class PropFormula {
public:
    enum class Kind { True, False, Atom, Not, And, Or, Implies, Iff };

    static PropFormula constant(bool value);
    static PropFormula atom(GroundAtom a);
    static PropFormula negation(PropFormula f);
    static PropFormula conjunction(PropFormula l, PropFormula r);
    static PropFormula disjunction(PropFormula l, PropFormula r);
    static PropFormula implication(PropFormula l, PropFormula r);
    static PropFormula equivalence(PropFormula l, PropFormula r);

    Kind kind() const;
    const GroundAtom& atom_ref() const;  // Kind::Atom only
    PropFormula left() const;            // unary: the only child
    PropFormula right() const;

    bool eval(const std::set<GroundAtom>& true_atoms) const;
    std::set<GroundAtom> atoms() const;
    std::string text() const;

private:
    struct Node;
    explicit PropFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Concrete syntax: atoms, `~ & | -> <->`, parentheses, `true`/`false`.
// Precedence ~ > & > | > -> (right-assoc) > <->.
PropFormula parse_prop_formula(std::string_view text, const Vocabulary& vocab,
                               const Domain& domain);

// A formula flattened against an atom table for mask-level evaluation inside
// enumeration loops.
class CompiledFormula {
public:
    CompiledFormula(const PropFormula& f, const AtomTable& table);
    bool eval(std::uint64_t mask) const { return eval_at(root_, mask); }

private:
    struct N {
        PropFormula::Kind kind;
        int a = -1, b = -1;
        std::uint64_t bit = 0;
    };
    int add(const PropFormula& f, const AtomTable& table);
    bool eval_at(int i, std::uint64_t m) const;
    std::vector<N> nodes_;
    int root_ = -1;
};

// All structures over vocab x domain satisfying phi, canonical order.
std::vector<Structure> prop_models(const PropFormula& phi, const Vocabulary& vocab,
                                   const Domain& domain, const EvalOptions& opts = {});

// ---------------------------------------------------------------------------
// Logic programs (normal rules, constraints, one cardinality-choice form).
// ---------------------------------------------------------------------------

struct Term {
    enum class Kind { Constant, Variable };
    Kind kind = Kind::Constant;
    std::string name;

    auto operator<=>(const Term&) const = default;
};

struct RuleAtom {
    std::string predicate;
    std::vector<Term> args;

    bool ground() const;
    std::string text() const;
    auto operator<=>(const RuleAtom&) const = default;
};

struct BodyLiteral {
    RuleAtom atom;
    bool negated = false;

    std::string text() const;
    auto operator<=>(const BodyLiteral&) const = default;
};

// lower {e1; ...; ek} upper
struct ChoiceHead {
    int lower = 0;
    int upper = 0;
    std::vector<RuleAtom> elements;
};

struct Rule {
    enum class HeadKind { Atom, Constraint, Choice };
    HeadKind head_kind = HeadKind::Atom;
    std::optional<RuleAtom> head;       // HeadKind::Atom
    std::optional<ChoiceHead> choice;   // HeadKind::Choice
    std::vector<BodyLiteral> body;

    std::set<std::string> variables() const;
    bool ground() const;
    std::string text() const;

    static Rule fact(RuleAtom head);
    static Rule normal(RuleAtom head, std::vector<BodyLiteral> body);
    static Rule constraint(std::vector<BodyLiteral> body);
    static Rule choice_rule(int lower, int upper, std::vector<RuleAtom> elements,
                            std::vector<BodyLiteral> body);
};

enum class LpSemantics { StableModel, WellFounded };

struct LogicProgram {
    LpSemantics semantics = LpSemantics::StableModel;
    Vocabulary sigma;    // instance symbols
    Vocabulary epsilon;  // expansion symbols
    Vocabulary hidden;   // declared auxiliary symbols
    std::vector<Rule> rules;

    Vocabulary all_vocab() const;  // sigma U epsilon U hidden
    // Checks symbol declarations, arities, disjointness, cardinality bounds,
    // and the reserved '_' name prefix. Throws on violation.
    void validate() const;
};

// Instantiates every rule variable over the full domain.
LogicProgram ground(const LogicProgram& p, const Domain& domain);

struct ThreeValuedModel {
    std::set<GroundAtom> true_atoms;
    std::set<GroundAtom> false_atoms;
    std::set<GroundAtom> undefined_atoms;

    bool total() const { return undefined_atoms.empty(); }
};

// ---------------------------------------------------------------------------
// Grounded engine. Choice rules are desugared into guessing pairs over fresh
// '_ch<i>_<pred>' symbols plus cardinality constraints, so a single
// Gelfond-Lifschitz reduct engine serves both tags.
// ---------------------------------------------------------------------------

class LpEngine {
public:
    LpEngine(LogicProgram program, Domain domain);

    const LogicProgram& program() const { return program_; }
    const Domain& domain() const { return domain_; }
    const AtomTable& table() const { return *table_; }  // incl. desugar symbols
    const Vocabulary& visible_vocab() const { return visible_; }

    // facts must interpret exactly sigma; candidate must interpret either the
    // declared program vocabulary or the full desugared one, and expand facts.
    bool is_stable(const Structure& facts, const Structure& candidate) const;
    // All stable expansions of facts, over the full desugared vocabulary.
    std::vector<Structure> stable_models(const Structure& facts,
                                         const EvalOptions& opts = {}) const;
    std::vector<std::uint64_t> stable_model_masks(std::uint64_t facts_mask,
                                                  const EvalOptions& opts = {}) const;
    ThreeValuedModel well_founded(const Structure& facts) const;

    std::uint64_t sigma_mask() const { return sigma_mask_; }
    std::uint64_t visible_mask() const { return visible_mask_; }

private:
    struct MaskRule {
        int head = -1;  // -1 for constraints
        std::uint64_t pos = 0;
        std::uint64_t neg = 0;
    };
    struct AuxDef {
        std::size_t bit;
        std::vector<std::pair<std::uint64_t, std::uint64_t>> fires;  // (pos, neg)
    };

    std::uint64_t least_model(std::uint64_t reduct_wrt, std::uint64_t facts) const;
    bool stable_mask(std::uint64_t candidate, std::uint64_t facts) const;
    std::uint64_t derive_aux(std::uint64_t base) const;
    std::uint64_t facts_mask_of(const Structure& facts) const;

    LogicProgram program_;
    Domain domain_;
    Vocabulary visible_;  // sigma U epsilon
    std::unique_ptr<AtomTable> table_;
    std::vector<MaskRule> rules_;        // non-constraint
    std::vector<MaskRule> constraints_;
    std::vector<AuxDef> aux_;
    std::uint64_t sigma_mask_ = 0;
    std::uint64_t visible_mask_ = 0;
    std::uint64_t free_mask_ = 0;  // epsilon + user hidden (aux bits derived)
    std::vector<std::size_t> free_bits_;
};

bool is_stable_model(const LogicProgram& p, const Domain& domain, const Structure& facts,
                     const Structure& candidate);
std::vector<Structure> stable_models(const LogicProgram& p, const Domain& domain,
                                     const Structure& facts, const EvalOptions& opts = {});
ThreeValuedModel well_founded_model(const LogicProgram& p, const Domain& domain,
                                    const Structure& facts);

// ---------------------------------------------------------------------------
// Primitive-module extensions from axiomatizations, restricted to sigma U
// epsilon. A WF module admits an expansion for a given input exactly when the
// well-founded model is total; the expansion is then that model.
// ---------------------------------------------------------------------------

std::vector<Structure> module_of_axioms(const PropFormula& body, const Vocabulary& sigma,
                                        const Vocabulary& epsilon, const Vocabulary& hidden,
                                        const Domain& domain, const EvalOptions& opts = {});
std::vector<Structure> module_of_axioms(const LogicProgram& body, const Domain& domain,
                                        const EvalOptions& opts = {});

}  // namespace modsys
