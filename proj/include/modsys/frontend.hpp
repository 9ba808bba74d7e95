#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "modsys/algebra.hpp"
#include "modsys/logics.hpp"
#include "modsys/semantics_mt.hpp"

namespace modsys {

struct SourcePos {
    int line = 1;
    int col = 1;
};

struct ParseError : Error {
    ParseError(const std::string& file, SourcePos pos, const std::string& msg)
        : Error(file + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " +
                msg),
          pos(pos) {}
    SourcePos pos;
};

// The multi-language formula tree: module leaves combined by conjunction
// (compiled to composition), disjunction (union), existential quantification
// over symbols (projection) and feedback annotations.
class LogicFormula {
public:
    enum class Kind { Leaf, And, Or, Exists, Feedback };

    static LogicFormula leaf(PrimitiveModulePtr module);
    static LogicFormula conjunction(LogicFormula l, LogicFormula r);
    static LogicFormula disjunction(LogicFormula l, LogicFormula r);
    static LogicFormula exists(Vocabulary symbols, LogicFormula f);
    static LogicFormula feedback(LogicFormula f, Symbol input, Symbol output);

    Kind kind() const;
    const PrimitiveModulePtr& module() const;  // Leaf
    const Vocabulary& quantified() const;      // Exists
    LogicFormula left() const;                 // And/Or
    LogicFormula right() const;
    LogicFormula child() const;                // Exists/Feedback
    const Symbol& feedback_input() const;
    const Symbol& feedback_output() const;

    std::string text() const;

private:
    struct Node;
    explicit LogicFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// and -> compose, or -> union, exists S -> projection onto vocab \ S,
// feedback annotations -> feedback nodes. Throws PreconditionError naming the
// violating connective when the compiled expression is ill-formed.
ModuleExpr compile_logic_formula(const LogicFormula& f);

struct SystemDef {
    std::string name;
    ModuleExpr expr;
};

struct InstanceDef {
    std::string name;
    std::set<GroundAtom> atoms;
};

// A parsed .msl document: one domain, declared symbols, primitive modules,
// named systems/formulas and instance blocks.
class SpecDocument {
public:
    Domain domain{"u"};
    Vocabulary declared;
    ModuleRegistry modules;
    std::vector<std::string> module_order;
    std::vector<std::string> system_order;  // systems and formulas, in order
    std::map<std::string, SystemDef, std::less<>> systems;
    std::map<std::string, InstanceDef, std::less<>> instances;

    // Resolves a system or formula name; a bare module name denotes the
    // primitive expression. Throws when unknown.
    ModuleExpr resolve_system(std::string_view name) const;
    const InstanceDef& instance(std::string_view name) const;
};

SpecDocument parse_spec(std::string_view text, std::string_view filename = "<input>");

// Algebra expressions alone, over an existing registry (round-trip testing).
ModuleExpr parse_algebra(std::string_view text, const ModuleRegistry& registry,
                         const Vocabulary& declared);

}  // namespace modsys
