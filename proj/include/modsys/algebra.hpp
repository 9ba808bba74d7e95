#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "modsys/logics.hpp"
#include "modsys/options.hpp"
#include "modsys/structures.hpp"

namespace modsys {

struct Signature {
    Vocabulary sigma;    // instance (input) vocabulary
    Vocabulary epsilon;  // expansion (output) vocabulary

    Vocabulary vocab() const { return voc_union(sigma, epsilon); }
    bool operator==(const Signature&) const = default;
    std::string text() const;
};

// A primitive module: a named set of (sigma U epsilon)-structures over a
// fixed domain, given either explicitly or through an axiomatization whose
// models are restricted to the visible vocabulary.
class PrimitiveModule {
public:
    static std::shared_ptr<const PrimitiveModule> from_extension(std::string name, Signature sig,
                                                                 Domain domain,
                                                                 std::vector<Structure> extension);
    static std::shared_ptr<const PrimitiveModule> from_program(std::string name, LogicProgram p,
                                                               Domain domain);
    static std::shared_ptr<const PrimitiveModule> from_formula(std::string name, PropFormula f,
                                                               Signature sig, Vocabulary hidden,
                                                               Domain domain);

    const std::string& name() const { return name_; }
    const Signature& signature() const { return sig_; }
    const Domain& domain() const { return domain_; }

    // Membership of a (sigma U epsilon)-structure. Thread-safe; logic-backed
    // modules answer per input instance and memoize the instance's models.
    bool contains(const Structure& b) const;

    // The full extension in canonical order, materialized on first use.
    const std::vector<Structure>& extension(const EvalOptions& opts = {}) const;

private:
    PrimitiveModule(std::string name, Signature sig, Domain domain);

    std::string name_;
    Signature sig_;
    Domain domain_;
    Vocabulary visible_;
    std::unique_ptr<AtomTable> visible_table_;

    // backends (exactly one active)
    std::optional<std::vector<Structure>> explicit_extension_;
    std::shared_ptr<const LpEngine> engine_;
    std::optional<PropFormula> formula_;
    Vocabulary formula_hidden_;
    std::unique_ptr<AtomTable> full_table_;          // formula backend
    std::unique_ptr<CompiledFormula> compiled_;
    std::vector<std::size_t> vis_to_full_;           // visible bit -> full bit
    std::vector<std::size_t> hidden_bits_;           // full-table bit indices

    mutable std::mutex mutex_;
    mutable std::map<std::uint64_t, std::vector<std::uint64_t>> per_instance_;  // sigma mask -> visible masks
    mutable std::optional<std::vector<Structure>> materialized_;

    const std::vector<std::uint64_t>& instance_models(std::uint64_t sigma_mask) const;
};

using PrimitiveModulePtr = std::shared_ptr<const PrimitiveModule>;

class ModuleRegistry {
public:
    void add(PrimitiveModulePtr m);
    PrimitiveModulePtr find(std::string_view name) const;  // null when absent
    std::vector<std::string> names() const;

private:
    std::map<std::string, PrimitiveModulePtr, std::less<>> modules_;
};

// The algebra AST. Immutable; nodes are shared.
class ModuleExpr {
public:
    enum class Kind { Prim, Project, Compose, Union, Feedback, Complement };

    static ModuleExpr prim(PrimitiveModulePtr module);
    static ModuleExpr project(Vocabulary onto, ModuleExpr e);
    static ModuleExpr compose(ModuleExpr left, ModuleExpr right);
    static ModuleExpr unite(ModuleExpr left, ModuleExpr right);
    static ModuleExpr feedback(ModuleExpr e, Symbol input, Symbol output);
    static ModuleExpr complement(ModuleExpr e);

    Kind kind() const;
    const PrimitiveModulePtr& module() const;  // Prim
    const Vocabulary& onto() const;            // Project
    ModuleExpr left() const;                   // Compose/Union
    ModuleExpr right() const;
    ModuleExpr child() const;                  // Project/Feedback/Complement
    const Symbol& feedback_input() const;      // Feedback: R (former input)
    const Symbol& feedback_output() const;     // Feedback: S (output)

    std::size_t node_count() const;
    std::string text() const;  // canonical algebra rendering, minimal parentheses
    bool operator==(const ModuleExpr&) const;  // structural; primitives by identity
    const void* id() const;                    // node identity, stable across copies

private:
    struct Node;
    explicit ModuleExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Violation {
    enum class Kind {
        OutputInterference,
        NotIndependent,
        ProjectionOutsideVocabulary,
        FeedbackInputMissing,
        FeedbackOutputMissing,
        FeedbackArityMismatch,
        FeedbackOnClosedModule,
        SymbolClash,
        DomainMismatch,
    };
    Kind kind;
    std::string path;  // "/", "/0", "/1/0", ...
    std::string message;
};

struct WellFormednessReport {
    bool ok = true;
    std::vector<Violation> violations;
};

// Total: reports violations as data instead of throwing.
WellFormednessReport check_wellformed(const ModuleExpr& e);

// Bottom-up signature per the five construction rules. Throws
// PreconditionError when the expression is not well formed.
Signature signature_of(const ModuleExpr& e);

struct Subsystem {
    std::string path;
    ModuleExpr expr;
};

// All subexpressions including e itself, post-order, with stable paths.
std::vector<Subsystem> subsystems(const ModuleExpr& e);

// Every symbol occurring anywhere in the system, including projected-out
// ones (the union of all primitive signatures' vocabularies).
Vocabulary vocab_all(const ModuleExpr& e);

// The common evaluation domain of the expression's primitives.
const Domain& expr_domain(const ModuleExpr& e);

}  // namespace modsys
