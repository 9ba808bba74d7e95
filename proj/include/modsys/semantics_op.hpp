#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modsys/algebra.hpp"
#include "modsys/options.hpp"
#include "modsys/semantics_mt.hpp"

namespace modsys {

// One rule application witnessing a derivable transition (e, B1) -> B2.
// Leaves are primitive-module or complement applications.
struct DerivationTree {
    std::string rule;            // "primitive", "projection", ...
    std::string expr;            // canonical algebra text of the subexpression
    Structure source;            // B1 (tau-state)
    Structure target;            // B2
    std::string side_condition;  // recorded side-condition values
    std::vector<DerivationTree> children;

    std::string render() const;  // indented, one rule application per line
};

// The derivable-transition relation of a well-formed expression over a fixed
// all-inclusive vocabulary tau, materialized per the six SOS rules.
class StepRelation {
public:
    StepRelation(ModuleExpr e, Vocabulary tau, Domain domain, const EvalOptions& opts = {});

    const ModuleExpr& expr() const { return expr_; }
    const AtomTable& table() const { return *table_; }
    const Vocabulary& tau() const { return table_->vocab(); }

    // Successor tau-states of the root (sorted mask order).
    const std::vector<std::uint64_t>& successors(std::uint64_t state) const;
    bool derivable(std::uint64_t source, std::uint64_t target) const;

    ModelSet op_models() const;
    std::optional<DerivationTree> trace(std::uint64_t source, std::uint64_t target) const;

private:
    struct NodeData {
        ModuleExpr expr;
        Signature sig;
        std::uint64_t sigma_mask = 0;
        std::uint64_t eps_mask = 0;
        std::vector<std::vector<std::uint64_t>> succ;          // per source state
        std::vector<std::uint64_t> model_masks;                // over sigma U epsilon
        std::map<std::uint64_t, std::vector<std::uint64_t>> ext_by_sigma;  // Prim only
    };

    const NodeData& data(const ModuleExpr& e) const { return nodes_.at(e.id()); }
    void build(const ModuleExpr& e);
    std::optional<DerivationTree> trace_node(const ModuleExpr& e, std::uint64_t m1,
                                             std::uint64_t m2) const;

    ModuleExpr expr_;
    Domain domain_;
    EvalOptions opts_;
    std::unique_ptr<AtomTable> table_;
    std::uint64_t state_count_ = 0;
    std::map<const void*, NodeData> nodes_;
};

// All successor states of (e, b1); b1's vocabulary serves as tau and must
// subsume every symbol of the system.
std::vector<Structure> step(const ModuleExpr& e, const Structure& b1,
                            const EvalOptions& opts = {});

// M^op over sigma U epsilon, computed by enumerating tau-states.
ModelSet op_models(const ModuleExpr& e, const Vocabulary& tau, const Domain& domain,
                   const EvalOptions& opts = {});

bool is_fixpoint(const ModuleExpr& e, const Structure& b, const EvalOptions& opts = {});

// A full derivation tree for (e, b1) -> b2, or nothing when not derivable.
std::optional<DerivationTree> derivation_trace(const ModuleExpr& e, const Structure& b1,
                                               const Structure& b2,
                                               const EvalOptions& opts = {});

}  // namespace modsys
