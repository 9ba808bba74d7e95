#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modsys/algebra.hpp"
#include "modsys/options.hpp"
#include "modsys/structures.hpp"

namespace modsys {

// A pair (S, l): every structure consistent with the premise S must be
// consistent with the conclusion literal l.
struct Inference {
    PartialAssignment premise;
    Literal conclusion;

    Inference(PartialAssignment premise, Literal conclusion);  // validates

    auto operator<=>(const Inference&) const = default;
    std::string text() const;  // "a,b | c => ~d" (S+ | S- => l)
};

class InferenceSet {
public:
    InferenceSet(Vocabulary vocab, Domain domain, std::vector<Inference> inferences);

    const Vocabulary& vocab() const { return vocab_; }
    const Domain& domain() const { return domain_; }
    const std::vector<Inference>& inferences() const { return inferences_; }  // sorted, unique
    std::size_t size() const { return inferences_.size(); }

    std::string text() const;  // one inference per line

private:
    Vocabulary vocab_;
    Domain domain_;
    std::vector<Inference> inferences_;
};

// The entailment generator: every (S, l) with |S| <= max_premise_size,
// S consistent, l not in S, such that each structure of the extension
// consistent with S is consistent with l.
InferenceSet ent_inferences(const std::vector<Structure>& extension, const Vocabulary& vocab,
                            const Domain& domain, int max_premise_size = 3,
                            const EvalOptions& opts = {});

// All structures respecting every inference, canonical order.
std::vector<Structure> inf_models(const InferenceSet& inferences, const EvalOptions& opts = {});

struct PropagationResult {
    bool conflict = false;
    PartialAssignment assignment;              // closure, or the state at conflict
    std::optional<Literal> conflict_literal;   // the literal whose complement was present

    std::string text() const;  // closure text or "CONFLICT: <lit>"
};

// Least fixpoint of literal-subset firing from a consistent start; stops the
// moment a complementary literal would be added. Order-independent.
PropagationResult propagate(const InferenceSet& inferences, const PartialAssignment& start);

// Same closure over an explicitly ordered inference list (test hook for the
// order-independence property).
PropagationResult propagate_ordered(std::span<const Inference> inferences,
                                    const PartialAssignment& start);

// Wraps inf_models(I) as a primitive module; I's vocabulary must be
// sigma U epsilon.
PrimitiveModulePtr module_from_inferences(std::string name, const InferenceSet& inferences,
                                          const Vocabulary& sigma, const Vocabulary& epsilon,
                                          const EvalOptions& opts = {});

// File format: one inference per line, "S+atoms | S-atoms => [~]atom".
// Blank lines and '#' comments are skipped.
InferenceSet parse_inference_file(std::string_view text, const Vocabulary& vocab,
                                  const Domain& domain);

}  // namespace modsys
