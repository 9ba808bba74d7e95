#pragma once

#include <string>
#include <vector>

#include "modsys/algebra.hpp"
#include "modsys/options.hpp"

namespace modsys {

// A set of (sigma U epsilon)-structures in canonical order: lexicographic
// over the sorted atom sequences, empty structure first.
struct ModelSet {
    Signature signature;
    Domain domain;
    std::vector<Structure> structures;

    bool operator==(const ModelSet&) const = default;
    std::string lines() const;  // one canonical structure per line
};

// Membership of b (over sigma U epsilon) per the recursive model definition.
bool is_model(const ModuleExpr& e, const Structure& b, const EvalOptions& opts = {});

// All models of e over the shared evaluation domain.
ModelSet mt_models(const ModuleExpr& e, const Domain& domain, const EvalOptions& opts = {});

// All models of e expanding the given sigma-instance; empty means none exists.
std::vector<Structure> expand(const ModuleExpr& e, const Structure& instance,
                              const EvalOptions& opts = {});

}  // namespace modsys
