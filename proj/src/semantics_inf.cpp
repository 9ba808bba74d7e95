#include "modsys/semantics_inf.hpp"

#include <algorithm>
#include <sstream>

namespace modsys {

Inference::Inference(PartialAssignment p, Literal c)
    : premise(std::move(p)), conclusion(std::move(c)) {
    if (!is_consistent(premise))
        throw PreconditionError("inference premise " + premise.text() + " is inconsistent");
    if (premise.contains(conclusion))
        throw PreconditionError("inference conclusion " + conclusion.text() +
                                " already occurs in the premise");
}

std::string Inference::text() const {
    std::string pos, neg;
    for (const Literal& l : premise.literals()) {
        std::string& side = l.positive ? pos : neg;
        if (!side.empty()) side += ",";
        side += l.atom.text();
    }
    return pos + " | " + neg + " => " + conclusion.text();
}

InferenceSet::InferenceSet(Vocabulary vocab, Domain domain, std::vector<Inference> inferences)
    : vocab_(std::move(vocab)), domain_(std::move(domain)), inferences_(std::move(inferences)) {
    auto check_atom = [&](const GroundAtom& a, const char* where) {
        if (!vocab_.contains(a.symbol))
            throw VocabularyMismatchError(std::string(where) + " atom '" + a.text() +
                                          "' is outside the vocabulary");
        for (const std::string& e : a.args)
            if (!domain_.contains(e))
                throw VocabularyMismatchError(std::string(where) + " atom '" + a.text() +
                                              "' uses element outside the domain");
    };
    for (const Inference& inf : inferences_) {
        for (const Literal& l : inf.premise.literals()) check_atom(l.atom, "premise");
        check_atom(inf.conclusion.atom, "conclusion");
    }
    std::sort(inferences_.begin(), inferences_.end());
    inferences_.erase(std::unique(inferences_.begin(), inferences_.end()), inferences_.end());
}

std::string InferenceSet::text() const {
    std::string out;
    for (const Inference& inf : inferences_) {
        out += inf.text();
        out += '\n';
    }
    return out;
}

namespace {

struct MaskedInference {
    std::uint64_t prem_pos = 0, prem_neg = 0;
    std::uint64_t concl_bit = 0;
    bool concl_positive = true;
};

std::vector<MaskedInference> compile(const InferenceSet& set, const AtomTable& table) {
    std::vector<MaskedInference> out;
    out.reserve(set.size());
    for (const Inference& inf : set.inferences()) {
        MaskedInference mi;
        std::tie(mi.prem_pos, mi.prem_neg) = table.masks_of(inf.premise);
        mi.concl_bit = std::uint64_t{1} << *table.index_of(inf.conclusion.atom);
        mi.concl_positive = inf.conclusion.positive;
        out.push_back(mi);
    }
    return out;
}

}  // namespace

InferenceSet ent_inferences(const std::vector<Structure>& extension, const Vocabulary& vocab,
                            const Domain& domain, int max_premise_size, const EvalOptions& opts) {
    AtomTable table(vocab, domain);
    const std::size_t n = table.size();
    if (n > static_cast<std::size_t>(opts.ceiling))
        throw EnumerationLimitError("premise enumeration over " + std::to_string(n) +
                                    " atoms exceeds the ceiling of " +
                                    std::to_string(opts.ceiling));
    std::vector<std::uint64_t> ext_masks;
    ext_masks.reserve(extension.size());
    for (const Structure& b : extension) {
        if (b.vocab() != vocab || b.domain() != domain)
            throw VocabularyMismatchError("extension structure is not over the given vocabulary");
        ext_masks.push_back(table.mask_of(b));
    }
    const int bound = std::min<int>(max_premise_size, static_cast<int>(n));

    // premises = consistent sign vectors: every subset of atoms (the premise
    // scope) with every positive/negative split, sizes up to the bound
    const std::uint64_t scope_count = std::uint64_t{1} << n;
    struct Cand {
        std::uint64_t pos, neg, bit;
        bool positive;
    };
    std::vector<Cand> found;
    const auto scopes = kernels::collect_masks(
        scope_count, opts.exec, [&](std::uint64_t scope, std::vector<std::uint64_t>& sink) {
            if (std::popcount(scope) > bound) return;
            sink.push_back(scope);
        });
#pragma omp parallel for schedule(dynamic) if (opts.exec == Execution::Parallel)
    for (long long si = 0; si < static_cast<long long>(scopes.size()); ++si) {
        const std::uint64_t scope = scopes[static_cast<std::size_t>(si)];
        std::vector<std::size_t> bits;
        for (std::size_t i = 0; i < n; ++i)
            if (scope & (std::uint64_t{1} << i)) bits.push_back(i);
        std::vector<Cand> local;
        const std::uint64_t signs_count = std::uint64_t{1} << bits.size();
        for (std::uint64_t signs = 0; signs < signs_count; ++signs) {
            std::uint64_t pos = 0;
            for (std::size_t i = 0; i < bits.size(); ++i)
                if (signs & (std::uint64_t{1} << i)) pos |= std::uint64_t{1} << bits[i];
            const std::uint64_t neg = scope & ~pos;
            for (std::size_t a = 0; a < n; ++a) {
                const std::uint64_t bit = std::uint64_t{1} << a;
                for (const bool positive : {true, false}) {
                    if ((positive ? pos : neg) & bit) continue;  // l already in S
                    bool entailed = true;
                    for (std::uint64_t b : ext_masks) {
                        if ((pos & ~b) || (neg & b)) continue;  // not consistent with S
                        if (positive ? !(b & bit) : (b & bit)) {
                            entailed = false;
                            break;
                        }
                    }
                    if (entailed) local.push_back(Cand{pos, neg, bit, positive});
                }
            }
        }
#pragma omp critical
        found.insert(found.end(), local.begin(), local.end());
    }

    std::vector<Inference> out;
    out.reserve(found.size());
    for (const Cand& c : found) {
        std::set<Literal> lits;
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t bit = std::uint64_t{1} << i;
            if (c.pos & bit) lits.insert(Literal{table.atom(i), true});
            if (c.neg & bit) lits.insert(Literal{table.atom(i), false});
        }
        std::size_t concl_index = 0;
        while (!(c.bit & (std::uint64_t{1} << concl_index))) ++concl_index;
        out.emplace_back(PartialAssignment(std::move(lits)),
                         Literal{table.atom(concl_index), c.positive});
    }
    return InferenceSet(vocab, domain, std::move(out));
}

std::vector<Structure> inf_models(const InferenceSet& inferences, const EvalOptions& opts) {
    AtomTable table(inferences.vocab(), inferences.domain());
    const std::uint64_t count = table.enumerable_count(opts.ceiling);
    const auto compiled = compile(inferences, table);
    auto masks = kernels::filter_masks(count, opts.exec, [&](std::uint64_t b) {
        for (const MaskedInference& mi : compiled) {
            if ((mi.prem_pos & ~b) || (mi.prem_neg & b)) continue;  // premise not consistent
            if (mi.concl_positive ? !(b & mi.concl_bit) : (b & mi.concl_bit)) return false;
        }
        return true;
    });
    std::vector<Structure> out;
    out.reserve(masks.size());
    for (std::uint64_t m : masks) out.push_back(table.structure_of(m));
    std::sort(out.begin(), out.end());
    return out;
}

std::string PropagationResult::text() const {
    if (conflict) return "CONFLICT: " + conflict_literal->text();
    return assignment.text();
}

PropagationResult propagate_ordered(std::span<const Inference> inferences,
                                    const PartialAssignment& start) {
    if (!is_consistent(start))
        throw PreconditionError("propagation start " + start.text() + " is inconsistent");
    std::set<Literal> current = start.literals();
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Inference& inf : inferences) {
            const auto& prem = inf.premise.literals();
            if (!std::includes(current.begin(), current.end(), prem.begin(), prem.end()))
                continue;
            if (current.count(inf.conclusion)) continue;
            if (current.count(inf.conclusion.negated())) {
                PropagationResult r;
                r.conflict = true;
                r.assignment = PartialAssignment(std::move(current));
                r.conflict_literal = inf.conclusion;
                return r;
            }
            current.insert(inf.conclusion);
            changed = true;
        }
    }
    PropagationResult r;
    r.assignment = PartialAssignment(std::move(current));
    return r;
}

PropagationResult propagate(const InferenceSet& inferences, const PartialAssignment& start) {
    return propagate_ordered(inferences.inferences(), start);
}

PrimitiveModulePtr module_from_inferences(std::string name, const InferenceSet& inferences,
                                          const Vocabulary& sigma, const Vocabulary& epsilon,
                                          const EvalOptions& opts) {
    if (inferences.vocab() != voc_union(sigma, epsilon))
        throw VocabularyMismatchError(
            "inference vocabulary must equal sigma U epsilon for module '" + name + "'");
    return PrimitiveModule::from_extension(std::move(name), Signature{sigma, epsilon},
                                           inferences.domain(), inf_models(inferences, opts));
}

InferenceSet parse_inference_file(std::string_view text, const Vocabulary& vocab,
                                  const Domain& domain) {
    std::vector<Inference> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto bar = line.find('|');
        const auto arrow = line.find("=>");
        if (bar == std::string::npos || arrow == std::string::npos || arrow < bar)
            throw Error("inference line " + std::to_string(lineno) +
                        ": expected 'S+ | S- => literal'");
        std::set<Literal> lits;
        for (const GroundAtom& a : parse_atom_set(line.substr(0, bar), vocab, domain))
            lits.insert(Literal{a, true});
        for (const GroundAtom& a :
             parse_atom_set(line.substr(bar + 1, arrow - bar - 1), vocab, domain))
            lits.insert(Literal{a, false});
        const PartialAssignment concl = parse_literals(line.substr(arrow + 2), vocab, domain);
        if (concl.size() != 1)
            throw Error("inference line " + std::to_string(lineno) +
                        ": expected exactly one conclusion literal");
        out.emplace_back(PartialAssignment(std::move(lits)), *concl.literals().begin());
    }
    return InferenceSet(vocab, domain, std::move(out));
}

}  // namespace modsys
