#include "modsys/semantics_mt.hpp"

#include <algorithm>
#include <map>

namespace modsys {

std::string ModelSet::lines() const {
    std::string out;
    for (const Structure& b : structures) {
        out += b.text();
        out += '\n';
    }
    return out;
}

namespace {

struct MtEval {
    EvalOptions opts;
    std::map<const void*, Signature> sigs;  // filled once, read-only afterwards

    explicit MtEval(const ModuleExpr& root, EvalOptions o) : opts(o) {
        for (const Subsystem& s : subsystems(root))
            if (!sigs.count(s.expr.id())) sigs.emplace(s.expr.id(), signature_of(s.expr));
    }

    const Signature& sig(const ModuleExpr& e) const { return sigs.at(e.id()); }

    bool is_model(const ModuleExpr& e, const Structure& b) const {
        using K = ModuleExpr::Kind;
        switch (e.kind()) {
            case K::Prim:
                return e.module()->contains(b);
            case K::Project: {
                // some child model must expand b on the hidden symbols
                const Vocabulary child_vocab = sig(e.child()).vocab();
                const Vocabulary hidden = voc_minus(child_vocab, e.onto());
                StructureEnumeration hidden_structs(hidden, b.domain(), opts.ceiling);
                while (auto h = hidden_structs.next()) {
                    std::set<GroundAtom> atoms = b.true_atoms();
                    atoms.insert(h->true_atoms().begin(), h->true_atoms().end());
                    if (is_model(e.child(), Structure(child_vocab, b.domain(), std::move(atoms))))
                        return true;
                }
                return false;
            }
            case K::Compose:
                return is_model(e.left(), restrict_to(b, sig(e.left()).vocab())) &&
                       is_model(e.right(), restrict_to(b, sig(e.right()).vocab()));
            case K::Union:
                return is_model(e.left(), restrict_to(b, sig(e.left()).vocab())) ||
                       is_model(e.right(), restrict_to(b, sig(e.right()).vocab()));
            case K::Feedback: {
                const Symbol& r = e.feedback_input();
                const Symbol& s = e.feedback_output();
                for (const GroundAtom& a : ground_atoms(Vocabulary{r}, b.domain()))
                    if (b.holds(a) != b.holds(GroundAtom{s, a.args})) return false;
                return is_model(e.child(), b);
            }
            case K::Complement:
                return !is_model(e.child(), b);
        }
        return false;
    }
};

}  // namespace

bool is_model(const ModuleExpr& e, const Structure& b, const EvalOptions& opts) {
    MtEval ev(e, opts);
    if (b.vocab() != ev.sig(e).vocab())
        throw VocabularyMismatchError("model candidate must be over " + ev.sig(e).vocab().text());
    return ev.is_model(e, b);
}

ModelSet mt_models(const ModuleExpr& e, const Domain& domain, const EvalOptions& opts) {
    const Signature sig = signature_of(e);
    if (expr_domain(e) != domain)
        throw VocabularyMismatchError("expression primitives are over a different domain");
    if (e.kind() == ModuleExpr::Kind::Prim) {
        // a primitive's model set is its extension
        return ModelSet{sig, domain, e.module()->extension(opts)};
    }
    const Vocabulary vocab = sig.vocab();
    AtomTable table(vocab, domain);
    const std::uint64_t count = table.enumerable_count(opts.ceiling);
    const MtEval ev(e, opts);
    auto masks = kernels::filter_masks(count, opts.exec, [&](std::uint64_t m) {
        return ev.is_model(e, table.structure_of(m));
    });
    ModelSet out{sig, domain, {}};
    out.structures.reserve(masks.size());
    for (std::uint64_t m : masks) out.structures.push_back(table.structure_of(m));
    std::sort(out.structures.begin(), out.structures.end());
    return out;
}

std::vector<Structure> expand(const ModuleExpr& e, const Structure& instance,
                              const EvalOptions& opts) {
    const Signature sig = signature_of(e);
    if (instance.vocab() != sig.sigma)
        throw VocabularyMismatchError("instance must interpret exactly the instance vocabulary " +
                                      sig.sigma.text());
    if (expr_domain(e) != instance.domain())
        throw VocabularyMismatchError("instance is over a different domain than the primitives");

    const Vocabulary vocab = sig.vocab();
    AtomTable table(vocab, instance.domain());
    const std::uint64_t fixed = table.mask_of(instance);
    const std::uint64_t sigma_mask = table.vocab_mask(sig.sigma);
    std::vector<std::size_t> free_bits;
    for (std::size_t i = 0; i < table.size(); ++i)
        if ((sigma_mask & (std::uint64_t{1} << i)) == 0) free_bits.push_back(i);
    if (free_bits.size() > static_cast<std::size_t>(opts.ceiling))
        throw EnumerationLimitError("expansion search over " + std::to_string(free_bits.size()) +
                                    " atoms exceeds the ceiling of " +
                                    std::to_string(opts.ceiling));

    const std::uint64_t count = std::uint64_t{1} << free_bits.size();
    const MtEval ev(e, opts);
    auto compact = kernels::filter_masks(count, opts.exec, [&](std::uint64_t y) {
        std::uint64_t m = fixed;
        for (std::size_t i = 0; i < free_bits.size(); ++i)
            if (y & (std::uint64_t{1} << i)) m |= std::uint64_t{1} << free_bits[i];
        return ev.is_model(e, table.structure_of(m));
    });
    std::vector<Structure> out;
    out.reserve(compact.size());
    for (std::uint64_t y : compact) {
        std::uint64_t m = fixed;
        for (std::size_t i = 0; i < free_bits.size(); ++i)
            if (y & (std::uint64_t{1} << i)) m |= std::uint64_t{1} << free_bits[i];
        out.push_back(table.structure_of(m));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace modsys
