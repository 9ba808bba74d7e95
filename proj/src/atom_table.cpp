#include "modsys/atom_table.hpp"

namespace modsys {

AtomTable::AtomTable(Vocabulary vocab, Domain domain)
    : vocab_(std::move(vocab)), domain_(std::move(domain)) {
    atoms_ = ground_atoms(vocab_, domain_);
    for (std::size_t i = 0; i < atoms_.size(); ++i) index_[atoms_[i]] = i;
}

std::optional<std::size_t> AtomTable::index_of(const GroundAtom& a) const {
    auto it = index_.find(a);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void AtomTable::require_masked() const {
    if (atoms_.size() > 64)
        throw EnumerationLimitError("atom table with " + std::to_string(atoms_.size()) +
                                    " atoms exceeds the 64-bit mask limit");
}

std::uint64_t AtomTable::enumerable_count(int ceiling) const {
    if (atoms_.size() > static_cast<std::size_t>(ceiling))
        throw EnumerationLimitError("enumeration too large: " + std::to_string(atoms_.size()) +
                                    " atoms exceed the ceiling of " + std::to_string(ceiling));
    if (atoms_.size() > 62)
        throw EnumerationLimitError("enumeration over more than 62 atoms is unsupported");
    return std::uint64_t{1} << atoms_.size();
}

std::uint64_t AtomTable::mask_of(const Structure& b) const {
    return mask_of(b.true_atoms());
}

std::uint64_t AtomTable::mask_of(const std::set<GroundAtom>& atoms) const {
    require_masked();
    std::uint64_t mask = 0;
    for (const GroundAtom& a : atoms) {
        auto i = index_of(a);
        if (!i)
            throw VocabularyMismatchError("atom '" + a.text() + "' is not in the atom table");
        mask |= std::uint64_t{1} << *i;
    }
    return mask;
}

std::uint64_t AtomTable::vocab_mask(const Vocabulary& v) const {
    require_masked();
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (v.contains(atoms_[i].symbol)) mask |= std::uint64_t{1} << i;
    return mask;
}

std::vector<std::size_t> AtomTable::symbol_bits(const Symbol& s) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i].symbol == s) out.push_back(i);
    return out;
}

std::pair<std::uint64_t, std::uint64_t> AtomTable::masks_of(const PartialAssignment& s) const {
    std::uint64_t pos = 0, neg = 0;
    for (const Literal& l : s.literals()) {
        auto i = index_of(l.atom);
        if (!i)
            throw VocabularyMismatchError("literal '" + l.text() + "' is not in the atom table");
        (l.positive ? pos : neg) |= std::uint64_t{1} << *i;
    }
    return {pos, neg};
}

Structure AtomTable::structure_of(std::uint64_t mask) const {
    return Structure(vocab_, domain_, atoms_of(mask));
}

Structure AtomTable::structure_of(std::uint64_t mask, const Vocabulary& v) const {
    return Structure(v, domain_, atoms_of(mask & vocab_mask(v)));
}

std::set<GroundAtom> AtomTable::atoms_of(std::uint64_t mask) const {
    require_masked();
    std::set<GroundAtom> out;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (mask & (std::uint64_t{1} << i)) out.insert(atoms_[i]);
    return out;
}

}  // namespace modsys
