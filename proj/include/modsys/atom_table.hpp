#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "modsys/structures.hpp"

namespace modsys {

// Canonical indexing of the ground atoms over vocab x domain, so structures
// can be handled as bitmasks inside enumeration kernels. Mask operations
// require at most 64 atoms; membership-style lookups have no such limit.
class AtomTable {
public:
    AtomTable(Vocabulary vocab, Domain domain);

    const Vocabulary& vocab() const { return vocab_; }
    const Domain& domain() const { return domain_; }
    std::size_t size() const { return atoms_.size(); }
    const GroundAtom& atom(std::size_t i) const { return atoms_[i]; }
    const std::vector<GroundAtom>& atoms() const { return atoms_; }

    std::optional<std::size_t> index_of(const GroundAtom& a) const;

    // Number of enumerable subsets; throws when size() exceeds the ceiling.
    std::uint64_t enumerable_count(int ceiling = atom_ceiling()) const;

    std::uint64_t mask_of(const Structure& b) const;
    std::uint64_t mask_of(const std::set<GroundAtom>& atoms) const;
    // Bits of all atoms whose symbol belongs to v (v need not be full vocab).
    std::uint64_t vocab_mask(const Vocabulary& v) const;
    // Atom indices of a single symbol, tuples in canonical order.
    std::vector<std::size_t> symbol_bits(const Symbol& s) const;

    // (S+ mask, S- mask)
    std::pair<std::uint64_t, std::uint64_t> masks_of(const PartialAssignment& s) const;

    Structure structure_of(std::uint64_t mask) const;
    // Structure over the sub-vocabulary v; bits outside v are ignored.
    Structure structure_of(std::uint64_t mask, const Vocabulary& v) const;
    std::set<GroundAtom> atoms_of(std::uint64_t mask) const;

private:
    void require_masked() const;

    Vocabulary vocab_;
    Domain domain_;
    std::vector<GroundAtom> atoms_;
    std::map<GroundAtom, std::size_t> index_;
};

}  // namespace modsys
