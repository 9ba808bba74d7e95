#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "modsys/errors.hpp"

namespace modsys {

// Number of ground atoms above which exhaustive enumeration is refused.
// Default 24 (~16M structures worst case); override with MODSYS_ATOM_CEILING.
int atom_ceiling();

// A relational predicate symbol. Arity 0 is a propositional atom.
struct Symbol {
    std::string name;
    int arity = 0;

    auto operator<=>(const Symbol&) const = default;
    std::string text() const;  // "name/arity"
};

// A finite set of symbols with unique names. Kept sorted by name.
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::initializer_list<Symbol> symbols);
    explicit Vocabulary(std::vector<Symbol> symbols);

    const std::vector<Symbol>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }

    bool contains(const Symbol& s) const;  // matches name and arity
    std::optional<Symbol> find(std::string_view name) const;
    bool subset_of(const Vocabulary& other) const;

    bool operator==(const Vocabulary&) const = default;
    auto operator<=>(const Vocabulary&) const = default;

    std::string text() const;  // "{p/0, q/2}"

private:
    std::vector<Symbol> symbols_;  // sorted by name, names unique
};

// Set operations; same name with conflicting arity is an error.
Vocabulary voc_union(const Vocabulary& a, const Vocabulary& b);
Vocabulary voc_intersect(const Vocabulary& a, const Vocabulary& b);
Vocabulary voc_minus(const Vocabulary& a, const Vocabulary& b);

// The universal domain: a finite nonempty set of named constants.
class Domain {
public:
    Domain() = default;
    Domain(std::initializer_list<std::string> elements);
    explicit Domain(std::vector<std::string> elements);

    const std::vector<std::string>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    bool contains(std::string_view e) const;

    bool operator==(const Domain&) const = default;
    auto operator<=>(const Domain&) const = default;

private:
    std::vector<std::string> elements_;  // sorted, unique
};

struct GroundAtom {
    Symbol symbol;
    std::vector<std::string> args;

    auto operator<=>(const GroundAtom&) const = default;
    std::string text() const;  // "p" or "e(1,2)"
};

GroundAtom make_atom(const Symbol& s, std::vector<std::string> args = {});

// A total structure, viewed as the set of its true ground atoms.
// Equality requires vocabulary and domain equality, not just the atom set.
class Structure {
public:
    Structure() = default;
    Structure(Vocabulary vocab, Domain domain, std::set<GroundAtom> true_atoms);

    const Vocabulary& vocab() const { return vocab_; }
    const Domain& domain() const { return domain_; }
    const std::set<GroundAtom>& true_atoms() const { return atoms_; }
    bool holds(const GroundAtom& a) const { return atoms_.count(a) != 0; }

    bool operator==(const Structure&) const = default;
    auto operator<=>(const Structure&) const = default;

    std::string text() const;  // canonical "{a,b(1,2)}", "{}" when empty

private:
    Vocabulary vocab_;
    Domain domain_;
    std::set<GroundAtom> atoms_;
};

// A signed ground atom. Positive literals order before negative ones.
struct Literal {
    GroundAtom atom;
    bool positive = true;

    friend std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
        if (auto c = a.atom <=> b.atom; c != 0) return c;
        return b.positive <=> a.positive;
    }
    friend bool operator==(const Literal&, const Literal&) = default;

    Literal negated() const { return {atom, !positive}; }
    std::string text() const;  // "a" or "~a"
};

// A set of literals; S+ are the positive atoms, S- the negative ones.
// May be inconsistent; see is_consistent().
class PartialAssignment {
public:
    PartialAssignment() = default;
    PartialAssignment(std::initializer_list<Literal> lits);
    explicit PartialAssignment(std::set<Literal> lits);

    const std::set<Literal>& literals() const { return lits_; }
    std::set<GroundAtom> positive() const;  // S+
    std::set<GroundAtom> negative() const;  // S-
    bool contains(const Literal& l) const { return lits_.count(l) != 0; }
    std::size_t size() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }

    bool operator==(const PartialAssignment&) const = default;
    auto operator<=>(const PartialAssignment&) const = default;

    std::string text() const;  // "{a,~b}"

private:
    std::set<Literal> lits_;
};

// Streams all structures over vocab x domain in canonical order:
// atoms sorted lexicographically, subsets in binary-counter order.
class StructureEnumeration {
public:
    StructureEnumeration(Vocabulary vocab, Domain domain,
                         int ceiling = atom_ceiling());

    std::uint64_t count() const { return count_; }
    std::optional<Structure> next();

private:
    Vocabulary vocab_;
    Domain domain_;
    std::vector<GroundAtom> atoms_;
    std::uint64_t count_ = 0;
    std::uint64_t cursor_ = 0;
};

StructureEnumeration enumerate_structures(const Vocabulary& vocab, const Domain& domain,
                                          int ceiling = atom_ceiling());

// All ground atoms over vocab x domain in canonical order.
std::vector<GroundAtom> ground_atoms(const Vocabulary& vocab, const Domain& domain);

// B restricted to sub-vocabulary nu (which must be declared in B, name and arity).
Structure restrict_to(const Structure& b, const Vocabulary& nu);

// True iff expansion has the same domain, base.vocab is a subset, and both
// agree on base's vocabulary.
bool expands(const Structure& expansion, const Structure& base);

// True iff S+ is contained in B's true atoms and S- avoids them.
bool consistent_with(const PartialAssignment& s, const Structure& b);

// True iff S+ and S- do not intersect.
bool is_consistent(const PartialAssignment& s);

// Parses the canonical text forms back. Atoms must be over vocab x domain.
std::set<GroundAtom> parse_atom_set(std::string_view text, const Vocabulary& vocab,
                                    const Domain& domain);
Structure parse_structure(std::string_view text, const Vocabulary& vocab,
                          const Domain& domain);
PartialAssignment parse_literals(std::string_view text, const Vocabulary& vocab,
                                 const Domain& domain);

}  // namespace modsys
