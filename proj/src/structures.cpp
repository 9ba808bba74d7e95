#include "modsys/structures.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace modsys {

int atom_ceiling() {
    static const int value = [] {
        if (const char* env = std::getenv("MODSYS_ATOM_CEILING")) {
            const int v = std::atoi(env);
            if (v > 0) return v;
        }
        return 24;
    }();
    return value;
}

std::string Symbol::text() const {
    return name + "/" + std::to_string(arity);
}

Vocabulary::Vocabulary(std::initializer_list<Symbol> symbols)
    : Vocabulary(std::vector<Symbol>(symbols)) {}

Vocabulary::Vocabulary(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    std::sort(symbols_.begin(), symbols_.end());
    for (std::size_t i = 0; i + 1 < symbols_.size(); ++i) {
        if (symbols_[i].name == symbols_[i + 1].name) {
            if (symbols_[i].arity == symbols_[i + 1].arity) {
                symbols_.erase(symbols_.begin() + static_cast<long>(i + 1));
                --i;
            } else {
                throw VocabularyMismatchError("symbol '" + symbols_[i].name +
                                              "' declared with conflicting arities");
            }
        }
    }
    for (const Symbol& s : symbols_) {
        if (s.name.empty()) throw Error("symbol name must be nonempty");
        if (s.arity < 0) throw Error("symbol arity must be nonnegative");
    }
}

bool Vocabulary::contains(const Symbol& s) const {
    auto it = std::lower_bound(symbols_.begin(), symbols_.end(), s,
                               [](const Symbol& a, const Symbol& b) { return a.name < b.name; });
    return it != symbols_.end() && it->name == s.name && it->arity == s.arity;
}

std::optional<Symbol> Vocabulary::find(std::string_view name) const {
    for (const Symbol& s : symbols_)
        if (s.name == name) return s;
    return std::nullopt;
}

bool Vocabulary::subset_of(const Vocabulary& other) const {
    return std::all_of(symbols_.begin(), symbols_.end(),
                       [&](const Symbol& s) { return other.contains(s); });
}

std::string Vocabulary::text() const {
    std::string out = "{";
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (i) out += ", ";
        out += symbols_[i].text();
    }
    return out + "}";
}

Vocabulary voc_union(const Vocabulary& a, const Vocabulary& b) {
    std::vector<Symbol> all = a.symbols();
    all.insert(all.end(), b.symbols().begin(), b.symbols().end());
    return Vocabulary(std::move(all));  // constructor rejects arity clashes
}

Vocabulary voc_intersect(const Vocabulary& a, const Vocabulary& b) {
    std::vector<Symbol> out;
    for (const Symbol& s : a.symbols())
        if (b.contains(s)) out.push_back(s);
    return Vocabulary(std::move(out));
}

Vocabulary voc_minus(const Vocabulary& a, const Vocabulary& b) {
    std::vector<Symbol> out;
    for (const Symbol& s : a.symbols())
        if (!b.contains(s)) out.push_back(s);
    return Vocabulary(std::move(out));
}

Domain::Domain(std::initializer_list<std::string> elements)
    : Domain(std::vector<std::string>(elements)) {}

Domain::Domain(std::vector<std::string> elements) : elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
    if (elements_.empty()) throw Error("domain must be nonempty");
    for (const std::string& e : elements_)
        if (e.empty()) throw Error("domain element name must be nonempty");
}

bool Domain::contains(std::string_view e) const {
    return std::binary_search(elements_.begin(), elements_.end(), e);
}

std::string GroundAtom::text() const {
    if (args.empty()) return symbol.name;
    std::string out = symbol.name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ",";
        out += args[i];
    }
    return out + ")";
}

GroundAtom make_atom(const Symbol& s, std::vector<std::string> args) {
    return GroundAtom{s, std::move(args)};
}

Structure::Structure(Vocabulary vocab, Domain domain, std::set<GroundAtom> true_atoms)
    : vocab_(std::move(vocab)), domain_(std::move(domain)), atoms_(std::move(true_atoms)) {
    for (const GroundAtom& a : atoms_) {
        if (!vocab_.contains(a.symbol))
            throw VocabularyMismatchError("atom '" + a.text() +
                                          "' uses a symbol outside the structure vocabulary");
        if (static_cast<int>(a.args.size()) != a.symbol.arity)
            throw VocabularyMismatchError("atom '" + a.text() + "' has wrong arity");
        for (const std::string& e : a.args)
            if (!domain_.contains(e))
                throw VocabularyMismatchError("atom '" + a.text() +
                                              "' uses element outside the domain");
    }
}

std::string Structure::text() const {
    std::string out = "{";
    bool first = true;
    for (const GroundAtom& a : atoms_) {
        if (!first) out += ",";
        first = false;
        out += a.text();
    }
    return out + "}";
}

std::string Literal::text() const {
    return positive ? atom.text() : "~" + atom.text();
}

PartialAssignment::PartialAssignment(std::initializer_list<Literal> lits)
    : lits_(lits) {}

PartialAssignment::PartialAssignment(std::set<Literal> lits) : lits_(std::move(lits)) {}

std::set<GroundAtom> PartialAssignment::positive() const {
    std::set<GroundAtom> out;
    for (const Literal& l : lits_)
        if (l.positive) out.insert(l.atom);
    return out;
}

std::set<GroundAtom> PartialAssignment::negative() const {
    std::set<GroundAtom> out;
    for (const Literal& l : lits_)
        if (!l.positive) out.insert(l.atom);
    return out;
}

std::string PartialAssignment::text() const {
    std::string out = "{";
    bool first = true;
    for (const Literal& l : lits_) {
        if (!first) out += ",";
        first = false;
        out += l.text();
    }
    return out + "}";
}

std::vector<GroundAtom> ground_atoms(const Vocabulary& vocab, const Domain& domain) {
    std::vector<GroundAtom> out;
    for (const Symbol& s : vocab.symbols()) {
        // all argument tuples in lexicographic order over the sorted domain
        std::vector<std::size_t> idx(static_cast<std::size_t>(s.arity), 0);
        while (true) {
            std::vector<std::string> args;
            args.reserve(idx.size());
            for (std::size_t i : idx) args.push_back(domain.elements()[i]);
            out.push_back(GroundAtom{s, std::move(args)});
            int pos = s.arity - 1;
            for (; pos >= 0; --pos) {
                if (++idx[static_cast<std::size_t>(pos)] < domain.size()) break;
                idx[static_cast<std::size_t>(pos)] = 0;
            }
            if (pos < 0) break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

StructureEnumeration::StructureEnumeration(Vocabulary vocab, Domain domain, int ceiling)
    : vocab_(std::move(vocab)), domain_(std::move(domain)) {
    atoms_ = ground_atoms(vocab_, domain_);
    if (atoms_.size() > static_cast<std::size_t>(ceiling))
        throw EnumerationLimitError("enumeration too large: " + std::to_string(atoms_.size()) +
                                    " atoms exceed the ceiling of " + std::to_string(ceiling));
    count_ = std::uint64_t{1} << atoms_.size();
}

std::optional<Structure> StructureEnumeration::next() {
    if (cursor_ >= count_) return std::nullopt;
    const std::uint64_t mask = cursor_++;
    std::set<GroundAtom> atoms;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (mask & (std::uint64_t{1} << i)) atoms.insert(atoms_[i]);
    return Structure(vocab_, domain_, std::move(atoms));
}

StructureEnumeration enumerate_structures(const Vocabulary& vocab, const Domain& domain,
                                          int ceiling) {
    return StructureEnumeration(vocab, domain, ceiling);
}

Structure restrict_to(const Structure& b, const Vocabulary& nu) {
    for (const Symbol& s : nu.symbols())
        if (!b.vocab().contains(s))
            throw VocabularyMismatchError("restriction symbol " + s.text() +
                                          " is not in the structure vocabulary");
    std::set<GroundAtom> atoms;
    for (const GroundAtom& a : b.true_atoms())
        if (nu.contains(a.symbol)) atoms.insert(a);
    return Structure(nu, b.domain(), std::move(atoms));
}

bool expands(const Structure& expansion, const Structure& base) {
    if (expansion.domain() != base.domain()) return false;
    if (!base.vocab().subset_of(expansion.vocab())) return false;
    return restrict_to(expansion, base.vocab()) == base;
}

bool consistent_with(const PartialAssignment& s, const Structure& b) {
    for (const Literal& l : s.literals()) {
        if (!b.vocab().contains(l.atom.symbol))
            throw VocabularyMismatchError("literal '" + l.text() +
                                          "' is outside the structure vocabulary");
        for (const std::string& e : l.atom.args)
            if (!b.domain().contains(e))
                throw VocabularyMismatchError("literal '" + l.text() +
                                              "' uses element outside the domain");
    }
    for (const Literal& l : s.literals())
        if (b.holds(l.atom) != l.positive) return false;
    return true;
}

bool is_consistent(const PartialAssignment& s) {
    for (const Literal& l : s.literals())
        if (s.contains(l.negated())) return false;
    return true;
}

namespace {

// Shared scanner for "{a,~b(1,2)}"-style atom/literal lists.
struct AtomScanner {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw Error("cannot parse '" + std::string(text) + "': " + what);
    }
    std::string name() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                text[pos] == '\''))
            ++pos;
        if (pos == start) fail("expected a name");
        return std::string(text.substr(start, pos - start));
    }

    GroundAtom atom(const Vocabulary& vocab, const Domain& domain) {
        const std::string n = name();
        std::vector<std::string> args;
        if (eat('(')) {
            if (!eat(')')) {
                do {
                    const std::string a = name();
                    if (!domain.contains(a)) fail("'" + a + "' is not a domain element");
                    args.push_back(a);
                } while (eat(','));
                if (!eat(')')) fail("expected ')'");
            }
        }
        auto sym = vocab.find(n);
        if (!sym) throw VocabularyMismatchError("unknown symbol '" + n + "'");
        if (sym->arity != static_cast<int>(args.size()))
            throw VocabularyMismatchError("atom '" + n + "' expects arity " +
                                          std::to_string(sym->arity));
        return GroundAtom{*sym, std::move(args)};
    }
};

}  // namespace

std::set<GroundAtom> parse_atom_set(std::string_view text, const Vocabulary& vocab,
                                    const Domain& domain) {
    AtomScanner sc{text};
    std::set<GroundAtom> out;
    const bool braced = sc.eat('{');
    sc.skip_ws();
    if (braced && sc.eat('}')) {
        sc.skip_ws();
        if (sc.pos != text.size()) sc.fail("trailing input");
        return out;
    }
    if (sc.pos < text.size()) {
        do {
            out.insert(sc.atom(vocab, domain));
        } while (sc.eat(','));
    }
    if (braced && !sc.eat('}')) sc.fail("expected '}'");
    sc.skip_ws();
    if (sc.pos != text.size()) sc.fail("trailing input");
    return out;
}

Structure parse_structure(std::string_view text, const Vocabulary& vocab,
                          const Domain& domain) {
    return Structure(vocab, domain, parse_atom_set(text, vocab, domain));
}

PartialAssignment parse_literals(std::string_view text, const Vocabulary& vocab,
                                 const Domain& domain) {
    AtomScanner sc{text};
    std::set<Literal> out;
    const bool braced = sc.eat('{');
    sc.skip_ws();
    if (braced && sc.eat('}')) return PartialAssignment(std::move(out));
    if (sc.pos < text.size()) {
        do {
            sc.skip_ws();
            const bool neg = sc.eat('~');
            out.insert(Literal{sc.atom(vocab, domain), !neg});
            sc.skip_ws();
            if (braced && sc.pos < text.size() && text[sc.pos] == '}') break;
        } while (sc.eat(','));
    }
    if (braced && !sc.eat('}')) sc.fail("expected '}'");
    sc.skip_ws();
    if (sc.pos != text.size()) sc.fail("trailing input");
    return PartialAssignment(std::move(out));
}

}  // namespace modsys
