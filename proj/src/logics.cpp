#include "modsys/logics.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <functional>
#include <map>

namespace modsys {

// ---------------------------------------------------------------------------
// PropFormula
// ---------------------------------------------------------------------------

struct PropFormula::Node {
    Kind kind;
    GroundAtom atom;
    std::shared_ptr<const Node> left, right;
};

PropFormula PropFormula::constant(bool value) {
    return PropFormula(std::make_shared<Node>(Node{value ? Kind::True : Kind::False, {}, {}, {}}));
}

PropFormula PropFormula::atom(GroundAtom a) {
    return PropFormula(std::make_shared<Node>(Node{Kind::Atom, std::move(a), {}, {}}));
}

PropFormula PropFormula::negation(PropFormula f) {
    return PropFormula(std::make_shared<Node>(Node{Kind::Not, {}, f.node_, {}}));
}

PropFormula PropFormula::conjunction(PropFormula l, PropFormula r) {
    return PropFormula(std::make_shared<Node>(Node{Kind::And, {}, l.node_, r.node_}));
}
PropFormula PropFormula::disjunction(PropFormula l, PropFormula r) {
    return PropFormula(std::make_shared<Node>(Node{Kind::Or, {}, l.node_, r.node_}));
}
PropFormula PropFormula::implication(PropFormula l, PropFormula r) {
    return PropFormula(std::make_shared<Node>(Node{Kind::Implies, {}, l.node_, r.node_}));
}
PropFormula PropFormula::equivalence(PropFormula l, PropFormula r) {
    return PropFormula(std::make_shared<Node>(Node{Kind::Iff, {}, l.node_, r.node_}));
}

PropFormula::Kind PropFormula::kind() const { return node_->kind; }

const GroundAtom& PropFormula::atom_ref() const {
    assert(node_->kind == Kind::Atom);
    return node_->atom;
}

PropFormula PropFormula::left() const { return PropFormula(node_->left); }

PropFormula PropFormula::right() const { return PropFormula(node_->right); }

bool PropFormula::eval(const std::set<GroundAtom>& t) const {
    switch (node_->kind) {
        case Kind::True: return true;
        case Kind::False: return false;
        case Kind::Atom: return t.count(node_->atom) != 0;
        case Kind::Not: return !left().eval(t);
        case Kind::And: return left().eval(t) && right().eval(t);
        case Kind::Or: return left().eval(t) || right().eval(t);
        case Kind::Implies: return !left().eval(t) || right().eval(t);
        case Kind::Iff: return left().eval(t) == right().eval(t);
    }
    return false;
}

static void collect_formula_atoms(const PropFormula& f, std::set<GroundAtom>& out) {
    using K = PropFormula::Kind;
    switch (f.kind()) {
        case K::True:
        case K::False: return;
        case K::Atom: out.insert(f.atom_ref()); return;
        case K::Not: collect_formula_atoms(f.left(), out); return;
        default:
            collect_formula_atoms(f.left(), out);
            collect_formula_atoms(f.right(), out);
    }
}

std::set<GroundAtom> PropFormula::atoms() const {
    std::set<GroundAtom> out;
    collect_formula_atoms(*this, out);
    return out;
}

namespace {

int precedence(PropFormula::Kind k) {
    using K = PropFormula::Kind;
    switch (k) {
        case K::Iff: return 1;
        case K::Implies: return 2;
        case K::Or: return 3;
        case K::And: return 4;
        default: return 5;
    }
}

std::string format_formula(const PropFormula& f) {
    using K = PropFormula::Kind;
    auto wrap = [&](const PropFormula& child, bool strict) {
        std::string s = format_formula(child);
        const int pc = precedence(child.kind()), mine = precedence(f.kind());
        if (pc < mine || (strict && pc == mine)) return "(" + s + ")";
        return s;
    };
    switch (f.kind()) {
        case K::True: return "true";
        case K::False: return "false";
        case K::Atom: return f.atom_ref().text();
        case K::Not: {
            std::string s = format_formula(f.left());
            if (precedence(f.left().kind()) < 5) return "~(" + s + ")";
            return "~" + s;
        }
        case K::And: return wrap(f.left(), false) + " & " + wrap(f.right(), true);
        case K::Or: return wrap(f.left(), false) + " | " + wrap(f.right(), true);
        case K::Implies: return wrap(f.left(), true) + " -> " + wrap(f.right(), false);
        case K::Iff: return wrap(f.left(), false) + " <-> " + wrap(f.right(), true);
    }
    return "";
}

}  // namespace

std::string PropFormula::text() const { return format_formula(*this); }

// ---------------------------------------------------------------------------
// Formula parsing
// ---------------------------------------------------------------------------

namespace {

struct FormulaParser {
    std::string_view text;
    std::size_t pos = 0;
    const Vocabulary& vocab;
    const Domain& domain;

    [[noreturn]] void fail(const std::string& what) {
        throw Error("formula '" + std::string(text) + "': " + what);
    }
    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(std::string_view tok) {
        skip_ws();
        if (text.substr(pos, tok.size()) == tok) {
            // '-' must not swallow the start of '->'; '<' only appears in '<->'
            pos += tok.size();
            return true;
        }
        return false;
    }
    bool peek(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }
    std::string name() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                text[pos] == '\''))
            ++pos;
        if (pos == start) fail("expected an atom at offset " + std::to_string(pos));
        return std::string(text.substr(start, pos - start));
    }

    PropFormula parse() {
        PropFormula f = iff();
        skip_ws();
        if (pos != text.size()) fail("trailing input at offset " + std::to_string(pos));
        return f;
    }
    PropFormula iff() {
        PropFormula l = implies();
        while (eat("<->")) l = PropFormula::equivalence(l, implies());
        return l;
    }
    PropFormula implies() {
        PropFormula l = disj();
        if (eat("->")) return PropFormula::implication(l, implies());
        return l;
    }
    PropFormula disj() {
        PropFormula l = conj();
        while (peek('|') && eat("|")) l = PropFormula::disjunction(l, conj());
        return l;
    }
    PropFormula conj() {
        PropFormula l = unary();
        while (peek('&') && eat("&")) l = PropFormula::conjunction(l, unary());
        return l;
    }
    PropFormula unary() {
        skip_ws();
        if (eat("~")) return PropFormula::negation(unary());
        if (eat("(")) {
            PropFormula f = iff();
            if (!eat(")")) fail("expected ')'");
            return f;
        }
        const std::string n = name();
        if (n == "true") return PropFormula::constant(true);
        if (n == "false") return PropFormula::constant(false);
        std::vector<std::string> args;
        if (eat("(")) {
            if (!eat(")")) {
                do {
                    const std::string a = name();
                    if (!domain.contains(a)) fail("'" + a + "' is not a domain element");
                    args.push_back(a);
                } while (eat(","));
                if (!eat(")")) fail("expected ')'");
            }
        }
        auto sym = vocab.find(n);
        if (!sym) throw VocabularyMismatchError("formula atom '" + n + "' is undeclared");
        if (sym->arity != static_cast<int>(args.size()))
            throw VocabularyMismatchError("formula atom '" + n + "' expects arity " +
                                          std::to_string(sym->arity));
        return PropFormula::atom(GroundAtom{*sym, std::move(args)});
    }
};

}  // namespace

PropFormula parse_prop_formula(std::string_view text, const Vocabulary& vocab,
                               const Domain& domain) {
    FormulaParser p{text, 0, vocab, domain};
    return p.parse();
}

// ---------------------------------------------------------------------------
// Mask-compiled formulas for enumeration loops
// ---------------------------------------------------------------------------

CompiledFormula::CompiledFormula(const PropFormula& f, const AtomTable& table) {
    root_ = add(f, table);
}

int CompiledFormula::add(const PropFormula& f, const AtomTable& table) {
    using K = PropFormula::Kind;
    N n{f.kind(), -1, -1, 0};
    switch (f.kind()) {
        case K::True:
        case K::False: break;
        case K::Atom: {
            auto i = table.index_of(f.atom_ref());
            if (!i)
                throw VocabularyMismatchError("formula atom '" + f.atom_ref().text() +
                                              "' is outside the vocabulary");
            n.bit = std::uint64_t{1} << *i;
            break;
        }
        case K::Not: n.a = add(f.left(), table); break;
        default:
            n.a = add(f.left(), table);
            n.b = add(f.right(), table);
    }
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
}

bool CompiledFormula::eval_at(int i, std::uint64_t m) const {
    using K = PropFormula::Kind;
    const N& n = nodes_[static_cast<std::size_t>(i)];
    switch (n.kind) {
        case K::True: return true;
        case K::False: return false;
        case K::Atom: return (m & n.bit) != 0;
        case K::Not: return !eval_at(n.a, m);
        case K::And: return eval_at(n.a, m) && eval_at(n.b, m);
        case K::Or: return eval_at(n.a, m) || eval_at(n.b, m);
        case K::Implies: return !eval_at(n.a, m) || eval_at(n.b, m);
        case K::Iff: return eval_at(n.a, m) == eval_at(n.b, m);
    }
    return false;
}

namespace {

std::vector<Structure> materialize_sorted(const AtomTable& table, const Vocabulary& vocab,
                                          const std::vector<std::uint64_t>& masks) {
    std::vector<Structure> out;
    out.reserve(masks.size());
    for (std::uint64_t m : masks) out.push_back(table.structure_of(m, vocab));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::uint64_t scatter(std::uint64_t compact, const std::vector<std::size_t>& bits) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (compact & (std::uint64_t{1} << i)) m |= std::uint64_t{1} << bits[i];
    return m;
}

}  // namespace

std::vector<Structure> prop_models(const PropFormula& phi, const Vocabulary& vocab,
                                   const Domain& domain, const EvalOptions& opts) {
    for (const GroundAtom& a : phi.atoms()) {
        if (!vocab.contains(a.symbol))
            throw VocabularyMismatchError("formula atom '" + a.text() +
                                          "' is outside the vocabulary");
        for (const std::string& e : a.args)
            if (!domain.contains(e))
                throw VocabularyMismatchError("formula atom '" + a.text() +
                                              "' uses element outside the domain");
    }
    AtomTable table(vocab, domain);
    const std::uint64_t count = table.enumerable_count(opts.ceiling);
    const CompiledFormula cf(phi, table);
    auto masks = kernels::filter_masks(count, opts.exec,
                                       [&](std::uint64_t m) { return cf.eval(m); });
    return materialize_sorted(table, vocab, masks);
}

// ---------------------------------------------------------------------------
// Rules and programs
// ---------------------------------------------------------------------------

bool RuleAtom::ground() const {
    return std::all_of(args.begin(), args.end(),
                       [](const Term& t) { return t.kind == Term::Kind::Constant; });
}

std::string RuleAtom::text() const {
    if (args.empty()) return predicate;
    std::string out = predicate + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ",";
        out += args[i].name;
    }
    return out + ")";
}

std::string BodyLiteral::text() const {
    return negated ? "not " + atom.text() : atom.text();
}

std::set<std::string> Rule::variables() const {
    std::set<std::string> vars;
    auto scan = [&](const RuleAtom& a) {
        for (const Term& t : a.args)
            if (t.kind == Term::Kind::Variable) vars.insert(t.name);
    };
    if (head) scan(*head);
    if (choice)
        for (const RuleAtom& e : choice->elements) scan(e);
    for (const BodyLiteral& l : body) scan(l.atom);
    return vars;
}

bool Rule::ground() const { return variables().empty(); }

std::string Rule::text() const {
    std::string out;
    switch (head_kind) {
        case HeadKind::Atom: out = head->text(); break;
        case HeadKind::Constraint: break;
        case HeadKind::Choice: {
            out = std::to_string(choice->lower) + " {";
            for (std::size_t i = 0; i < choice->elements.size(); ++i) {
                if (i) out += "; ";
                out += choice->elements[i].text();
            }
            out += "} " + std::to_string(choice->upper);
            break;
        }
    }
    if (!body.empty() || head_kind == HeadKind::Constraint) {
        out += out.empty() ? ":- " : " :- ";
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (i) out += ", ";
            out += body[i].text();
        }
    }
    return out + ".";
}

Rule Rule::fact(RuleAtom h) { return normal(std::move(h), {}); }

Rule Rule::normal(RuleAtom h, std::vector<BodyLiteral> body) {
    Rule r;
    r.head_kind = HeadKind::Atom;
    r.head = std::move(h);
    r.body = std::move(body);
    return r;
}

Rule Rule::constraint(std::vector<BodyLiteral> body) {
    Rule r;
    r.head_kind = HeadKind::Constraint;
    r.body = std::move(body);
    return r;
}

Rule Rule::choice_rule(int lower, int upper, std::vector<RuleAtom> elements,
                       std::vector<BodyLiteral> body) {
    Rule r;
    r.head_kind = HeadKind::Choice;
    r.choice = ChoiceHead{lower, upper, std::move(elements)};
    r.body = std::move(body);
    return r;
}

Vocabulary LogicProgram::all_vocab() const {
    return voc_union(voc_union(sigma, epsilon), hidden);
}

void LogicProgram::validate() const {
    const Vocabulary all = all_vocab();  // throws on arity clash
    if (voc_intersect(sigma, epsilon).size() || voc_intersect(sigma, hidden).size() ||
        voc_intersect(epsilon, hidden).size())
        throw Error("input, output and hidden vocabularies must be pairwise disjoint");
    auto check_atom = [&](const RuleAtom& a) {
        if (!a.predicate.empty() && a.predicate[0] == '_')
            throw Error("predicate names starting with '_' are reserved: " + a.predicate);
        auto sym = all.find(a.predicate);
        if (!sym)
            throw VocabularyMismatchError("rule symbol '" + a.predicate +
                                          "' is not declared in the module vocabulary");
        if (sym->arity != static_cast<int>(a.args.size()))
            throw VocabularyMismatchError("rule atom '" + a.text() + "' expects arity " +
                                          std::to_string(sym->arity));
    };
    for (const Rule& r : rules) {
        if (r.head_kind == Rule::HeadKind::Atom) check_atom(*r.head);
        if (r.head_kind == Rule::HeadKind::Choice) {
            const ChoiceHead& c = *r.choice;
            const int k = static_cast<int>(c.elements.size());
            if (c.lower < 0 || c.lower > c.upper || c.upper > k)
                throw Error("cardinality bounds must satisfy 0 <= L <= U <= k in: " + r.text());
            for (const RuleAtom& e : c.elements) check_atom(e);
        }
        for (const BodyLiteral& l : r.body) check_atom(l.atom);
    }
}

namespace {

RuleAtom substitute(const RuleAtom& a, const std::map<std::string, std::string>& sub) {
    RuleAtom out{a.predicate, {}};
    out.args.reserve(a.args.size());
    for (const Term& t : a.args) {
        if (t.kind == Term::Kind::Variable)
            out.args.push_back(Term{Term::Kind::Constant, sub.at(t.name)});
        else
            out.args.push_back(t);
    }
    return out;
}

Rule substitute(const Rule& r, const std::map<std::string, std::string>& sub) {
    Rule out = r;
    if (out.head) *out.head = substitute(*out.head, sub);
    if (out.choice)
        for (RuleAtom& e : out.choice->elements) e = substitute(e, sub);
    for (BodyLiteral& l : out.body) l.atom = substitute(l.atom, sub);
    return out;
}

}  // namespace

LogicProgram ground(const LogicProgram& p, const Domain& domain) {
    LogicProgram out = p;
    out.rules.clear();
    for (const Rule& r : p.rules) {
        const std::set<std::string> varset = r.variables();
        if (varset.empty()) {
            out.rules.push_back(r);
            continue;
        }
        const std::vector<std::string> vars(varset.begin(), varset.end());
        std::vector<std::size_t> idx(vars.size(), 0);
        while (true) {
            std::map<std::string, std::string> sub;
            for (std::size_t i = 0; i < vars.size(); ++i)
                sub[vars[i]] = domain.elements()[idx[i]];
            out.rules.push_back(substitute(r, sub));
            int pos = static_cast<int>(vars.size()) - 1;
            for (; pos >= 0; --pos) {
                if (++idx[static_cast<std::size_t>(pos)] < domain.size()) break;
                idx[static_cast<std::size_t>(pos)] = 0;
            }
            if (pos < 0) break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// LpEngine
// ---------------------------------------------------------------------------

namespace {

// Desugars `L {e1; ..; ek} U :- body` into guessing pairs over fresh primed
// symbols plus cardinality constraints, all normal rules afterwards.
struct Desugared {
    std::vector<Rule> rules;
    std::vector<Symbol> aux_symbols;
};

void subsets_of_size(int k, int size, std::vector<std::vector<int>>& out) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == size) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < k; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

Desugared desugar_choices(const LogicProgram& p) {
    Desugared out;
    for (std::size_t ri = 0; ri < p.rules.size(); ++ri) {
        const Rule& r = p.rules[ri];
        if (r.head_kind != Rule::HeadKind::Choice) {
            out.rules.push_back(r);
            continue;
        }
        const ChoiceHead& c = *r.choice;
        const int k = static_cast<int>(c.elements.size());
        std::map<std::string, Symbol> fresh;
        for (const RuleAtom& e : c.elements) {
            const std::string name = "_ch" + std::to_string(ri) + "_" + e.predicate;
            if (!fresh.count(name)) {
                Symbol s{name, static_cast<int>(e.args.size())};
                fresh[name] = s;
                out.aux_symbols.push_back(s);
            }
            RuleAtom primed{name, e.args};
            std::vector<BodyLiteral> guess_body = r.body;
            guess_body.push_back(BodyLiteral{primed, true});
            out.rules.push_back(Rule::normal(e, std::move(guess_body)));
            std::vector<BodyLiteral> anti_body = r.body;
            anti_body.push_back(BodyLiteral{e, true});
            out.rules.push_back(Rule::normal(primed, std::move(anti_body)));
        }
        std::vector<std::vector<int>> subs;
        if (c.upper < k) {
            subs.clear();
            subsets_of_size(k, c.upper + 1, subs);
            for (const auto& s : subs) {
                std::vector<BodyLiteral> body = r.body;
                for (int i : s) body.push_back(BodyLiteral{c.elements[static_cast<std::size_t>(i)], false});
                out.rules.push_back(Rule::constraint(std::move(body)));
            }
        }
        if (c.lower > 0) {
            subs.clear();
            subsets_of_size(k, k - c.lower + 1, subs);
            for (const auto& s : subs) {
                std::vector<BodyLiteral> body = r.body;
                for (int i : s) body.push_back(BodyLiteral{c.elements[static_cast<std::size_t>(i)], true});
                out.rules.push_back(Rule::constraint(std::move(body)));
            }
        }
    }
    return out;
}

GroundAtom to_ground_atom(const RuleAtom& a, const Vocabulary& vocab, const Domain& domain) {
    auto sym = vocab.find(a.predicate);
    if (!sym) throw VocabularyMismatchError("undeclared predicate '" + a.predicate + "'");
    std::vector<std::string> args;
    args.reserve(a.args.size());
    for (const Term& t : a.args) {
        assert(t.kind == Term::Kind::Constant);
        if (!domain.contains(t.name))
            throw VocabularyMismatchError("constant '" + t.name + "' in '" + a.text() +
                                          "' is not a domain element");
        args.push_back(t.name);
    }
    return GroundAtom{*sym, std::move(args)};
}

}  // namespace

LpEngine::LpEngine(LogicProgram program, Domain domain)
    : program_(std::move(program)), domain_(std::move(domain)) {
    program_.validate();
    visible_ = voc_union(program_.sigma, program_.epsilon);

    if (program_.semantics == LpSemantics::WellFounded) {
        for (const Rule& r : program_.rules) {
            if (r.head_kind == Rule::HeadKind::Choice)
                throw UnsupportedConstructError(
                    "choice rules are not supported under the well-founded semantics");
            if (r.head_kind == Rule::HeadKind::Constraint)
                throw UnsupportedConstructError(
                    "constraint rules are not supported under the well-founded semantics");
        }
    }

    Desugared de = desugar_choices(program_);
    Vocabulary full = voc_union(program_.all_vocab(), Vocabulary(de.aux_symbols));
    LogicProgram grounded = program_;
    grounded.rules = std::move(de.rules);
    grounded = ground(grounded, domain_);

    table_ = std::make_unique<AtomTable>(full, domain_);
    if (table_->size() > 64)
        throw EnumerationLimitError("program grounds to " + std::to_string(table_->size()) +
                                    " atoms; the mask engine supports at most 64");

    std::map<std::size_t, std::vector<std::pair<std::uint64_t, std::uint64_t>>> aux_fires;
    for (const Rule& r : grounded.rules) {
        MaskRule mr;
        for (const BodyLiteral& l : r.body) {
            const GroundAtom ga = to_ground_atom(l.atom, full, domain_);
            const std::uint64_t bit = std::uint64_t{1} << *table_->index_of(ga);
            (l.negated ? mr.neg : mr.pos) |= bit;
        }
        if (r.head_kind == Rule::HeadKind::Constraint) {
            constraints_.push_back(mr);
            continue;
        }
        const GroundAtom head = to_ground_atom(*r.head, full, domain_);
        mr.head = static_cast<int>(*table_->index_of(head));
        rules_.push_back(mr);
        if (!head.symbol.name.empty() && head.symbol.name[0] == '_')
            aux_fires[static_cast<std::size_t>(mr.head)].push_back({mr.pos, mr.neg});
    }
    for (auto& [bit, fires] : aux_fires) aux_.push_back(AuxDef{bit, std::move(fires)});

    sigma_mask_ = table_->vocab_mask(program_.sigma);
    visible_mask_ = table_->vocab_mask(visible_);
    free_mask_ = table_->vocab_mask(program_.epsilon) | table_->vocab_mask(program_.hidden);
    for (std::size_t i = 0; i < table_->size(); ++i)
        if (free_mask_ & (std::uint64_t{1} << i)) free_bits_.push_back(i);
}

std::uint64_t LpEngine::least_model(std::uint64_t reduct_wrt, std::uint64_t facts) const {
    std::uint64_t lm = facts;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const MaskRule& r : rules_) {
            if (r.neg & reduct_wrt) continue;  // deleted by the reduct
            const std::uint64_t bit = std::uint64_t{1} << r.head;
            if ((lm & bit) == 0 && (r.pos & ~lm) == 0) {
                lm |= bit;
                changed = true;
            }
        }
    }
    return lm;
}

bool LpEngine::stable_mask(std::uint64_t candidate, std::uint64_t facts) const {
    if (least_model(candidate, facts) != candidate) return false;
    for (const MaskRule& c : constraints_)
        if ((c.neg & candidate) == 0 && (c.pos & ~candidate) == 0) return false;
    return true;
}

std::uint64_t LpEngine::derive_aux(std::uint64_t base) const {
    std::uint64_t out = 0;
    for (const AuxDef& d : aux_) {
        for (const auto& [pos, neg] : d.fires) {
            if ((pos & ~base) == 0 && (neg & base) == 0) {
                out |= std::uint64_t{1} << d.bit;
                break;
            }
        }
    }
    return out;
}

std::uint64_t LpEngine::facts_mask_of(const Structure& facts) const {
    if (facts.vocab() != program_.sigma)
        throw PreconditionError("facts must interpret exactly the instance vocabulary " +
                                program_.sigma.text());
    if (facts.domain() != domain_)
        throw PreconditionError("facts are over a different domain than the program");
    return table_->mask_of(facts);
}

bool LpEngine::is_stable(const Structure& facts, const Structure& candidate) const {
    const std::uint64_t fm = facts_mask_of(facts);
    std::uint64_t cm = 0;
    if (candidate.vocab() == table_->vocab()) {
        cm = table_->mask_of(candidate);
    } else if (candidate.vocab() == program_.all_vocab()) {
        cm = table_->mask_of(candidate);
        cm |= derive_aux(cm);
    } else {
        throw VocabularyMismatchError(
            "candidate must interpret the program vocabulary " + program_.all_vocab().text());
    }
    if (!expands(candidate, facts))
        throw PreconditionError("candidate does not expand the given facts");
    return stable_mask(cm, fm);
}

std::vector<std::uint64_t> LpEngine::stable_model_masks(std::uint64_t facts_mask,
                                                        const EvalOptions& opts) const {
    if (free_bits_.size() > static_cast<std::size_t>(opts.ceiling))
        throw EnumerationLimitError("stable-model search over " +
                                    std::to_string(free_bits_.size()) +
                                    " free atoms exceeds the ceiling of " +
                                    std::to_string(opts.ceiling));
    const std::uint64_t count = std::uint64_t{1} << free_bits_.size();
    return kernels::collect_masks(count, opts.exec,
                                  [&](std::uint64_t y, std::vector<std::uint64_t>& sink) {
                                      const std::uint64_t base = facts_mask | scatter(y, free_bits_);
                                      const std::uint64_t x = base | derive_aux(base);
                                      if (stable_mask(x, facts_mask)) sink.push_back(x);
                                  });
}

std::vector<Structure> LpEngine::stable_models(const Structure& facts,
                                               const EvalOptions& opts) const {
    const std::uint64_t fm = facts_mask_of(facts);
    std::vector<Structure> out;
    for (std::uint64_t m : stable_model_masks(fm, opts)) out.push_back(table_->structure_of(m));
    std::sort(out.begin(), out.end());
    return out;
}

ThreeValuedModel LpEngine::well_founded(const Structure& facts) const {
    const std::uint64_t fm = facts_mask_of(facts);
    // alternating fixpoint: T = lfp(Gamma^2), U = Gamma(T)
    std::uint64_t t = 0, u = 0;
    while (true) {
        u = least_model(t, fm);
        const std::uint64_t next = least_model(u, fm);
        if (next == t) break;
        t = next;
    }
    ThreeValuedModel m;
    for (std::size_t i = 0; i < table_->size(); ++i) {
        const std::uint64_t bit = std::uint64_t{1} << i;
        if (t & bit)
            m.true_atoms.insert(table_->atom(i));
        else if (u & bit)
            m.undefined_atoms.insert(table_->atom(i));
        else
            m.false_atoms.insert(table_->atom(i));
    }
    return m;
}

bool is_stable_model(const LogicProgram& p, const Domain& domain, const Structure& facts,
                     const Structure& candidate) {
    return LpEngine(p, domain).is_stable(facts, candidate);
}

std::vector<Structure> stable_models(const LogicProgram& p, const Domain& domain,
                                     const Structure& facts, const EvalOptions& opts) {
    return LpEngine(p, domain).stable_models(facts, opts);
}

ThreeValuedModel well_founded_model(const LogicProgram& p, const Domain& domain,
                                    const Structure& facts) {
    return LpEngine(p, domain).well_founded(facts);
}

// ---------------------------------------------------------------------------
// module_of_axioms
// ---------------------------------------------------------------------------

std::vector<Structure> module_of_axioms(const PropFormula& body, const Vocabulary& sigma,
                                        const Vocabulary& epsilon, const Vocabulary& hidden,
                                        const Domain& domain, const EvalOptions& opts) {
    if (voc_intersect(sigma, epsilon).size() || voc_intersect(sigma, hidden).size() ||
        voc_intersect(epsilon, hidden).size())
        throw Error("input, output and hidden vocabularies must be pairwise disjoint");
    const Vocabulary full = voc_union(voc_union(sigma, epsilon), hidden);
    for (const GroundAtom& a : body.atoms())
        if (!full.contains(a.symbol))
            throw VocabularyMismatchError("formula symbol '" + a.symbol.text() +
                                          "' leaks outside the declared vocabularies");
    const Vocabulary visible = voc_union(sigma, epsilon);
    AtomTable table(full, domain);
    const std::uint64_t count = table.enumerable_count(opts.ceiling);
    const CompiledFormula cf(body, table);
    const std::uint64_t vmask = table.vocab_mask(visible);
    auto masks = kernels::collect_masks(count, opts.exec,
                                        [&](std::uint64_t m, std::vector<std::uint64_t>& sink) {
                                            if (cf.eval(m)) sink.push_back(m & vmask);
                                        });
    return materialize_sorted(table, visible, masks);
}

std::vector<Structure> module_of_axioms(const LogicProgram& body, const Domain& domain,
                                        const EvalOptions& opts) {
    LpEngine engine(body, domain);
    if (engine.table().size() > static_cast<std::size_t>(opts.ceiling))
        throw EnumerationLimitError("module extension over " +
                                    std::to_string(engine.table().size()) +
                                    " atoms exceeds the ceiling of " + std::to_string(opts.ceiling));
    AtomTable sigma_table(body.sigma, domain);
    const std::uint64_t sigma_count = sigma_table.enumerable_count(opts.ceiling);
    const Vocabulary visible = voc_union(body.sigma, body.epsilon);
    const std::uint64_t vmask = engine.table().vocab_mask(visible);
    const std::uint64_t eps_mask = engine.table().vocab_mask(body.epsilon);

    std::vector<std::size_t> sigma_bits;
    for (std::size_t i = 0; i < engine.table().size(); ++i)
        if (engine.sigma_mask() & (std::uint64_t{1} << i)) sigma_bits.push_back(i);

    const EvalOptions inner{Execution::Serial, opts.ceiling};
    std::vector<std::uint64_t> masks;
    if (body.semantics == LpSemantics::StableModel) {
        masks = kernels::collect_masks(
            sigma_count, opts.exec, [&](std::uint64_t s, std::vector<std::uint64_t>& sink) {
                const std::uint64_t fm = scatter(s, sigma_bits);
                for (std::uint64_t x : engine.stable_model_masks(fm, inner))
                    sink.push_back(x & vmask);
            });
    } else {
        masks = kernels::collect_masks(
            sigma_count, opts.exec, [&](std::uint64_t s, std::vector<std::uint64_t>& sink) {
                const std::uint64_t fm = scatter(s, sigma_bits);
                const Structure facts = sigma_table.structure_of(s);
                const ThreeValuedModel wf = engine.well_founded(facts);
                if (!wf.total()) return;
                std::uint64_t tmask = 0;
                for (const GroundAtom& a : wf.true_atoms)
                    tmask |= std::uint64_t{1} << *engine.table().index_of(a);
                sink.push_back(fm | (tmask & eps_mask));
            });
    }
    return materialize_sorted(engine.table(), visible, masks);
}

}  // namespace modsys
