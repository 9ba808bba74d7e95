#include "modsys/frontend.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>

namespace modsys {

// ---------------------------------------------------------------------------
// LogicFormula
// ---------------------------------------------------------------------------

struct LogicFormula::Node {
    Kind kind;
    PrimitiveModulePtr module;
    Vocabulary quantified;
    Symbol input, output;
    std::shared_ptr<const Node> a, b;
};

LogicFormula LogicFormula::leaf(PrimitiveModulePtr module) {
    if (!module) throw Error("formula leaf needs a module");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Leaf;
    n->module = std::move(module);
    return LogicFormula(std::move(n));
}

LogicFormula LogicFormula::conjunction(LogicFormula l, LogicFormula r) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::And;
    n->a = l.node_;
    n->b = r.node_;
    return LogicFormula(std::move(n));
}

LogicFormula LogicFormula::disjunction(LogicFormula l, LogicFormula r) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Or;
    n->a = l.node_;
    n->b = r.node_;
    return LogicFormula(std::move(n));
}

LogicFormula LogicFormula::exists(Vocabulary symbols, LogicFormula f) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Exists;
    n->quantified = std::move(symbols);
    n->a = f.node_;
    return LogicFormula(std::move(n));
}

LogicFormula LogicFormula::feedback(LogicFormula f, Symbol input, Symbol output) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Feedback;
    n->input = std::move(input);
    n->output = std::move(output);
    n->a = f.node_;
    return LogicFormula(std::move(n));
}

LogicFormula::Kind LogicFormula::kind() const { return node_->kind; }
const PrimitiveModulePtr& LogicFormula::module() const { return node_->module; }
const Vocabulary& LogicFormula::quantified() const { return node_->quantified; }
LogicFormula LogicFormula::left() const { return LogicFormula(node_->a); }
LogicFormula LogicFormula::right() const { return LogicFormula(node_->b); }
LogicFormula LogicFormula::child() const { return LogicFormula(node_->a); }
const Symbol& LogicFormula::feedback_input() const { return node_->input; }
const Symbol& LogicFormula::feedback_output() const { return node_->output; }

namespace {

int lf_precedence(LogicFormula::Kind k) {
    switch (k) {
        case LogicFormula::Kind::Or: return 0;
        case LogicFormula::Kind::And: return 1;
        default: return 2;
    }
}

std::string lf_names(const Vocabulary& v) {
    std::string out;
    for (std::size_t i = 0; i < v.symbols().size(); ++i) {
        if (i) out += ",";
        out += v.symbols()[i].name;
    }
    return out;
}

std::string lf_render(const LogicFormula& f, int parent_prec, bool right_operand) {
    const int prec = lf_precedence(f.kind());
    std::string out;
    switch (f.kind()) {
        case LogicFormula::Kind::Leaf: out = f.module()->name(); break;
        case LogicFormula::Kind::And:
            out = lf_render(f.left(), prec, false) + " & " + lf_render(f.right(), prec, true);
            break;
        case LogicFormula::Kind::Or:
            out = lf_render(f.left(), prec, false) + " | " + lf_render(f.right(), prec, true);
            break;
        case LogicFormula::Kind::Exists:
            out = "exists {" + lf_names(f.quantified()) + "} (" + lf_render(f.child(), 0, false) +
                  ")";
            break;
        case LogicFormula::Kind::Feedback:
            out = lf_render(f.child(), 2, false) + "[" + f.feedback_input().name + "=" +
                  f.feedback_output().name + "]";
            break;
    }
    if (prec < parent_prec || (prec == parent_prec && right_operand && prec < 2))
        return "(" + out + ")";
    return out;
}

}  // namespace

std::string LogicFormula::text() const { return lf_render(*this, 0, false); }

ModuleExpr compile_logic_formula(const LogicFormula& f) {
    ModuleExpr e = [&] {
        switch (f.kind()) {
            case LogicFormula::Kind::Leaf: return ModuleExpr::prim(f.module());
            case LogicFormula::Kind::And:
                return ModuleExpr::compose(compile_logic_formula(f.left()),
                                           compile_logic_formula(f.right()));
            case LogicFormula::Kind::Or:
                return ModuleExpr::unite(compile_logic_formula(f.left()),
                                         compile_logic_formula(f.right()));
            case LogicFormula::Kind::Exists: {
                ModuleExpr child = compile_logic_formula(f.child());
                const Vocabulary vocab = signature_of(child).vocab();
                return ModuleExpr::project(voc_minus(vocab, f.quantified()), child);
            }
            case LogicFormula::Kind::Feedback:
                return ModuleExpr::feedback(compile_logic_formula(f.child()), f.feedback_input(),
                                            f.feedback_output());
        }
        throw Error("unreachable formula kind");
    }();
    const WellFormednessReport report = check_wellformed(e);
    if (!report.ok) {
        const Violation& v = report.violations.front();
        throw PreconditionError("connective '" + f.text() +
                                "' compiles to an ill-formed expression: " + v.message +
                                " (at " + v.path + ")");
    }
    return e;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

struct Token {
    enum class Kind { Name, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    SourcePos pos;
    std::size_t offset = 0;
};

struct Lexer {
    std::string_view src;
    std::string file;
    std::size_t pos = 0;
    int line = 1, col = 1;

    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            if (src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }
    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) advance(1);
    }
    static bool name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    Token next() {
        skip_ws();
        Token t;
        t.pos = SourcePos{line, col};
        t.offset = pos;
        if (pos >= src.size()) return t;
        const char c = src[pos];
        if (name_char(c)) {
            std::size_t start = pos;
            while (pos < src.size() && name_char(src[pos])) advance(1);
            while (pos < src.size() && src[pos] == '\'') advance(1);  // trailing primes
            t.kind = Token::Kind::Name;
            t.text = std::string(src.substr(start, pos - start));
            return t;
        }
        t.kind = Token::Kind::Punct;
        if (src.substr(pos, 2) == ">>" || src.substr(pos, 2) == ":-") {
            t.text = std::string(src.substr(pos, 2));
            advance(2);
            return t;
        }
        t.text = std::string(1, c);
        advance(1);
        return t;
    }
};

// comments run from '#' to end of line; blank them out so raw slices
// (rule blocks) stay comment-free
std::string strip_comments(std::string_view text) {
    std::string out(text);
    bool in_comment = false;
    for (char& c : out) {
        if (c == '#') in_comment = true;
        if (c == '\n') in_comment = false;
        if (in_comment && c != '\n') c = ' ';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Statement-level rule parsing (sm/wf module bodies)
// ---------------------------------------------------------------------------

struct RuleParser {
    std::string_view text;
    std::size_t pos = 0;
    const Vocabulary& declared;
    const Domain& domain;
    const std::string& file;
    SourcePos at;

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(file, at, msg + " in rule '" + std::string(text) + "'"); }
    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(std::string_view tok) {
        skip_ws();
        if (text.substr(pos, tok.size()) == tok) {
            pos += tok.size();
            return true;
        }
        return false;
    }
    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }
    std::string name() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && (Lexer::name_char(text[pos]))) ++pos;
        while (pos < text.size() && text[pos] == '\'') ++pos;
        if (pos == start) fail("expected a name");
        return std::string(text.substr(start, pos - start));
    }

    Term term() {
        const std::string n = name();
        if (domain.contains(n)) return Term{Term::Kind::Constant, n};
        return Term{Term::Kind::Variable, n};
    }

    RuleAtom atom() {
        RuleAtom a;
        a.predicate = name();
        if (eat("(")) {
            if (!eat(")")) {
                do {
                    a.args.push_back(term());
                } while (eat(","));
                if (!eat(")")) fail("expected ')'");
            }
        }
        return a;
    }

    std::vector<BodyLiteral> body() {
        std::vector<BodyLiteral> out;
        do {
            skip_ws();
            bool neg = false;
            if (text.substr(pos, 3) == "not" &&
                (pos + 3 >= text.size() || !Lexer::name_char(text[pos + 3]))) {
                pos += 3;
                neg = true;
            }
            out.push_back(BodyLiteral{atom(), neg});
        } while (eat(","));
        return out;
    }

    Rule parse() {
        skip_ws();
        if (eat(":-")) {
            Rule r = Rule::constraint(body());
            if (!at_end()) fail("trailing input");
            return r;
        }
        // a choice head starts with its numeric lower bound
        std::size_t save = pos;
        std::string first = name();
        skip_ws();
        const bool numeric =
            !first.empty() && std::all_of(first.begin(), first.end(), [](char c) {
                return std::isdigit(static_cast<unsigned char>(c));
            });
        if (numeric && pos < text.size() && text[pos] == '{') {
            ++pos;  // '{'
            std::vector<RuleAtom> elements;
            do {
                elements.push_back(atom());
            } while (eat(";"));
            if (!eat("}")) fail("expected '}' after choice elements");
            const std::string upper = name();
            if (!std::all_of(upper.begin(), upper.end(), [](char c) {
                    return std::isdigit(static_cast<unsigned char>(c));
                }))
                fail("expected the numeric upper bound");
            std::vector<BodyLiteral> b;
            if (eat(":-")) b = body();
            if (!at_end()) fail("trailing input");
            return Rule::choice_rule(std::stoi(first), std::stoi(upper), std::move(elements),
                                     std::move(b));
        }
        pos = save;
        RuleAtom h = atom();
        std::vector<BodyLiteral> b;
        if (eat(":-")) b = body();
        if (!at_end()) fail("trailing input");
        return Rule::normal(std::move(h), std::move(b));
    }
};

// ---------------------------------------------------------------------------
// Document parser
// ---------------------------------------------------------------------------

struct Parser {
    std::string src;  // comment-stripped
    std::string file;
    Lexer lex;
    Token tok;
    SpecDocument doc;
    bool domain_declared = false;
    bool domain_used = false;

    Parser(std::string_view text, std::string_view filename)
        : src(strip_comments(text)), file(filename) {
        lex = Lexer{src, file};
        tok = lex.next();
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(file, tok.pos, msg); }
    [[noreturn]] void fail_at(SourcePos pos, const std::string& msg) {
        throw ParseError(file, pos, msg);
    }

    void next() { tok = lex.next(); }
    bool at_punct(std::string_view p) const {
        return tok.kind == Token::Kind::Punct && tok.text == p;
    }
    bool at_name(std::string_view n) const {
        return tok.kind == Token::Kind::Name && tok.text == n;
    }
    void expect_punct(std::string_view p) {
        if (!at_punct(p)) fail("expected '" + std::string(p) + "' before '" + tok.text + "'");
        next();
    }
    std::string expect_name(const std::string& what) {
        if (tok.kind != Token::Kind::Name) fail("expected " + what + " before '" + tok.text + "'");
        std::string n = tok.text;
        next();
        return n;
    }

    Symbol resolve_symbol(const std::string& name, SourcePos pos) {
        auto s = doc.declared.find(name);
        if (!s) fail_at(pos, "undeclared symbol '" + name + "'");
        return *s;
    }

    std::vector<std::string> name_list_braced() {
        expect_punct("{");
        std::vector<std::string> names;
        if (!at_punct("}")) {
            do {
                names.push_back(expect_name("a name"));
            } while (at_punct(",") && (next(), true));
        }
        expect_punct("}");
        return names;
    }

    Vocabulary symbol_set_braced() {
        const SourcePos pos = tok.pos;
        std::vector<Symbol> syms;
        for (const std::string& n : name_list_braced()) syms.push_back(resolve_symbol(n, pos));
        return Vocabulary(std::move(syms));
    }

    // ---- declarations ----

    void parse_domain() {
        const SourcePos pos = tok.pos;
        next();  // 'domain'
        if (domain_declared) fail_at(pos, "duplicate domain declaration");
        if (domain_used)
            fail_at(pos, "the domain must be declared before modules and instances");
        std::vector<std::string> elements = name_list_braced();
        if (elements.empty()) fail_at(pos, "domain must be nonempty");
        doc.domain = Domain(std::move(elements));
        domain_declared = true;
    }

    void parse_vocab() {
        next();  // 'vocab'
        expect_punct("{");
        std::vector<Symbol> syms = doc.declared.symbols();
        if (!at_punct("}")) {
            do {
                const SourcePos pos = tok.pos;
                const std::string name = expect_name("a symbol name");
                int arity = 0;
                if (at_punct("/")) {
                    next();
                    const std::string num = expect_name("an arity");
                    if (!std::all_of(num.begin(), num.end(), [](char c) {
                            return std::isdigit(static_cast<unsigned char>(c));
                        }))
                        fail_at(pos, "arity must be a number");
                    arity = std::stoi(num);
                }
                if (!name.empty() && name[0] == '_')
                    fail_at(pos, "symbol names starting with '_' are reserved");
                syms.push_back(Symbol{name, arity});
            } while (at_punct(",") && (next(), true));
        }
        expect_punct("}");
        try {
            doc.declared = Vocabulary(std::move(syms));
        } catch (const Error& e) {
            fail(e.what());
        }
    }

    std::string raw_braced_block() {
        expect_punct("{");
        const std::size_t start = tok.offset;
        int depth = 1;
        std::size_t end = start;
        while (depth > 0) {
            if (tok.kind == Token::Kind::End) fail("unterminated '{' block");
            if (at_punct("{")) ++depth;
            if (at_punct("}")) {
                --depth;
                if (depth == 0) {
                    end = tok.offset;
                    next();
                    break;
                }
            }
            next();
        }
        return src.substr(start, end - start);
    }

    void parse_module() {
        const SourcePos pos = tok.pos;
        next();  // 'module'
        const std::string name = expect_name("a module name");
        if (doc.modules.find(name)) fail_at(pos, "duplicate module '" + name + "'");
        expect_punct(":");
        const std::string tag = expect_name("a logic tag (p, sm or wf)");
        if (tag != "p" && tag != "sm" && tag != "wf")
            fail_at(pos, "unknown logic tag '" + tag + "' (expected p, sm or wf)");
        expect_punct("{");
        domain_used = true;

        Vocabulary inputs, outputs, hidden;
        bool have_inputs = false, have_outputs = false, have_hidden = false;
        std::string rules_raw;
        bool have_rules = false;
        SourcePos rules_pos = tok.pos;
        while (!at_punct("}")) {
            if (at_name("inputs")) {
                if (have_inputs) fail("duplicate inputs section");
                next();
                inputs = symbol_set_braced();
                have_inputs = true;
            } else if (at_name("outputs")) {
                if (have_outputs) fail("duplicate outputs section");
                next();
                outputs = symbol_set_braced();
                have_outputs = true;
            } else if (at_name("hidden")) {
                if (have_hidden) fail("duplicate hidden section");
                next();
                hidden = symbol_set_braced();
                have_hidden = true;
            } else if (at_name("rules")) {
                if (have_rules) fail("duplicate rules section");
                rules_pos = tok.pos;
                next();
                rules_raw = raw_braced_block();
                have_rules = true;
            } else {
                fail("expected inputs, outputs, hidden or rules");
            }
        }
        expect_punct("}");

        // split the raw block into '.'-terminated statements
        std::vector<std::string> statements;
        std::string cur;
        for (char c : rules_raw) {
            if (c == '.') {
                statements.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (cur.find_first_not_of(" \t\r\n") != std::string::npos)
            fail_at(rules_pos, "rule or formula without terminating '.'");

        try {
            if (tag == "p") {
                const Vocabulary full = voc_union(voc_union(inputs, outputs), hidden);
                PropFormula phi = PropFormula::constant(true);
                bool first = true;
                for (const std::string& st : statements) {
                    if (st.find_first_not_of(" \t\r\n") == std::string::npos) continue;
                    PropFormula f = parse_prop_formula(st, full, doc.domain);
                    phi = first ? f : PropFormula::conjunction(phi, f);
                    first = false;
                }
                doc.modules.add(PrimitiveModule::from_formula(name, phi,
                                                              Signature{inputs, outputs}, hidden,
                                                              doc.domain));
            } else {
                LogicProgram p;
                p.semantics = tag == "sm" ? LpSemantics::StableModel : LpSemantics::WellFounded;
                p.sigma = inputs;
                p.epsilon = outputs;
                p.hidden = hidden;
                for (const std::string& st : statements) {
                    if (st.find_first_not_of(" \t\r\n") == std::string::npos) continue;
                    RuleParser rp{st, 0, doc.declared, doc.domain, file, rules_pos};
                    p.rules.push_back(rp.parse());
                }
                doc.modules.add(PrimitiveModule::from_program(name, std::move(p), doc.domain));
            }
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            fail_at(pos, "module '" + name + "': " + e.what());
        }
        doc.module_order.push_back(name);
    }

    // ---- algebra expressions ----

    ModuleExpr expr_union() {
        ModuleExpr e = expr_compose();
        while (at_punct("|")) {
            next();
            e = ModuleExpr::unite(e, expr_compose());
        }
        return e;
    }
    ModuleExpr expr_compose() {
        ModuleExpr e = expr_prefix();
        while (at_punct(">>")) {
            next();
            e = ModuleExpr::compose(e, expr_prefix());
        }
        return e;
    }
    ModuleExpr expr_prefix() {
        if (at_punct("~")) {
            next();
            return ModuleExpr::complement(expr_prefix());
        }
        return expr_postfix();
    }
    ModuleExpr expr_postfix() {
        ModuleExpr e = expr_primary();
        while (at_punct("[")) {
            const SourcePos pos = tok.pos;
            next();
            const std::string r = expect_name("the feedback input symbol");
            expect_punct("=");
            const std::string s = expect_name("the feedback output symbol");
            expect_punct("]");
            e = ModuleExpr::feedback(e, resolve_symbol(r, pos), resolve_symbol(s, pos));
        }
        return e;
    }
    ModuleExpr expr_primary() {
        if (at_name("project")) {
            next();
            Vocabulary onto = symbol_set_braced();
            expect_punct("(");
            ModuleExpr e = expr_union();
            expect_punct(")");
            return ModuleExpr::project(std::move(onto), e);
        }
        if (at_punct("(")) {
            next();
            ModuleExpr e = expr_union();
            expect_punct(")");
            return e;
        }
        const SourcePos pos = tok.pos;
        const std::string name = expect_name("a module name");
        auto m = doc.modules.find(name);
        if (!m) fail_at(pos, "unknown module '" + name + "'");
        return ModuleExpr::prim(m);
    }
    void parse_system() {
        const SourcePos pos = tok.pos;
        next();  // 'system'
        const std::string name = expect_name("a system name");
        check_fresh_system_name(name, pos);
        expect_punct("=");
        ModuleExpr e = expr_union();
        expect_punct(";");
        doc.systems.emplace(name, SystemDef{name, std::move(e)});
        doc.system_order.push_back(name);
    }

    // ---- multi-language formulas ----

    LogicFormula lf_or() {
        LogicFormula f = lf_and();
        while (at_punct("|")) {
            next();
            f = LogicFormula::disjunction(f, lf_and());
        }
        return f;
    }
    LogicFormula lf_and() {
        LogicFormula f = lf_post();
        while (at_punct("&")) {
            next();
            f = LogicFormula::conjunction(f, lf_post());
        }
        return f;
    }
    LogicFormula lf_post() {
        LogicFormula f = lf_primary();
        while (at_punct("[")) {
            const SourcePos pos = tok.pos;
            next();
            const std::string r = expect_name("the feedback input symbol");
            expect_punct("=");
            const std::string s = expect_name("the feedback output symbol");
            expect_punct("]");
            f = LogicFormula::feedback(f, resolve_symbol(r, pos), resolve_symbol(s, pos));
        }
        return f;
    }
    LogicFormula lf_primary() {
        if (at_name("exists")) {
            next();
            Vocabulary q = symbol_set_braced();
            expect_punct("(");
            LogicFormula f = lf_or();
            expect_punct(")");
            return LogicFormula::exists(std::move(q), f);
        }
        if (at_punct("(")) {
            next();
            LogicFormula f = lf_or();
            expect_punct(")");
            return f;
        }
        const SourcePos pos = tok.pos;
        const std::string name = expect_name("a module name");
        auto m = doc.modules.find(name);
        if (!m) fail_at(pos, "unknown module '" + name + "'");
        return LogicFormula::leaf(m);
    }

    void parse_formula() {
        const SourcePos pos = tok.pos;
        next();  // 'formula'
        const std::string name = expect_name("a formula name");
        check_fresh_system_name(name, pos);
        expect_punct("=");
        LogicFormula f = lf_or();
        expect_punct(";");
        try {
            doc.systems.emplace(name, SystemDef{name, compile_logic_formula(f)});
        } catch (const Error& e) {
            fail_at(pos, "formula '" + name + "': " + e.what());
        }
        doc.system_order.push_back(name);
    }

    void check_fresh_system_name(const std::string& name, SourcePos pos) {
        if (doc.systems.count(name)) fail_at(pos, "duplicate system '" + name + "'");
        if (doc.modules.find(name))
            fail_at(pos, "name '" + name + "' already denotes a module");
    }

    void parse_instance() {
        const SourcePos pos = tok.pos;
        next();  // 'instance'
        const std::string name = expect_name("an instance name");
        if (doc.instances.count(name)) fail_at(pos, "duplicate instance '" + name + "'");
        domain_used = true;
        expect_punct("{");
        std::set<GroundAtom> atoms;
        while (!at_punct("}")) {
            const SourcePos apos = tok.pos;
            const std::string n = expect_name("an atom");
            const Symbol sym = resolve_symbol(n, apos);
            std::vector<std::string> args;
            if (at_punct("(")) {
                next();
                if (!at_punct(")")) {
                    do {
                        const std::string el = expect_name("a domain element");
                        if (!doc.domain.contains(el))
                            fail_at(apos, "'" + el + "' is not a domain element");
                        args.push_back(el);
                    } while (at_punct(",") && (next(), true));
                }
                expect_punct(")");
            }
            if (static_cast<int>(args.size()) != sym.arity)
                fail_at(apos, "atom '" + n + "' expects arity " + std::to_string(sym.arity));
            atoms.insert(GroundAtom{sym, std::move(args)});
            if (at_punct(",")) next();
        }
        expect_punct("}");
        doc.instances.emplace(name, InstanceDef{name, std::move(atoms)});
    }

    SpecDocument parse() {
        while (tok.kind != Token::Kind::End) {
            if (at_name("domain"))
                parse_domain();
            else if (at_name("vocab"))
                parse_vocab();
            else if (at_name("module"))
                parse_module();
            else if (at_name("system"))
                parse_system();
            else if (at_name("formula"))
                parse_formula();
            else if (at_name("instance"))
                parse_instance();
            else
                fail("expected a declaration (domain, vocab, module, system, formula, instance)");
        }
        return std::move(doc);
    }
};

}  // namespace

SpecDocument parse_spec(std::string_view text, std::string_view filename) {
    Parser p(text, filename);
    return p.parse();
}

ModuleExpr parse_algebra(std::string_view text, const ModuleRegistry& registry,
                         const Vocabulary& declared) {
    Parser p(text, "<expr>");
    p.doc.declared = declared;
    for (const std::string& n : registry.names()) {
        p.doc.modules.add(registry.find(n));
        p.doc.module_order.push_back(n);
    }
    ModuleExpr e = p.expr_union();
    if (p.tok.kind != Token::Kind::End)
        throw ParseError("<expr>", p.tok.pos, "trailing input '" + p.tok.text + "'");
    return e;
}

ModuleExpr SpecDocument::resolve_system(std::string_view name) const {
    auto it = systems.find(name);
    if (it != systems.end()) return it->second.expr;
    if (auto m = modules.find(name)) return ModuleExpr::prim(m);
    throw Error("unknown system '" + std::string(name) + "'");
}

const InstanceDef& SpecDocument::instance(std::string_view name) const {
    auto it = instances.find(name);
    if (it == instances.end()) throw Error("unknown instance '" + std::string(name) + "'");
    return it->second;
}

}  // namespace modsys
