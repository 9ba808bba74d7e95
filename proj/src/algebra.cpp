#include "modsys/algebra.hpp"

#include <algorithm>
#include <cassert>

namespace modsys {

std::string Signature::text() const {
    return "sigma=" + sigma.text() + " epsilon=" + epsilon.text();
}

// ---------------------------------------------------------------------------
// PrimitiveModule
// ---------------------------------------------------------------------------

PrimitiveModule::PrimitiveModule(std::string name, Signature sig, Domain domain)
    : name_(std::move(name)), sig_(std::move(sig)), domain_(std::move(domain)) {
    if (voc_intersect(sig_.sigma, sig_.epsilon).size())
        throw Error("module '" + name_ + "': input and output vocabularies overlap");
    visible_ = sig_.vocab();
    visible_table_ = std::make_unique<AtomTable>(visible_, domain_);
}

std::shared_ptr<const PrimitiveModule> PrimitiveModule::from_extension(
    std::string name, Signature sig, Domain domain, std::vector<Structure> extension) {
    auto m = std::shared_ptr<PrimitiveModule>(
        new PrimitiveModule(std::move(name), std::move(sig), std::move(domain)));
    for (const Structure& b : extension) {
        if (b.vocab() != m->visible_)
            throw VocabularyMismatchError("module '" + m->name_ +
                                          "': extension structure is not over sigma U epsilon");
        if (b.domain() != m->domain_)
            throw VocabularyMismatchError("module '" + m->name_ +
                                          "': extension structure is over a different domain");
    }
    std::sort(extension.begin(), extension.end());
    extension.erase(std::unique(extension.begin(), extension.end()), extension.end());
    m->explicit_extension_ = std::move(extension);
    return m;
}

std::shared_ptr<const PrimitiveModule> PrimitiveModule::from_program(std::string name,
                                                                     LogicProgram p,
                                                                     Domain domain) {
    Signature sig{p.sigma, p.epsilon};
    auto m = std::shared_ptr<PrimitiveModule>(
        new PrimitiveModule(std::move(name), std::move(sig), domain));
    m->engine_ = std::make_shared<const LpEngine>(std::move(p), std::move(domain));
    return m;
}

std::shared_ptr<const PrimitiveModule> PrimitiveModule::from_formula(std::string name,
                                                                     PropFormula f, Signature sig,
                                                                     Vocabulary hidden,
                                                                     Domain domain) {
    auto m = std::shared_ptr<PrimitiveModule>(
        new PrimitiveModule(std::move(name), std::move(sig), std::move(domain)));
    const Vocabulary full = voc_union(m->visible_, hidden);
    for (const GroundAtom& a : f.atoms())
        if (!full.contains(a.symbol))
            throw VocabularyMismatchError("module '" + m->name_ + "': formula symbol '" +
                                          a.symbol.text() +
                                          "' leaks outside the declared vocabularies");
    m->formula_ = std::move(f);
    m->formula_hidden_ = std::move(hidden);
    m->full_table_ = std::make_unique<AtomTable>(full, m->domain_);
    if (m->full_table_->size() > 62)
        throw EnumerationLimitError("module '" + m->name_ +
                                    "' grounds to more than 62 atoms");
    m->compiled_ = std::make_unique<CompiledFormula>(*m->formula_, *m->full_table_);
    for (std::size_t i = 0; i < m->visible_table_->size(); ++i)
        m->vis_to_full_.push_back(*m->full_table_->index_of(m->visible_table_->atom(i)));
    const std::uint64_t vmask = m->full_table_->vocab_mask(m->visible_);
    for (std::size_t i = 0; i < m->full_table_->size(); ++i)
        if ((vmask & (std::uint64_t{1} << i)) == 0) m->hidden_bits_.push_back(i);
    return m;
}

const std::vector<std::uint64_t>& PrimitiveModule::instance_models(
    std::uint64_t sigma_mask) const {
    // callers hold mutex_
    auto it = per_instance_.find(sigma_mask);
    if (it != per_instance_.end()) return it->second;

    std::vector<std::uint64_t> visible;
    const EvalOptions serial{Execution::Serial, atom_ceiling()};
    if (engine_) {
        const std::uint64_t full_sigma =
            engine_->table().mask_of(visible_table_->atoms_of(
                sigma_mask & visible_table_->vocab_mask(sig_.sigma)));
        if (engine_->program().semantics == LpSemantics::StableModel) {
            const std::uint64_t vmask = engine_->table().vocab_mask(visible_);
            for (std::uint64_t x : engine_->stable_model_masks(full_sigma, serial)) {
                const Structure v = engine_->table().structure_of(x & vmask, visible_);
                visible.push_back(visible_table_->mask_of(v));
            }
        } else {
            const Structure facts =
                visible_table_->structure_of(sigma_mask, sig_.sigma);
            const ThreeValuedModel wf = engine_->well_founded(facts);
            if (wf.total()) {
                std::uint64_t eps = 0;
                const std::uint64_t eps_mask = visible_table_->vocab_mask(sig_.epsilon);
                for (const GroundAtom& a : wf.true_atoms) {
                    auto idx = visible_table_->index_of(a);
                    if (idx) eps |= std::uint64_t{1} << *idx;
                }
                visible.push_back(sigma_mask | (eps & eps_mask));
            }
        }
    } else if (formula_) {
        if (hidden_bits_.size() > static_cast<std::size_t>(atom_ceiling()))
            throw EnumerationLimitError("module '" + name_ +
                                        "': hidden-completion search exceeds the ceiling");
        const std::uint64_t hcount = std::uint64_t{1} << hidden_bits_.size();
        const std::uint64_t eps_bits = visible_table_->vocab_mask(sig_.epsilon);
        std::vector<std::size_t> eps_positions;
        for (std::size_t i = 0; i < visible_table_->size(); ++i)
            if (eps_bits & (std::uint64_t{1} << i)) eps_positions.push_back(i);
        const std::uint64_t ecount = std::uint64_t{1} << eps_positions.size();
        for (std::uint64_t ev = 0; ev < ecount; ++ev) {
            std::uint64_t vis = sigma_mask;
            for (std::size_t i = 0; i < eps_positions.size(); ++i)
                if (ev & (std::uint64_t{1} << i)) vis |= std::uint64_t{1} << eps_positions[i];
            std::uint64_t base = 0;
            for (std::size_t i = 0; i < vis_to_full_.size(); ++i)
                if (vis & (std::uint64_t{1} << i)) base |= std::uint64_t{1} << vis_to_full_[i];
            bool member = false;
            for (std::uint64_t h = 0; h < hcount && !member; ++h) {
                std::uint64_t full = base;
                for (std::size_t i = 0; i < hidden_bits_.size(); ++i)
                    if (h & (std::uint64_t{1} << i)) full |= std::uint64_t{1} << hidden_bits_[i];
                member = compiled_->eval(full);
            }
            if (member) visible.push_back(vis);
        }
    } else {
        // explicit extension: group by instance
        for (const Structure& b : *explicit_extension_) {
            const std::uint64_t m = visible_table_->mask_of(b);
            if ((m & visible_table_->vocab_mask(sig_.sigma)) == sigma_mask) visible.push_back(m);
        }
    }
    std::sort(visible.begin(), visible.end());
    visible.erase(std::unique(visible.begin(), visible.end()), visible.end());
    return per_instance_.emplace(sigma_mask, std::move(visible)).first->second;
}

bool PrimitiveModule::contains(const Structure& b) const {
    if (b.vocab() != visible_)
        throw VocabularyMismatchError("module '" + name_ + "': membership query must be over " +
                                      visible_.text());
    if (b.domain() != domain_)
        throw VocabularyMismatchError("module '" + name_ +
                                      "': membership query over a different domain");
    const std::uint64_t m = visible_table_->mask_of(b);
    const std::uint64_t sm = m & visible_table_->vocab_mask(sig_.sigma);
    std::lock_guard<std::mutex> lock(mutex_);
    const auto& models = instance_models(sm);
    return std::binary_search(models.begin(), models.end(), m);
}

const std::vector<Structure>& PrimitiveModule::extension(const EvalOptions& opts) const {
    std::lock_guard<std::mutex> lock(mutex_);
    if (materialized_) return *materialized_;
    std::vector<Structure> ext;
    if (explicit_extension_) {
        ext = *explicit_extension_;
    } else if (engine_) {
        ext = module_of_axioms(engine_->program(), domain_, opts);
    } else {
        ext = module_of_axioms(*formula_, sig_.sigma, sig_.epsilon, formula_hidden_, domain_, opts);
    }
    materialized_ = std::move(ext);
    return *materialized_;
}

// ---------------------------------------------------------------------------
// ModuleRegistry
// ---------------------------------------------------------------------------

void ModuleRegistry::add(PrimitiveModulePtr m) {
    if (!m) throw Error("cannot register a null module");
    auto [it, inserted] = modules_.emplace(m->name(), std::move(m));
    if (!inserted) throw Error("module '" + it->first + "' is already registered");
}

PrimitiveModulePtr ModuleRegistry::find(std::string_view name) const {
    auto it = modules_.find(name);
    return it == modules_.end() ? nullptr : it->second;
}

std::vector<std::string> ModuleRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : modules_) out.push_back(k);
    return out;
}

// ---------------------------------------------------------------------------
// ModuleExpr
// ---------------------------------------------------------------------------

struct ModuleExpr::Node {
    Kind kind;
    PrimitiveModulePtr module;
    Vocabulary onto;
    Symbol input, output;
    std::shared_ptr<const Node> a, b;
};

ModuleExpr ModuleExpr::prim(PrimitiveModulePtr module) {
    if (!module) throw Error("primitive expression needs a module");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Prim;
    n->module = std::move(module);
    return ModuleExpr(std::move(n));
}

ModuleExpr ModuleExpr::project(Vocabulary onto, ModuleExpr e) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Project;
    n->onto = std::move(onto);
    n->a = e.node_;
    return ModuleExpr(std::move(n));
}

ModuleExpr ModuleExpr::compose(ModuleExpr left, ModuleExpr right) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Compose;
    n->a = left.node_;
    n->b = right.node_;
    return ModuleExpr(std::move(n));
}

ModuleExpr ModuleExpr::unite(ModuleExpr left, ModuleExpr right) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Union;
    n->a = left.node_;
    n->b = right.node_;
    return ModuleExpr(std::move(n));
}

ModuleExpr ModuleExpr::feedback(ModuleExpr e, Symbol input, Symbol output) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Feedback;
    n->input = std::move(input);
    n->output = std::move(output);
    n->a = e.node_;
    return ModuleExpr(std::move(n));
}

ModuleExpr ModuleExpr::complement(ModuleExpr e) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Complement;
    n->a = e.node_;
    return ModuleExpr(std::move(n));
}

ModuleExpr::Kind ModuleExpr::kind() const { return node_->kind; }

const PrimitiveModulePtr& ModuleExpr::module() const {
    assert(node_->kind == Kind::Prim);
    return node_->module;
}

const Vocabulary& ModuleExpr::onto() const {
    assert(node_->kind == Kind::Project);
    return node_->onto;
}

ModuleExpr ModuleExpr::left() const { return ModuleExpr(node_->a); }
ModuleExpr ModuleExpr::right() const { return ModuleExpr(node_->b); }
ModuleExpr ModuleExpr::child() const { return ModuleExpr(node_->a); }

const Symbol& ModuleExpr::feedback_input() const {
    assert(node_->kind == Kind::Feedback);
    return node_->input;
}

const Symbol& ModuleExpr::feedback_output() const {
    assert(node_->kind == Kind::Feedback);
    return node_->output;
}

std::size_t ModuleExpr::node_count() const {
    switch (kind()) {
        case Kind::Prim: return 1;
        case Kind::Compose:
        case Kind::Union: return 1 + left().node_count() + right().node_count();
        default: return 1 + child().node_count();
    }
}

namespace {

// union | compose >> bind looser than prefix ~, which binds looser than the
// postfix feedback annotation
int expr_precedence(ModuleExpr::Kind k) {
    switch (k) {
        case ModuleExpr::Kind::Union: return 0;
        case ModuleExpr::Kind::Compose: return 1;
        case ModuleExpr::Kind::Complement: return 2;
        default: return 3;
    }
}

std::string symbol_list(const Vocabulary& v) {
    std::string out;
    for (std::size_t i = 0; i < v.symbols().size(); ++i) {
        if (i) out += ",";
        out += v.symbols()[i].name;
    }
    return out;
}

std::string render(const ModuleExpr& e, int parent_prec, bool right_operand) {
    const int prec = expr_precedence(e.kind());
    std::string out;
    switch (e.kind()) {
        case ModuleExpr::Kind::Prim: out = e.module()->name(); break;
        case ModuleExpr::Kind::Project:
            out = "project {" + symbol_list(e.onto()) + "} (" + render(e.child(), 0, false) + ")";
            break;
        case ModuleExpr::Kind::Compose:
            out = render(e.left(), prec, false) + " >> " + render(e.right(), prec, true);
            break;
        case ModuleExpr::Kind::Union:
            out = render(e.left(), prec, false) + " | " + render(e.right(), prec, true);
            break;
        case ModuleExpr::Kind::Feedback:
            out = render(e.child(), 3, false) + "[" + e.feedback_input().name + "=" +
                  e.feedback_output().name + "]";
            break;
        case ModuleExpr::Kind::Complement:
            out = "~" + render(e.child(), 2, false);
            break;
    }
    if (prec < parent_prec || (prec == parent_prec && right_operand &&
                               (e.kind() == ModuleExpr::Kind::Compose ||
                                e.kind() == ModuleExpr::Kind::Union)))
        return "(" + out + ")";
    return out;
}

}  // namespace

std::string ModuleExpr::text() const { return render(*this, 0, false); }

const void* ModuleExpr::id() const { return node_.get(); }

bool ModuleExpr::operator==(const ModuleExpr& other) const {
    if (node_ == other.node_) return true;
    if (kind() != other.kind()) return false;
    switch (kind()) {
        case Kind::Prim: return node_->module == other.node_->module;
        case Kind::Project: return onto() == other.onto() && child() == other.child();
        case Kind::Compose:
        case Kind::Union: return left() == other.left() && right() == other.right();
        case Kind::Feedback:
            return feedback_input() == other.feedback_input() &&
                   feedback_output() == other.feedback_output() && child() == other.child();
        case Kind::Complement: return child() == other.child();
    }
    return false;
}

// ---------------------------------------------------------------------------
// Well-formedness and signatures
// ---------------------------------------------------------------------------

namespace {

const char* violation_name(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::OutputInterference: return "OutputInterference";
        case Violation::Kind::NotIndependent: return "NotIndependent";
        case Violation::Kind::ProjectionOutsideVocabulary: return "ProjectionOutsideVocabulary";
        case Violation::Kind::FeedbackInputMissing: return "FeedbackInputMissing";
        case Violation::Kind::FeedbackOutputMissing: return "FeedbackOutputMissing";
        case Violation::Kind::FeedbackArityMismatch: return "FeedbackArityMismatch";
        case Violation::Kind::FeedbackOnClosedModule: return "FeedbackOnClosedModule";
        case Violation::Kind::SymbolClash: return "SymbolClash";
        case Violation::Kind::DomainMismatch: return "DomainMismatch";
    }
    return "?";
}

struct Checker {
    WellFormednessReport report;
    const Domain* domain = nullptr;

    void violate(Violation::Kind k, const std::string& path, std::string msg) {
        report.ok = false;
        report.violations.push_back(Violation{k, path, std::move(msg)});
    }

    // union that records a clash instead of throwing, keeping the first arity
    Vocabulary merge(const Vocabulary& a, const Vocabulary& b, const std::string& path) {
        std::vector<Symbol> out = a.symbols();
        for (const Symbol& s : b.symbols()) {
            auto existing = a.find(s.name);
            if (existing && existing->arity != s.arity) {
                violate(Violation::Kind::SymbolClash, path,
                        "symbol '" + s.name + "' occurs with arities " +
                            std::to_string(existing->arity) + " and " + std::to_string(s.arity));
                continue;
            }
            out.push_back(s);
        }
        return Vocabulary(std::move(out));
    }

    Signature walk(const ModuleExpr& e, const std::string& path) {
        using K = ModuleExpr::Kind;
        switch (e.kind()) {
            case K::Prim: {
                const auto& m = e.module();
                if (domain == nullptr) domain = &m->domain();
                else if (*domain != m->domain())
                    violate(Violation::Kind::DomainMismatch, path,
                            "module '" + m->name() + "' is over a different domain");
                return m->signature();
            }
            case K::Project: {
                const Signature s = walk(e.child(), path + "/0");
                const Vocabulary v = s.vocab();
                for (const Symbol& sym : e.onto().symbols())
                    if (!v.contains(sym))
                        violate(Violation::Kind::ProjectionOutsideVocabulary, path,
                                "projection symbol " + sym.text() +
                                    " is not in the child vocabulary");
                return Signature{voc_intersect(s.sigma, e.onto()),
                                 voc_intersect(s.epsilon, e.onto())};
            }
            case K::Compose: {
                const Signature s1 = walk(e.left(), path + "/0");
                const Signature s2 = walk(e.right(), path + "/1");
                const Vocabulary inter = voc_intersect(s1.epsilon, s2.epsilon);
                if (!inter.empty())
                    violate(Violation::Kind::OutputInterference, path,
                            "composed modules share output symbols " + inter.text());
                const Vocabulary dep = voc_intersect(s1.sigma, s2.epsilon);
                if (!dep.empty())
                    violate(Violation::Kind::NotIndependent, path,
                            "left module reads right module outputs " + dep.text());
                return Signature{
                    merge(s1.sigma, voc_minus(s2.sigma, s1.epsilon), path),
                    merge(s1.epsilon, s2.epsilon, path)};
            }
            case K::Union: {
                const Signature s1 = walk(e.left(), path + "/0");
                const Signature s2 = walk(e.right(), path + "/1");
                const Vocabulary d1 = voc_intersect(s1.sigma, s2.epsilon);
                const Vocabulary d2 = voc_intersect(s2.sigma, s1.epsilon);
                if (!d1.empty() || !d2.empty())
                    violate(Violation::Kind::NotIndependent, path,
                            "union branches are not mutually independent on " +
                                merge(d1, d2, path).text());
                return Signature{merge(s1.sigma, s2.sigma, path),
                                 merge(s1.epsilon, s2.epsilon, path)};
            }
            case K::Feedback: {
                const Signature s = walk(e.child(), path + "/0");
                const Symbol& r = e.feedback_input();
                const Symbol& sout = e.feedback_output();
                if (s.sigma.empty())
                    violate(Violation::Kind::FeedbackOnClosedModule, path,
                            "feedback is not defined for an empty input vocabulary");
                if (!s.sigma.contains(r))
                    violate(Violation::Kind::FeedbackInputMissing, path,
                            "feedback input " + r.text() + " is not an instance symbol");
                if (!s.epsilon.contains(sout))
                    violate(Violation::Kind::FeedbackOutputMissing, path,
                            "feedback output " + sout.text() + " is not an expansion symbol");
                if (r.arity != sout.arity)
                    violate(Violation::Kind::FeedbackArityMismatch, path,
                            "feedback symbols " + r.text() + " and " + sout.text() +
                                " differ in arity");
                return Signature{voc_minus(s.sigma, Vocabulary{r}),
                                 merge(s.epsilon, Vocabulary{r}, path)};
            }
            case K::Complement: return walk(e.child(), path + "/0");
        }
        return {};
    }
};

}  // namespace

WellFormednessReport check_wellformed(const ModuleExpr& e) {
    Checker c;
    c.walk(e, "/");
    return c.report;
}

Signature signature_of(const ModuleExpr& e) {
    Checker c;
    const Signature sig = c.walk(e, "/");
    if (!c.report.ok) {
        const Violation& v = c.report.violations.front();
        throw PreconditionError(std::string("expression is not well-formed: ") +
                                violation_name(v.kind) + " at " + v.path + ": " + v.message);
    }
    return sig;
}

namespace {

void collect_subsystems(const ModuleExpr& e, const std::string& path,
                        std::vector<Subsystem>& out) {
    using K = ModuleExpr::Kind;
    switch (e.kind()) {
        case K::Prim: break;
        case K::Compose:
        case K::Union:
            collect_subsystems(e.left(), path == "/" ? "/0" : path + "/0", out);
            collect_subsystems(e.right(), path == "/" ? "/1" : path + "/1", out);
            break;
        default:
            collect_subsystems(e.child(), path == "/" ? "/0" : path + "/0", out);
    }
    out.push_back(Subsystem{path, e});
}

}  // namespace

std::vector<Subsystem> subsystems(const ModuleExpr& e) {
    std::vector<Subsystem> out;
    collect_subsystems(e, "/", out);
    return out;
}

Vocabulary vocab_all(const ModuleExpr& e) {
    Vocabulary out;
    for (const Subsystem& s : subsystems(e))
        if (s.expr.kind() == ModuleExpr::Kind::Prim)
            out = voc_union(out, s.expr.module()->signature().vocab());
    return out;
}

const Domain& expr_domain(const ModuleExpr& e) {
    for (const Subsystem& s : subsystems(e))
        if (s.expr.kind() == ModuleExpr::Kind::Prim) return s.expr.module()->domain();
    throw Error("expression has no primitive modules");
}

}  // namespace modsys
