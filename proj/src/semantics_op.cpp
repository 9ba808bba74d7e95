#include "modsys/semantics_op.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace modsys {

std::string DerivationTree::render() const {
    std::string out;
    const std::function<void(const DerivationTree&, int)> rec = [&](const DerivationTree& t,
                                                                    int depth) {
        out.append(static_cast<std::size_t>(2 * depth), ' ');
        out += t.rule + " " + t.expr + ": " + t.source.text() + " -> " + t.target.text();
        if (!t.side_condition.empty()) out += "  [" + t.side_condition + "]";
        out += '\n';
        for (const DerivationTree& c : t.children) rec(c, depth + 1);
    };
    rec(*this, 0);
    return out;
}

namespace {

std::vector<std::size_t> bits_of(std::uint64_t mask, std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (mask & (std::uint64_t{1} << i)) out.push_back(i);
    return out;
}

std::uint64_t scatter(std::uint64_t compact, const std::vector<std::size_t>& bits) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (compact & (std::uint64_t{1} << i)) m |= std::uint64_t{1} << bits[i];
    return m;
}

void sort_unique(std::vector<std::uint64_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

StepRelation::StepRelation(ModuleExpr e, Vocabulary tau, Domain domain, const EvalOptions& opts)
    : expr_(std::move(e)), domain_(std::move(domain)), opts_(opts) {
    const Signature root_sig = signature_of(expr_);  // rejects ill-formed expressions
    if (!vocab_all(expr_).subset_of(tau))
        throw PreconditionError("tau must subsume every symbol of the system, including hidden ones");
    if (expr_domain(expr_) != domain_)
        throw VocabularyMismatchError("expression primitives are over a different domain");
    (void)root_sig;
    table_ = std::make_unique<AtomTable>(std::move(tau), domain_);
    state_count_ = table_->enumerable_count(opts_.ceiling);
    build(expr_);
}

void StepRelation::build(const ModuleExpr& e) {
    using K = ModuleExpr::Kind;
    if (nodes_.count(e.id())) return;
    switch (e.kind()) {
        case K::Prim: break;
        case K::Compose:
        case K::Union:
            build(e.left());
            build(e.right());
            break;
        default:
            build(e.child());
    }

    NodeData nd{e, signature_of(e), 0, 0, {}, {}, {}};
    nd.sigma_mask = table_->vocab_mask(nd.sig.sigma);
    nd.eps_mask = table_->vocab_mask(nd.sig.epsilon);
    nd.succ.assign(state_count_, {});

    auto for_states = [&](auto&& fn) {
        if (opts_.exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
            for (long long s = 0; s < static_cast<long long>(state_count_); ++s)
                fn(static_cast<std::uint64_t>(s));
        } else {
            for (std::uint64_t s = 0; s < state_count_; ++s) fn(s);
        }
    };

    switch (e.kind()) {
        case K::Prim: {
            for (const Structure& b : e.module()->extension(opts_)) {
                const std::uint64_t x = table_->mask_of(b);
                nd.ext_by_sigma[x & nd.sigma_mask].push_back(x);
            }
            for_states([&](std::uint64_t m) {
                auto it = nd.ext_by_sigma.find(m & nd.sigma_mask);
                if (it == nd.ext_by_sigma.end()) return;
                auto& out = nd.succ[m];
                for (std::uint64_t x : it->second)
                    out.push_back((m & ~nd.eps_mask) | (x & nd.eps_mask));
                sort_unique(out);
            });
            break;
        }
        case K::Project: {
            const NodeData& c = data(e.child());
            const std::uint64_t nu = table_->vocab_mask(e.onto());
            const std::uint64_t full = state_count_ - 1;
            const std::uint64_t frame = full & ~(nu | c.eps_mask);
            const auto off_nu = bits_of(full & ~nu, table_->size());
            const auto free_bits = bits_of(c.eps_mask & ~nu, table_->size());
            const std::uint64_t off_count = std::uint64_t{1} << off_nu.size();
            const std::uint64_t free_count = std::uint64_t{1} << free_bits.size();
            for_states([&](std::uint64_t m) {
                auto& out = nd.succ[m];
                for (std::uint64_t y = 0; y < off_count; ++y) {
                    const std::uint64_t b1p = (m & nu) | scatter(y, off_nu);
                    for (std::uint64_t b2p : c.succ[b1p]) {
                        const std::uint64_t base = (b2p & nu) | (m & frame);
                        for (std::uint64_t z = 0; z < free_count; ++z)
                            out.push_back(base | scatter(z, free_bits));
                    }
                }
                sort_unique(out);
            });
            break;
        }
        case K::Compose: {
            const NodeData& l = data(e.left());
            const NodeData& r = data(e.right());
            for_states([&](std::uint64_t m) {
                auto& out = nd.succ[m];
                for (std::uint64_t mid : l.succ[m])
                    out.insert(out.end(), r.succ[mid].begin(), r.succ[mid].end());
                sort_unique(out);
            });
            break;
        }
        case K::Union: {
            const NodeData& l = data(e.left());
            const NodeData& r = data(e.right());
            for_states([&](std::uint64_t m) {
                auto& out = nd.succ[m];
                out = l.succ[m];
                out.insert(out.end(), r.succ[m].begin(), r.succ[m].end());
                sort_unique(out);
            });
            break;
        }
        case K::Feedback: {
            const NodeData& c = data(e.child());
            const auto r_bits = table_->symbol_bits(e.feedback_input());
            const auto s_bits = table_->symbol_bits(e.feedback_output());
            assert(r_bits.size() == s_bits.size());
            for_states([&](std::uint64_t m) {
                auto& out = nd.succ[m];
                for (std::uint64_t b2 : c.succ[m]) {
                    bool equal = true;
                    for (std::size_t i = 0; i < r_bits.size() && equal; ++i)
                        equal = ((m >> r_bits[i]) & 1) == ((b2 >> s_bits[i]) & 1);
                    if (equal) out.push_back(b2);
                }
            });
            break;
        }
        case K::Complement: {
            const NodeData& c = data(e.child());
            const auto eps_bits = bits_of(nd.eps_mask, table_->size());
            const std::uint64_t eps_count = std::uint64_t{1} << eps_bits.size();
            for_states([&](std::uint64_t m) {
                auto& out = nd.succ[m];
                for (std::uint64_t y = 0; y < eps_count; ++y) {
                    const std::uint64_t eps_part = scatter(y, eps_bits);
                    const std::uint64_t induced = (m & nd.sigma_mask) | eps_part;
                    if (!std::binary_search(c.model_masks.begin(), c.model_masks.end(), induced))
                        out.push_back((m & ~nd.eps_mask) | eps_part);
                }
                sort_unique(out);
            });
            break;
        }
    }

    // the node's operational model set over sigma U epsilon
    std::vector<std::uint64_t> models;
    for (std::uint64_t m = 0; m < state_count_; ++m)
        for (std::uint64_t b2 : nd.succ[m])
            models.push_back((m & nd.sigma_mask) | (b2 & nd.eps_mask));
    sort_unique(models);
    nd.model_masks = std::move(models);

    nodes_.emplace(e.id(), std::move(nd));
}

const std::vector<std::uint64_t>& StepRelation::successors(std::uint64_t state) const {
    return data(expr_).succ[state];
}

bool StepRelation::derivable(std::uint64_t source, std::uint64_t target) const {
    const auto& s = successors(source);
    return std::binary_search(s.begin(), s.end(), target);
}

ModelSet StepRelation::op_models() const {
    const NodeData& root = data(expr_);
    ModelSet out{root.sig, domain_, {}};
    const Vocabulary vocab = root.sig.vocab();
    out.structures.reserve(root.model_masks.size());
    for (std::uint64_t m : root.model_masks) out.structures.push_back(table_->structure_of(m, vocab));
    std::sort(out.structures.begin(), out.structures.end());
    return out;
}

std::optional<DerivationTree> StepRelation::trace(std::uint64_t source,
                                                  std::uint64_t target) const {
    return trace_node(expr_, source, target);
}

std::optional<DerivationTree> StepRelation::trace_node(const ModuleExpr& e, std::uint64_t m1,
                                                       std::uint64_t m2) const {
    using K = ModuleExpr::Kind;
    const NodeData& nd = data(e);
    if (!std::binary_search(nd.succ[m1].begin(), nd.succ[m1].end(), m2)) return std::nullopt;

    DerivationTree t;
    t.expr = e.text();
    t.source = table_->structure_of(m1);
    t.target = table_->structure_of(m2);
    const Vocabulary vocab = nd.sig.vocab();

    switch (e.kind()) {
        case K::Prim: {
            t.rule = "primitive";
            t.side_condition = table_->structure_of(m2 & (nd.sigma_mask | nd.eps_mask), vocab).text() +
                               " in " + e.module()->name() + "; inertia off " +
                               nd.sig.epsilon.text();
            return t;
        }
        case K::Project: {
            const NodeData& c = data(e.child());
            const std::uint64_t nu = table_->vocab_mask(e.onto());
            const std::uint64_t full = state_count_ - 1;
            const auto off_nu = bits_of(full & ~nu, table_->size());
            const std::uint64_t off_count = std::uint64_t{1} << off_nu.size();
            for (std::uint64_t y = 0; y < off_count; ++y) {
                const std::uint64_t b1p = (m1 & nu) | scatter(y, off_nu);
                for (std::uint64_t b2p : c.succ[b1p]) {
                    if ((b2p & nu) != (m2 & nu)) continue;
                    auto child = trace_node(e.child(), b1p, b2p);
                    if (!child) continue;
                    t.rule = "projection";
                    t.side_condition = "inner B1' = " + table_->structure_of(b1p).text() +
                                       ", inner B2' = " + table_->structure_of(b2p).text();
                    t.children.push_back(std::move(*child));
                    return t;
                }
            }
            return std::nullopt;
        }
        case K::Compose: {
            const NodeData& l = data(e.left());
            for (std::uint64_t mid : l.succ[m1]) {
                const NodeData& r = data(e.right());
                if (!std::binary_search(r.succ[mid].begin(), r.succ[mid].end(), m2)) continue;
                auto lt = trace_node(e.left(), m1, mid);
                auto rt = trace_node(e.right(), mid, m2);
                if (!lt || !rt) continue;
                t.rule = "composition";
                t.side_condition = "intermediate B' = " + table_->structure_of(mid).text();
                t.children.push_back(std::move(*lt));
                t.children.push_back(std::move(*rt));
                return t;
            }
            return std::nullopt;
        }
        case K::Union: {
            if (auto lt = trace_node(e.left(), m1, m2)) {
                t.rule = "union-left";
                t.children.push_back(std::move(*lt));
                return t;
            }
            if (auto rt = trace_node(e.right(), m1, m2)) {
                t.rule = "union-right";
                t.children.push_back(std::move(*rt));
                return t;
            }
            return std::nullopt;
        }
        case K::Feedback: {
            auto ct = trace_node(e.child(), m1, m2);
            if (!ct) return std::nullopt;
            t.rule = "feedback";
            const Vocabulary rv{e.feedback_input()};
            const Vocabulary sv{e.feedback_output()};
            t.side_condition = e.feedback_input().name + "^B1 = " +
                               restrict_to(t.source, rv).text() + " matches " +
                               e.feedback_output().name + "^B2 = " +
                               restrict_to(t.target, sv).text();
            t.children.push_back(std::move(*ct));
            return t;
        }
        case K::Complement: {
            const NodeData& c = data(e.child());
            const std::uint64_t induced = (m1 & nd.sigma_mask) | (m2 & nd.eps_mask);
            assert(!std::binary_search(c.model_masks.begin(), c.model_masks.end(), induced));
            (void)c;
            t.rule = "complement";
            t.side_condition = table_->structure_of(induced, vocab).text() +
                               " is not a model of " + e.child().text();
            return t;
        }
    }
    return std::nullopt;
}

std::vector<Structure> step(const ModuleExpr& e, const Structure& b1, const EvalOptions& opts) {
    StepRelation rel(e, b1.vocab(), b1.domain(), opts);
    const std::uint64_t m1 = rel.table().mask_of(b1);
    std::vector<Structure> out;
    for (std::uint64_t m2 : rel.successors(m1)) out.push_back(rel.table().structure_of(m2));
    std::sort(out.begin(), out.end());
    return out;
}

ModelSet op_models(const ModuleExpr& e, const Vocabulary& tau, const Domain& domain,
                   const EvalOptions& opts) {
    return StepRelation(e, tau, domain, opts).op_models();
}

bool is_fixpoint(const ModuleExpr& e, const Structure& b, const EvalOptions& opts) {
    StepRelation rel(e, b.vocab(), b.domain(), opts);
    const std::uint64_t m = rel.table().mask_of(b);
    return rel.derivable(m, m);
}

std::optional<DerivationTree> derivation_trace(const ModuleExpr& e, const Structure& b1,
                                               const Structure& b2, const EvalOptions& opts) {
    if (b1.vocab() != b2.vocab() || b1.domain() != b2.domain())
        throw PreconditionError("both tau-states must be over the same tau and domain");
    StepRelation rel(e, b1.vocab(), b1.domain(), opts);
    return rel.trace(rel.table().mask_of(b1), rel.table().mask_of(b2));
}

}  // namespace modsys
