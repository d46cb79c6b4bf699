#include "folds/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace folds {

// ---------------------------------------------------------------- contexts

void Context::check_boundary(SortId sort, const std::vector<std::string>& args) const {
    const auto& sig = *sig_;
    const auto& direct = sig.direct_arrows(sort);
    if (args.size() != direct.size())
        throw Error(ErrorKind::BoundaryMismatch, "sort " + sig.sort_name(sort) + " takes " +
                                                     std::to_string(direct.size()) + " arguments, got " +
                                                     std::to_string(args.size()));
    for (std::size_t i = 0; i < args.size(); ++i) {
        auto it = index_.find(args[i]);
        if (it == index_.end()) throw Error(ErrorKind::UnboundVariable, "unbound variable '" + args[i] + "'");
        SortId want = sig.cod(direct[i]);
        SortId got = decls_[it->second].sort;
        if (want != got)
            throw Error(ErrorKind::SortMismatch, "argument " + sig.direct_arrow_name(sort, i) + " of " +
                                                     sig.sort_name(sort) + " must have sort " + sig.sort_name(want) +
                                                     ", but '" + args[i] + "' has sort " + sig.sort_name(got));
    }
    for (ArrowId a : sig.positions(sort)) {
        const auto& paths = sig.arrow_step_paths(a);
        std::string first;
        for (std::size_t k = 0; k < paths.size(); ++k) {
            const auto& steps = paths[k];
            std::string v = args[steps[0]];
            for (std::size_t j = 1; j < steps.size(); ++j) v = decl(v).args[steps[j]];
            if (k == 0)
                first = v;
            else if (v != first)
                throw Error(ErrorKind::BoundaryMismatch,
                            "arguments of " + sig.sort_name(sort) + " violate an equation at position " +
                                sig.arrow_label(a) + " ('" + first + "' vs '" + v + "')");
        }
    }
}

std::string Context::boundary_projection(SortId sort, const std::vector<std::string>& args, ArrowId a) const {
    if (sig_->is_identity(a)) throw Error(ErrorKind::PreconditionViolation, "identity has no boundary projection");
    const auto& steps = sig_->arrow_step_paths(a).front();
    std::string v = args.at(steps[0]);
    for (std::size_t j = 1; j < steps.size(); ++j) v = decl(v).args.at(steps[j]);
    (void)sort;
    return v;
}

void Context::add(VarDecl d) {
    if (d.name.empty()) throw Error(ErrorKind::IllFormedContext, "empty variable name");
    if (contains(d.name)) throw Error(ErrorKind::IllFormedContext, "variable '" + d.name + "' declared twice");
    if (d.sort.value >= sig_->sort_count()) throw Error(ErrorKind::UnknownSort, "sort id out of range");
    check_boundary(d.sort, d.args);
    index_.emplace(d.name, decls_.size());
    decls_.push_back(std::move(d));
}

const std::string& Context::add(std::string name, SortId sort, std::vector<std::string> args) {
    add(VarDecl{std::move(name), sort, std::move(args)});
    return decls_.back().name;
}

void Context::pop_back() {
    if (decls_.empty()) throw Error(ErrorKind::PreconditionViolation, "pop from empty context");
    index_.erase(decls_.back().name);
    decls_.pop_back();
}

const VarDecl& Context::decl(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error(ErrorKind::UnboundVariable, "unbound variable '" + name + "'");
    return decls_[it->second];
}

std::string Context::projection(const std::string& name, ArrowId a) const {
    const auto& d = decl(name);
    if (sig_->dom(a) != d.sort)
        throw Error(ErrorKind::SortMismatch, "arrow " + sig_->arrow_label(a) + " does not leave sort " +
                                                 sig_->sort_name(d.sort));
    if (sig_->is_identity(a)) return name;
    return boundary_projection(d.sort, d.args, a);
}

std::vector<std::string> Context::dep(const std::string& name) const { return dep_closure({name}); }

std::vector<std::string> Context::boundary(const std::string& name) const {
    auto out = dep(name);
    out.erase(std::remove(out.begin(), out.end(), name), out.end());
    return out;
}

std::vector<std::string> Context::dep_closure(const std::vector<std::string>& names) const {
    std::vector<bool> in(decls_.size(), false);
    std::vector<std::size_t> work;
    for (const auto& n : names) {
        auto it = index_.find(n);
        if (it == index_.end()) throw Error(ErrorKind::UnboundVariable, "unbound variable '" + n + "'");
        work.push_back(it->second);
    }
    while (!work.empty()) {
        auto i = work.back();
        work.pop_back();
        if (in[i]) continue;
        in[i] = true;
        for (const auto& a : decls_[i].args) work.push_back(index_.at(a));
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < decls_.size(); ++i)
        if (in[i]) out.push_back(decls_[i].name);
    return out;
}

Context Context::restrict_to(const std::vector<std::string>& names) const {
    std::set<std::string> keep(names.begin(), names.end());
    Context out(*sig_);
    for (const auto& d : decls_)
        if (keep.count(d.name)) {
            try {
                out.add(d);
            } catch (const Error&) {
                throw Error(ErrorKind::IllFormedContext, "variables are not closed under projection at '" + d.name + "'");
            }
        }
    return out;
}

std::string Context::fresh_name(SortId sort, const std::set<std::string>& avoid) const {
    const std::string prefix = var_prefix(*sig_, sort);
    for (std::size_t k = 1;; ++k) {
        std::string candidate = prefix + std::to_string(k);
        if (!contains(candidate) && !avoid.count(candidate)) return candidate;
    }
}

Context union_contexts(const Context& a, const Context& b) {
    if (&a.signature() != &b.signature() && a.signature().name() != b.signature().name())
        throw Error(ErrorKind::IllFormedContext, "contexts over different signatures");
    Context out = a;
    for (const auto& d : b.decls()) {
        if (out.contains(d.name)) {
            if (!(out.decl(d.name) == d))
                throw Error(ErrorKind::IllFormedContext, "conflicting declarations of '" + d.name + "'");
            continue;
        }
        out.add(d);
    }
    return out;
}

std::string var_prefix(const Signature& sig, SortId sort) {
    auto initial = [&](SortId s) {
        return static_cast<char>(std::tolower(static_cast<unsigned char>(sig.sort_name(s).front())));
    };
    const char mine = initial(sort);
    bool unique = std::isalpha(static_cast<unsigned char>(mine)) != 0;
    for (auto s : sig.sorts())
        if (s != sort && initial(s) == mine) unique = false;
    if (unique) return std::string(1, mine);
    std::string out;
    for (char c : sig.sort_name(sort))
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (out.empty() || !std::isalpha(static_cast<unsigned char>(out.front()))) out = "v" + out;
    return out + "_";
}

// ---------------------------------------------------------------- formulas

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::shared_ptr<FormulaNode> node(FormulaKind k) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = k;
    return n;
}

Formula finish_compound(std::shared_ptr<FormulaNode> n) {
    std::vector<std::string> fv;
    for (const auto& c : n->children) fv.insert(fv.end(), c->free_vars.begin(), c->free_vars.end());
    n->free_vars = sorted_unique(std::move(fv));
    return n;
}

}  // namespace

Formula make_top() {
    static const Formula top = node(FormulaKind::Top);
    return top;
}

Formula make_bottom() {
    static const Formula bottom = node(FormulaKind::Bottom);
    return bottom;
}

Formula make_atom(SortId sort, std::vector<std::string> args) {
    auto n = node(FormulaKind::Atom);
    n->sort = sort;
    n->args = std::move(args);
    n->free_vars = sorted_unique(n->args);
    return n;
}

Formula make_and(std::vector<Formula> parts) {
    if (parts.empty()) return make_top();
    if (parts.size() == 1) return parts.front();
    auto n = node(FormulaKind::And);
    n->children = std::move(parts);
    return finish_compound(n);
}

namespace {
Formula binary(FormulaKind k, Formula a, Formula b) {
    auto n = node(k);
    n->children = {std::move(a), std::move(b)};
    return finish_compound(n);
}
}  // namespace

Formula make_or(Formula a, Formula b) { return binary(FormulaKind::Or, std::move(a), std::move(b)); }
Formula make_implies(Formula a, Formula b) { return binary(FormulaKind::Implies, std::move(a), std::move(b)); }
Formula make_iff(Formula a, Formula b) { return binary(FormulaKind::Iff, std::move(a), std::move(b)); }

Formula make_binder(FormulaKind kind, VarDecl v, Formula body) {
    if (kind != FormulaKind::Forall && kind != FormulaKind::Exists && kind != FormulaKind::Sigma)
        throw Error(ErrorKind::PreconditionViolation, "not a binder kind");
    auto n = node(kind);
    std::vector<std::string> fv;
    for (const auto& x : body->free_vars)
        if (x != v.name) fv.push_back(x);
    fv.insert(fv.end(), v.args.begin(), v.args.end());
    n->free_vars = sorted_unique(std::move(fv));
    n->binder = std::move(v);
    n->children = {std::move(body)};
    return n;
}

Formula make_forall(VarDecl v, Formula body) { return make_binder(FormulaKind::Forall, std::move(v), std::move(body)); }
Formula make_exists(VarDecl v, Formula body) { return make_binder(FormulaKind::Exists, std::move(v), std::move(body)); }
Formula make_sigma(VarDecl v, Formula body) { return make_binder(FormulaKind::Sigma, std::move(v), std::move(body)); }

Formula make_forall_all(const std::vector<VarDecl>& vs, Formula body) {
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = make_forall(*it, std::move(body));
    return body;
}

Formula make_equiv(SortId sort, std::vector<std::string> lhs, std::vector<std::string> rhs) {
    auto n = node(FormulaKind::Equiv);
    n->sort = sort;
    n->args = std::move(lhs);
    n->rhs_args = std::move(rhs);
    std::vector<std::string> fv = n->args;
    fv.insert(fv.end(), n->rhs_args.begin(), n->rhs_args.end());
    n->free_vars = sorted_unique(std::move(fv));
    return n;
}

Formula make_ind(std::string x, std::string y) {
    auto n = node(FormulaKind::Ind);
    n->args = {std::move(x), std::move(y)};
    n->free_vars = sorted_unique(n->args);
    return n;
}

const std::vector<std::string>& free_vars(const Formula& f) { return f->free_vars; }

std::vector<std::string> free_vars_closed(const Context& ctx, const Formula& f) {
    return ctx.dep_closure(f->free_vars);
}

void check_formula(const Context& ctx, const Formula& f) {
    switch (f->kind) {
        case FormulaKind::Top:
        case FormulaKind::Bottom: return;
        case FormulaKind::Atom: ctx.check_boundary(f->sort, f->args); return;
        case FormulaKind::Equiv:
            ctx.check_boundary(f->sort, f->args);
            ctx.check_boundary(f->sort, f->rhs_args);
            return;
        case FormulaKind::Ind: {
            const auto& x = ctx.decl(f->args[0]);
            const auto& y = ctx.decl(f->args[1]);
            if (x.sort != y.sort)
                throw Error(ErrorKind::SortMismatch, "Ind(" + x.name + "," + y.name + ") relates different sorts");
            return;
        }
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
        case FormulaKind::Iff:
            for (const auto& c : f->children) check_formula(ctx, c);
            return;
        case FormulaKind::Forall:
        case FormulaKind::Exists:
        case FormulaKind::Sigma: {
            if (ctx.contains(f->binder.name))
                throw Error(ErrorKind::IllFormedContext, "bound variable '" + f->binder.name + "' shadows a variable in scope");
            Context inner = ctx;
            inner.add(f->binder);
            check_formula(inner, f->children[0]);
            return;
        }
    }
}

// ---------------------------------------------------------------- renaming

namespace {

std::string rename_var(const Renaming& s, const std::string& v) {
    auto it = s.find(v);
    return it == s.end() ? v : it->second;
}

std::vector<std::string> rename_all(const Renaming& s, const std::vector<std::string>& vs) {
    std::vector<std::string> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(rename_var(s, v));
    return out;
}

Formula subst_rec(const Formula& f, const Renaming& s) {
    bool touches = false;
    for (const auto& v : f->free_vars)
        if (s.count(v)) touches = true;
    if (!touches) return f;
    switch (f->kind) {
        case FormulaKind::Top:
        case FormulaKind::Bottom: return f;
        case FormulaKind::Atom: return make_atom(f->sort, rename_all(s, f->args));
        case FormulaKind::Equiv: return make_equiv(f->sort, rename_all(s, f->args), rename_all(s, f->rhs_args));
        case FormulaKind::Ind: return make_ind(rename_var(s, f->args[0]), rename_var(s, f->args[1]));
        case FormulaKind::And: {
            std::vector<Formula> parts;
            for (const auto& c : f->children) parts.push_back(subst_rec(c, s));
            return make_and(std::move(parts));
        }
        case FormulaKind::Or:
        case FormulaKind::Implies:
        case FormulaKind::Iff: {
            return binary(f->kind, subst_rec(f->children[0], s), subst_rec(f->children[1], s));
        }
        case FormulaKind::Forall:
        case FormulaKind::Exists:
        case FormulaKind::Sigma: {
            VarDecl v = f->binder;
            v.args = rename_all(s, v.args);
            Renaming inner = s;
            inner.erase(v.name);
            bool clash = false;
            for (const auto& [from, to] : inner)
                if (to == v.name && std::binary_search(f->children[0]->free_vars.begin(),
                                                       f->children[0]->free_vars.end(), from))
                    clash = true;
            if (clash) {
                std::set<std::string> taken(f->children[0]->free_vars.begin(), f->children[0]->free_vars.end());
                for (const auto& [from, to] : inner) {
                    taken.insert(from);
                    taken.insert(to);
                }
                std::string fresh = v.name;
                while (taken.count(fresh)) fresh += '\'';
                inner[v.name] = fresh;
                v.name = fresh;
            }
            return make_binder(f->kind, std::move(v), subst_rec(f->children[0], inner));
        }
    }
    return f;
}

struct AlphaState {
    std::vector<std::pair<std::string, std::string>> bound;  // innermost last

    bool same_var(const std::string& a, const std::string& b) const {
        for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
            if (it->first == a || it->second == b) return it->first == a && it->second == b;
        }
        return a == b;
    }
    bool same_vars(const std::vector<std::string>& a, const std::vector<std::string>& b) const {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!same_var(a[i], b[i])) return false;
        return true;
    }
};

bool alpha_rec(const Formula& a, const Formula& b, AlphaState& st) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case FormulaKind::Top:
        case FormulaKind::Bottom: return true;
        case FormulaKind::Atom: return a->sort == b->sort && st.same_vars(a->args, b->args);
        case FormulaKind::Equiv:
            return a->sort == b->sort && st.same_vars(a->args, b->args) && st.same_vars(a->rhs_args, b->rhs_args);
        case FormulaKind::Ind: return st.same_vars(a->args, b->args);
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
        case FormulaKind::Iff:
            if (a->children.size() != b->children.size()) return false;
            for (std::size_t i = 0; i < a->children.size(); ++i)
                if (!alpha_rec(a->children[i], b->children[i], st)) return false;
            return true;
        case FormulaKind::Forall:
        case FormulaKind::Exists:
        case FormulaKind::Sigma: {
            if (a->binder.sort != b->binder.sort || !st.same_vars(a->binder.args, b->binder.args)) return false;
            st.bound.emplace_back(a->binder.name, b->binder.name);
            bool ok = alpha_rec(a->children[0], b->children[0], st);
            st.bound.pop_back();
            return ok;
        }
    }
    return false;
}

}  // namespace

Formula substitute(const Formula& f, const Renaming& s) { return subst_rec(f, s); }

bool alpha_eq(const Formula& a, const Formula& b) {
    AlphaState st;
    return alpha_rec(a, b, st);
}

std::optional<Renaming> ctx_eq(const Context& gamma, const Formula& phi, const Context& delta, const Formula& psi) {
    const auto& gd = gamma.decls();
    const auto& dd = delta.decls();
    if (gd.size() != dd.size()) return std::nullopt;
    Renaming s;
    std::vector<bool> used(dd.size(), false);
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
        if (i == gd.size()) return alpha_eq(substitute(phi, s), psi);
        for (std::size_t j = 0; j < dd.size(); ++j) {
            if (used[j] || dd[j].sort != gd[i].sort) continue;
            if (rename_all(s, gd[i].args) != dd[j].args) continue;
            used[j] = true;
            s[gd[i].name] = dd[j].name;
            if (go(i + 1)) return true;
            s.erase(gd[i].name);
            used[j] = false;
        }
        return false;
    };
    if (go(0)) return s;
    return std::nullopt;
}

Formula universal_closure(const Context& ctx, const Formula& f, const std::vector<std::string>& vars) {
    std::set<std::string> closing(vars.begin(), vars.end());
    for (const auto& v : closing) ctx.decl(v);
    for (const auto& d : ctx.decls()) {
        if (closing.count(d.name)) continue;
        for (const auto& b : ctx.boundary(d.name))
            if (closing.count(b))
                throw Error(ErrorKind::IllFormedContext,
                            "cannot close over '" + b + "': '" + d.name + "' depends on it and stays free");
    }
    std::vector<VarDecl> order;
    for (const auto& d : ctx.decls())
        if (closing.count(d.name)) order.push_back(d);
    return make_forall_all(order, f);
}

Formula simplify(const Formula& f) {
    switch (f->kind) {
        case FormulaKind::And: {
            std::vector<Formula> parts;
            for (const auto& c : f->children) {
                auto sc = simplify(c);
                if (sc->kind != FormulaKind::Top) parts.push_back(sc);
            }
            if (parts.empty()) return make_top();
            if (parts.size() == 1) return parts.front();
            return make_and(std::move(parts));
        }
        case FormulaKind::Or:
        case FormulaKind::Iff: {
            return binary(f->kind, simplify(f->children[0]), simplify(f->children[1]));
        }
        case FormulaKind::Implies: {
            auto rhs = simplify(f->children[1]);
            if (rhs->kind == FormulaKind::Top) return make_top();
            return make_implies(simplify(f->children[0]), rhs);
        }
        case FormulaKind::Forall: {
            auto body = simplify(f->children[0]);
            if (body->kind == FormulaKind::Top) return make_top();
            return make_forall(f->binder, body);
        }
        case FormulaKind::Exists:
        case FormulaKind::Sigma: return make_binder(f->kind, f->binder, simplify(f->children[0]));
        default: return f;
    }
}

std::vector<Formula> conjuncts(const Formula& f) {
    if (f->kind == FormulaKind::Top) return {};
    if (f->kind == FormulaKind::And) return f->children;
    return {f};
}

// ---------------------------------------------------------------- compatibility

bool is_compatible(const Context& ctx, const std::string& x, SortId r) {
    const auto& sig = ctx.signature();
    SortId k = ctx.sort_of(x);
    if (sig.level(r) >= sig.level(k)) return false;
    std::vector<ArrowId> outs{sig.identity(k)};
    outs.insert(outs.end(), sig.positions(k).begin(), sig.positions(k).end());
    for (ArrowId q : sig.hom(r, k)) {
        std::map<ArrowId, std::string> seen;
        for (ArrowId p : outs) {
            ArrowId composite = sig.then(q, p);
            std::string v = ctx.projection(x, p);
            auto [it, inserted] = seen.emplace(composite, v);
            if (!inserted && it->second != v) return false;
        }
    }
    return true;
}

std::vector<SortId> compatible_sorts(const Context& ctx, const std::string& x) {
    std::vector<SortId> out;
    for (auto r : ctx.signature().sorts())
        if (is_compatible(ctx, x, r)) out.push_back(r);
    return out;
}

}  // namespace folds
