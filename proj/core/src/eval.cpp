#include "folds/eval.hpp"

#include <algorithm>

namespace folds {

namespace {

std::uint64_t pack(SortId s, std::uint32_t e) { return (static_cast<std::uint64_t>(s.value) << 32) | e; }

}  // namespace

std::size_t Evaluator::KeyHash::operator()(const std::vector<std::uint64_t>& k) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto v : k) h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

Boundary Evaluator::lookup(const std::vector<std::string>& vars, const Frame& fr) const {
    Boundary b;
    b.reserve(vars.size());
    for (const auto& v : vars) b.push_back(fr.env.at(v));
    return b;
}

Card Evaluator::card(const Context& ctx, const Formula& f, const Assignment& a) {
    check_formula(ctx, f);
    Frame fr{ctx, {}};
    for (const auto& v : ctx.dep_closure(f->free_vars)) {
        auto it = a.find(v);
        if (it == a.end()) throw Error(ErrorKind::UnboundVariable, "no value assigned to '" + v + "'");
        const auto& d = ctx.decl(v);
        if (it->second >= m_->size(d.sort))
            throw Error(ErrorKind::SortMismatch, "value of '" + v + "' is not an element of sort " +
                                                     m_->signature().sort_name(d.sort));
        fr.env.emplace(v, it->second);
    }
    for (const auto& [v, e] : fr.env) {
        const auto& d = ctx.decl(v);
        if (lookup(d.args, fr) != m_->element(d.sort, e).args)
            throw Error(ErrorKind::BoundaryMismatch,
                        "value of '" + v + "' does not lie over the values of its boundary variables");
    }
    return eval(f, fr);
}

Card Evaluator::eval(const Formula& f, Frame& fr) {
    switch (f->kind) {
        case FormulaKind::Top: return Card(1);
        case FormulaKind::Bottom: return Card(0);
        case FormulaKind::Atom: return Card(m_->fiber_unchecked(f->sort, lookup(f->args, fr)).size()).clamp();
        default: break;
    }
    std::vector<std::uint64_t> key;
    key.reserve(f->free_vars.size() + 1);
    key.push_back(reinterpret_cast<std::uintptr_t>(f.get()));
    for (const auto& v : f->free_vars) key.push_back(pack(fr.ctx.sort_of(v), fr.env.at(v)));
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    Card result;
    switch (f->kind) {
        case FormulaKind::And: {
            result = Card(1);
            for (const auto& c : f->children) {
                result *= eval(c, fr);
                if (result.is_zero()) break;
            }
            break;
        }
        case FormulaKind::Or: {
            result = eval(f->children[0], fr);
            if (result.is_zero()) result = eval(f->children[1], fr);
            result = result.clamp();
            break;
        }
        case FormulaKind::Implies: {
            Card a = eval(f->children[0], fr);
            Card b = a.is_zero() ? Card(1) : eval(f->children[1], fr);
            result = Card::pow(b, a);
            break;
        }
        case FormulaKind::Iff: {
            Card a = eval(f->children[0], fr);
            Card b = eval(f->children[1], fr);
            result = Card::pow(b, a) * Card::pow(a, b);
            break;
        }
        case FormulaKind::Forall:
        case FormulaKind::Exists:
        case FormulaKind::Sigma: result = eval_binder(f, fr); break;
        case FormulaKind::Equiv:
            result = eval_reference(expander_.expand_equiv(fr.ctx, f->sort, f->args, f->rhs_args), fr);
            break;
        case FormulaKind::Ind: result = eval_reference(expander_.expand_ind(fr.ctx, f->args[0], f->args[1]), fr); break;
        default: break;
    }
    pinned_.emplace(f.get(), f);
    memo_.emplace(std::move(key), result);
    return result;
}

Card Evaluator::eval_binder(const Formula& f, Frame& fr) {
    const VarDecl& v = f->binder;
    const auto& domain = m_->fiber_unchecked(v.sort, lookup(v.args, fr));
    fr.ctx.add(v);
    Card acc = f->kind == FormulaKind::Forall ? Card(1) : Card(0);
    for (auto e : domain) {
        fr.env[v.name] = e;
        Card c = eval(f->children[0], fr);
        if (f->kind == FormulaKind::Forall) {
            acc *= c;
            if (acc.is_zero()) break;
        } else if (f->kind == FormulaKind::Exists) {
            if (c.truthy()) {
                acc = Card(1);
                break;
            }
        } else {
            acc += c;
        }
    }
    fr.env.erase(v.name);
    fr.ctx.pop_back();
    return acc;
}

Card Evaluator::eval_reference(const Expander::Instance& inst, Frame& fr) {
    const auto& ex = *inst.expansion;
    const auto& decls = ex.context.decls();
    std::unordered_map<std::string, std::uint32_t> env;
    for (std::size_t i = 0; i < decls.size(); ++i) env.emplace(decls[i].name, fr.env.at(inst.actual[i]));

    const Formula& f = ex.formula;
    std::vector<std::uint64_t> key;
    key.push_back(reinterpret_cast<std::uintptr_t>(f.get()));
    for (const auto& v : f->free_vars) key.push_back(pack(ex.context.sort_of(v), env.at(v)));
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    Frame inner{ex.context, std::move(env)};
    return eval(f, inner);
}

Card eval_card(const FinStructure& m, const Context& ctx, const Formula& f, const Assignment& a) {
    Evaluator ev(m);
    return ev.card(ctx, f, a);
}

bool eval_prop(const FinStructure& m, const Context& ctx, const Formula& f, const Assignment& a) {
    return eval_card(m, ctx, f, a).truthy();
}

bool satisfies(const FinStructure& m, const Formula& f) {
    if (!f->free_vars.empty()) throw Error(ErrorKind::OpenFormula, "formula has free variable '" + f->free_vars.front() + "'");
    Context ctx(m.signature());
    return eval_prop(m, ctx, f, {});
}

ModelReport check_model(const FinStructure& m, const Theory& t) {
    ModelReport r;
    Evaluator ev(m);
    Context ctx(m.signature());
    for (const auto& [name, f] : t.axioms) {
        if (!f->free_vars.empty())
            throw Error(ErrorKind::OpenFormula, "axiom " + name + " has free variable '" + f->free_vars.front() + "'");
        if (!ev.holds(ctx, f, {})) {
            r.ok = false;
            r.failed.push_back(name);
        }
    }
    return r;
}

// ---------------------------------------------------------------- element contexts

const std::string& ElementContext::var(ElemRef e) {
    if (auto it = names_.find(e); it != names_.end()) return it->second;
    const auto& sig = m_->signature();
    std::vector<std::string> args;
    const auto& el = m_->element(e);
    for (std::size_t j = 0; j < el.args.size(); ++j)
        args.push_back(var(ElemRef{sig.cod(sig.direct_arrows(e.sort)[j]), el.args[j]}));
    std::string name = ctx_.fresh_name(e.sort);
    ctx_.add(name, e.sort, std::move(args));
    assignment_[name] = e.index;
    return names_.emplace(e, name).first->second;
}

std::vector<std::string> ElementContext::vars(SortId s, const Boundary& b) {
    const auto& sig = m_->signature();
    if (!m_->boundary_consistent(s, b))
        throw Error(ErrorKind::InvalidBoundary, m_->display_boundary(s, b) + " is not a boundary for " + sig.sort_name(s));
    std::vector<std::string> out;
    for (std::size_t j = 0; j < b.size(); ++j) out.push_back(var(ElemRef{sig.cod(sig.direct_arrows(s)[j]), b[j]}));
    return out;
}

const std::string& ElementContext::add_distinct(SortId s, const Boundary& b, std::uint32_t value) {
    auto args = vars(s, b);
    std::string name = ctx_.fresh_name(s);
    ctx_.add(name, s, std::move(args));
    assignment_[name] = value;
    return ctx_.decls().back().name;
}

Card iso_card(Evaluator& ev, SortId k, std::uint32_t a, std::uint32_t b) {
    ElementContext ec(ev.structure());
    std::string x = ec.var(ElemRef{k, a});
    std::string y = ec.var(ElemRef{k, b});
    return ev.card(ec.context(), make_ind(x, y), ec.assignment());
}

Card fiber_iso_card(Evaluator& ev, SortId k, const Boundary& b, std::uint32_t x, std::uint32_t y) {
    ElementContext ec(ev.structure());
    std::string vx = ec.add_distinct(k, b, x);
    std::string vy = ec.add_distinct(k, b, y);
    return ev.card(ec.context(), make_ind(vx, vy), ec.assignment());
}

// ---------------------------------------------------------------- saturation

SaturationReport check_saturation(Evaluator& ev, SortId k) {
    const auto& m = ev.structure();
    SaturationReport r{k, true, {}};
    for (const auto& b : m.boundaries(k)) {
        const auto& fib = m.fiber_unchecked(k, b);
        for (auto x : fib) {
            for (auto y : fib) {
                Card c = fiber_iso_card(ev, k, b, x, y);
                Card want(x == y ? 1 : 0);
                if (!(c == want)) {
                    r.saturated = false;
                    r.violations.push_back({k, b, x, y, c});
                }
            }
        }
    }
    return r;
}

SaturationReport check_saturation(const FinStructure& m, SortId k) {
    Evaluator ev(m);
    return check_saturation(ev, k);
}

SaturationProfile saturation_profile(const FinStructure& m) {
    const auto& sig = m.signature();
    Evaluator ev(m);
    SaturationProfile p;
    for (auto s : sig.sorts()) p.sorts.push_back(check_saturation(ev, s));
    p.levels.assign(static_cast<std::size_t>(sig.height()), true);
    for (auto s : sig.sorts()) {
        if (p.sorts[s.value].saturated) continue;
        p.total = false;
        for (int n = sig.level(s); n <= sig.height(); ++n) p.levels[static_cast<std::size_t>(n - 1)] = false;
    }
    return p;
}

bool is_n_saturated(const FinStructure& m, int n) {
    Evaluator ev(m);
    for (auto s : m.signature().sorts())
        if (m.signature().level(s) <= n && !check_saturation(ev, s).saturated) return false;
    return true;
}

bool is_totally_saturated(const FinStructure& m) { return is_n_saturated(m, m.signature().height()); }

// ---------------------------------------------------------------- equivalence counts

Card equiv_card(Evaluator& ev, SortId k, const Boundary& d1, const Boundary& d2) {
    ElementContext ec(ev.structure());
    auto alpha = ec.vars(k, d1);
    auto beta = ec.vars(k, d2);
    return ev.card(ec.context(), make_equiv(k, alpha, beta), ec.assignment());
}

Card equiv_card_via_bijections(Evaluator& ev, SortId k, const Boundary& d1, const Boundary& d2) {
    const auto& m = ev.structure();
    const auto& sig = m.signature();
    if (!is_n_saturated(m, sig.level(k)))
        throw Error(ErrorKind::NotSaturated, "structure " + m.name() + " is not saturated up to level " +
                                                 std::to_string(sig.level(k)));
    ElementContext ec(m);
    ec.vars(k, d1);
    ec.vars(k, d2);
    const std::string x = ec.add_distinct(k, d1, 0);
    const std::string y = ec.add_distinct(k, d2, 0);
    const auto& f1 = m.fiber(k, d1);
    const auto& f2 = m.fiber(k, d2);
    if (f1.size() != f2.size()) return Card(0);
    const std::size_t n = f1.size();
    if (n > 20) throw Error(ErrorKind::PreconditionViolation, "fibers too large for bijection counting");
    if (n == 0) return Card(1);
    // x and y are rebound for every pair.
    Formula rel = make_ind(x, y);
    std::vector<std::vector<bool>> ok(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Assignment a = ec.assignment();
            a[x] = f1[i];
            a[y] = f2[j];
            ok[i][j] = ev.holds(ec.context(), rel, a);
        }
    // Perfect matchings inside the relation, by subset dynamic programming.
    std::vector<Card> dp(std::size_t{1} << n);
    dp[0] = Card(1);
    for (std::size_t mask = 0; mask < dp.size(); ++mask) {
        if (dp[mask].is_zero()) continue;
        auto i = static_cast<std::size_t>(__builtin_popcountll(mask));
        if (i >= n) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (!(mask >> j & 1) && ok[i][j]) dp[mask | (std::size_t{1} << j)] += dp[mask];
    }
    return dp.back();
}

}  // namespace folds
