#include "folds/isogen.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace folds {

namespace {

void check_pair(const Context& ctx, const std::string& x, const std::string& y) {
    if (ctx.sort_of(x) != ctx.sort_of(y))
        throw Error(ErrorKind::SortMismatch, "'" + x + "' and '" + y + "' have different sorts");
}

}  // namespace

std::vector<FillerPattern> enum_fillers(const Context& ctx, SortId r, ArrowId p, const std::string& x,
                                        const std::string& y) {
    const auto& sig = ctx.signature();
    check_pair(ctx, x, y);
    const SortId k = ctx.sort_of(x);
    if (sig.dom(p) != r || sig.cod(p) != k || sig.is_identity(p))
        throw Error(ErrorKind::SortMismatch, "arrow " + sig.arrow_label(p) + " is not in hom(" + sig.sort_name(r) +
                                                 ", " + sig.sort_name(k) + ")");
    if (!is_compatible(ctx, x, r) || !is_compatible(ctx, y, r))
        throw Error(ErrorKind::IncompatibleSort,
                    "sort " + sig.sort_name(r) + " is not compatible with both '" + x + "' and '" + y + "'");

    // Positions through p follow x on the alpha side and y on the beta side;
    // compatibility makes this well defined.
    std::map<ArrowId, std::string> val_a, val_b;
    std::vector<ArrowId> outs{sig.identity(k)};
    outs.insert(outs.end(), sig.positions(k).begin(), sig.positions(k).end());
    for (ArrowId rr : outs) {
        ArrowId q = sig.then(p, rr);
        val_a[q] = ctx.projection(x, rr);
        val_b[q] = ctx.projection(y, rr);
    }
    std::vector<ArrowId> shared;
    for (ArrowId q : sig.positions(r))
        if (!val_a.count(q)) shared.push_back(q);
    std::stable_sort(shared.begin(), shared.end(),
                     [&](ArrowId a, ArrowId b) { return sig.level(sig.cod(a)) > sig.level(sig.cod(b)); });

    const std::vector<std::string> base_pool = ctx.dep_closure({x, y});
    Context work = ctx;
    std::vector<VarDecl> fresh;
    std::vector<FillerPattern> out;

    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == shared.size()) {
            FillerPattern pat;
            for (ArrowId g : sig.direct_arrows(r)) {
                pat.alpha.push_back(val_a.at(g));
                pat.beta.push_back(val_b.at(g));
            }
            try {
                work.check_boundary(r, pat.alpha);
                work.check_boundary(r, pat.beta);
            } catch (const Error&) {
                return;
            }
            pat.fresh = fresh;
            out.push_back(std::move(pat));
            return;
        }
        const ArrowId q = shared[i];
        const SortId t = sig.cod(q);
        std::vector<std::string> req;
        for (ArrowId g : sig.direct_arrows(t)) {
            ArrowId below = sig.then(q, g);
            const auto& a = val_a.at(below);
            if (a != val_b.at(below)) return;  // a shared filler cannot sit over two boundaries
            req.push_back(a);
        }
        auto try_value = [&](const std::string& v) {
            val_a[q] = v;
            val_b[q] = v;
            go(i + 1);
            val_a.erase(q);
            val_b.erase(q);
        };
        for (const auto& v : base_pool) {
            const auto& d = work.decl(v);
            if (d.sort == t && d.args == req) try_value(v);
        }
        for (std::size_t j = 0; j < fresh.size(); ++j) {
            const VarDecl d = fresh[j];
            if (d.sort == t && d.args == req) try_value(d.name);
        }
        std::string name = work.fresh_name(t);
        try {
            work.add(name, t, req);
        } catch (const Error&) {
            return;
        }
        fresh.push_back(work.decl(name));
        try_value(name);
        fresh.pop_back();
        work.pop_back();
    };
    go(0);

    std::vector<std::pair<std::string, FillerPattern>> keyed;
    std::set<std::string> seen;
    for (auto& pat : out) {
        std::string key = print_formula(sig, pattern_formula(pat, r));
        if (seen.insert(key).second) keyed.emplace_back(std::move(key), std::move(pat));
    }
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<FillerPattern> result;
    for (auto& [key, pat] : keyed) result.push_back(std::move(pat));
    return result;
}

Formula pattern_formula(const FillerPattern& pat, SortId r) {
    return make_forall_all(pat.fresh, make_equiv(r, pat.alpha, pat.beta));
}

Formula ind_at(const Context& ctx, SortId r, ArrowId p, const std::string& x, const std::string& y) {
    std::vector<Formula> parts;
    for (const auto& pat : enum_fillers(ctx, r, p, x, y)) parts.push_back(pattern_formula(pat, r));
    return make_and(std::move(parts));
}

std::vector<IndTraceEntry> ind_trace(const Context& ctx, const std::string& x, const std::string& y) {
    const auto& sig = ctx.signature();
    check_pair(ctx, x, y);
    const SortId k = ctx.sort_of(x);
    std::vector<IndTraceEntry> out;
    for (SortId r : sig.sorts()) {
        if (r == k || !is_compatible(ctx, x, r) || !is_compatible(ctx, y, r)) continue;
        for (ArrowId p : sig.hom(r, k)) {
            IndTraceEntry e{r, p, {}};
            for (const auto& pat : enum_fillers(ctx, r, p, x, y)) e.conjuncts.push_back(pattern_formula(pat, r));
            out.push_back(std::move(e));
        }
    }
    return out;
}

Formula ind(const Context& ctx, const std::string& x, const std::string& y) {
    std::vector<Formula> parts;
    for (auto& e : ind_trace(ctx, x, y)) {
        if (e.conjuncts.empty())
            parts.push_back(make_top());
        else
            parts.insert(parts.end(), e.conjuncts.begin(), e.conjuncts.end());
    }
    return make_and(std::move(parts));
}

Formula sort_equiv(const Context& ctx, SortId k, const std::vector<std::string>& alpha,
                   const std::vector<std::string>& beta) {
    ctx.check_boundary(k, alpha);
    ctx.check_boundary(k, beta);
    std::set<std::string> taken;
    auto fresh = [&]() {
        auto n = ctx.fresh_name(k, taken);
        taken.insert(n);
        return n;
    };
    const std::string x = fresh(), x2 = fresh(), y = fresh(), y2 = fresh();
    const VarDecl dx{x, k, alpha}, dx2{x2, k, alpha}, dy{y, k, beta}, dy2{y2, k, beta};

    // Every x has a y, unique up to isomorphism.
    Formula total = make_forall(
        dx, make_sigma(dy, make_and({make_ind(x, y), make_forall(dy2, make_implies(make_ind(x, y2), make_ind(y, y2)))})));
    // Isomorphic images have isomorphic preimages.
    Formula injective = make_forall_all(
        {dx, dx2, dy, dy2},
        make_implies(make_and({make_ind(x, y), make_ind(x2, y2), make_ind(y, y2)}), make_ind(x, x2)));
    // Every y has an x.
    Formula surjective = make_forall(dy, make_sigma(dx, make_ind(x, y)));
    return make_and({total, injective, surjective});
}

IsoFormula iso_formula(const Signature& sig, SortId k) {
    Context ctx(sig);
    std::map<ArrowId, std::string> at;
    std::vector<ArrowId> positions = sig.positions(k);
    std::stable_sort(positions.begin(), positions.end(),
                     [&](ArrowId a, ArrowId b) { return sig.level(sig.cod(a)) > sig.level(sig.cod(b)); });
    for (ArrowId q : positions) {
        std::vector<std::string> args;
        for (ArrowId g : sig.direct_arrows(sig.cod(q))) args.push_back(at.at(sig.then(q, g)));
        at[q] = ctx.add(ctx.fresh_name(sig.cod(q)), sig.cod(q), std::move(args));
    }
    std::vector<std::string> args;
    for (ArrowId g : sig.direct_arrows(k)) args.push_back(at.at(g));
    ctx.add("x", k, args);
    ctx.add("y", k, args);
    Formula f = ind(ctx, "x", "y");
    return IsoFormula{std::move(ctx), "x", "y", std::move(f)};
}

// ---------------------------------------------------------------- expander

Expander::Canonical Expander::canonicalize(const Context& ctx, const std::vector<std::string>& roots) const {
    Canonical c;
    std::map<SortId, std::size_t> counters;
    std::function<void(const std::string&)> visit = [&](const std::string& v) {
        if (c.rename.count(v)) return;
        const auto& d = ctx.decl(v);
        for (const auto& a : d.args) visit(a);
        std::string name = var_prefix(*sig_, d.sort) + std::to_string(++counters[d.sort]);
        c.rename.emplace(v, name);
        c.actual.push_back(v);
        c.key += std::to_string(d.sort.value) + "(";
        for (const auto& a : d.args) c.key += c.rename.at(a) + ",";
        c.key += ")" + name + ";";
    };
    for (const auto& r : roots) visit(r);
    return c;
}

Context Expander::canonical_context(const Context& ctx, const Canonical& c) const {
    Context out(*sig_);
    for (const auto& v : c.actual) {
        const auto& d = ctx.decl(v);
        std::vector<std::string> args;
        for (const auto& a : d.args) args.push_back(c.rename.at(a));
        out.add(c.rename.at(v), d.sort, std::move(args));
    }
    return out;
}

Expander::Instance Expander::expand_ind(const Context& ctx, const std::string& x, const std::string& y) {
    check_pair(ctx, x, y);
    Canonical c = canonicalize(ctx, {x, y});
    const std::string cx = c.rename.at(x), cy = c.rename.at(y);
    std::string key = "I|" + c.key + "|" + cx + "," + cy;
    auto it = cache_.find(key);
    if (it == cache_.end()) {
        Context cctx = canonical_context(ctx, c);
        Formula f = ind(cctx, cx, cy);
        it = cache_.emplace(key, std::make_unique<Expansion>(Expansion{std::move(cctx), std::move(f)})).first;
    }
    return Instance{it->second.get(), std::move(c.actual)};
}

Expander::Instance Expander::expand_equiv(const Context& ctx, SortId k, const std::vector<std::string>& alpha,
                                          const std::vector<std::string>& beta) {
    std::vector<std::string> roots = alpha;
    roots.insert(roots.end(), beta.begin(), beta.end());
    Canonical c = canonicalize(ctx, roots);
    std::vector<std::string> ca, cb;
    std::string key = "E|" + std::to_string(k.value) + "|" + c.key + "|";
    for (const auto& a : alpha) {
        ca.push_back(c.rename.at(a));
        key += ca.back() + ",";
    }
    key += "|";
    for (const auto& b : beta) {
        cb.push_back(c.rename.at(b));
        key += cb.back() + ",";
    }
    auto it = cache_.find(key);
    if (it == cache_.end()) {
        Context cctx = canonical_context(ctx, c);
        Formula f = sort_equiv(cctx, k, ca, cb);
        it = cache_.emplace(key, std::make_unique<Expansion>(Expansion{std::move(cctx), std::move(f)})).first;
    }
    return Instance{it->second.get(), std::move(c.actual)};
}

}  // namespace folds
