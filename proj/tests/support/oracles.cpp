#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "folds/error.hpp"

namespace folds::oracle {

namespace {

struct Namer {
    const std::map<std::string, VarDecl>& fresh;  // fresh name -> declaration
    std::map<std::string, std::string> renamed;
    std::vector<std::string> decls;

    std::string visit(const std::string& v, const Signature& sig) {
        auto it = fresh.find(v);
        if (it == fresh.end()) return v;
        if (auto r = renamed.find(v); r != renamed.end()) return r->second;
        std::vector<std::string> args;
        for (const auto& a : it->second.args) args.push_back(visit(a, sig));
        std::string name = "#" + std::to_string(renamed.size());
        renamed[v] = name;
        std::string d = name + ":" + sig.sort_name(it->second.sort) + "(";
        for (std::size_t i = 0; i < args.size(); ++i) d += (i ? "," : "") + args[i];
        decls.push_back(d + ")");
        return name;
    }
};

std::string key_of(const Signature& sig, SortId r, const std::vector<std::string>& alpha,
                   const std::vector<std::string>& beta, const std::map<std::string, VarDecl>& fresh) {
    Namer n{fresh, {}, {}};
    std::string out = sig.sort_name(r) + "(";
    for (std::size_t i = 0; i < alpha.size(); ++i) out += (i ? "," : "") + n.visit(alpha[i], sig);
    out += ") ~= " + sig.sort_name(r) + "(";
    for (std::size_t i = 0; i < beta.size(); ++i) out += (i ? "," : "") + n.visit(beta[i], sig);
    out += ") fresh [";
    for (std::size_t i = 0; i < n.decls.size(); ++i) out += (i ? ", " : "") + n.decls[i];
    return out + "]";
}

bool is_below(const Signature& sig, ArrowId p, ArrowId a) {
    for (ArrowId r : sig.hom(sig.cod(p), sig.cod(a)))
        if (sig.then(p, r) == a) return true;
    return false;
}

}  // namespace

std::string pattern_key(const Context& ctx, SortId r, const FillerPattern& p) {
    std::map<std::string, VarDecl> fresh;
    for (const auto& d : p.fresh) fresh[d.name] = d;
    return key_of(ctx.signature(), r, p.alpha, p.beta, fresh);
}

std::set<std::string> brute_force_fillers(const Context& ctx, SortId r, ArrowId p, const std::string& x,
                                          const std::string& y) {
    const Signature& sig = ctx.signature();
    const auto& direct = sig.direct_arrows(r);

    // How many fresh variables of each sort a single pattern could need.
    std::map<std::uint32_t, std::size_t> copies;
    for (ArrowId a : sig.positions(r))
        if (!is_below(sig, p, a)) ++copies[sig.cod(a).value];

    Context ext = ctx;
    std::map<std::string, VarDecl> fresh;
    std::map<std::uint32_t, std::vector<std::string>> candidates;
    for (const auto& v : ctx.dep_closure({x, y})) candidates[ctx.sort_of(v).value].push_back(v);
    for (SortId s : sig.sorts_dependencies_first()) {
        if (!copies.count(s.value)) continue;
        // Every boundary for s over the candidates found so far.
        const auto& sd = sig.direct_arrows(s);
        std::vector<std::vector<std::string>> tuples{{}};
        for (ArrowId a : sd) {
            std::vector<std::vector<std::string>> next;
            for (const auto& t : tuples)
                for (const auto& c : candidates[sig.cod(a).value]) {
                    auto u = t;
                    u.push_back(c);
                    next.push_back(std::move(u));
                }
            tuples = std::move(next);
        }
        std::vector<std::string> made;
        for (const auto& t : tuples) {
            try {
                ext.check_boundary(s, t);
            } catch (const Error&) {
                continue;
            }
            for (std::size_t k = 0; k < copies[s.value]; ++k) {
                std::string name = "fresh_" + sig.sort_name(s) + "_" + std::to_string(fresh.size());
                VarDecl d{name, s, t};
                ext.add(d);
                fresh[name] = d;
                made.push_back(name);
            }
        }
        for (auto& m : made) candidates[s.value].push_back(m);
    }

    std::vector<std::string> alpha(direct.size()), beta(direct.size());
    std::vector<std::size_t> shared;
    for (std::size_t j = 0; j < direct.size(); ++j) {
        if (direct[j] == p) {
            alpha[j] = x;
            beta[j] = y;
            continue;
        }
        bool below = false;
        for (ArrowId q : sig.hom(sig.cod(p), sig.cod(direct[j]))) {
            if (sig.then(p, q) == direct[j]) {
                alpha[j] = ctx.projection(x, q);
                beta[j] = ctx.projection(y, q);
                below = true;
                break;
            }
        }
        if (!below) shared.push_back(j);
    }

    std::set<std::string> out;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == shared.size()) {
            try {
                ext.check_boundary(r, alpha);
                ext.check_boundary(r, beta);
            } catch (const Error&) {
                return;
            }
            if (ext.boundary_projection(r, alpha, p) != x || ext.boundary_projection(r, beta, p) != y) return;
            out.insert(key_of(sig, r, alpha, beta, fresh));
            return;
        }
        std::size_t j = shared[i];
        for (const auto& c : candidates[sig.cod(direct[j]).value]) {
            alpha[j] = beta[j] = c;
            go(i + 1);
        }
    };
    go(0);
    return out;
}

CatTables cat_tables(const FinStructure& m) {
    const Signature& sig = m.signature();
    CatTables t;
    SortId A = sig.sort("A"), I = sig.sort("I"), Comp = sig.sort("Comp");
    for (std::uint32_t a = 0; a < m.size(A); ++a) t.ends.emplace_back(m.element(A, a).args[0], m.element(A, a).args[1]);
    for (std::uint32_t i = 0; i < m.size(I); ++i) t.identities.insert(m.element(I, i).args[0]);
    for (std::uint32_t c = 0; c < m.size(Comp); ++c) {
        const auto& a = m.element(Comp, c).args;
        t.comp.emplace(a[0], a[1], a[2]);
    }
    return t;
}

namespace {

// f then g is an identity arrow.
bool composes_to_identity(const CatTables& t, std::uint32_t f, std::uint32_t g) {
    for (auto id : t.identities)
        if (t.comp.count({f, g, id})) return true;
    return false;
}

}  // namespace

std::set<std::pair<std::uint32_t, std::uint32_t>> mutual_inverse_pairs(const FinStructure& m) {
    CatTables t = cat_tables(m);
    std::set<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::uint32_t f = 0; f < t.ends.size(); ++f)
        for (std::uint32_t g = 0; g < t.ends.size(); ++g)
            if (t.ends[f].first == t.ends[g].second && t.ends[f].second == t.ends[g].first &&
                composes_to_identity(t, f, g) && composes_to_identity(t, g, f))
                out.emplace(t.ends[f].first, t.ends[f].second);
    return out;
}

bool gaunt(const FinStructure& m) {
    CatTables t = cat_tables(m);
    for (std::uint32_t f = 0; f < t.ends.size(); ++f) {
        if (t.identities.count(f)) continue;
        for (std::uint32_t g = 0; g < t.ends.size(); ++g)
            if (t.ends[f].first == t.ends[g].second && t.ends[f].second == t.ends[g].first &&
                composes_to_identity(t, f, g) && composes_to_identity(t, g, f))
                return false;
    }
    return true;
}

namespace {

// One variable per distinct element reachable from the roots.
struct HandContext {
    const FinStructure& m;
    Context ctx;
    Assignment asg;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::string> names;

    explicit HandContext(const FinStructure& s) : m(s), ctx(s.signature()) {}

    std::string of(SortId s, std::uint32_t e) {
        auto key = std::make_pair(s.value, e);
        if (auto it = names.find(key); it != names.end()) return it->second;
        std::vector<std::string> args;
        const auto& direct = m.signature().direct_arrows(s);
        for (std::size_t j = 0; j < direct.size(); ++j)
            args.push_back(of(m.signature().cod(direct[j]), m.element(s, e).args[j]));
        std::string name = "v" + m.signature().sort_name(s) + std::to_string(e);
        ctx.add(name, s, args);
        asg[name] = e;
        names[key] = name;
        return name;
    }
};

}  // namespace

bool ind_holds(const FinStructure& m, SortId k, std::uint32_t a, std::uint32_t b) {
    HandContext h(m);
    std::string x = h.of(k, a);
    std::string y = h.of(k, b);
    return eval_prop(m, h.ctx, make_ind(x, y), h.asg);
}

std::uint64_t arrow_bijections(const FinStructure& m, const Boundary& d1, const Boundary& d2) {
    const Signature& sig = m.signature();
    SortId O = sig.sort("O"), A = sig.sort("A");
    HandContext h(m);
    std::vector<std::string> b1{h.of(O, d1[0]), h.of(O, d1[1])};
    std::vector<std::string> b2{h.of(O, d2[0]), h.of(O, d2[1])};
    h.ctx.add("xx", A, b1);
    h.ctx.add("yy", A, b2);
    std::vector<std::uint32_t> f1, f2;
    for (std::uint32_t e = 0; e < m.size(A); ++e) {
        if (m.element(A, e).args == d1) f1.push_back(e);
        if (m.element(A, e).args == d2) f2.push_back(e);
    }
    if (f1.size() != f2.size()) return 0;
    std::vector<std::size_t> perm(f2.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t count = 0;
    do {
        bool ok = true;
        for (std::size_t i = 0; i < f1.size() && ok; ++i) {
            Assignment a = h.asg;
            a["xx"] = f1[i];
            a["yy"] = f2[perm[i]];
            ok = eval_prop(m, h.ctx, make_ind("xx", "yy"), a);
        }
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

}  // namespace folds::oracle
