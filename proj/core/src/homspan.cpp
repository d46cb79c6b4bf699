#include "folds/homspan.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace folds {

Boundary Hom::image(const Boundary& b, const Signature& sig, SortId s) const {
    Boundary out;
    out.reserve(b.size());
    const auto& direct = sig.direct_arrows(s);
    for (std::size_t j = 0; j < b.size(); ++j) out.push_back(maps.at(sig.cod(direct[j]).value).at(b[j]));
    return out;
}

Hom identity_hom(const FinStructure& m) {
    Hom h;
    for (auto s : m.signature().sorts()) {
        std::vector<std::uint32_t> id(m.size(s));
        for (std::uint32_t i = 0; i < id.size(); ++i) id[i] = i;
        h.maps.push_back(std::move(id));
    }
    return h;
}

void check_total(const FinStructure& m, const FinStructure& n, const Hom& h) {
    const auto& sig = m.signature();
    if (h.maps.size() != sig.sort_count())
        throw Error(ErrorKind::NonTotalMap, "expected one map per sort (" + std::to_string(sig.sort_count()) + ")");
    for (auto s : sig.sorts()) {
        if (h.maps[s.value].size() != m.size(s))
            throw Error(ErrorKind::NonTotalMap, "map on sort " + sig.sort_name(s) + " is not total");
        for (auto v : h.maps[s.value])
            if (v >= n.size(s))
                throw Error(ErrorKind::NonTotalMap, "map on sort " + sig.sort_name(s) + " leaves the target carrier");
    }
}

namespace {

// First element of m whose image is not natural, if any.
std::optional<std::pair<SortId, std::uint32_t>> first_unnatural(const FinStructure& m, const FinStructure& n,
                                                                const Hom& h) {
    const auto& sig = m.signature();
    for (auto s : sig.sorts())
        for (std::uint32_t e = 0; e < m.size(s); ++e)
            if (n.element(s, h(s, e)).args != h.image(m.element(s, e).args, sig, s)) return std::make_pair(s, e);
    return std::nullopt;
}

}  // namespace

bool is_hom(const FinStructure& m, const FinStructure& n, const Hom& h) {
    check_total(m, n, h);
    return !first_unnatural(m, n, h);
}

void require_hom(const FinStructure& m, const FinStructure& n, const Hom& h) {
    check_total(m, n, h);
    if (auto bad = first_unnatural(m, n, h))
        throw Error(ErrorKind::NotAHomomorphism, "element " + m.display(bad->first, bad->second) + " of " +
                                                     m.signature().sort_name(bad->first) +
                                                     " is sent over the wrong boundary");
}

Hom compose(const Hom& f, const Hom& g) {
    Hom out;
    for (std::size_t s = 0; s < f.maps.size(); ++s) {
        std::vector<std::uint32_t> m;
        for (auto v : f.maps[s]) m.push_back(g.maps.at(s).at(v));
        out.maps.push_back(std::move(m));
    }
    return out;
}

FibSurjReport is_fibsurj(const FinStructure& m, const FinStructure& n, const Hom& h) {
    require_hom(m, n, h);
    const auto& sig = m.signature();
    FibSurjReport r;
    for (auto s : sig.sorts_dependencies_first()) {
        for (const auto& b : m.boundaries(s)) {
            const auto& src = m.fiber_unchecked(s, b);
            const auto& dst = n.fiber_unchecked(s, h.image(b, sig, s));
            FiberSection sec{s, b, {}};
            for (auto t : dst) {
                std::optional<std::uint32_t> least;
                for (auto e : src)
                    if (h(s, e) == t) {
                        least = e;
                        break;
                    }
                if (!least) {
                    FibSurjReport bad;
                    bad.ok = false;
                    bad.sort = s;
                    bad.boundary = b;
                    bad.missed = t;
                    return bad;
                }
                sec.preimage.emplace_back(t, *least);
            }
            if (!dst.empty()) r.sections.push_back(std::move(sec));
        }
    }
    return r;
}

// ---------------------------------------------------------------- homomorphism search

namespace {

class Budget {
public:
    explicit Budget(std::uint64_t max) : max_(max) {}
    bool spend() { return ++used_ <= max_; }
    bool exhausted() const { return used_ > max_; }
    std::uint64_t used() const { return used_; }

private:
    std::uint64_t max_;
    std::uint64_t used_ = 0;
};

// Cheap invariant of an element: how many elements of each sort use it at
// each argument position, and the size of its own fiber.
std::vector<std::vector<std::size_t>> usage_profiles(const FinStructure& m, SortId s) {
    const auto& sig = m.signature();
    std::vector<std::vector<std::size_t>> prof(m.size(s));
    std::size_t slots = 0;
    for (auto r : sig.sorts()) slots += sig.direct_arrows(r).size();
    for (auto& p : prof) p.assign(slots + 1, 0);
    std::size_t base = 0;
    for (auto r : sig.sorts()) {
        const auto& direct = sig.direct_arrows(r);
        for (std::uint32_t e = 0; e < m.size(r); ++e)
            for (std::size_t j = 0; j < direct.size(); ++j)
                if (sig.cod(direct[j]) == s) ++prof[m.element(r, e).args[j]][base + j];
        base += direct.size();
    }
    for (std::uint32_t e = 0; e < m.size(s); ++e) prof[e][slots] = m.fiber_unchecked(s, m.element(s, e).args).size();
    return prof;
}

struct HomSearch {
    const FinStructure& m;
    const FinStructure& n;
    bool fibsurj;
    bool bijective;
    Budget budget;
    std::vector<SortId> order;
    Hom h;
    std::vector<std::vector<bool>> used;
    std::vector<std::vector<std::vector<std::size_t>>> prof_m, prof_n;

    HomSearch(const FinStructure& m_, const FinStructure& n_, bool fs, bool bij, SearchLimits lim)
        : m(m_), n(n_), fibsurj(fs), bijective(bij), budget(lim.max_steps) {
        const auto& sig = m.signature();
        order = sig.sorts_dependencies_first();
        for (auto s : sig.sorts()) {
            h.maps.emplace_back(m.size(s), 0);
            used.emplace_back(n.size(s), false);
            if (bijective) {
                prof_m.push_back(usage_profiles(m, s));
                prof_n.push_back(usage_profiles(n, s));
            }
        }
    }

    bool sort_done(SortId s) const {
        if (!fibsurj) return true;
        const auto& sig = m.signature();
        for (const auto& b : m.boundaries(s)) {
            const auto& dst = n.fiber_unchecked(s, h.image(b, sig, s));
            if (dst.empty()) continue;
            std::set<std::uint32_t> hit;
            for (auto e : m.fiber_unchecked(s, b)) hit.insert(h(s, e));
            if (hit.size() != dst.size()) return false;
        }
        return true;
    }

    bool go(std::size_t si, std::uint32_t e) {
        if (si == order.size()) return true;
        const SortId s = order[si];
        if (e == m.size(s)) return sort_done(s) && go(si + 1, 0);
        const auto& sig = m.signature();
        const auto& el = m.element(s, e);
        const auto& cands = n.fiber_unchecked(s, h.image(el.args, sig, s));
        if (bijective && cands.size() != m.fiber_unchecked(s, el.args).size()) return false;
        for (auto t : cands) {
            if (!budget.spend()) return false;
            if (bijective && (used[s.value][t] || prof_m[s.value][e] != prof_n[s.value][t])) continue;
            h.maps[s.value][e] = t;
            used[s.value][t] = true;
            if (go(si, e + 1)) return true;
            used[s.value][t] = false;
            if (budget.exhausted()) return false;
        }
        return false;
    }
};

void check_same_signature(const FinStructure& m, const FinStructure& n) {
    if (&m.signature() != &n.signature() && m.signature().name() != n.signature().name())
        throw Error(ErrorKind::PreconditionViolation, "structures are over different signatures");
}

}  // namespace

std::optional<Hom> find_hom(const FinStructure& m, const FinStructure& n, bool fibsurj, SearchLimits limits) {
    check_same_signature(m, n);
    HomSearch search(m, n, fibsurj, false, limits);
    if (search.go(0, 0)) return search.h;
    if (search.budget.exhausted())
        throw Error(ErrorKind::PreconditionViolation, "homomorphism search exceeded its step budget");
    return std::nullopt;
}

std::optional<Hom> structure_iso(const FinStructure& m, const FinStructure& n, SearchLimits limits) {
    check_same_signature(m, n);
    for (auto s : m.signature().sorts())
        if (m.size(s) != n.size(s)) return std::nullopt;
    HomSearch search(m, n, false, true, limits);
    if (search.go(0, 0)) return search.h;
    if (search.budget.exhausted())
        throw Error(ErrorKind::PreconditionViolation, "isomorphism search exceeded its step budget");
    return std::nullopt;
}

// ---------------------------------------------------------------- spans

std::string_view to_string(SpanStatus s) {
    switch (s) {
        case SpanStatus::Found: return "found";
        case SpanStatus::NotEquivalent: return "not-equivalent";
        case SpanStatus::NoneWithinBound: return "none-within-bound";
        case SpanStatus::BudgetExhausted: return "budget-exhausted";
    }
    return "unknown";
}

namespace {

using Pair = std::pair<std::uint32_t, std::uint32_t>;

// Minimal edge sets of the complete bipartite graph a x b touching every
// vertex: each edge has an endpoint of degree one.
std::vector<std::vector<Pair>> minimal_covers(std::size_t a, std::size_t b, Budget& budget) {
    std::vector<std::vector<Pair>> out;
    std::vector<std::uint32_t> choice(a, 0);  // bitmask of neighbours per left vertex
    const std::uint32_t full = (1u << b) - 1;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (budget.exhausted()) return;
        if (i == a) {
            std::uint32_t cover = 0;
            for (auto c : choice) cover |= c;
            if (cover != full) return;
            std::vector<std::size_t> deg_right(b, 0);
            for (auto c : choice)
                for (std::size_t j = 0; j < b; ++j) deg_right[j] += c >> j & 1;
            std::vector<Pair> edges;
            for (std::size_t x = 0; x < a; ++x) {
                const auto deg_left = static_cast<std::size_t>(__builtin_popcount(choice[x]));
                for (std::size_t j = 0; j < b; ++j) {
                    if (!(choice[x] >> j & 1)) continue;
                    if (deg_left > 1 && deg_right[j] > 1) return;
                    edges.emplace_back(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(j));
                }
            }
            out.push_back(std::move(edges));
            return;
        }
        for (std::uint32_t c = 1; c <= full; ++c) {
            if (!budget.spend()) return;
            choice[i] = c;
            go(i + 1);
        }
    };
    go(0);
    return out;
}

struct ApexElement {
    Boundary args;  // into apex carriers
    std::uint32_t left;
    std::uint32_t right;
};

struct SpanSearch {
    const FinStructure& m;
    const FinStructure& n;
    const Signature& sig;
    std::vector<std::size_t> bound;
    Budget budget;
    bool bound_hit = false;
    std::vector<SortId> order;
    std::vector<bool> has_incoming;
    std::vector<std::vector<ApexElement>> apex;

    SpanSearch(const FinStructure& m_, const FinStructure& n_, const SpanOptions& opt)
        : m(m_), n(n_), sig(m_.signature()), budget(opt.limits.max_steps) {
        order = sig.sorts_dependencies_first();
        apex.resize(sig.sort_count());
        has_incoming.assign(sig.sort_count(), false);
        for (auto s : sig.sorts()) {
            bound.push_back(opt.max_apex ? opt.max_apex : std::max<std::size_t>(1, m.size(s) * n.size(s)));
            for (auto a : sig.direct_arrows(s)) has_incoming[sig.cod(a).value] = true;
        }
    }

    struct Slot {
        Boundary args;
        const std::vector<std::uint32_t>* left;
        const std::vector<std::uint32_t>* right;
    };

    // Apex boundaries of s over which either end has a nonempty fiber.
    // Returns false if some fiber is inhabited on one side only.
    bool slots(SortId s, std::vector<Slot>& out) {
        const auto& direct = sig.direct_arrows(s);
        std::set<Boundary> seen;
        auto visit = [&](const FinStructure& side, bool left_side) -> bool {
            for (const auto& b : side.occupied_boundaries(s)) {
                // Apex elements lying over b at every argument.
                std::vector<std::vector<std::uint32_t>> options(direct.size());
                for (std::size_t j = 0; j < direct.size(); ++j) {
                    SortId t = sig.cod(direct[j]);
                    for (std::uint32_t p = 0; p < apex[t.value].size(); ++p) {
                        const auto& pe = apex[t.value][p];
                        if ((left_side ? pe.left : pe.right) == b[j]) options[j].push_back(p);
                    }
                    if (options[j].empty()) goto next_boundary;
                }
                {
                    Boundary pb(direct.size());
                    std::function<bool(std::size_t)> pick = [&](std::size_t j) -> bool {
                        if (j == direct.size()) {
                            Boundary lb, rb;
                            for (std::size_t k = 0; k < pb.size(); ++k) {
                                const auto& pe = apex[sig.cod(direct[k]).value][pb[k]];
                                lb.push_back(pe.left);
                                rb.push_back(pe.right);
                            }
                            if (!m.boundary_consistent(s, lb) || !n.boundary_consistent(s, rb)) return true;
                            if (!seen.insert(pb).second) return true;
                            const auto& fl = m.fiber_unchecked(s, lb);
                            const auto& fr = n.fiber_unchecked(s, rb);
                            if (fl.empty() != fr.empty()) return false;
                            out.push_back({pb, &fl, &fr});
                            return true;
                        }
                        for (auto p : options[j]) {
                            pb[j] = p;
                            if (!pick(j + 1)) return false;
                        }
                        return true;
                    };
                    if (!pick(0)) return false;
                }
            next_boundary:;
            }
            return true;
        };
        return visit(m, true) && visit(n, false);
    }

    bool go(std::size_t si) {
        if (si == order.size()) return true;
        const SortId s = order[si];
        std::vector<Slot> sl;
        if (!slots(s, sl)) return false;
        std::vector<std::vector<std::vector<Pair>>> covers;
        for (const auto& slot : sl) {
            if (slot.left->size() > 16 || slot.right->size() > 16) {
                budget = Budget(0);
                budget.spend();
                return false;
            }
            covers.push_back(minimal_covers(slot.left->size(), slot.right->size(), budget));
            if (budget.exhausted()) return false;
            // Nothing points into s: any one cover will do.
            if (!has_incoming[s.value]) covers.back().resize(std::min<std::size_t>(1, covers.back().size()));
        }
        return choose(si, s, sl, covers, 0);
    }

    bool choose(std::size_t si, SortId s, const std::vector<Slot>& sl,
                const std::vector<std::vector<std::vector<Pair>>>& covers, std::size_t k) {
        if (k == sl.size()) return go(si + 1);
        const std::size_t mark = apex[s.value].size();
        for (const auto& cover : covers[k]) {
            if (!budget.spend()) return false;
            if (mark + cover.size() > bound[s.value]) {
                bound_hit = true;
                continue;
            }
            for (auto [i, j] : cover) apex[s.value].push_back({sl[k].args, (*sl[k].left)[i], (*sl[k].right)[j]});
            if (choose(si, s, sl, covers, k + 1)) return true;
            apex[s.value].resize(mark);
            if (budget.exhausted()) return false;
        }
        return false;
    }
};

std::string pair_name(const std::string& a, const std::string& b) { return a + "_" + b; }

Span build_span(const FinStructure& m, const FinStructure& n, const std::vector<std::vector<ApexElement>>& apex) {
    const auto& sig = m.signature();
    Span span{FinStructure(sig, m.name() + "_x_" + n.name()), Hom{}, Hom{}};
    span.left.maps.resize(sig.sort_count());
    span.right.maps.resize(sig.sort_count());
    for (auto s : sig.sorts()) {
        std::set<std::string> taken;
        for (const auto& pe : apex[s.value]) {
            std::string name;
            const auto& ln = m.element(s, pe.left).name;
            const auto& rn = n.element(s, pe.right).name;
            if (!ln.empty() && !rn.empty()) {
                name = pair_name(ln, rn);
                while (taken.count(name)) name += '\'';
                taken.insert(name);
            }
            span.apex.add(s, name, pe.args);
            span.left.maps[s.value].push_back(pe.left);
            span.right.maps[s.value].push_back(pe.right);
        }
    }
    return span;
}

}  // namespace

SpanResult find_span(const FinStructure& m, const FinStructure& n, const SpanOptions& opt) {
    check_same_signature(m, n);
    const auto& sig = m.signature();
    SpanResult result;
    if (opt.use_fast_path && sig.height() <= 3 && is_totally_saturated(m) && is_totally_saturated(n)) {
        result.fast_path = true;
        auto iso = structure_iso(m, n, opt.limits);
        if (!iso) {
            result.status = SpanStatus::NotEquivalent;
            return result;
        }
        std::vector<std::vector<ApexElement>> apex(sig.sort_count());
        for (auto s : sig.sorts())
            for (std::uint32_t e = 0; e < m.size(s); ++e)
                apex[s.value].push_back({m.element(s, e).args, e, (*iso)(s, e)});
        result.span = build_span(m, n, apex);
        result.status = SpanStatus::Found;
    } else {
        SpanSearch search(m, n, opt);
        bool found = search.go(0);
        result.steps = search.budget.used();
        if (!found) {
            result.status = search.budget.exhausted() ? SpanStatus::BudgetExhausted : SpanStatus::NoneWithinBound;
            return result;
        }
        result.span = build_span(m, n, search.apex);
        result.status = SpanStatus::Found;
    }
    const Span& sp = *result.span;
    sp.apex.validate();
    if (!is_fibsurj(sp.apex, m, sp.left).ok || !is_fibsurj(sp.apex, n, sp.right).ok)
        throw Error(ErrorKind::PreconditionViolation, "internal: constructed span failed verification");
    return result;
}

bool hsip_decide(const FinStructure& m, const FinStructure& n) {
    check_same_signature(m, n);
    const auto& sig = m.signature();
    if (sig.height() != 3)
        throw Error(ErrorKind::HeightOutOfScope,
                    "signature " + sig.name() + " has height " + std::to_string(sig.height()) + ", expected 3");
    for (const auto* s : {&m, &n})
        if (!is_totally_saturated(*s))
            throw Error(ErrorKind::NotSaturated, "structure " + s->name() + " is not totally saturated");
    return structure_iso(m, n).has_value();
}

PreservationReport check_ind_preservation(const FinStructure& m, const FinStructure& n, const Hom& h, int level) {
    check_same_signature(m, n);
    require_hom(m, n, h);
    const auto& sig = m.signature();
    if (level != 2 && level != 3)
        throw Error(ErrorKind::PreconditionViolation, "preservation is checked at level 2 or 3");
    if (level == 3)
        for (const auto* s : {&m, &n})
            if (!is_totally_saturated(*s))
                throw Error(ErrorKind::PreconditionViolation, "structure " + s->name() + " is not totally saturated");
    PreservationReport r;
    Evaluator em(m), en(n);
    for (auto s : sig.sorts()) {
        if (sig.level(s) != level) continue;
        for (std::uint32_t a = 0; a < m.size(s); ++a) {
            for (std::uint32_t b = 0; b < m.size(s); ++b) {
                Card cm = iso_card(em, s, a, b);
                Card cn = iso_card(en, s, h(s, a), h(s, b));
                bool same = level == 2 ? cm.truthy() == cn.truthy() : cm == cn;
                if (!same) {
                    r.ok = false;
                    r.failures.push_back(sig.sort_name(s) + " (" + m.display(s, a) + ", " + m.display(s, b) + "): " +
                                         cm.to_string() + " vs " + cn.to_string());
                }
            }
        }
    }
    return r;
}

}  // namespace folds
