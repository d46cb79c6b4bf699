#include "folds/signature.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace folds {

namespace {

constexpr std::uint32_t kNoArrow = 0xFFFFFFFFu;

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

struct Path {
    std::uint32_t dom;
    std::uint32_t cod;
    std::vector<std::uint32_t> gens;
};

bool shorter_path(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace

std::vector<SortId> Signature::sorts() const {
    std::vector<SortId> out;
    for (std::uint32_t i = 0; i < sorts_.size(); ++i) out.push_back(SortId{i});
    return out;
}

std::optional<SortId> Signature::find_sort(std::string_view name) const {
    for (std::uint32_t i = 0; i < sorts_.size(); ++i)
        if (sorts_[i].name == name) return SortId{i};
    return std::nullopt;
}

SortId Signature::sort(std::string_view name) const {
    if (auto s = find_sort(name)) return *s;
    throw Error(ErrorKind::UnknownSort, "unknown sort '" + std::string(name) + "' in signature " + raw_.name);
}

std::vector<SortId> Signature::sorts_by_level() const {
    auto out = sorts();
    std::stable_sort(out.begin(), out.end(), [&](SortId a, SortId b) { return level(a) < level(b); });
    return out;
}

std::vector<SortId> Signature::sorts_dependencies_first() const {
    auto out = sorts();
    std::stable_sort(out.begin(), out.end(), [&](SortId a, SortId b) { return level(a) > level(b); });
    return out;
}

const std::string& Signature::direct_arrow_name(SortId s, std::size_t i) const {
    return gens_.at(gens_out_.at(s.value).at(i)).name;
}

std::optional<std::size_t> Signature::find_direct_arrow(SortId s, std::string_view name) const {
    const auto& out = gens_out_.at(s.value);
    for (std::size_t i = 0; i < out.size(); ++i)
        if (gens_[out[i]].name == name) return i;
    return std::nullopt;
}

std::string Signature::arrow_label(ArrowId a) const {
    const auto& info = arrows_.at(a.value);
    if (info.gens.empty()) return "id";
    std::string out;
    for (auto g : info.gens) {
        if (!out.empty()) out += '.';
        out += gens_[g].name;
    }
    return out;
}

std::vector<ArrowId> Signature::arrow_path(ArrowId a) const {
    std::vector<ArrowId> out;
    for (auto g : arrows_.at(a.value).gens) out.push_back(gens_[g].cls);
    return out;
}

ArrowId Signature::then(ArrowId first, ArrowId second) const {
    ArrowId r = compose_.at(first.value).at(second.value);
    if (r.value == kNoArrow)
        throw Error(ErrorKind::Composition, "arrows " + arrow_label(first) + " and " + arrow_label(second) +
                                                " are not composable");
    return r;
}

std::vector<ArrowId> Signature::hom(SortId from, SortId to) const {
    std::vector<ArrowId> out;
    if (from == to) out.push_back(identity(from));
    for (auto a : positions(from))
        if (cod(a) == to) out.push_back(a);
    return out;
}

ArrowId Signature::resolve_path(SortId from, const std::vector<std::string>& names) const {
    ArrowId acc = identity(from);
    SortId at = from;
    for (const auto& n : names) {
        auto idx = find_direct_arrow(at, n);
        if (!idx)
            throw Error(ErrorKind::Name, "sort " + sort_name(at) + " has no arrow named '" + n + "'");
        ArrowId g = sorts_[at.value].direct[*idx];
        acc = then(acc, g);
        at = cod(g);
    }
    return acc;
}

Signature validate_signature(const RawSignature& raw) {
    std::vector<Diagnostic> diags;
    Signature sig;
    sig.raw_ = raw;

    std::map<std::string, std::uint32_t> index;
    for (std::uint32_t i = 0; i < raw.sorts.size(); ++i) {
        const auto& rs = raw.sorts[i];
        if (!index.emplace(rs.name, i).second)
            diags.push_back({ErrorKind::Name, "duplicate sort '" + rs.name + "'", rs.where});
    }

    // Generating arrows.
    sig.gens_out_.assign(raw.sorts.size(), {});
    for (std::uint32_t i = 0; i < raw.sorts.size(); ++i) {
        std::set<std::string> seen;
        for (const auto& ra : raw.sorts[i].arrows) {
            if (!seen.insert(ra.name).second) {
                diags.push_back({ErrorKind::Name,
                                 "duplicate arrow '" + ra.name + "' in sort " + raw.sorts[i].name, ra.where});
                continue;
            }
            auto it = index.find(ra.target);
            if (it == index.end()) {
                diags.push_back({ErrorKind::UnknownSort,
                                 "arrow " + raw.sorts[i].name + "." + ra.name + " targets unknown sort '" +
                                     ra.target + "'",
                                 ra.where});
                continue;
            }
            sig.gens_out_[i].push_back(static_cast<std::uint32_t>(sig.gens_.size()));
            sig.gens_.push_back({ra.name, SortId{i}, SortId{it->second}, ArrowId{kNoArrow}});
        }
    }
    if (!diags.empty()) throw Error(std::move(diags));

    // Cycles, including self-loops.
    {
        const std::size_t n = raw.sorts.size();
        std::vector<int> state(n, 0);
        std::vector<std::uint32_t> stack;
        std::function<bool(std::uint32_t)> visit = [&](std::uint32_t s) -> bool {
            state[s] = 1;
            stack.push_back(s);
            for (auto g : sig.gens_out_[s]) {
                auto t = sig.gens_[g].cod.value;
                if (state[t] == 1) {
                    std::string msg = "cycle through sorts ";
                    auto start = std::find(stack.begin(), stack.end(), t);
                    for (auto it = start; it != stack.end(); ++it) msg += raw.sorts[*it].name + " -> ";
                    msg += raw.sorts[t].name;
                    diags.push_back({ErrorKind::Cycle, msg, raw.sorts[s].where});
                    return true;
                }
                if (state[t] == 0 && visit(t)) return true;
            }
            stack.pop_back();
            state[s] = 2;
            return false;
        };
        for (std::uint32_t s = 0; s < n; ++s)
            if (state[s] == 0 && visit(s)) break;
        if (!diags.empty()) throw Error(std::move(diags));
    }

    // Levels: 1 for sorts with no incoming arrow, else one above every source.
    const std::size_t n = raw.sorts.size();
    std::vector<int> level(n, 0);
    std::function<int(std::uint32_t)> level_of = [&](std::uint32_t s) -> int {
        if (level[s] != 0) return level[s];
        int l = 1;
        for (const auto& g : sig.gens_)
            if (g.cod.value == s) l = std::max(l, level_of(g.dom.value) + 1);
        return level[s] = l;
    };

    // All paths; finite since the graph is acyclic.
    std::vector<Path> paths;
    std::map<std::pair<std::uint32_t, std::vector<std::uint32_t>>, std::size_t> path_index;
    std::function<void(std::uint32_t, std::uint32_t, std::vector<std::uint32_t>&)> grow =
        [&](std::uint32_t dom, std::uint32_t at, std::vector<std::uint32_t>& gens) {
            path_index.emplace(std::make_pair(dom, gens), paths.size());
            paths.push_back({dom, at, gens});
            for (auto g : sig.gens_out_[at]) {
                gens.push_back(g);
                grow(dom, sig.gens_[g].cod.value, gens);
                gens.pop_back();
            }
        };
    for (std::uint32_t s = 0; s < n; ++s) {
        std::vector<std::uint32_t> gens;
        grow(s, s, gens);
    }

    UnionFind uf(paths.size());
    auto lookup_path = [&](std::uint32_t dom, const std::vector<std::uint32_t>& gens) {
        return path_index.at({dom, gens});
    };

    // Seed with the declared equations.
    for (std::uint32_t s = 0; s < n; ++s) {
        for (const auto& eq : raw.sorts[s].equations) {
            auto resolve = [&](const std::vector<std::string>& names, std::vector<std::uint32_t>& gens,
                               std::uint32_t& cod) -> bool {
                std::uint32_t at = s;
                for (const auto& nm : names) {
                    bool found = false;
                    for (auto g : sig.gens_out_[at]) {
                        if (sig.gens_[g].name == nm) {
                            gens.push_back(g);
                            at = sig.gens_[g].cod.value;
                            found = true;
                            break;
                        }
                    }
                    if (!found) {
                        diags.push_back({ErrorKind::Name,
                                         "sort " + raw.sorts[at].name + " has no arrow named '" + nm + "'",
                                         eq.where});
                        return false;
                    }
                }
                cod = at;
                return true;
            };
            std::vector<std::uint32_t> lg, rg;
            std::uint32_t lc = 0, rc = 0;
            bool ok = resolve(eq.lhs, lg, lc);
            ok = resolve(eq.rhs, rg, rc) && ok;
            if (!ok) continue;
            if (lc != rc) {
                diags.push_back({ErrorKind::Composition,
                                 "equation sides end in different sorts (" + raw.sorts[lc].name + " vs " +
                                     raw.sorts[rc].name + ")",
                                 eq.where});
                continue;
            }
            if (lg.empty() || rg.empty()) {
                diags.push_back({ErrorKind::Composition, "equation side is an identity path", eq.where});
                continue;
            }
            uf.unite(lookup_path(s, lg), lookup_path(s, rg));
        }
    }
    if (!diags.empty()) throw Error(std::move(diags));

    // Congruence closure under pre- and post-composition.
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t a = 0; a < paths.size(); ++a) {
            for (std::size_t b = a + 1; b < paths.size(); ++b) {
                if (uf.find(a) != uf.find(b)) continue;
                const auto& pa = paths[a];
                const auto& pb = paths[b];
                for (auto g : sig.gens_out_[pa.cod]) {
                    auto ea = pa.gens, eb = pb.gens;
                    ea.push_back(g);
                    eb.push_back(g);
                    changed |= uf.unite(lookup_path(pa.dom, ea), lookup_path(pb.dom, eb));
                }
                for (std::size_t gi = 0; gi < sig.gens_.size(); ++gi) {
                    if (sig.gens_[gi].cod.value != pa.dom) continue;
                    std::vector<std::uint32_t> ea{static_cast<std::uint32_t>(gi)}, eb{static_cast<std::uint32_t>(gi)};
                    ea.insert(ea.end(), pa.gens.begin(), pa.gens.end());
                    eb.insert(eb.end(), pb.gens.begin(), pb.gens.end());
                    changed |= uf.unite(lookup_path(sig.gens_[gi].dom.value, ea),
                                        lookup_path(sig.gens_[gi].dom.value, eb));
                }
            }
        }
    }
    for (std::size_t a = 0; a < paths.size(); ++a) {
        if (paths[a].gens.empty() && uf.find(a) != a)
            diags.push_back({ErrorKind::Composition,
                             "equations identify a non-identity arrow with the identity of " +
                                 raw.sorts[paths[a].dom].name,
                             raw.sorts[paths[a].dom].where});
    }
    if (!diags.empty()) throw Error(std::move(diags));

    // Arrow classes, numbered per sort: identity first, then by canonical path.
    std::vector<std::uint32_t> class_of(paths.size(), kNoArrow);
    sig.sorts_.resize(n);
    for (std::uint32_t s = 0; s < n; ++s) {
        std::map<std::size_t, std::vector<std::uint32_t>> best;  // root -> shortest representative
        for (std::size_t p = 0; p < paths.size(); ++p) {
            if (paths[p].dom != s) continue;
            auto r = uf.find(p);
            auto it = best.find(r);
            if (it == best.end() || shorter_path(paths[p].gens, it->second)) best[r] = paths[p].gens;
        }
        std::vector<std::pair<std::vector<std::uint32_t>, std::size_t>> ordered;
        for (auto& [root, gens] : best) ordered.emplace_back(gens, root);
        std::sort(ordered.begin(), ordered.end(),
                  [](const auto& a, const auto& b) { return shorter_path(a.first, b.first); });
        auto& info = sig.sorts_[s];
        info.name = raw.sorts[s].name;
        info.level = level_of(s);
        for (auto& [gens, root] : ordered) {
            ArrowId id{static_cast<std::uint32_t>(sig.arrows_.size())};
            std::uint32_t cod = s;
            if (!gens.empty()) cod = sig.gens_[gens.back()].cod.value;
            sig.arrows_.push_back({SortId{s}, SortId{cod}, gens, {}});
            for (std::size_t p = 0; p < paths.size(); ++p) {
                if (paths[p].dom != s || uf.find(p) != root) continue;
                class_of[p] = id.value;
                std::vector<std::size_t> steps;
                for (auto g : paths[p].gens) {
                    const auto& out = sig.gens_out_[sig.gens_[g].dom.value];
                    steps.push_back(static_cast<std::size_t>(std::find(out.begin(), out.end(), g) - out.begin()));
                }
                sig.arrows_.back().step_paths.push_back(std::move(steps));
            }
            if (gens.empty())
                info.identity = id;
            else
                info.positions.push_back(id);
        }
    }
    for (auto& g : sig.gens_) {
        g.cls = ArrowId{class_of[lookup_path(g.dom.value, {static_cast<std::uint32_t>(&g - sig.gens_.data())})]};
    }
    for (std::uint32_t s = 0; s < n; ++s)
        for (auto g : sig.gens_out_[s]) sig.sorts_[s].direct.push_back(sig.gens_[g].cls);

    const std::size_t m = sig.arrows_.size();
    sig.compose_.assign(m, std::vector<ArrowId>(m, ArrowId{kNoArrow}));
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            if (sig.arrows_[a].cod != sig.arrows_[b].dom) continue;
            auto gens = sig.arrows_[a].gens;
            gens.insert(gens.end(), sig.arrows_[b].gens.begin(), sig.arrows_[b].gens.end());
            sig.compose_[a][b] = ArrowId{class_of[lookup_path(sig.arrows_[a].dom.value, gens)]};
        }
    }

    sig.height_ = 0;
    for (const auto& s : sig.sorts_) sig.height_ = std::max(sig.height_, s.level);

    for (std::uint32_t s = 0; s < n; ++s) {
        const auto& rs = raw.sorts[s];
        if (rs.declared_level && *rs.declared_level != sig.sorts_[s].level)
            diags.push_back({ErrorKind::LevelMismatch,
                             "sort " + rs.name + " declared at level " + std::to_string(*rs.declared_level) +
                                 " but has level " + std::to_string(sig.sorts_[s].level),
                             rs.where});
    }
    if (!diags.empty()) throw Error(std::move(diags));
    return sig;
}

std::vector<int> compute_levels(const Signature& sig) {
    std::vector<int> out;
    for (auto s : sig.sorts()) out.push_back(sig.level(s));
    return out;
}

}  // namespace folds
