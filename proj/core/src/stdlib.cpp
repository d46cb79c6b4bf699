#include "folds/stdlib.hpp"

#include <set>

#include "folds/text.hpp"

namespace folds {

namespace {

constexpr std::string_view kLrg = R"(signature lrg {
  sort O;
  sort A { d: O, c: O };
  sort I { i: A } eq { i.d = i.c };
}
)";

constexpr std::string_view kLrgEq = R"(signature lrg_eq {
  sort O;
  sort A { d: O, c: O };
  sort I { i: A } eq { i.d = i.c };
  sort EqA { s: A, t: A } eq { s.d = t.d, s.c = t.c };
}
)";

constexpr std::string_view kLcat = R"(signature lcat {
  sort O;
  sort A { d: O, c: O };
  sort I { i: A } eq { i.d = i.c };
  sort EqA { s: A, t: A } eq { s.d = t.d, s.c = t.c };
  sort Comp { t0: A, t1: A, t2: A } eq { t0.d = t2.d, t1.c = t2.c, t1.d = t0.c };
}
)";

constexpr std::string_view kTcat = R"(theory tcat over lcat {
  axiom E1_refl: forall x:O, y:O, f:A(x,y). EqA(f,f);
  axiom E2_sym: forall x:O, y:O, f:A(x,y), g:A(x,y). EqA(f,g) -> EqA(g,f);
  axiom E2_trans: forall x:O, y:O, f:A(x,y), g:A(x,y), h:A(x,y). EqA(f,g) & EqA(g,h) -> EqA(f,h);
  axiom E3_id: forall x:O, f:A(x,x), g:A(x,x). EqA(f,g) & I(f) -> I(g);
  axiom E3_comp0: forall x:O, y:O, z:O, f:A(x,y), f2:A(x,y), g:A(y,z), h:A(x,z). EqA(f,f2) & Comp(f,g,h) -> Comp(f2,g,h);
  axiom E3_comp1: forall x:O, y:O, z:O, f:A(x,y), g:A(y,z), g2:A(y,z), h:A(x,z). EqA(g,g2) & Comp(f,g,h) -> Comp(f,g2,h);
  axiom E3_comp2: forall x:O, y:O, z:O, f:A(x,y), g:A(y,z), h:A(x,z), h2:A(x,z). EqA(h,h2) & Comp(f,g,h) -> Comp(f,g,h2);
  axiom C1_total: forall x:O, y:O, z:O, f:A(x,y), g:A(y,z). exists h:A(x,z). Comp(f,g,h);
  axiom C2_functional: forall x:O, y:O, z:O, f:A(x,y), g:A(y,z), h:A(x,z), h2:A(x,z). Comp(f,g,h) & Comp(f,g,h2) -> EqA(h,h2);
  axiom C3_assoc: forall w:O, x:O, y:O, z:O, f:A(w,x), g:A(x,y), h:A(y,z), gf:A(w,y), hg:A(x,z), k:A(w,z). Comp(f,g,gf) & Comp(g,h,hg) & Comp(gf,h,k) -> Comp(f,hg,k);
  axiom I1_exists: forall x:O. exists i:A(x,x). I(i);
  axiom I2_left: forall x:O, y:O, i:A(x,x), f:A(x,y). I(i) -> Comp(i,f,f);
  axiom I2_right: forall x:O, y:O, f:A(x,y), j:A(y,y). I(j) -> Comp(f,j,f);
}
)";

// Hands out names not bound in ctx nor handed out before, priming on clashes.
auto fresh_namer(const Context& ctx) {
    std::set<std::string> taken;
    for (const auto& d : ctx.decls()) taken.insert(d.name);
    return [taken](std::string base) mutable {
        while (taken.count(base)) base += '\'';
        taken.insert(base);
        return base;
    };
}

}  // namespace

std::vector<std::string> builtin_signature_names() { return {"lrg", "lrg_eq", "lcat"}; }

std::string_view builtin_signature_text(std::string_view name) {
    if (name == "lrg") return kLrg;
    if (name == "lrg_eq") return kLrgEq;
    if (name == "lcat") return kLcat;
    throw Error(ErrorKind::Name, "no builtin signature named '" + std::string(name) + "'");
}

const Signature& builtin_signature(std::string_view name) {
    static const Signature lrg = parse_signature(kLrg);
    static const Signature lrg_eq = parse_signature(kLrgEq);
    static const Signature lcat = parse_signature(kLcat);
    if (name == "lrg") return lrg;
    if (name == "lrg_eq") return lrg_eq;
    if (name == "lcat") return lcat;
    throw Error(ErrorKind::Name, "no builtin signature named '" + std::string(name) + "'");
}

std::string_view tcat_text() { return kTcat; }

Theory tcat_axioms() { return parse_theory(builtin_signature("lcat"), kTcat); }

Formula iso_predicate(const Context& ctx, const std::string& x, const std::string& y) {
    const auto& sig = ctx.signature();
    const SortId A = sig.sort("A"), I = sig.sort("I"), EqA = sig.sort("EqA"), Comp = sig.sort("Comp");
    auto fresh = fresh_namer(ctx);
    const std::string f = fresh("f"), g = fresh("g"), k1 = fresh("k"), i1 = fresh("i"), k2 = fresh("k"), i2 = fresh("j");
    // g after f is an identity on x, and f after g one on y.
    Formula left = make_exists(
        {k1, A, {x, x}},
        make_exists({i1, A, {x, x}}, make_and({make_atom(Comp, {f, g, k1}), make_atom(I, {i1}), make_atom(EqA, {k1, i1})})));
    Formula right = make_exists(
        {k2, A, {y, y}},
        make_exists({i2, A, {y, y}}, make_and({make_atom(Comp, {g, f, k2}), make_atom(I, {i2}), make_atom(EqA, {k2, i2})})));
    return make_exists({f, A, {x, y}}, make_exists({g, A, {y, x}}, make_and({left, right})));
}

Formula yso_predicate(const Context& ctx, const std::string& x, const std::string& y) {
    const auto& sig = ctx.signature();
    const SortId O = sig.sort("O"), A = sig.sort("A"), Comp = sig.sort("Comp");
    auto fresh = fresh_namer(ctx);
    const std::string z = fresh("z"), w = fresh("w");
    const std::string f = fresh("f"), g = fresh("g"), h = fresh("h"), k = fresh("k"), l = fresh("l");
    // Precomposition with f commutes with the matching of A(-, x) and A(-, y).
    Formula natural = make_implies(make_and({make_atom(Comp, {f, g, h}), make_ind(h, k), make_ind(g, l)}),
                                   make_atom(Comp, {f, l, k}));
    Formula inner = make_forall_all({{w, O, {}}, {f, A, {w, z}}, {g, A, {z, x}}, {h, A, {w, x}}, {k, A, {w, y}},
                                     {l, A, {z, y}}},
                                    natural);
    return make_forall({z, O, {}}, make_and({make_equiv(A, {z, x}, {z, y}), inner}));
}

// ---------------------------------------------------------------- finite categories

std::uint32_t FiniteCategory::compose(std::uint32_t f, std::uint32_t g) const {
    auto it = comp.find({f, g});
    if (it == comp.end())
        throw Error(ErrorKind::InvalidCategory, "no composite of " + arrows.at(f).name + " and " + arrows.at(g).name);
    return it->second;
}

FiniteCategory make_category(std::string name, std::vector<std::string> objects,
                             std::vector<std::tuple<std::string, std::string, std::string>> arrows,
                             std::vector<std::tuple<std::string, std::string, std::string>> composites) {
    FiniteCategory c;
    c.name = std::move(name);
    c.objects = std::move(objects);
    auto object = [&](const std::string& o) -> std::uint32_t {
        for (std::uint32_t i = 0; i < c.objects.size(); ++i)
            if (c.objects[i] == o) return i;
        throw Error(ErrorKind::InvalidCategory, "unknown object '" + o + "'");
    };
    for (std::uint32_t i = 0; i < c.objects.size(); ++i) {
        c.identity.push_back(static_cast<std::uint32_t>(c.arrows.size()));
        c.arrows.push_back({"id_" + c.objects[i], i, i});
    }
    for (const auto& [an, s, t] : arrows) c.arrows.push_back({an, object(s), object(t)});
    auto arrow = [&](const std::string& a) -> std::uint32_t {
        for (std::uint32_t i = 0; i < c.arrows.size(); ++i)
            if (c.arrows[i].name == a) return i;
        throw Error(ErrorKind::InvalidCategory, "unknown arrow '" + a + "'");
    };
    for (std::uint32_t f = 0; f < c.arrows.size(); ++f) {
        c.comp[{c.identity[c.arrows[f].src], f}] = f;
        c.comp[{f, c.identity[c.arrows[f].tgt]}] = f;
    }
    for (const auto& [f, g, h] : composites) c.comp[{arrow(f), arrow(g)}] = arrow(h);
    validate_category(c);
    return c;
}

FiniteCategory make_poset(std::string name, std::vector<std::string> objects,
                          std::vector<std::pair<std::string, std::string>> less) {
    std::vector<std::tuple<std::string, std::string, std::string>> arrows;
    for (const auto& [a, b] : less) arrows.emplace_back(a + "_" + b, a, b);
    std::vector<std::tuple<std::string, std::string, std::string>> composites;
    for (const auto& [a, b] : less)
        for (const auto& [b2, c] : less)
            if (b == b2) composites.emplace_back(a + "_" + b, b + "_" + c, a + "_" + c);
    return make_category(std::move(name), std::move(objects), std::move(arrows), std::move(composites));
}

void validate_category(const FiniteCategory& c) {
    const auto n = static_cast<std::uint32_t>(c.arrows.size());
    if (c.identity.size() != c.objects.size())
        throw Error(ErrorKind::InvalidCategory, "every object needs an identity");
    for (std::uint32_t x = 0; x < c.objects.size(); ++x) {
        const auto& id = c.arrows.at(c.identity[x]);
        if (id.src != x || id.tgt != x)
            throw Error(ErrorKind::InvalidCategory, "identity of " + c.objects[x] + " is not an endomorphism");
    }
    for (std::uint32_t f = 0; f < n; ++f) {
        for (std::uint32_t g = 0; g < n; ++g) {
            if (c.arrows[f].tgt != c.arrows[g].src) continue;
            std::uint32_t h = c.compose(f, g);
            if (c.arrows[h].src != c.arrows[f].src || c.arrows[h].tgt != c.arrows[g].tgt)
                throw Error(ErrorKind::InvalidCategory, "composite of " + c.arrows[f].name + " and " + c.arrows[g].name +
                                                            " has the wrong ends");
        }
        if (c.compose(c.identity[c.arrows[f].src], f) != f || c.compose(f, c.identity[c.arrows[f].tgt]) != f)
            throw Error(ErrorKind::InvalidCategory, "unit law fails at " + c.arrows[f].name);
    }
    for (std::uint32_t f = 0; f < n; ++f)
        for (std::uint32_t g = 0; g < n; ++g) {
            if (c.arrows[f].tgt != c.arrows[g].src) continue;
            for (std::uint32_t h = 0; h < n; ++h) {
                if (c.arrows[g].tgt != c.arrows[h].src) continue;
                if (c.compose(c.compose(f, g), h) != c.compose(f, c.compose(g, h)))
                    throw Error(ErrorKind::InvalidCategory, "associativity fails at " + c.arrows[f].name + ", " +
                                                                c.arrows[g].name + ", " + c.arrows[h].name);
            }
        }
}

FinStructure category_to_structure(const Signature& lcat, const FiniteCategory& c) {
    validate_category(c);
    const SortId O = lcat.sort("O"), A = lcat.sort("A"), I = lcat.sort("I"), EqA = lcat.sort("EqA"),
                 Comp = lcat.sort("Comp");
    FinStructure m(lcat, c.name);
    for (const auto& o : c.objects) m.add(O, o, {});
    for (const auto& a : c.arrows) m.add(A, a.name, {a.src, a.tgt});
    for (auto id : c.identity) m.add(I, "", {id});
    for (std::uint32_t f = 0; f < c.arrows.size(); ++f) m.add(EqA, "", {f, f});
    for (std::uint32_t f = 0; f < c.arrows.size(); ++f)
        for (std::uint32_t g = 0; g < c.arrows.size(); ++g)
            if (c.arrows[f].tgt == c.arrows[g].src) m.add(Comp, "", {f, g, c.compose(f, g)});
    m.validate();
    return m;
}

FiniteCategory structure_to_category(const FinStructure& m) {
    const auto& sig = m.signature();
    const SortId O = sig.sort("O"), A = sig.sort("A"), I = sig.sort("I"), EqA = sig.sort("EqA"), Comp = sig.sort("Comp");
    auto report = check_model(m, tcat_axioms());
    if (!report.ok) {
        std::string names;
        for (const auto& f : report.failed) names += (names.empty() ? "" : ", ") + f;
        throw Error(ErrorKind::NotAModel, "structure " + m.name() + " fails " + names);
    }
    if (!is_n_saturated(m, 1)) throw Error(ErrorKind::NotAModel, "structure " + m.name() + " is not 1-saturated");
    for (std::uint32_t e = 0; e < m.size(EqA); ++e) {
        const auto& args = m.element(EqA, e).args;
        if (args[0] != args[1])
            throw Error(ErrorKind::NotAModel, "EqA relates distinct arrows " + m.display(A, args[0]) + " and " +
                                                  m.display(A, args[1]));
    }
    FiniteCategory c;
    c.name = m.name();
    for (std::uint32_t o = 0; o < m.size(O); ++o) c.objects.push_back(m.display(O, o));
    for (std::uint32_t a = 0; a < m.size(A); ++a)
        c.arrows.push_back({m.display(A, a), m.element(A, a).args[0], m.element(A, a).args[1]});
    c.identity.assign(c.objects.size(), 0);
    std::vector<bool> seen(c.objects.size(), false);
    for (std::uint32_t e = 0; e < m.size(I); ++e) {
        auto a = m.element(I, e).args[0];
        auto x = c.arrows[a].src;
        if (!seen[x]) c.identity[x] = a;
        seen[x] = true;
    }
    for (std::uint32_t e = 0; e < m.size(Comp); ++e) {
        const auto& args = m.element(Comp, e).args;
        c.comp.emplace(std::make_pair(args[0], args[1]), args[2]);
    }
    validate_category(c);
    return c;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> categorical_iso_pairs(const FiniteCategory& c) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::uint32_t f = 0; f < c.arrows.size(); ++f)
        for (std::uint32_t g = 0; g < c.arrows.size(); ++g) {
            const auto& af = c.arrows[f];
            const auto& ag = c.arrows[g];
            if (af.tgt != ag.src || ag.tgt != af.src) continue;
            if (c.compose(f, g) == c.identity[af.src] && c.compose(g, f) == c.identity[af.tgt])
                out.emplace(af.src, af.tgt);
        }
    return {out.begin(), out.end()};
}

bool is_gaunt(const FiniteCategory& c) {
    for (std::uint32_t f = 0; f < c.arrows.size(); ++f) {
        if (c.identity[c.arrows[f].src] == f) continue;
        for (std::uint32_t g = 0; g < c.arrows.size(); ++g) {
            const auto& af = c.arrows[f];
            const auto& ag = c.arrows[g];
            if (af.tgt != ag.src || ag.tgt != af.src) continue;
            if (c.compose(f, g) == c.identity[af.src] && c.compose(g, f) == c.identity[af.tgt]) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- corpus

namespace {

std::vector<CorpusEntry> build_corpus() {
    const Signature& lcat = builtin_signature("lcat");
    std::vector<FiniteCategory> cats;
    cats.push_back(make_category("termcat", {"pt"}, {}, {}));
    cats.push_back(make_poset("arrow2", {"x0", "x1"}, {{"x0", "x1"}}));
    cats.push_back(make_category("arrow2_relabeled", {"q", "p"}, {{"g", "p", "q"}}, {}));
    cats.push_back(make_poset("chain3", {"c0", "c1", "c2"}, {{"c0", "c1"}, {"c1", "c2"}, {"c0", "c2"}}));
    cats.push_back(make_category("walkiso", {"a", "b"}, {{"u", "a", "b"}, {"v", "b", "a"}},
                                 {{"u", "v", "id_a"}, {"v", "u", "id_b"}}));
    cats.push_back(make_category("z2cat", {"pt"}, {{"s", "pt", "pt"}}, {{"s", "s", "id_pt"}}));
    cats.push_back(make_category("disc1", {"d1"}, {}, {}));
    cats.push_back(make_category("disc2", {"d1", "d2"}, {}, {}));
    cats.push_back(make_category("disc3", {"d1", "d2", "d3"}, {}, {}));
    cats.push_back(make_poset("commsquare", {"s0", "s1", "s2", "s3"},
                              {{"s0", "s1"}, {"s0", "s2"}, {"s1", "s3"}, {"s2", "s3"}, {"s0", "s3"}}));
    std::vector<CorpusEntry> out;
    for (auto& c : cats) {
        FinStructure m = category_to_structure(lcat, c);
        out.push_back(CorpusEntry{c.name, std::move(c), std::move(m)});
    }
    // The terminal category with a second identity witness.
    FinStructure doubled = category_to_structure(lcat, *out.front().category);
    doubled.set_name("termcat_double_i");
    FinStructure twice(lcat, "termcat_double_i");
    for (auto s : lcat.sorts())
        for (std::uint32_t e = 0; e < doubled.size(s); ++e) {
            const auto& el = doubled.element(s, e);
            if (lcat.sort_name(s) == "I") {
                twice.add(s, "w1", el.args);
                twice.add(s, "w2", el.args);
            } else {
                twice.add(s, el.name, el.args);
            }
        }
    twice.validate();
    out.push_back(CorpusEntry{"termcat_double_i", std::nullopt, std::move(twice)});
    return out;
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = build_corpus();
    return entries;
}

const CorpusEntry& corpus_entry(std::string_view name) {
    for (const auto& e : corpus())
        if (e.name == name) return e;
    throw Error(ErrorKind::Name, "no corpus entry named '" + std::string(name) + "'");
}

}  // namespace folds
