#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "folds/error.hpp"
#include "folds/isogen.hpp"
#include "folds/stdlib.hpp"
#include "folds/text.hpp"
#include "oracles.hpp"

using namespace folds;

namespace {

Formula F(const Signature& sig, const std::string& text) { return parse_formula(sig, text); }

// Each expected conjunct is alpha-equal to exactly one generated conjunct.
void expect_same_conjuncts(const Signature& sig, const Formula& got, const std::vector<Formula>& want) {
    auto parts = conjuncts(simplify(got));
    ASSERT_EQ(parts.size(), want.size()) << print_formula(sig, got);
    std::vector<bool> used(parts.size(), false);
    for (const auto& w : want) {
        bool hit = false;
        for (std::size_t i = 0; i < parts.size() && !hit; ++i)
            if (!used[i] && alpha_eq(parts[i], w)) used[i] = hit = true;
        EXPECT_TRUE(hit) << "missing " << print_formula(sig, w) << " in " << print_formula(sig, got);
    }
}

std::set<std::string> library_keys(const Context& ctx, SortId r, ArrowId p, const std::string& x,
                                   const std::string& y) {
    std::set<std::string> out;
    for (const auto& pat : enum_fillers(ctx, r, p, x, y)) out.insert(oracle::pattern_key(ctx, r, pat));
    return out;
}

}  // namespace

TEST(Fillers, EqualityAtSourcePosition) {
    const auto& sig = builtin_signature("lrg_eq");
    Context ctx = parse_context(sig, "x:O, y:O, f:A(x,y), g:A(x,y)");
    SortId eq = sig.sort("EqA");
    ArrowId s = sig.resolve_path(eq, {"s"});
    auto pats = enum_fillers(ctx, eq, s, "f", "g");
    ASSERT_EQ(pats.size(), 3u);
    std::vector<Formula> want{F(sig, "forall h:A(x,y). EqA(f,h) ~= EqA(g,h)"), F(sig, "EqA(f,f) ~= EqA(g,f)"),
                              F(sig, "EqA(f,g) ~= EqA(g,g)")};
    expect_same_conjuncts(sig, ind_at(ctx, eq, s, "f", "g"), want);
}

TEST(Fillers, IdentityWitnessCannotSeparateDistinctObjects) {
    const auto& sig = builtin_signature("lcat");
    Context ctx = parse_context(sig, "x:O, y:O");
    SortId I = sig.sort("I");
    ArrowId p = sig.resolve_path(I, {"i", "d"});
    EXPECT_TRUE(enum_fillers(ctx, I, p, "x", "y").empty());
    EXPECT_EQ(ind_at(ctx, I, p, "x", "y")->kind, FormulaKind::Top);
    EXPECT_TRUE(oracle::brute_force_fillers(ctx, I, p, "x", "y").empty());
}

TEST(Fillers, ArrowsAtTheirSource) {
    const auto& sig = builtin_signature("lcat");
    Context ctx = parse_context(sig, "x:O, y:O");
    SortId A = sig.sort("A");
    ArrowId d = sig.resolve_path(A, {"d"});
    EXPECT_EQ(enum_fillers(ctx, A, d, "x", "y").size(), 3u);
    std::vector<Formula> want{F(sig, "forall z:O. A(x,z) ~= A(y,z)"), F(sig, "A(x,x) ~= A(y,x)"),
                              F(sig, "A(x,y) ~= A(y,y)")};
    expect_same_conjuncts(sig, ind_at(ctx, A, d, "x", "y"), want);
}

TEST(Fillers, IncompatibleSortIsRejected) {
    const auto& sig = builtin_signature("lrg");
    Context ctx = parse_context(sig, "x:O, y:O, f:A(x,y), g:A(x,y)");
    SortId I = sig.sort("I");
    try {
        enum_fillers(ctx, I, sig.resolve_path(I, {"i"}), "f", "g");
        FAIL() << "accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IncompatibleSort);
    }
}

TEST(Fillers, AgreeWithExhaustiveAssignment) {
    const std::vector<std::string> contexts{
        "x:O, y:O",
        "x:O, y:O",
        "o1:O, o2:O, x:A(o1,o2), y:A(o1,o2)",
        "o:O, x:A(o,o), y:A(o,o)",
        "o1:O, o2:O, x:A(o1,o1), y:A(o2,o2)",
        "o1:O, o2:O, x:A(o1,o2), y:A(o2,o1)",
        "o1:O, o2:O, o3:O, x:A(o1,o2), y:A(o1,o3)",
    };
    std::size_t compared = 0;
    for (const auto& name : builtin_signature_names()) {
        const auto& sig = builtin_signature(name);
        for (const auto& text : contexts) {
            Context ctx = parse_context(sig, text);
            SortId k = ctx.sort_of("x");
            auto lx = compatible_sorts(ctx, "x");
            auto ly = compatible_sorts(ctx, "y");
            for (auto r : lx) {
                if (std::find(ly.begin(), ly.end(), r) == ly.end()) continue;
                for (auto p : sig.hom(r, k)) {
                    auto got = library_keys(ctx, r, p, "x", "y");
                    auto want = oracle::brute_force_fillers(ctx, r, p, "x", "y");
                    EXPECT_EQ(got, want) << name << " [" << text << "] " << sig.sort_name(r) << " at "
                                         << sig.arrow_label(p);
                    ++compared;
                }
            }
        }
    }
    EXPECT_GT(compared, 20u);
}

TEST(Fillers, PatternsAreWellFormedAndDistinct) {
    const auto& sig = builtin_signature("lcat");
    for (auto k : sig.sorts()) {
        IsoFormula iso = iso_formula(sig, k);
        for (const auto& e : ind_trace(iso.context, iso.x, iso.y)) {
            auto pats = enum_fillers(iso.context, e.sort, e.arrow, iso.x, iso.y);
            std::set<std::string> keys;
            for (const auto& pat : pats) {
                Context ext = iso.context;
                for (const auto& d : pat.fresh) {
                    EXPECT_FALSE(iso.context.contains(d.name));
                    ext.add(d);
                }
                EXPECT_NO_THROW(ext.check_boundary(e.sort, pat.alpha));
                EXPECT_NO_THROW(ext.check_boundary(e.sort, pat.beta));
                EXPECT_EQ(ext.boundary_projection(e.sort, pat.alpha, e.arrow), iso.x);
                EXPECT_EQ(ext.boundary_projection(e.sort, pat.beta, e.arrow), iso.y);
                keys.insert(oracle::pattern_key(iso.context, e.sort, pat));
            }
            EXPECT_EQ(keys.size(), pats.size());
        }
    }
}

TEST(Ind, EqualityExampleHasSixConjuncts) {
    const auto& sig = builtin_signature("lrg_eq");
    Context ctx = parse_context(sig, "x:O, y:O, f:A(x,y), g:A(x,y)");
    std::vector<Formula> want{
        F(sig, "forall h:A(x,y). EqA(f,h) ~= EqA(g,h)"), F(sig, "EqA(f,f) ~= EqA(g,f)"),
        F(sig, "EqA(f,g) ~= EqA(g,g)"),                  F(sig, "forall h:A(x,y). EqA(h,f) ~= EqA(h,g)"),
        F(sig, "EqA(f,f) ~= EqA(f,g)"),                  F(sig, "EqA(g,f) ~= EqA(g,g)")};
    expect_same_conjuncts(sig, ind(ctx, "f", "g"), want);
}

TEST(Ind, LevelOneSortsGiveTop) {
    for (const auto& name : builtin_signature_names()) {
        const auto& sig = builtin_signature(name);
        for (auto k : sig.sorts()) {
            if (sig.level(k) != 1) continue;
            IsoFormula iso = iso_formula(sig, k);
            EXPECT_EQ(simplify(iso.formula)->kind, FormulaKind::Top) << name << " " << sig.sort_name(k);
        }
    }
}

TEST(Ind, ParallelArrowsInReflexiveGraphsGiveTop) {
    const auto& sig = builtin_signature("lrg");
    Context ctx = parse_context(sig, "x:O, y:O, f:A(x,y), g:A(x,y)");
    EXPECT_EQ(simplify(ind(ctx, "f", "g"))->kind, FormulaKind::Top);
}

TEST(Ind, LoopsCompareTheirIdentityWitnesses) {
    const auto& sig = builtin_signature("lrg");
    Context ctx = parse_context(sig, "x:O, y:O, f:A(x,x), g:A(y,y)");
    expect_same_conjuncts(sig, ind(ctx, "f", "g"), {F(sig, "I(f) ~= I(g)")});
}

TEST(Ind, ObjectsOfCategoriesSeeOnlyArrowFamilies) {
    const auto& sig = builtin_signature("lcat");
    IsoFormula iso = iso_formula(sig, sig.sort("O"));
    std::vector<Formula> want{F(sig, "forall z:O. A(x,z) ~= A(y,z)"), F(sig, "A(x,x) ~= A(y,x)"),
                              F(sig, "A(x,y) ~= A(y,y)"),             F(sig, "forall z:O. A(z,x) ~= A(z,y)"),
                              F(sig, "A(x,x) ~= A(x,y)"),             F(sig, "A(y,x) ~= A(y,y)")};
    expect_same_conjuncts(sig, iso.formula, want);
    auto trace = ind_trace(iso.context, iso.x, iso.y);
    std::size_t vacuous = 0;
    for (const auto& e : trace) vacuous += e.conjuncts.empty();
    EXPECT_GT(vacuous, 0u);
    EXPECT_EQ(trace.size(), 2u + vacuous);
}

TEST(Ind, DifferentSortsAreRejected) {
    const auto& sig = builtin_signature("lrg");
    Context ctx = parse_context(sig, "x:O, y:O, f:A(x,y)");
    try {
        ind(ctx, "x", "f");
        FAIL() << "accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SortMismatch);
    }
}

TEST(Ind, FreeVariablesStayInsideDependencies) {
    for (const auto& name : builtin_signature_names()) {
        const auto& sig = builtin_signature(name);
        for (auto k : sig.sorts()) {
            IsoFormula iso = iso_formula(sig, k);
            auto allowed = iso.context.dep_closure({iso.x, iso.y});
            for (const auto& v : free_vars(iso.formula))
                EXPECT_NE(std::find(allowed.begin(), allowed.end(), v), allowed.end()) << v;
            EXPECT_NO_THROW(check_formula(iso.context, iso.formula));
        }
    }
}

TEST(Ind, GenerationIsDeterministic) {
    for (const auto& name : builtin_signature_names()) {
        const auto& sig = builtin_signature(name);
        for (auto k : sig.sorts())
            EXPECT_EQ(print_formula(sig, iso_formula(sig, k).formula), print_formula(sig, iso_formula(sig, k).formula));
    }
}

TEST(SortEquiv, ThreeParts) {
    const auto& sig = builtin_signature("lrg");
    Context ctx = parse_context(sig, "x:O, y:O");
    Formula f = sort_equiv(ctx, sig.sort("A"), {"x", "x"}, {"y", "y"});
    EXPECT_EQ(conjuncts(f).size(), 3u);
    for (const auto& v : free_vars(f)) EXPECT_TRUE(v == "x" || v == "y") << v;
    EXPECT_NO_THROW(check_formula(ctx, f));
}

TEST(SortEquiv, BoundaryMustFit) {
    const auto& sig = builtin_signature("lrg");
    Context ctx = parse_context(sig, "x:O, y:O, f:A(x,y)");
    EXPECT_THROW(sort_equiv(ctx, sig.sort("I"), {"f"}, {"f"}), Error);
    EXPECT_THROW(sort_equiv(ctx, sig.sort("A"), {"x"}, {"y", "y"}), Error);
}

TEST(Expander, SharesExpansionsAcrossRenamings) {
    const auto& sig = builtin_signature("lcat");
    Expander ex(sig);
    Context c1 = parse_context(sig, "a:O, b:O");
    Context c2 = parse_context(sig, "p:O, q:O, r:O");
    auto i1 = ex.expand_ind(c1, "a", "b");
    auto i2 = ex.expand_ind(c2, "q", "r");
    EXPECT_EQ(i1.expansion, i2.expansion);
    auto i3 = ex.expand_ind(c1, "a", "a");
    EXPECT_NE(i1.expansion, i3.expansion);
    EXPECT_EQ(ex.size(), 2u);
}
