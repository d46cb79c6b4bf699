#include <gtest/gtest.h>

#include <random>

#include "folds/eval.hpp"
#include "folds/stdlib.hpp"
#include "folds/text.hpp"

using namespace folds;

namespace {

// Random lcat structure: a few objects, each with an identity loop, some
// extra arrows, and random witnesses over consistent boundaries of the
// level-1 sorts. Not necessarily a category.
FinStructure random_structure(std::mt19937& rng) {
    const auto& sig = builtin_signature("lcat");
    FinStructure m(sig, "rand");
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    SortId O = sig.sort("O"), A = sig.sort("A");
    int objects = pick(1, 2);
    for (int i = 0; i < objects; ++i) m.add(O, "o" + std::to_string(i), {});
    int arrows = 0;
    for (int i = 0; i < objects; ++i) m.add(A, "a" + std::to_string(arrows++), {std::uint32_t(i), std::uint32_t(i)});
    for (int extra = pick(0, 2); extra > 0; --extra)
        m.add(A, "a" + std::to_string(arrows++), {std::uint32_t(pick(0, objects - 1)), std::uint32_t(pick(0, objects - 1))});
    for (const char* name : {"I", "EqA", "Comp"}) {
        SortId s = sig.sort(name);
        for (const auto& b : m.boundaries(s)) {
            int r = pick(0, 5);
            int copies = r < 3 ? 0 : r < 5 ? 1 : 2;
            for (int c = 0; c < copies; ++c) m.add(s, "", b);
        }
    }
    m.validate();
    return m;
}

// Random formula over the variables x:O, f:A(x,x), g:A(x,x) and whatever
// binders introduce; every atom is well formed by construction.
class FormulaGen {
public:
    FormulaGen(const Signature& sig, std::mt19937& rng) : sig_(sig), rng_(rng) {}

    Formula gen(int depth, std::vector<std::string>& loops) {
        int r = pick(0, depth <= 0 ? 3 : 11);
        auto any = [&] { return loops[pick(0, int(loops.size()) - 1)]; };
        switch (r) {
            case 0: return make_atom(sig_.sort("I"), {any()});
            case 1: return make_atom(sig_.sort("EqA"), {any(), any()});
            case 2: return make_atom(sig_.sort("Comp"), {any(), any(), any()});
            case 3: return pick(0, 1) ? make_ind(any(), any()) : make_equiv(sig_.sort("A"), {"x", "x"}, {"x", "x"});
            case 4: return make_and({gen(depth - 1, loops), gen(depth - 1, loops)});
            case 5: return make_or(gen(depth - 1, loops), gen(depth - 1, loops));
            case 6: return make_implies(gen(depth - 1, loops), gen(depth - 1, loops));
            case 7: return make_iff(gen(depth - 1, loops), gen(depth - 1, loops));
            case 8: return pick(0, 1) ? make_top() : make_bottom();
            default: {
                static const FormulaKind kinds[] = {FormulaKind::Forall, FormulaKind::Exists, FormulaKind::Sigma};
                std::string v = "h" + std::to_string(counter_++);
                loops.push_back(v);
                Formula body = gen(depth - 1, loops);
                loops.pop_back();
                return make_binder(kinds[r - 9], VarDecl{v, sig_.sort("A"), {"x", "x"}}, body);
            }
        }
    }

private:
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    const Signature& sig_;
    std::mt19937& rng_;
    int counter_ = 0;
};

Context loop_context(const Signature& sig) { return parse_context(sig, "x:O, f:A(x,x), g:A(x,x)"); }

// Assignments of x, f, g with f and g loops at x.
std::vector<Assignment> loop_assignments(const FinStructure& m) {
    std::vector<Assignment> out;
    const auto& sig = m.signature();
    for (std::uint32_t x = 0; x < m.size(sig.sort("O")); ++x) {
        const auto& loops = m.fiber(sig.sort("A"), {x, x});
        for (auto f : loops)
            for (auto g : loops) out.push_back({{"x", x}, {"f", f}, {"g", g}});
    }
    return out;
}

}  // namespace

TEST(Properties, FormulaPrintParseRoundTrip) {
    const auto& sig = builtin_signature("lcat");
    std::mt19937 rng(7);
    FormulaGen gen(sig, rng);
    Context ctx = loop_context(sig);
    for (int i = 0; i < 300; ++i) {
        std::vector<std::string> loops{"f", "g"};
        Formula f = gen.gen(4, loops);
        ASSERT_NO_THROW(check_formula(ctx, f));
        std::string printed = print_formula(sig, f);
        Formula back = parse_formula(sig, printed);
        EXPECT_TRUE(alpha_eq(f, back)) << printed;
        EXPECT_EQ(print_formula(sig, back), printed);
    }
}

// The count of a compound formula is determined by the counts of its parts.
TEST(Properties, ConnectivesFollowWitnessArithmetic) {
    const auto& sig = builtin_signature("lcat");
    std::mt19937 rng(11);
    FormulaGen gen(sig, rng);
    Context ctx = loop_context(sig);
    for (int round = 0; round < 40; ++round) {
        FinStructure m = random_structure(rng);
        Evaluator ev(m);
        for (int i = 0; i < 10; ++i) {
            std::vector<std::string> loops{"f", "g"};
            Formula a = gen.gen(2, loops), b = gen.gen(2, loops);
            for (const auto& asg : loop_assignments(m)) {
                Card ca = ev.card(ctx, a, asg), cb = ev.card(ctx, b, asg);
                EXPECT_EQ(ev.card(ctx, make_and({a, b}), asg), ca * cb);
                EXPECT_EQ(ev.card(ctx, make_or(a, b), asg), (ca + cb).clamp());
                EXPECT_EQ(ev.card(ctx, make_implies(a, b), asg), Card::pow(cb, ca));
                EXPECT_EQ(ev.card(ctx, make_iff(a, b), asg), Card::pow(cb, ca) * Card::pow(ca, cb));
            }
        }
    }
}

// Binders over A(x,x): forall multiplies, sigma adds, exists clamps the sum.
TEST(Properties, BindersFollowWitnessArithmetic) {
    const auto& sig = builtin_signature("lcat");
    std::mt19937 rng(13);
    FormulaGen gen(sig, rng);
    Context ctx = loop_context(sig);
    for (int round = 0; round < 40; ++round) {
        FinStructure m = random_structure(rng);
        Evaluator ev(m);
        for (int i = 0; i < 10; ++i) {
            std::vector<std::string> loops{"f", "g", "k"};
            Formula body = gen.gen(2, loops);
            Context inner = ctx;
            inner.add("k", sig.sort("A"), {"x", "x"});
            VarDecl k{"k", sig.sort("A"), {"x", "x"}};
            for (const auto& asg : loop_assignments(m)) {
                Card prod = 1, sum = 0;
                for (auto e : m.fiber(sig.sort("A"), {asg.at("x"), asg.at("x")})) {
                    Assignment with = asg;
                    with["k"] = e;
                    Card c = ev.card(inner, body, with);
                    prod *= c;
                    sum += c;
                }
                EXPECT_EQ(ev.card(ctx, make_forall(k, body), asg), prod);
                EXPECT_EQ(ev.card(ctx, make_sigma(k, body), asg), sum);
                EXPECT_EQ(ev.card(ctx, make_exists(k, body), asg), sum.clamp());
            }
        }
    }
}

// Renaming variables together with the assignment changes nothing.
TEST(Properties, EvaluationIsInvariantUnderRenaming) {
    const auto& sig = builtin_signature("lcat");
    std::mt19937 rng(17);
    FormulaGen gen(sig, rng);
    Context ctx = loop_context(sig);
    Context swapped = parse_context(sig, "x:O, p:A(x,x), q:A(x,x)");
    for (int round = 0; round < 30; ++round) {
        FinStructure m = random_structure(rng);
        for (int i = 0; i < 8; ++i) {
            std::vector<std::string> loops{"f", "g"};
            Formula f = gen.gen(3, loops);
            Formula g = substitute(f, {{"f", "q"}, {"g", "p"}});
            for (const auto& asg : loop_assignments(m)) {
                Assignment moved{{"x", asg.at("x")}, {"q", asg.at("f")}, {"p", asg.at("g")}};
                EXPECT_EQ(eval_card(m, ctx, f, asg), eval_card(m, swapped, g, moved));
            }
        }
    }
}

// Within one fiber, indiscernibility is reflexive, symmetric and transitive
// in truth on any structure, saturated or not. Across fibers the compatible
// sorts differ and transitivity is not expected.
TEST(Properties, IndiscernibilityIsAnEquivalence) {
    std::mt19937 rng(19);
    for (int round = 0; round < 25; ++round) {
        FinStructure m = random_structure(rng);
        Evaluator ev(m);
        for (auto k : m.signature().sorts()) {
            std::size_t n = m.size(k);
            if (n > 6) continue;
            std::vector<std::vector<bool>> rel(n, std::vector<bool>(n));
            for (std::uint32_t a = 0; a < n; ++a)
                for (std::uint32_t b = 0; b < n; ++b) rel[a][b] = iso_card(ev, k, a, b).truthy();
            for (std::uint32_t a = 0; a < n; ++a) {
                EXPECT_TRUE(rel[a][a]) << print_structure(m);
                for (std::uint32_t b = 0; b < n; ++b) {
                    EXPECT_EQ(rel[a][b], rel[b][a]);
                    for (std::uint32_t c = 0; c < n; ++c) {
                        bool one_fiber = m.element(k, a).args == m.element(k, b).args &&
                                         m.element(k, b).args == m.element(k, c).args;
                        if (one_fiber && rel[a][b] && rel[b][c]) EXPECT_TRUE(rel[a][c]) << print_structure(m);
                    }
                }
            }
        }
    }
}

// Level-1 sorts have no structure below them to tell witnesses apart, so
// saturation there means each fiber has at most one element.
TEST(Properties, LevelOneSaturationIsSubsingletonFibers) {
    std::mt19937 rng(23);
    for (int round = 0; round < 60; ++round) {
        FinStructure m = random_structure(rng);
        bool subsingleton = true;
        for (auto k : m.signature().sorts()) {
            if (m.signature().level(k) != 1) continue;
            for (const auto& b : m.occupied_boundaries(k)) subsingleton &= m.fiber(k, b).size() <= 1;
        }
        EXPECT_EQ(is_n_saturated(m, 1), subsingleton);
    }
}

TEST(Properties, SaturationIsMonotone) {
    std::mt19937 rng(29);
    for (int round = 0; round < 40; ++round) {
        FinStructure m = random_structure(rng);
        auto p = saturation_profile(m);
        for (std::size_t n = 1; n < p.levels.size(); ++n)
            if (p.levels[n]) EXPECT_TRUE(p.levels[n - 1]);
        EXPECT_EQ(p.total, p.levels.back());
    }
}

TEST(Properties, StructurePrintParseRoundTrip) {
    std::mt19937 rng(31);
    for (int round = 0; round < 50; ++round) {
        FinStructure m = random_structure(rng);
        std::string printed = print_structure(m);
        FinStructure back = parse_structure(m.signature(), printed);
        EXPECT_TRUE(back == m) << printed;
    }
}
