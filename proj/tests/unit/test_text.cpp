#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

#include "folds/error.hpp"
#include "folds/stdlib.hpp"
#include "folds/text.hpp"

using namespace folds;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::filesystem::path kData{FOLDS_DATA_DIR};

Error error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e;
    }
    ADD_FAILURE() << "no error";
    return Error(ErrorKind::Syntax, "none");
}

}  // namespace

TEST(SignatureFiles, MatchBuiltins) {
    for (const auto& name : builtin_signature_names()) {
        Signature sig = parse_signature(slurp(kData / (name + ".folds")));
        const auto& builtin = builtin_signature(name);
        EXPECT_EQ(print_signature(sig), print_signature(builtin)) << name;
        ASSERT_EQ(sig.sort_count(), builtin.sort_count());
        for (auto s : sig.sorts()) {
            EXPECT_EQ(sig.sort_name(s), builtin.sort_name(s));
            EXPECT_EQ(sig.level(s), builtin.level(s));
            for (auto t : sig.sorts()) EXPECT_EQ(sig.hom(s, t).size(), builtin.hom(s, t).size());
        }
    }
}

TEST(SignatureFiles, RoundTrip) {
    for (const auto& name : builtin_signature_names()) {
        std::string printed = print_signature(builtin_signature(name));
        EXPECT_EQ(print_signature(parse_signature(printed)), printed);
    }
}

TEST(SignatureFiles, UndeclaredArrowInEquation) {
    Error e = error_of([] {
        parse_signature("signature g {\n  sort O;\n  sort A { d: O, c: O };\n  sort I { i: A } eq { d.i = c.j };\n}");
    });
    EXPECT_EQ(e.kind(), ErrorKind::Syntax);
    EXPECT_EQ(e.where().line, 4u);
    EXPECT_GT(e.where().column, 1u);
}

TEST(SignatureFiles, SyntaxErrorsCarryLocations) {
    Error e = error_of([] { parse_signature("signature g {\n  sort O\n}"); });
    EXPECT_EQ(e.kind(), ErrorKind::Syntax);
    EXPECT_EQ(e.where().line, 3u);
    EXPECT_EQ(error_of([] { parse_signature("signature g { sort O; } extra"); }).kind(), ErrorKind::Syntax);
    EXPECT_EQ(error_of([] { parse_signature("signature g { sort forall; }"); }).kind(), ErrorKind::Syntax);
}

TEST(SignatureFiles, Comments) {
    Signature sig = parse_signature("# graphs\nsignature g { // objects\n sort O; }\n");
    EXPECT_EQ(sig.sort_count(), 1u);
}

TEST(StructureFiles, CorpusFilesMatchCorpus) {
    const auto& lcat = builtin_signature("lcat");
    std::size_t seen = 0;
    for (const auto& e : corpus()) {
        auto path = kData / "corpus" / (e.name + ".str");
        ASSERT_TRUE(std::filesystem::exists(path)) << path;
        FinStructure m = parse_structure(lcat, slurp(path));
        EXPECT_TRUE(m == e.structure) << e.name;
        ++seen;
    }
    std::size_t files = 0;
    for (const auto& f : std::filesystem::directory_iterator(kData / "corpus")) files += f.path().extension() == ".str";
    EXPECT_EQ(files, seen);
}

TEST(StructureFiles, RoundTrip) {
    for (const auto& e : corpus()) {
        std::string printed = print_structure(e.structure);
        FinStructure back = parse_structure(e.structure.signature(), printed);
        EXPECT_TRUE(back == e.structure) << e.name;
        EXPECT_EQ(print_structure(back), printed);
    }
}

TEST(StructureFiles, ArityErrorHasLocation) {
    Error e = error_of([] {
        parse_structure(builtin_signature("lcat"), "structure w over lcat {\n  O = { a, b };\n  A = { u(a) };\n}");
    });
    EXPECT_EQ(e.kind(), ErrorKind::NonTotalMap);
    EXPECT_EQ(e.where().line, 3u);
}

TEST(StructureFiles, NamedWitnesses) {
    FinStructure m = parse_structure(builtin_signature("lcat"), R"(structure d over lcat {
      O = { pt };
      A = { ida(pt,pt) };
      I = { w1:(ida), w2:(ida) };
      EqA = { (ida,ida) };
      Comp = { (ida,ida,ida) };
    })");
    EXPECT_EQ(m.size(m.signature().sort("I")), 2u);
    EXPECT_FALSE(is_n_saturated(m, 1));
}

TEST(StructureFiles, WrongSignature) {
    EXPECT_EQ(error_of([] { parse_structure(builtin_signature("lrg"), "structure m over lcat { }"); }).kind(),
              ErrorKind::Name);
}

TEST(TheoryFiles, DataFileMatchesBuiltin) {
    const auto& lcat = builtin_signature("lcat");
    Theory file = parse_theory(lcat, slurp(kData / "tcat.thy"));
    Theory builtin = tcat_axioms();
    ASSERT_EQ(file.axioms.size(), builtin.axioms.size());
    for (std::size_t i = 0; i < file.axioms.size(); ++i) {
        EXPECT_EQ(file.axioms[i].first, builtin.axioms[i].first);
        EXPECT_TRUE(alpha_eq(file.axioms[i].second, builtin.axioms[i].second)) << file.axioms[i].first;
    }
    EXPECT_EQ(print_theory(lcat, parse_theory(lcat, print_theory(lcat, builtin))), print_theory(lcat, builtin));
}

TEST(TheoryFiles, OpenAxiomsAreRejected) {
    const auto& lcat = builtin_signature("lcat");
    EXPECT_EQ(error_of([&] { parse_theory(lcat, "theory t over lcat { axiom a: forall f:A(x,x). I(f); }"); }).kind(),
              ErrorKind::UnboundVariable);
    EXPECT_EQ(error_of([&] { parse_theory(lcat, "theory t over lcat { axiom a: true; axiom a: false; }"); }).kind(),
              ErrorKind::Syntax);
}

TEST(Formulas, PrecedenceAndRoundTrip) {
    const auto& sig = builtin_signature("lcat");
    const char* texts[] = {
        "true",
        "false",
        "I(f) & EqA(f,g) | Comp(f,g,h)",
        "I(f) -> I(g) -> I(h)",
        "(I(f) -> I(g)) -> I(h)",
        "I(f) <-> (I(g) <-> I(h))",
        "forall x:O. exists y:O. sigma f':A(x,y). Ind(f',f') & A(x,y) ~= A(y,x)",
        "(I(f) | I(g)) & I(h)",
        "I(f) & (I(g) & I(h))",
        "forall x:O, y:O. A(x,y) ~= A(x,y)",
    };
    for (const char* t : texts) {
        Formula f = parse_formula(sig, t);
        std::string printed = print_formula(sig, f);
        Formula back = parse_formula(sig, printed);
        EXPECT_TRUE(alpha_eq(f, back)) << t << " printed as " << printed;
        EXPECT_EQ(print_formula(sig, back), printed);
    }
    Formula right = parse_formula(sig, "I(f) -> I(g) -> I(h)");
    EXPECT_EQ(right->children[1]->kind, FormulaKind::Implies);
    Formula mixed = parse_formula(sig, "I(f) & I(g) | I(h)");
    EXPECT_EQ(mixed->kind, FormulaKind::Or);
}

TEST(Formulas, Errors) {
    const auto& sig = builtin_signature("lcat");
    EXPECT_EQ(error_of([&] { parse_formula(sig, "Q(x)"); }).kind(), ErrorKind::Syntax);
    EXPECT_EQ(error_of([&] { parse_formula(sig, "I(f) <-> I(g) <-> I(h)"); }).kind(), ErrorKind::Syntax);
    EXPECT_EQ(error_of([&] { parse_formula(sig, "A(x,y) ~= I(f)"); }).kind(), ErrorKind::Syntax);
    EXPECT_EQ(error_of([&] { parse_formula(sig, "forall x:O I(f)"); }).kind(), ErrorKind::Syntax);
    Error e = error_of([&] { parse_formula(sig, "I(f) &\n  & I(g)"); });
    EXPECT_EQ(e.where().line, 2u);
    EXPECT_EQ(e.where().column, 3u);
}

TEST(Contexts, Parse) {
    const auto& sig = builtin_signature("lcat");
    Context ctx = parse_context(sig, "x:O, y:O, f:A(x,y)");
    EXPECT_EQ(print_context(ctx), "x:O, y:O, f:A(x,y)");
    EXPECT_THROW(parse_context(sig, "f:A(x,y)"), Error);
}
