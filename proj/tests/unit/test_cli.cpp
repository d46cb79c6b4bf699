#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "folds/cli.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = folds::cli::run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& rel) { return std::string(FOLDS_DATA_DIR) + "/" + rel; }

json run_json(std::vector<std::string> args) {
    args.insert(args.begin(), "--json");
    Result r = run(args);
    return json::parse(r.out);
}

}  // namespace

TEST(Cli, Levels) {
    Result r = run({"levels", data("lrg.folds")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "I:1 A:2 O:3\n");
    EXPECT_EQ(run({"levels", data("lcat.folds")}).out, "I:1 EqA:1 Comp:1 A:2 O:3\n");
}

TEST(Cli, CheckSig) {
    Result r = run({"check-sig", data("lcat.folds")});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("height 3"), std::string::npos);
}

TEST(Cli, MissingFileIsInputError) {
    Result r = run({"levels", "/nonexistent/x.folds"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("folds: /nonexistent/x.folds"), std::string::npos);
}

TEST(Cli, UsageErrorsAreInputErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"sat", "lcat", "walkiso", "--level", "2", "--total"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, GenIsoParallelArrows) {
    Result r = run({"gen-iso", data("lrg_eq.folds"), "A"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("with 6 conjuncts"), std::string::npos) << r.out;
    json j = run_json({"gen-iso", data("lrg_eq.folds"), "A"});
    EXPECT_TRUE(j["ok"].get<bool>());
    EXPECT_EQ(j["report"]["conjuncts"].size(), 6u);
    Result v = run({"gen-iso", data("lrg_eq.folds"), "A", "--verbose"});
    EXPECT_NE(v.out.find("trace:"), std::string::npos);
}

TEST(Cli, GenIsoUnknownSort) {
    Result r = run({"gen-iso", data("lrg.folds"), "Q"});
    EXPECT_EQ(r.code, 2);
    json j = run_json({"gen-iso", data("lrg.folds"), "Q"});
    EXPECT_FALSE(j["ok"].get<bool>());
    EXPECT_TRUE(j["witness"].is_null());
    EXPECT_EQ(j["error"]["kind"], "unknown sort");
}

TEST(Cli, Compat) {
    EXPECT_EQ(run({"compat", "lcat", "EqA", "x:O, y:O, f:A(x,y)"}).code, 0);
    Result r = run({"compat", "lcat", "I", "x:O, y:O, f:A(x,y)"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("f is not I-compatible"), std::string::npos) << r.out;
}

TEST(Cli, Eval) {
    Result t = run({"eval", "lcat", data("corpus/walkiso.str"), "-e", "forall x:O. forall y:O. A(x,y) ~= A(y,x)", "--card"});
    EXPECT_EQ(t.code, 0) << t.out << t.err;
    Result f = run({"eval", "lcat", "arrow2", "-e", "forall x:O. forall y:O. exists f:A(x,y). true"});
    EXPECT_EQ(f.code, 1);
    EXPECT_EQ(f.out, "false\n");
    EXPECT_EQ(run({"eval", "lcat", "arrow2", "-e", "I(f)"}).code, 2);
    EXPECT_EQ(run({"eval", "lcat", "arrow2", "-e", "forall x:O. ("}).code, 2);
}

TEST(Cli, CheckModel) {
    EXPECT_EQ(run({"check-model", data("lcat.folds"), data("tcat.thy"), data("corpus/chain3.str")}).code, 0);
}

TEST(Cli, Sat) {
    EXPECT_EQ(run({"sat", "lcat", "walkiso", "--level", "2"}).code, 0);
    EXPECT_EQ(run({"sat", "lcat", "walkiso", "--total"}).code, 1);
    EXPECT_EQ(run({"sat", "lcat", "termcat_double_i", "--level", "1"}).code, 1);
    EXPECT_EQ(run({"sat", "lcat", "walkiso"}).code, 0);
    json j = run_json({"sat", "lcat", "walkiso", "--total"});
    EXPECT_FALSE(j["ok"].get<bool>());
    ASSERT_FALSE(j["witness"]["violations"].empty());
    const auto& v = j["witness"]["violations"][0];
    EXPECT_EQ(v["sort"], "O");
    EXPECT_TRUE(v.contains("pair"));
    EXPECT_TRUE(v.contains("card"));
}

TEST(Cli, Hom) {
    EXPECT_EQ(run({"hom", "lcat", "walkiso", "termcat", "--fibsurj"}).code, 0);
    EXPECT_EQ(run({"hom", "lcat", "arrow2", "termcat", "--fibsurj"}).code, 1);
    json j = run_json({"hom", "lcat", "walkiso", "termcat", "--fibsurj"});
    EXPECT_TRUE(j["witness"].contains("map"));
    EXPECT_TRUE(j["witness"].contains("sections"));
}

TEST(Cli, Equiv) {
    Result r = run({"equiv", "lcat", "walkiso", "termcat"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("left leg"), std::string::npos);
    Result n = run({"equiv", "lcat", "arrow2", "termcat"});
    EXPECT_EQ(n.code, 1);
    EXPECT_EQ(n.out, "not equivalent: both totally saturated and no structure isomorphism\n");
    json j = run_json({"equiv", "lcat", "walkiso", "termcat", "--max-apex", "0"});
    EXPECT_TRUE(j["ok"].get<bool>());
    EXPECT_TRUE(j["witness"].contains("left_sections"));
}

TEST(Cli, EquivReadsBoundFromEnvironment) {
    ::setenv("FOLDS_MAX_APEX", "1", 1);
    Result tight = run({"equiv", "lcat", "walkiso", "termcat"});
    ::setenv("FOLDS_MAX_APEX", "many", 1);
    Result bad = run({"equiv", "lcat", "walkiso", "termcat"});
    ::unsetenv("FOLDS_MAX_APEX");
    EXPECT_EQ(tight.code, 1);
    EXPECT_NE(tight.out.find("no span found"), std::string::npos) << tight.out;
    EXPECT_EQ(bad.code, 2);
    // An explicit flag wins over the environment.
    ::setenv("FOLDS_MAX_APEX", "1", 1);
    Result flag = run({"equiv", "lcat", "walkiso", "termcat", "--max-apex", "0"});
    ::unsetenv("FOLDS_MAX_APEX");
    EXPECT_EQ(flag.code, 0);
}

TEST(Cli, Hsip) {
    Result r = run({"hsip", data("lcat.folds"), data("tcat.thy"), data("corpus/arrow2.str"), data("corpus/chain3.str")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out, "not equivalent: no structure isomorphism\n");
    Result s = run({"hsip", "lcat", "tcat", "arrow2", "arrow2_relabeled"});
    EXPECT_EQ(s.code, 0);
    EXPECT_NE(s.out.find("equivalent: structure isomorphism"), std::string::npos);
    EXPECT_EQ(run({"hsip", "lcat", "tcat", "walkiso", "termcat"}).code, 2);
}

TEST(Cli, JsonFlagAfterSubcommand) {
    Result r = run({"levels", "lrg", "--json"});
    EXPECT_EQ(r.code, 0);
    json j = json::parse(r.out);
    EXPECT_EQ(j["report"]["levels"]["O"], 3);
    for (const char* key : {"ok", "witness", "report"}) EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Cli, SyntaxErrorLocationInJson) {
    json j = run_json({"check-sig", std::string(FOLDS_GOLDEN_DIR) + "/parallel_arrows.txt"});
    EXPECT_FALSE(j["ok"].get<bool>());
    EXPECT_EQ(j["error"]["kind"], "syntax error");
    EXPECT_GT(j["error"]["diagnostics"][0]["line"].get<int>(), 0);
}
