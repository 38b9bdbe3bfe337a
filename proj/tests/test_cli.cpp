// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "primcalc/cli.hpp"

using namespace primcalc;
using nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, CheckPasses) {
    Outcome o = call({"check", "--F", "ln(abs(x))", "--f", "1/x"});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find("verdict: pass"), std::string::npos) << o.out;
}

TEST(Cli, CheckCatchesTheTextbookAnswer) {
    Outcome o = call({"check", "--F", "ln(abs(sin(x)/(1+cos(x)+sin(x))))", "--f", "1/(1-cos(x)+sin(x))", "--window",
                      "0", "4pi"});
    EXPECT_EQ(o.code, 1);
    EXPECT_NE(o.out.find("DomainMismatch"), std::string::npos) << o.out;
    EXPECT_NE(o.out.find("witness: pi"), std::string::npos) << o.out;

    Outcome j = call({"check", "--F", "ln(abs(sin(x)/(1+cos(x)+sin(x))))", "--f", "1/(1-cos(x)+sin(x))", "--window",
                      "0", "4pi", "--json"});
    EXPECT_EQ(j.code, 1);
    json doc = json::parse(j.out);
    EXPECT_EQ(doc["reason"], "DomainMismatch");
    EXPECT_EQ(doc["witness"], "pi");
}

TEST(Cli, Family) {
    Outcome o = call({"family", "--f", "x*cos(x)"});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(o.out, "x*sin(x) + cos(x) + c\n");

    Outcome j = call({"family", "--f", "1/x", "--window", "-5", "5", "--json"});
    EXPECT_EQ(j.code, 0) << j.err;
    json doc = json::parse(j.out);
    EXPECT_EQ(doc["family"]["constants"].size(), 2u);
    EXPECT_FALSE(doc["trace"]["steps"].empty());
}

TEST(Cli, Domain) {
    Outcome o = call({"domain", "1/(1-cos(x)+sin(x))", "--window", "0", "4pi"});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(o.out, "]0,3*pi/2[ ∪ ]3*pi/2,2*pi[ ∪ ]2*pi,7*pi/2[ ∪ ]7*pi/2,4*pi[\n");
}

TEST(Cli, Defint) {
    Outcome o = call({"defint", "--f", "exp(cos(x))*sin(x)", "--a", "0", "--b", "3pi/4"});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(o.out.substr(0, o.out.find('\n')), "2.22521313706");

    Outcome v = call({"defint", "--f", "sqrt(1-x^2)", "--a", "0", "--b", "1", "--via-g", "sin(x)", "--g-domain", "0",
                      "pi/2", "--json"});
    EXPECT_EQ(v.code, 0) << v.err;
    EXPECT_NEAR(json::parse(v.out)["value"].get<double>(), 0.785398163397, 1e-9);
}

TEST(Cli, Subst) {
    Outcome o = call({"subst", "--f", "1/sqrt(x^2+1)", "--g", "tan(x)", "--g-inverse", "arctan(x)", "--mode",
                      "inverse", "--g-domain", "-pi/2", "pi/2"});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(o.out, "ln(x+sqrt(x^2+1)) + c\n");
}

TEST(Cli, Counterexamples) {
    Outcome o = call({"counterexamples", "--json"});
    EXPECT_EQ(o.code, 0) << o.err;
    json doc = json::parse(o.out);
    EXPECT_EQ(doc["items"].size(), 3u);
    EXPECT_EQ(doc["broken"], false);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(call({"family", "--f", "sin(x"}).code, 2);
    EXPECT_EQ(call({"family", "--f", "foo(x)"}).code, 2);
    EXPECT_EQ(call({"family", "--f", "x", "--window", "2", "1"}).code, 2);
    EXPECT_EQ(call({"family"}).code, 2);
    EXPECT_EQ(call({"bogus"}).code, 2);
    EXPECT_EQ(call({"family", "--f", "exp(x^2)"}).code, 3);
    EXPECT_EQ(call({"domain", "sqrt(-1-x^2)"}).code, 3);
    EXPECT_EQ(call({"subst", "--f", "cos(x)", "--g", "sin(x)", "--g-inverse", "arcsin(x)", "--mode", "inverse",
                    "--g-domain", "0", "pi"})
                  .code,
              1);
    EXPECT_EQ(exit_code(ErrorCode::ResolutionFailure), 3);
    EXPECT_EQ(exit_code(ErrorCode::CatalogBroken), 1);
}

TEST(Cli, ErrorsInJsonModeAreOneDocument) {
    Outcome o = call({"family", "--f", "exp(x^2)", "--json"});
    EXPECT_EQ(o.code, 3);
    json doc = json::parse(o.out);
    EXPECT_EQ(doc["error"], "RuleNotFound");
}

TEST(Cli, Deterministic) {
    std::vector<std::string> args = {"family", "--f", "1/(1-cos(x)+sin(x))", "--window", "0", "4pi", "--json"};
    Outcome a = call(args);
    Outcome b = call(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
}
