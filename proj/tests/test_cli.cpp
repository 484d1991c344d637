#include <catch_amalgamated.hpp>

#include <sstream>

#include <json.hpp>

#include <kbh/cli.hpp>

#include "support.hpp"

using namespace kbh;
using namespace kbh::test;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string model_path(const std::string& file) { return std::string(KBH_SOURCE_DIR) + "/models/" + file; }

// Line and column of a ParseError raised by text.
std::pair<std::size_t, std::size_t> error_location(const std::string& text) {
    try {
        parse_model(text);
    } catch (const ParseError& e) {
        return {e.line(), e.column()};
    }
    return {0, 0};
}

}  // namespace

TEST_CASE("model files parse into the expected models", "[io]") {
    auto i3 = parse_model("model iwasawa3\ndim 3\nd w2 = - w1^w3\n");
    CHECK(i3.model.n() == 3);
    CHECK(i3.model.structure(2) == form(3, {1, 3}, {}, -1));
    CHECK(i3.model.structure(1).is_zero());
    CHECK_FALSE(i3.pi.has_value());
    CHECK(i3.model == builtin_model("iwasawa3"));

    auto nil6 = parse_model(
        "model nil6\ndim 6\nd w2 = - w1^w4\nd w3 = - w1^w5 - w2^w6\nd w5 = - w4^w6\npi = X2^X3\n");
    CHECK(nil6.model == builtin_model("nil6"));
    REQUIRE(nil6.pi.has_value());
    CHECK(*nil6.pi == X(6, {2, 3}));
}

TEST_CASE("model grammar accepts comments, separators and coefficients", "[io]") {
    auto pm = parse_model(
        "# header comment\n"
        "model t ; dim 3   # trailing\n"
        "d w3 = 3/2 w1^w2 - 2i * w1^w3 + i w2^w3\n"
        "pi = -X1^X2 + 1/3 X2^X3\n");
    Form expected(3);
    expected.add(mono({1, 2}), GaussianRational(mpq_class(3, 2)));
    expected.add(mono({1, 3}), GaussianRational(mpq_class(0), mpq_class(-2)));
    expected.add(mono({2, 3}), GaussianRational::i());
    CHECK(pm.model.structure(3) == expected);
    CHECK(*pm.pi == X(3, {1, 2}, -1) + GaussianRational(mpq_class(1, 3)) * X(3, {2, 3}));
    CHECK(parse_model("model z\ndim 2\nd w1 = 0\n").model.structure(1).is_zero());
}

TEST_CASE("parse errors carry their location", "[io]") {
    CHECK(error_location("model a\ndim 3\nd w2 = - w1^w4\n") == std::pair<std::size_t, std::size_t>{3, 13});
    CHECK(error_location("model a\ndim 3\nd w2 = w3^w1\n") == std::pair<std::size_t, std::size_t>{3, 10});
    CHECK(error_location("model a\ndim 3\nd w2 = 3/x w1^w3\n") == std::pair<std::size_t, std::size_t>{3, 8});
    CHECK(error_location("model a\ndim 3\nd w2 = w1^w3\nd w2 = w1^w3\n") == std::pair<std::size_t, std::size_t>{4, 2});
    CHECK(error_location("model a\ndim 3\nd w7 = w1^w3\n").first == 3);
    CHECK(error_location("model a\ndim 3\npi = X1^X1\n").first == 3);
    CHECK(error_location("model a\nd w1 = w2^w3\n").first == 2);
    CHECK(error_location("dim 3\n").first != 0);
    CHECK(error_location("model a\ndim 3\nfoo\n") == std::pair<std::size_t, std::size_t>{3, 1});
    CHECK_THROWS_AS(parse_polyvector("X1^X2 X2^X3", 3), ParseError);
    CHECK_THROWS_AS(parse_polyvector("0 X1^X2", 3), ParseError);
}

TEST_CASE("canonical formatting is a fixed point", "[io][property]") {
    std::vector<ParsedModel> models;
    for (const auto& name : builtin_names()) models.push_back({builtin_model(name), std::nullopt});
    models.push_back(parse_model("model c\ndim 4\nd w4 = 2i w1^w2 - 3/5 w1^w3 + w2^w3 - 1/2i w1^w2\n"
                                 "pi = X1^X2 - i X3^X4\n"));
    models.push_back(parse_model("model d ; dim 3 ; pi = 0"));
    for (const auto& pm : models) {
        std::string text = format_model(pm.model, pm.pi);
        ParsedModel again = parse_model(text);
        CHECK(again.model == pm.model);
        CHECK(again.pi == pm.pi);
        CHECK(format_model(again.model, again.pi) == text);
    }
    CHECK(format_model(builtin_model("iwasawa3")) == "model iwasawa3\ndim 3\nd w2 = -w1^w3\n");
}

TEST_CASE("dimension vector and diamond literals", "[io]") {
    CHECK(parse_dim_vector("1,6,15,20,15,6,1") == DimVector(3, {1, 6, 15, 20, 15, 6, 1}));
    CHECK(parse_dim_vector(" 1 2 1 ") == DimVector(1, {1, 2, 1}));
    CHECK(parse_dim_vector("[0,0,3,0,0]") == DimVector(2, {0, 0, 3, 0, 0}));
    CHECK(parse_dim_vector(R"({"model":"x","kb":[1,5,1]})") == DimVector(1, {1, 5, 1}));
    CHECK(parse_dim_vector("@" + model_path("torus3.dims")) == DimVector(3, {1, 6, 15, 20, 15, 6, 1}));
    CHECK_THROWS_AS(parse_dim_vector("1,2"), StructuralError);
    CHECK_THROWS_AS(parse_dim_vector("1,x,1"), StructuralError);
    CHECK_THROWS_AS(parse_dim_vector("1,-2,1"), StructuralError);
    CHECK_THROWS_AS(parse_dim_vector("@/nonexistent/file"), StructuralError);

    HodgeDiamond p2 = parse_diamond("@" + model_path("p2.diamond"));
    CHECK(p2.n == 2);
    CHECK(p2.at(1, 1) == 1);
    CHECK(p2.at(0, 1) == 0);
    CHECK(parse_diamond("1,1;1,1") == HodgeDiamond(1, {{1, 1}, {1, 1}}));
    CHECK(parse_diamond("[[1,1],[1,1]]") == HodgeDiamond(1, {{1, 1}, {1, 1}}));
    CHECK_THROWS_AS(parse_diamond("1,1;1"), StructuralError);
}

TEST_CASE("kb subcommand reproduces the Iwasawa table", "[cli]") {
    auto r = run({"kb", "--model", "iwasawa3", "--pi", "X1^X2 + X2^X3", "--format", "json"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["kb"] == nlohmann::json({1, 5, 11, 14, 11, 5, 1}));
    CHECK(j["model"] == "iwasawa3");
    CHECK(j["n"] == 3);
    CHECK(j["pi"] == "X1^X2 + X2^X3");
    CHECK(j["scope"] == "manifold");
    CHECK_FALSE(j.contains("checks"));
}

TEST_CASE("check subcommand on nil6 with X1^X6", "[cli]") {
    auto r = run({"check", "--model", "nil6", "--pi", "X1^X6"});
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("poisson: true"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("E1-degenerate: false"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("k=1 -> 3;"));

    auto j = nlohmann::json::parse(run({"check", "--model", "nil6", "--pi", "X1^X6", "--format", "json"}).out);
    CHECK(j["checks"]["e1_defect"][1] == 3);
    CHECK(j["checks"]["e1_degenerate"] == false);
    CHECK(j["checks"]["euler"]["equal"] == true);
}

TEST_CASE("blowup subcommand reads @files", "[cli]") {
    auto r = run({"blowup", "--x", "@" + model_path("nil6_pi3.dims"), "--z", "@" + model_path("torus3.dims"),
                  "--codim", "3", "--z-ddbar", "--format", "json"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["kb"] == nlohmann::json({1, 8, 31, 80, 155, 232, 266, 232, 155, 80, 31, 8, 1}));

    auto refused = run({"blowup", "--x", "@" + model_path("nil6_pi3.dims"), "--z", "@" + model_path("torus3.dims"),
                        "--codim", "3"});
    CHECK(refused.code == 1);
    CHECK_THAT(refused.err, Catch::Matchers::ContainsSubstring("ddbar-lemma"));
}

TEST_CASE("formula subcommands chain through JSON output", "[cli]") {
    auto trivial = run({"trivial", "--diamond", "1,0,0;0,1,0;0,0,1", "--format", "json"});
    REQUIRE(trivial.code == 0);
    CHECK(nlohmann::json::parse(trivial.out)["kb"] == nlohmann::json({0, 0, 3, 0, 0}));
    auto blown = run({"blowup", "--x", trivial.out, "--z", "1", "--codim", "2", "--z-ddbar", "--format", "json"});
    REQUIRE(blown.code == 0);
    CHECK(nlohmann::json::parse(blown.out)["kb"] == nlohmann::json({0, 0, 4, 0, 0}));
    auto pb = run({"pbundle", "--z", "0,2,0", "--rank", "2", "--format", "json"});
    CHECK(nlohmann::json::parse(pb.out)["kb"] == nlohmann::json({0, 0, 4, 0, 0}));
    auto from_model = run({"trivial", "--model", "torus3", "--format", "json"});
    CHECK(nlohmann::json::parse(from_model.out)["kb"] == nlohmann::json({1, 6, 15, 20, 15, 6, 1}));
    CHECK(run({"trivial"}).code == 2);
}

TEST_CASE("hodge subcommand renders a pyramid", "[cli]") {
    auto r = run({"hodge", "--model", "torus3"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::vector<std::string> rows;
    std::string line;
    bool in_diamond = false;
    while (std::getline(lines, line)) {
        if (line.rfind("Hodge diamond", 0) == 0) {
            in_diamond = true;
            continue;
        }
        if (in_diamond && !line.empty()) rows.push_back(line);
    }
    REQUIRE(rows.size() == 7);
    CHECK(rows[3].find("1 9 9 1") != std::string::npos);
    CHECK(rows[0].find_first_not_of(' ') > rows[3].find_first_not_of(' '));
    CHECK_THAT(r.out, !Catch::Matchers::ContainsSubstring("checks:"));
}

TEST_CASE("report bundles everything and is deterministic", "[cli]") {
    std::vector<std::string> args{"report", "--model", "nil6", "--pi", "X2^X3", "--format", "json"};
    auto a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto j = nlohmann::json::parse(a.out);
    for (const char* key : {"model", "n", "pi", "hodge", "kb", "lp", "pages", "checks"}) CHECK(j.contains(key));
    REQUIRE(j["kb"].size() == 13);
    CHECK(j["kb"][0] == 1);
    CHECK(j["kb"][1] == 9);
    CHECK(j["kb"][2] == 38);
    CHECK(j["checks"]["e1_degenerate"] == true);
    CHECK(j["checks"]["unimodular"] == true);
    CHECK_FALSE(j.contains("seconds"));
    CHECK(a.out == run(args).out);
}

TEST_CASE("ss subcommand lists the requested pages", "[cli]") {
    auto j = nlohmann::json::parse(run({"ss", "--model", "nil6", "--pi", "X1^X6", "--pages", "2", "--format", "json"}).out);
    REQUIRE(j["pages"].size() == 2);
    CHECK(j["pages"][0]["r"] == 1);
    CHECK(j["pages"][0]["e"][1][0] == 6);
    CHECK(j["pages"][0]["e"][0][1] == 3);
    CHECK(j.contains("infinity"));
    CHECK(run({"ss", "--model", "nil6", "--pages", "0"}).code == 2);
}

TEST_CASE("exit codes follow the contract", "[cli]") {
    CHECK(run({"validate", "--model", "nil6"}).code == 0);
    CHECK(run({"validate", "--model", model_path("not_integrable.model")}).code == 1);
    auto non_poisson = run({"kb", "--model", "iwasawa3", "--pi", "X1^X3"});
    CHECK(non_poisson.code == 1);
    CHECK_THAT(non_poisson.err, Catch::Matchers::ContainsSubstring("-2 X1^X2^X3"));
    auto check = run({"check", "--model", "iwasawa3", "--pi", "X1^X3"});
    CHECK(check.code == 1);
    CHECK_THAT(check.out, Catch::Matchers::ContainsSubstring("poisson: false"));
    CHECK(run({"kb", "--model", "iwasawa3", "--pi", "X1^X4"}).code == 2);
    CHECK(run({"kb", "--model", "no-such-model"}).code == 2);
    CHECK(run({"kb"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"kb", "--model", "iwasawa3", "--format", "xml"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("model files supply a default bivector", "[cli]") {
    auto r = run({"kb", "--model", model_path("iwasawa3.model"), "--format", "json"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["pi"] == "X1^X2 + X2^X3");
    CHECK(j["kb"] == nlohmann::json({1, 5, 11, 14, 11, 5, 1}));
}

TEST_CASE("non-nilpotent models are labelled as invariant-model dimensions", "[cli]") {
    Report r;
    r.model = "m";
    r.scope = "invariant-model";
    CHECK_THAT(render_text(r), Catch::Matchers::ContainsSubstring("invariant-model dimensions"));
    cli::Loaded solv{parse_model("model solv\ndim 3\nd w1 = - w2^w3\nd w2 = - w1^w3\n").model, Polyvector(3)};
    CHECK(cli::model_report(solv, false).scope == "invariant-model");
}

TEST_CASE("timing appears only when requested", "[cli]") {
    auto j = nlohmann::json::parse(run({"hodge", "--model", "iwasawa3", "--format", "json", "--timing"}).out);
    CHECK(j.contains("seconds"));
}
