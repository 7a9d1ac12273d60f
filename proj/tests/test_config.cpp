#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "zeroone/config.hpp"

using namespace zeroone;

using Catch::Matchers::ContainsSubstring;

namespace {

Config parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test.cfg");
}

}  // namespace

TEST_CASE("sections prefix keys and bare keys stay bare") {
    const Config cfg = parse(
        "top = 1\n"
        "[train]\n"
        "iterations = 500\n"
        "eta = 0.17\n"
        "[attack]\n"
        "epsilon = 0.25\n");
    REQUIRE(cfg.get("top") == "1");
    REQUIRE(cfg.get("train.iterations") == "500");
    REQUIRE(cfg.get("train.eta") == "0.17");
    REQUIRE(cfg.get("attack.epsilon") == "0.25");
    REQUIRE(cfg.has("train.eta"));
    REQUIRE_FALSE(cfg.has("eta"));
}

TEST_CASE("comments, blank lines, and whitespace are ignored") {
    const Config cfg = parse(
        "# full-line comment\n"
        "\n"
        "  a   =   spaced value  \t\n"
        "b = 2   ; trailing comment\n"
        "c = 3   # other comment style\n"
        "   \t  \n");
    REQUIRE(cfg.values.size() == 3);
    REQUIRE(cfg.get("a") == "spaced value");
    REQUIRE(cfg.get("b") == "2");
    REQUIRE(cfg.get("c") == "3");
}

TEST_CASE("typed getters parse and reject") {
    const Config cfg = parse(
        "real = 0.375\n"
        "neg = -2.5\n"
        "count = 12345678901\n"
        "flag_on = yes\n"
        "flag_off = 0\n"
        "junk = 12abc\n");
    REQUIRE(cfg.get_real("real") == 0.375);
    REQUIRE(cfg.get_real("neg") == -2.5);
    REQUIRE(cfg.get_u64("count") == 12345678901ULL);
    REQUIRE(cfg.get_bool("flag_on"));
    REQUIRE_FALSE(cfg.get_bool("flag_off"));
    REQUIRE_THROWS_WITH(cfg.get_real("junk"), ContainsSubstring("not a real"));
    REQUIRE_THROWS_WITH(cfg.get_u64("junk"), ContainsSubstring("not an integer"));
    REQUIRE_THROWS_WITH(cfg.get_bool("junk"), ContainsSubstring("not a boolean"));
    REQUIRE_THROWS_WITH(cfg.get("absent"), ContainsSubstring("missing: absent"));
    REQUIRE(cfg.get_or("absent", "fallback") == "fallback");
    REQUIRE(cfg.get_or("real", "fallback") == "0.375");
}

TEST_CASE("parse errors carry origin and line number") {
    REQUIRE_THROWS_WITH(parse("a = 1\nnot a pair\n"),
                        ContainsSubstring("test.cfg:2: expected key = value"));
    REQUIRE_THROWS_WITH(parse("[train\nx = 1\n"),
                        ContainsSubstring("test.cfg:1: unterminated section"));
    REQUIRE_THROWS_WITH(parse("[]\n"), ContainsSubstring("test.cfg:1: empty section"));
    REQUIRE_THROWS_WITH(parse(" = 5\n"), ContainsSubstring("test.cfg:1: empty key"));
    REQUIRE_THROWS_WITH(parse("[s]\nk = 1\nk = 2\n"),
                        ContainsSubstring("test.cfg:3: duplicate key: s.k"));
    REQUIRE_THROWS_AS(parse("k = 1\nk = 2\n"), UsageError);
}

TEST_CASE("same key in different sections is not a duplicate") {
    const Config cfg = parse("[a]\nseed = 1\n[b]\nseed = 2\n");
    REQUIRE(cfg.get("a.seed") == "1");
    REQUIRE(cfg.get("b.seed") == "2");
}

TEST_CASE("to_text round trips through the parser") {
    const Config cfg = parse(
        "bare = x\n"
        "[train]\n"
        "eta = 0.17\n"
        "iterations = 500\n"
        "[attack]\n"
        "epsilon = 0.0625\n");
    const std::string text = cfg.to_text();
    std::istringstream in(text);
    const Config again = parse_config(in, "round");
    REQUIRE(again.values == cfg.values);

    // bare keys come first, sections are alphabetical, keys sorted inside
    REQUIRE(text ==
            "bare = x\n"
            "\n"
            "[attack]\n"
            "epsilon = 0.0625\n"
            "\n"
            "[train]\n"
            "eta = 0.17\n"
            "iterations = 500\n");
}

TEST_CASE("load_config reports unreadable paths") {
    REQUIRE_THROWS_WITH(load_config("/nonexistent/nope.cfg"),
                        ContainsSubstring("cannot open config file"));
}
