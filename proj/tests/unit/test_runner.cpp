#include <doctest.h>

#include <string>

#include "common/types.hpp"
#include "runner/runner.hpp"

using namespace dyadlab;
using nlohmann::json;

namespace {

// Returns the message of the Parse error raised by the run, or "" if none was raised.
std::string parse_error(const std::string& cmd, const json& cfg) {
  try {
    runner::run(cmd, cfg, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("configuration errors name the field") {
  CHECK(contains(parse_error("shift-eval", json{{"bogus", 1}}), "config.bogus"));
  CHECK(contains(parse_error("shift-eval", json{{"shift-eval", {{"trials", "three"}}}}), "config.shift-eval.trials"));
  CHECK(contains(parse_error("shift-eval", json{{"L", 99}}), "config.L"));
  CHECK(contains(parse_error("haar-suite", json{{"n", 2}, {"exponents", {3, 3}}}), "config.exponents"));
  CHECK(contains(parse_error("haar-suite", json{{"n", 1}, {"exponents", {3, 3}}}), "config.exponents"));
  CHECK(contains(parse_error("leibniz-study", json{{"leibniz-study", {{"s", "x"}}}}), "config.leibniz-study.s"));
  CHECK(contains(parse_error("reduce-verify", json{{"reduce-verify", {{"unknown", true}}}}),
                 "config.reduce-verify.unknown"));
  CHECK_THROWS_AS(runner::run("no-such-command", json::object()), Error);
}

TEST_CASE("reports are reproducible from config and seed") {
  const json cfg{{"L", 3}, {"shift-eval", {{"trials", 2}}}};
  const auto a = runner::run("shift-eval", cfg, 42).to_json().dump();
  const auto b = runner::run("shift-eval", cfg, 42).to_json().dump();
  CHECK(a == b);
  const auto c = runner::run("shift-eval", cfg, 43).to_json();
  CHECK(c.dump() != a);
  CHECK(c["seed"] == 43);

  // The echoed configuration reproduces the report on its own.
  const auto rep = runner::run("shift-eval", cfg, 42).to_json();
  const json echo = rep["config"];
  CHECK(echo["seed"] == 42);
  CHECK(echo["shift-eval"]["trials"] == 2);
  CHECK(echo.contains("N"));
  CHECK(runner::run("shift-eval", echo).to_json().dump() == a);
}

TEST_CASE("blocks for other commands are ignored") {
  const json cfg{{"L", 3}, {"leibniz-study", {{"s", 1.2}}}, {"shift-eval", {{"trials", 1}}}};
  CHECK_NOTHROW(runner::run("shift-eval", cfg, 1));
}

TEST_CASE("hard and soft gates") {
  const auto rep = runner::run("shift-eval", json{{"L", 3}, {"shift-eval", {{"scale", 0}, {"trials", 1}}}}, 1);
  CHECK(rep.hard_failures() == 0);
  bool saw_lhs = false;
  for (const auto& l : rep.summary_lines()) saw_lhs |= l == "lhs: 0";
  CHECK(saw_lhs);

  // An impossible soft band only warns.
  const auto warn = runner::run("shift-eval", json{{"L", 3}, {"bands", {{"C", 1}}}, {"shift-eval", {{"trials", 1}}}}, 1);
  CHECK(warn.hard_failures() == 0);

  runner::Report r("x", 0, json::object());
  r.hard("a", "", 1.0, 0.5, "");
  r.hard("b", "", runner::kNone, 0.5, "");
  r.soft("c", "", 5.0, 0.0, 1.0, "");
  r.info("d", "", 3.0, "");
  CHECK(r.hard_failures() == 2);
  CHECK(r.warnings() == 1);
  CHECK(r.to_json()["records"][1]["value"].is_null());
  CHECK(r.records_csv().find("check") != std::string::npos);
}

TEST_CASE("reduce-verify on a complexity-zero shift") {
  const json cfg{{"L", 3}, {"n", 1}, {"reduce-verify", {{"complexity", {0, 0}}, {"trials", 1}}}};
  const auto rep = runner::run("reduce-verify", cfg, 3);
  CHECK(rep.hard_failures() == 0);
  REQUIRE_FALSE(rep.summary_lines().empty());
  CHECK(contains(rep.summary_lines().front(), "terms: 1"));
}
