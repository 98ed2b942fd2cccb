#include "doctest.h"

#include "arigraph/llm.hpp"

#include <filesystem>

using namespace arigraph;
using namespace arigraph::llm;

namespace {

struct ThrowingModel : LanguageModel {
    std::string complete(const std::string&, Step, const std::string&) override {
        throw TransportError("connection refused");
    }
};

Triplet t(const std::string& s, const std::string& r, const std::string& o) {
    return Triplet{normalize_entity(s), r, normalize_entity(o)};
}

}  // namespace

TEST_CASE("scripted model replays by (stage, step) and drains reprompts in order") {
    ScriptedModel lm;
    lm.add(stage::plan, 0, "first");
    lm.add(stage::plan, 0, "second");
    lm.add(stage::act, 0, "other stage");
    CHECK(lm.complete(stage::plan, 0, "p") == "first");
    CHECK(lm.complete(stage::plan, 0, "p") == "second");
    CHECK(lm.complete(stage::act, 0, "p") == "other stage");
    CHECK_THROWS_AS(lm.complete(stage::plan, 0, "p"), FixtureMissing);
    CHECK_THROWS_AS(lm.complete(stage::plan, 1, "p"), FixtureMissing);
}

TEST_CASE("scripted model round-trips through JSONL files") {
    std::vector<FixtureRecord> records{{stage::extract, 0, "a, r, b"},
                                       {stage::act, 3, "multi\nline\nresponse"}};
    auto path = (std::filesystem::temp_directory_path() / "arigraph_fixtures_test.jsonl").string();
    ScriptedModel::save_jsonl_file(records, path);
    ScriptedModel lm = ScriptedModel::from_jsonl_file(path);
    CHECK(lm.complete(stage::extract, 0, "") == "a, r, b");
    CHECK(lm.complete(stage::act, 3, "") == "multi\nline\nresponse");
    std::filesystem::remove(path);
}

TEST_CASE("extract_triplets parses fixture responses") {
    ScriptedModel lm;
    lm.add(stage::extract, 0, "kitchen, contains, apple; apple, is on, table");
    lm.add(stage::extract, 1, "");
    lm.add(stage::extract, 2, "John, position, engineer in Google");
    Gateway gw(lm);
    CHECK(gw.extract_triplets(0, "obs", {}).size() == 2);
    CHECK(gw.extract_triplets(1, "obs", {}).empty());
    auto third = gw.extract_triplets(2, "obs", {});
    REQUIRE(third.size() == 1);
    CHECK(third[0].subject.canonical == "john");
    CHECK(third[0].object.canonical == "engineer in google");

    ThrowingModel down;
    Gateway broken(down);
    CHECK_THROWS_AS(broken.extract_triplets(0, "obs", {}), ExtractionFailed);
}

TEST_CASE("select_outdated parses the replacement block") {
    ScriptedModel lm;
    lm.add(stage::replace, 0, "[]");
    lm.add(stage::replace, 1,
           "[[kitchen, contains, broom -> broom, is in, inventory], "
           "[broom, is on, floor -> broom, is in, inventory]]");
    lm.add(stage::replace, 2, "Here you go: [[a, r, b -> a, r, c]] done");
    lm.add(stage::replace, 3, "nothing useful here");
    Gateway gw(lm);
    CHECK(gw.select_outdated(0, {}, {}).empty());
    CHECK(gw.select_outdated(1, {}, {}).size() == 2);
    CHECK(gw.select_outdated(2, {}, {}).size() == 1);
    gw.clear_warnings();
    CHECK(gw.select_outdated(3, {}, {}).empty());
    CHECK_FALSE(gw.warnings().empty());  // no block located

    ThrowingModel down;
    Gateway broken(down);
    CHECK_THROWS_AS(broken.select_outdated(0, {}, {}), ReplacementFailed);
}

TEST_CASE("check_exploration_need parses strictly, defaults false") {
    ScriptedModel lm;
    lm.add(stage::explore, 0, "True");
    lm.add(stage::explore, 1, " false\n");
    lm.add(stage::explore, 2, "I think True");
    Gateway gw(lm);
    CHECK(gw.check_exploration_need(0, "plan") == true);
    CHECK(gw.check_exploration_need(1, "plan") == false);
    gw.clear_warnings();
    CHECK(gw.check_exploration_need(2, "plan") == false);
    CHECK_FALSE(gw.warnings().empty());
}

TEST_CASE("generate_plan reprompts once, then keeps the previous plan") {
    ScriptedModel lm;
    std::string good = R"({"main_goal":"g","plan_steps":[{"sub_goal_1":"s","reason":"r"}]})";
    lm.add(stage::plan, 0, good);
    lm.add(stage::plan, 1, "garbage");
    lm.add(stage::plan, 1, good);
    lm.add(stage::plan, 2, "garbage");
    lm.add(stage::plan, 2, "still garbage");
    Gateway gw(lm);

    PlanOutcome ok = gw.generate_plan(0, "prompt");
    REQUIRE(ok.plan.has_value());
    CHECK_FALSE(ok.reprompted);

    PlanOutcome retried = gw.generate_plan(1, "prompt");
    REQUIRE(retried.plan.has_value());
    CHECK(retried.reprompted);

    PlanOutcome failed = gw.generate_plan(2, "prompt");
    CHECK_FALSE(failed.plan.has_value());
    CHECK(failed.parse_failed);
}

TEST_CASE("select_action folds case and falls back after two invalid answers") {
    std::vector<std::string> valid{"take key", "go north"};
    ScriptedModel lm;
    lm.add(stage::act, 0, R"({"reason_for_action":"need key","action_to_take":"take key"})");
    lm.add(stage::act, 1, R"({"action_to_take":"Take  Key"})");
    lm.add(stage::act, 2, R"({"action_to_take":"fly"})");
    lm.add(stage::act, 2, R"({"action_to_take":"fly"})");
    Gateway gw(lm);

    ActionOutcome direct = gw.select_action(0, "prompt", valid);
    CHECK(direct.choice.action == "take key");
    CHECK_FALSE(direct.forced_fallback);

    ActionOutcome folded = gw.select_action(1, "prompt", valid);
    CHECK(folded.choice.action == "take key");

    ActionOutcome fallback = gw.select_action(2, "prompt", valid);
    CHECK(fallback.forced_fallback);
    CHECK(fallback.choice.action == "take key");  // first valid action
}

TEST_CASE("summarize_history keeps the previous summary on transport failure") {
    ScriptedModel lm;
    lm.add(stage::summarize, 0, "fresh summary");
    Gateway gw(lm);
    CHECK(gw.summarize_history(0, "goal", 5, "hist", "obs", "old") == "fresh summary");

    ThrowingModel down;
    Gateway broken(down);
    CHECK(broken.summarize_history(0, "goal", 5, "hist", "obs", "old") == "old");
}

TEST_CASE("rate_importance clamps to 1..10 and defaults to 5") {
    ScriptedModel lm;
    lm.add(stage::importance, 0, "7");
    lm.add(stage::importance, 1, "I'd say 42 overall");
    lm.add(stage::importance, 2, "no number at all");
    Gateway gw(lm);
    CHECK(gw.rate_importance(0, "m") == 7);
    CHECK(gw.rate_importance(1, "m") == 10);
    CHECK(gw.rate_importance(2, "m") == 5);
}

TEST_CASE("gateway records transcripts and counters") {
    ScriptedModel lm;
    lm.add(stage::extract, 0, "a, r, b");
    Gateway gw(lm);
    gw.extract_triplets(0, "obs", {t("x", "r", "y")});
    REQUIRE(gw.transcript().size() == 1);
    CHECK(gw.transcript()[0].stage == stage::extract);
    CHECK(gw.transcript()[0].prompt.find("obs") != std::string::npos);
    CHECK(gw.call_count() == 1);
    CHECK(gw.approx_tokens() > 0);
}

TEST_CASE("render_triplet_list quotes triplets for prompt slots") {
    CHECK(render_triplet_list({}) == "None");
    std::string two = render_triplet_list({t("a", "r", "b"), t("c", "r2", "d")});
    CHECK(two == "'a, r, b', 'c, r2, d'");
}
