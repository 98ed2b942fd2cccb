#include "doctest.h"

#include "arigraph/parsers.hpp"

using namespace arigraph;
using namespace arigraph::llm;

TEST_CASE("parse_triplet splits on commas with the middle-join rule") {
    auto t = parse_triplet("kitchen, contains, apple");
    REQUIRE(t.has_value());
    CHECK(t->subject.canonical == "kitchen");
    CHECK(t->relation == "contains");
    CHECK(t->object.canonical == "apple");

    auto joined = parse_triplet("John, works, as, engineer, Google");
    REQUIRE(joined.has_value());
    CHECK(joined->subject.canonical == "john");
    CHECK(joined->relation == "works, as, engineer");
    CHECK(joined->object.canonical == "google");

    CHECK_FALSE(parse_triplet("only two, parts").has_value());
    CHECK_FALSE(parse_triplet("").has_value());
    CHECK_FALSE(parse_triplet("a, , b").has_value());  // empty relation slot
}

TEST_CASE("parse_triplet tolerates quotes") {
    auto t = parse_triplet("'blue key', opens, \"blue locker\"");
    REQUIRE(t.has_value());
    CHECK(t->subject.canonical == "blue key");
    CHECK(t->object.canonical == "blue locker");
}

TEST_CASE("parse_triplet_list splits on semicolons and reports bad segments") {
    TripletParse p = parse_triplet_list("kitchen, contains, apple; apple, is on, table");
    CHECK(p.triplets.size() == 2);
    CHECK(p.skipped.empty());

    TripletParse noisy = parse_triplet_list("sure! here: a, r, b; nonsense segment; c, r, d;");
    CHECK(noisy.triplets.size() == 2);
    CHECK(noisy.skipped.size() == 1);

    CHECK(parse_triplet_list("").triplets.empty());
}

TEST_CASE("parse_replacement_list handles the bracket wire format") {
    ReplacementParse empty = parse_replacement_list("[]");
    CHECK(empty.found_block);
    CHECK(empty.pairs.empty());

    ReplacementParse p = parse_replacement_list(
        "[[kitchen, contains, broom -> broom, is in, inventory], "
        "[broom, is on, floor -> broom, is in, inventory]]");
    CHECK(p.found_block);
    REQUIRE(p.pairs.size() == 2);
    CHECK(p.pairs[0].first.subject.canonical == "kitchen");
    CHECK(p.pairs[0].second.object.canonical == "inventory");
    CHECK(p.pairs[1].first.relation == "is on");

    ReplacementParse prose = parse_replacement_list(
        "Sure, here are the replacements you asked for:\n"
        "[[a, r, b -> a, r, c]]\nHope that helps!");
    CHECK(prose.found_block);
    CHECK(prose.pairs.size() == 1);

    ReplacementParse bad = parse_replacement_list("[[broken pair -> also, broken]]");
    CHECK(bad.pairs.empty());
    CHECK(bad.dropped.size() == 1);

    ReplacementParse none = parse_replacement_list("no brackets anywhere");
    CHECK_FALSE(none.found_block);
    CHECK(none.pairs.empty());
}

TEST_CASE("parse_plan accepts the planner object shape") {
    std::string text = R"({
      "main_goal": "find the treasure",
      "plan_steps": [
        {"sub_goal_1": "take the key", "reason": "the locker is locked"},
        {"sub_goal_2": "open the locker", "reason": "the treasure is inside"}
      ],
      "your_emotion": {"your_current_emotion": "excitement", "reason_behind_emotion": "close"}
    })";
    auto plan = parse_plan(text);
    REQUIRE(plan.has_value());
    CHECK(plan->main_goal == "find the treasure");
    REQUIRE(plan->steps.size() == 2);
    CHECK(plan->steps[0].sub_goal == "take the key");
    CHECK(plan->steps[1].sub_goal == "open the locker");
    CHECK(plan->emotion == "excitement");

    CHECK(parse_plan("```json\n" + text + "\n```").has_value());  // fenced
    CHECK_FALSE(parse_plan(R"({"main_goal": "x"})").has_value());  // no steps array
    CHECK_FALSE(parse_plan(R"({"main_goal": "x", "plan_steps": []})").has_value());
    CHECK_FALSE(parse_plan("not json at all").has_value());
}

TEST_CASE("render_plan round-trips through parse_plan") {
    Plan plan;
    plan.main_goal = "clean the house";
    plan.steps = {{"find the broom", "it is misplaced"}, {"return it", "it belongs elsewhere"}};
    plan.emotion = "calm";
    plan.emotion_reason = "steady progress";
    auto round = parse_plan(render_plan(plan));
    REQUIRE(round.has_value());
    CHECK(round->main_goal == plan.main_goal);
    REQUIRE(round->steps.size() == 2);
    CHECK(round->steps[1].sub_goal == "return it");
    CHECK(round->emotion == "calm");
}

TEST_CASE("parse_action extracts the decision object") {
    auto a = parse_action(R"({"reason_for_action": "need key", "action_to_take": "take key"})");
    REQUIRE(a.has_value());
    CHECK(a->action == "take key");
    CHECK(a->reason == "need key");
    CHECK_FALSE(parse_action(R"({"reason_for_action": "no action key"})").has_value());
    CHECK_FALSE(parse_action("plain text").has_value());
    auto noisy = parse_action("I choose:\n{\"action_to_take\": \"go north\"}\nthanks");
    REQUIRE(noisy.has_value());
    CHECK(noisy->action == "go north");
}

TEST_CASE("parse_bool_strict accepts only true/false") {
    CHECK(parse_bool_strict("True") == true);
    CHECK(parse_bool_strict(" false\n") == false);
    CHECK(parse_bool_strict("TRUE") == true);
    CHECK_FALSE(parse_bool_strict("I think True").has_value());
    CHECK_FALSE(parse_bool_strict("").has_value());
}

TEST_CASE("extract_json_object finds the outermost braces") {
    CHECK(extract_json_object("prefix {\"a\": {\"b\": 1}} suffix") == "{\"a\": {\"b\": 1}}");
    CHECK(extract_json_object("no object") == "");
}
