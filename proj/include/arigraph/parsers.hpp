#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arigraph/graph.hpp"

namespace arigraph::llm {

// All parsers here are total: malformed input becomes reported skips or
// std::nullopt, never an exception.

struct TripletParse {
    std::vector<Triplet> triplets;
    std::vector<std::string> skipped;  // segments that failed to parse
};

// Parses one "subject, relation, object" segment. With more than three
// comma-separated parts the first is the subject, the last the object and
// the middle parts are joined into the relation.
std::optional<Triplet> parse_triplet(const std::string& segment);

// Semicolon-separated triplet list, quotes and wrapping noise tolerated.
TripletParse parse_triplet_list(const std::string& text);

struct ReplacementParse {
    std::vector<std::pair<Triplet, Triplet>> pairs;
    std::vector<std::string> dropped;
    bool found_block = false;  // a [[...]] span (or bare []) was located
};

// Parses "[[outdated -> actual], [outdated -> actual], ...]"; the block is
// located by the first "[[" and last "]]" so stray prose around it is fine.
// "[]" means no replacements.
ReplacementParse parse_replacement_list(const std::string& text);

struct PlanStep {
    std::string sub_goal;
    std::string reason;
};

struct Plan {
    std::string main_goal;
    std::vector<PlanStep> steps;
    std::string emotion;
    std::string emotion_reason;
};

struct ActionChoice {
    std::string reason;
    std::string action;
};

// Extracts the outermost {...} block (code fences and prose tolerated)
// and parses the planner/decider response objects.
std::optional<Plan> parse_plan(const std::string& text);
std::optional<ActionChoice> parse_action(const std::string& text);

// Strict True/False; anything else is std::nullopt.
std::optional<bool> parse_bool_strict(const std::string& text);

// Plan rendered back to the JSON shape the planner prompt asks for,
// used for the {plan0} slot.
std::string render_plan(const Plan& plan);

std::string extract_json_object(const std::string& text);  // "" when absent

}  // namespace arigraph::llm
