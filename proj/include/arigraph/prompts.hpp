#pragma once

#include <string>
#include <vector>

namespace arigraph::llm {

// Prompt templates with {slot} placeholders. The same texts are shipped
// under assets/prompts/ for inspection; write_prompt_assets keeps the two
// in sync and tests assert equality.
const std::string& triplet_extraction_template();
const std::string& outdated_selection_template();
const std::string& exploration_check_template();
const std::string& planning_template();
const std::string& decision_template();
const std::string& summarization_template();
const std::string& importance_template();

std::string render_template(std::string text,
                            const std::vector<std::pair<std::string, std::string>>& slots);

// Planner prompt: the trailing unexplored-exits line is emitted only in
// exploration mode.
std::string render_planning_prompt(const std::string& main_goal, int n_prev,
                                   const std::string& observations, const std::string& observation,
                                   const std::string& subgraph, int topk_episodic,
                                   const std::string& top_episodic, const std::string& plan0,
                                   const std::string& unexplored_exits, bool exploration);

std::string render_decision_prompt(const std::string& main_goal, int n_prev,
                                   const std::string& observations, const std::string& observation,
                                   const std::string& subgraph, int topk_episodic,
                                   const std::string& top_episodic, const std::string& plan0,
                                   const std::string& unexplored_exits, bool exploration,
                                   const std::string& valid_actions);

void write_prompt_assets(const std::string& directory);

}  // namespace arigraph::llm
