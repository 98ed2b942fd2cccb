#include "arigraph/llm.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>

#include "arigraph/embed.hpp"
#include "arigraph/prompts.hpp"

namespace arigraph::llm {

namespace {

std::string fold_action(const std::string& s) {
    std::string out;
    bool pending = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!out.empty()) pending = true;
            continue;
        }
        if (pending) {
            out.push_back(' ');
            pending = false;
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

}  // namespace

ScriptedModel::ScriptedModel(std::vector<FixtureRecord> records) {
    for (auto& r : records) responses_[{r.stage, r.step}].push_back(std::move(r.response));
}

ScriptedModel ScriptedModel::from_jsonl_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open fixture file " + path);
    std::vector<FixtureRecord> records;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object())
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad fixture record");
        records.push_back(FixtureRecord{doc.at("stage").get<std::string>(),
                                        doc.at("step").get<Step>(),
                                        doc.at("response").get<std::string>()});
    }
    return ScriptedModel(std::move(records));
}

void ScriptedModel::save_jsonl_file(const std::vector<FixtureRecord>& records,
                                    const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write fixture file " + path);
    for (const FixtureRecord& r : records) {
        nlohmann::ordered_json doc{{"stage", r.stage}, {"step", r.step}, {"response", r.response}};
        out << doc.dump() << '\n';
    }
}

void ScriptedModel::add(const std::string& stage_name, Step step, std::string response) {
    responses_[{stage_name, step}].push_back(std::move(response));
}

std::string ScriptedModel::complete(const std::string& stage_name, Step step,
                                    const std::string&) {
    auto it = responses_.find({stage_name, step});
    if (it == responses_.end() || it->second.empty()) {
        throw FixtureMissing("no fixture for stage=" + stage_name + " step=" +
                             std::to_string(step));
    }
    std::string response = std::move(it->second.front());
    it->second.pop_front();
    return response;
}

std::string Gateway::call(const std::string& stage_name, Step step, const std::string& prompt) {
    std::string response = lm_.complete(stage_name, step, prompt);
    ++call_count_;
    approx_tokens_ += static_cast<std::int64_t>((prompt.size() + response.size()) / 4);
    transcript_.push_back(LmCall{stage_name, step, prompt, response});
    return response;
}

std::string render_triplet_list(const std::vector<Triplet>& triplets) {
    if (triplets.empty()) return "None";
    std::string out;
    for (const Triplet& t : triplets) {
        if (!out.empty()) out += ", ";
        out += "'" + embed::triplet_text(t) + "'";
    }
    return out;
}

std::vector<Triplet> Gateway::extract_triplets(Step step, const std::string& observation,
                                               const std::vector<Triplet>& prior_examples) {
    std::string prompt = render_template(triplet_extraction_template(),
                                         {{"example", render_triplet_list(prior_examples)},
                                          {"observation", observation}});
    std::string response;
    try {
        response = call(stage::extract, step, prompt);
    } catch (const TransportError& e) {
        throw ExtractionFailed(e.what());
    }
    TripletParse parsed = parse_triplet_list(response);
    for (const std::string& s : parsed.skipped) {
        warn("extract: skipped malformed segment \"" + s + "\"");
    }
    if (parsed.triplets.empty() && !response.empty() && parsed.skipped.empty()) {
        warn("extract: response yielded no triplets");
    }
    return parsed.triplets;
}

std::vector<std::pair<Triplet, Triplet>> Gateway::select_outdated(
    Step step, const std::vector<Triplet>& existing, const std::vector<Triplet>& fresh) {
    std::string prompt = render_template(outdated_selection_template(),
                                         {{"ex_triplets", render_triplet_list(existing)},
                                          {"new_triplets", render_triplet_list(fresh)}});
    std::string response;
    try {
        response = call(stage::replace, step, prompt);
    } catch (const TransportError& e) {
        throw ReplacementFailed(e.what());
    }
    ReplacementParse parsed = parse_replacement_list(response);
    for (const std::string& s : parsed.dropped) {
        warn("replace: dropped malformed pair \"" + s + "\"");
    }
    if (!parsed.found_block) warn("replace: no replacement block found in response");
    return parsed.pairs;
}

bool Gateway::check_exploration_need(Step step, const std::string& plan_text) {
    std::string prompt = render_template(exploration_check_template(), {{"plan0", plan_text}});
    std::string response = call(stage::explore, step, prompt);
    auto value = parse_bool_strict(response);
    if (!value) {
        warn("explore: unparseable answer \"" + response + "\", defaulting to false");
        return false;
    }
    return *value;
}

PlanOutcome Gateway::generate_plan(Step step, const std::string& rendered_prompt) {
    PlanOutcome outcome;
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::string response = call(stage::plan, step, rendered_prompt);
        if (auto plan = parse_plan(response)) {
            outcome.plan = std::move(plan);
            return outcome;
        }
        outcome.reprompted = true;
    }
    outcome.reprompted = true;
    outcome.parse_failed = true;
    warn("plan: parse failed twice, keeping previous plan");
    return outcome;
}

ActionOutcome Gateway::select_action(Step step, const std::string& rendered_prompt,
                                     const std::vector<std::string>& valid_actions) {
    if (valid_actions.empty()) throw std::invalid_argument("select_action: no valid actions");
    ActionOutcome outcome;
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::string prompt = rendered_prompt;
        if (attempt == 1) {
            prompt += "\n\nYour previous answer was invalid: \"" + outcome.choice.action +
                      "\". You must choose strictly one action from the list of possible actions.";
            outcome.reprompted = true;
        }
        std::string response = call(stage::act, step, prompt);
        auto choice = parse_action(response);
        if (!choice) {
            outcome.choice = ActionChoice{"", response};
            continue;
        }
        std::string folded = fold_action(choice->action);
        for (const std::string& valid : valid_actions) {
            if (fold_action(valid) == folded) {
                outcome.choice = ActionChoice{choice->reason, valid};
                return outcome;
            }
        }
        outcome.choice = *choice;
    }
    warn("act: invalid action twice, forced fallback to \"" + valid_actions.front() + "\"");
    outcome.forced_fallback = true;
    outcome.choice = ActionChoice{"forced fallback", valid_actions.front()};
    return outcome;
}

std::string Gateway::summarize_history(Step step, const std::string& main_goal, int n_prev,
                                       const std::string& recent_history,
                                       const std::string& observation,
                                       const std::string& previous_summary) {
    std::string prompt = render_template(summarization_template(),
                                         {{"main_goal", main_goal},
                                          {"n_prev", std::to_string(n_prev)},
                                          {"observations", recent_history},
                                          {"observation", observation},
                                          {"summary", previous_summary}});
    try {
        return call(stage::summarize, step, prompt);
    } catch (const TransportError& e) {
        warn(std::string("summarize: transport failure, keeping previous summary: ") + e.what());
        return previous_summary;
    }
}

int Gateway::rate_importance(Step step, const std::string& memory_text) {
    std::string prompt = render_template(importance_template(), {{"memory", memory_text}});
    std::string response;
    try {
        response = call(stage::importance, step, prompt);
    } catch (const TransportError& e) {
        warn(std::string("importance: transport failure, defaulting to 5: ") + e.what());
        return 5;
    }
    size_t pos = response.find_first_of("0123456789");
    if (pos == std::string::npos) {
        warn("importance: no integer in response, defaulting to 5");
        return 5;
    }
    int value = 0;
    while (pos < response.size() && std::isdigit(static_cast<unsigned char>(response[pos]))) {
        value = value * 10 + (response[pos] - '0');
        ++pos;
        if (value > 10) break;
    }
    return std::clamp(value, 1, 10);
}

}  // namespace arigraph::llm
