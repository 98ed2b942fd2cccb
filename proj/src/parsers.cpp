#include "arigraph/parsers.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

namespace arigraph::llm {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_quotes(std::string s) {
    s = trim(s);
    while (s.size() >= 2 && (s.front() == '"' || s.front() == '\'' || s.front() == '`') &&
           s.back() == s.front()) {
        s = trim(s.substr(1, s.size() - 2));
    }
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

std::optional<Triplet> parse_triplet(const std::string& segment) {
    std::vector<std::string> parts = split(strip_quotes(segment), ',');
    if (parts.size() < 3) return std::nullopt;
    std::string subject_raw = strip_quotes(parts.front());
    std::string object_raw = strip_quotes(parts.back());
    std::string relation;
    for (size_t i = 1; i + 1 < parts.size(); ++i) {
        if (!relation.empty()) relation += ", ";
        relation += strip_quotes(parts[i]);
    }
    auto subject = try_canonicalize(subject_raw);
    auto object = try_canonicalize(object_raw);
    relation = trim(relation);
    if (!subject || !object || fold_relation(relation).empty()) return std::nullopt;
    return Triplet{EntityName{*subject, subject_raw}, relation, EntityName{*object, object_raw}};
}

TripletParse parse_triplet_list(const std::string& text) {
    TripletParse out;
    for (const std::string& segment : split(text, ';')) {
        std::string cleaned = strip_quotes(segment);
        if (cleaned.empty()) continue;
        if (auto t = parse_triplet(cleaned)) {
            out.triplets.push_back(std::move(*t));
        } else {
            out.skipped.push_back(cleaned);
        }
    }
    return out;
}

ReplacementParse parse_replacement_list(const std::string& text) {
    ReplacementParse out;
    size_t begin = text.find("[[");
    size_t end = text.rfind("]]");
    std::string block;
    if (begin != std::string::npos && end != std::string::npos && end > begin) {
        block = text.substr(begin + 2, end - begin - 2);
        out.found_block = true;
    } else {
        // a bare "[]" means explicitly no replacements
        if (trim(text).find("[]") != std::string::npos) out.found_block = true;
        return out;
    }
    // entries are separated by "], [" with flexible whitespace
    std::vector<std::string> entries;
    size_t start = 0;
    while (start <= block.size()) {
        size_t close = block.find(']', start);
        if (close == std::string::npos) {
            entries.push_back(block.substr(start));
            break;
        }
        entries.push_back(block.substr(start, close - start));
        size_t open = block.find('[', close);
        if (open == std::string::npos) break;
        start = open + 1;
    }
    for (const std::string& entry : entries) {
        std::string e = trim(entry);
        if (e.empty()) continue;
        size_t arrow = e.find("->");
        if (arrow == std::string::npos) {
            out.dropped.push_back(e);
            continue;
        }
        auto outdated = parse_triplet(e.substr(0, arrow));
        auto actual = parse_triplet(e.substr(arrow + 2));
        if (!outdated || !actual) {
            out.dropped.push_back(e);
            continue;
        }
        out.pairs.emplace_back(std::move(*outdated), std::move(*actual));
    }
    return out;
}

std::string extract_json_object(const std::string& text) {
    size_t begin = text.find('{');
    size_t end = text.rfind('}');
    if (begin == std::string::npos || end == std::string::npos || end < begin) return "";
    return text.substr(begin, end - begin + 1);
}

std::optional<Plan> parse_plan(const std::string& text) {
    std::string block = extract_json_object(text);
    if (block.empty()) return std::nullopt;
    nlohmann::json doc = nlohmann::json::parse(block, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
    Plan plan;
    plan.main_goal = doc.value("main_goal", "");
    if (!doc.contains("plan_steps") || !doc["plan_steps"].is_array()) return std::nullopt;
    for (const auto& item : doc["plan_steps"]) {
        if (!item.is_object()) continue;
        PlanStep step;
        for (const auto& [key, value] : item.items()) {
            if (key.rfind("sub_goal", 0) == 0 && value.is_string()) {
                step.sub_goal = value.get<std::string>();
            } else if (key == "reason" && value.is_string()) {
                step.reason = value.get<std::string>();
            }
        }
        if (!step.sub_goal.empty()) plan.steps.push_back(std::move(step));
    }
    if (plan.steps.empty()) return std::nullopt;  // at least one sub-goal required
    if (doc.contains("your_emotion") && doc["your_emotion"].is_object()) {
        const auto& emo = doc["your_emotion"];
        plan.emotion = emo.value("your_current_emotion", "");
        plan.emotion_reason = emo.value("reason_behind_emotion", "");
    }
    return plan;
}

std::optional<ActionChoice> parse_action(const std::string& text) {
    std::string block = extract_json_object(text);
    if (block.empty()) return std::nullopt;
    nlohmann::json doc = nlohmann::json::parse(block, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
    if (!doc.contains("action_to_take") || !doc["action_to_take"].is_string()) return std::nullopt;
    ActionChoice choice;
    choice.action = doc["action_to_take"].get<std::string>();
    choice.reason = doc.value("reason_for_action", "");
    return choice;
}

std::optional<bool> parse_bool_strict(const std::string& text) {
    std::string s = trim(text);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "true") return true;
    if (s == "false") return false;
    return std::nullopt;
}

std::string render_plan(const Plan& plan) {
    nlohmann::ordered_json doc;
    doc["main_goal"] = plan.main_goal;
    doc["plan_steps"] = nlohmann::ordered_json::array();
    for (size_t i = 0; i < plan.steps.size(); ++i) {
        nlohmann::ordered_json step;
        step["sub_goal_" + std::to_string(i + 1)] = plan.steps[i].sub_goal;
        step["reason"] = plan.steps[i].reason;
        doc["plan_steps"].push_back(std::move(step));
    }
    doc["your_emotion"] = {{"your_current_emotion", plan.emotion},
                           {"reason_behind_emotion", plan.emotion_reason}};
    return doc.dump(2);
}

}  // namespace arigraph::llm
