#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arigraph/graph.hpp"
#include "arigraph/parsers.hpp"

namespace arigraph::llm {

// Pipeline stage names used to key scripted fixtures and transcripts.
namespace stage {
inline constexpr const char* extract = "extract";
inline constexpr const char* replace = "replace";
inline constexpr const char* explore = "explore";
inline constexpr const char* plan = "plan";
inline constexpr const char* act = "act";
inline constexpr const char* summarize = "summarize";
inline constexpr const char* importance = "importance";
}  // namespace stage

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FixtureMissing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class LanguageModel {
  public:
    virtual ~LanguageModel() = default;
    virtual std::string complete(const std::string& stage_name, Step step,
                                 const std::string& prompt) = 0;
};

struct FixtureRecord {
    std::string stage;
    Step step = 0;
    std::string response;
};

// Replays fixture responses keyed by (stage, step); multiple records per key
// are consumed in order (reprompts). Missing fixtures fail loudly.
class ScriptedModel : public LanguageModel {
  public:
    ScriptedModel() = default;
    explicit ScriptedModel(std::vector<FixtureRecord> records);
    static ScriptedModel from_jsonl_file(const std::string& path);
    static void save_jsonl_file(const std::vector<FixtureRecord>& records, const std::string& path);

    void add(const std::string& stage_name, Step step, std::string response);
    std::string complete(const std::string& stage_name, Step step,
                         const std::string& prompt) override;

  private:
    std::map<std::pair<std::string, Step>, std::deque<std::string>> responses_;
};

// OpenAI-compatible chat-completions client. The stage name is ignored for
// routing and kept for transcripts.
class RemoteModel : public LanguageModel {
  public:
    RemoteModel(std::string base_url, std::string model, std::string auth_token,
                double temperature = 0.0);
    std::string complete(const std::string& stage_name, Step step,
                         const std::string& prompt) override;

  private:
    std::string base_url_;
    std::string model_;
    std::string auth_token_;
    double temperature_;
};

struct ExtractionFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ReplacementFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LmCall {
    std::string stage;
    Step step = 0;
    std::string prompt;
    std::string response;
};

struct PlanOutcome {
    std::optional<Plan> plan;  // nullopt: keep previous plan
    bool reprompted = false;
    bool parse_failed = false;
};

struct ActionOutcome {
    ActionChoice choice;
    bool reprompted = false;
    bool forced_fallback = false;
};

// The five prompt protocols plus the RAG importance rubric, with their
// degraded-mode policies. Transcripts of every call are collected.
class Gateway {
  public:
    explicit Gateway(LanguageModel& lm) : lm_(lm) {}

    std::vector<Triplet> extract_triplets(Step step, const std::string& observation,
                                          const std::vector<Triplet>& prior_examples);
    std::vector<std::pair<Triplet, Triplet>> select_outdated(Step step,
                                                             const std::vector<Triplet>& existing,
                                                             const std::vector<Triplet>& fresh);
    bool check_exploration_need(Step step, const std::string& plan_text);
    PlanOutcome generate_plan(Step step, const std::string& rendered_prompt);
    ActionOutcome select_action(Step step, const std::string& rendered_prompt,
                                const std::vector<std::string>& valid_actions);
    std::string summarize_history(Step step, const std::string& main_goal, int n_prev,
                                  const std::string& recent_history,
                                  const std::string& observation,
                                  const std::string& previous_summary);
    int rate_importance(Step step, const std::string& memory_text);

    const std::vector<LmCall>& transcript() const { return transcript_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    void clear_warnings() { warnings_.clear(); }
    std::int64_t call_count() const { return call_count_; }
    std::int64_t approx_tokens() const { return approx_tokens_; }

  private:
    std::string call(const std::string& stage_name, Step step, const std::string& prompt);
    void warn(std::string message) { warnings_.push_back(std::move(message)); }

    LanguageModel& lm_;
    std::vector<LmCall> transcript_;
    std::vector<std::string> warnings_;
    std::int64_t call_count_ = 0;
    std::int64_t approx_tokens_ = 0;
};

// Triplets rendered the way prompts quote them: 'a, b, c', 'd, e, f'
std::string render_triplet_list(const std::vector<Triplet>& triplets);

}  // namespace arigraph::llm
