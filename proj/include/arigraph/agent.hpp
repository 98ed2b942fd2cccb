#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arigraph/embed.hpp"
#include "arigraph/graph.hpp"
#include "arigraph/llm.hpp"
#include "arigraph/nav.hpp"
#include "arigraph/retrieval.hpp"
#include "arigraph/worlds.hpp"

namespace arigraph::agent {

enum class MemoryMode { arigraph, arigraph_no_episodic, full_history, summary, rag };

std::string mode_name(MemoryMode mode);
std::optional<MemoryMode> parse_mode(const std::string& name);

struct RagParams {
    double gamma = 0.99;
    double alpha_recency = 1.0;
    double alpha_importance = 1.0;
    double alpha_relevance = 1.0;
    int top_k = 5;
};

struct RagRecord {
    Step step = 0;
    std::string text;
    int importance = 5;  // 1..10
    embed::Vector embedding;
};

// score = a_rec * gamma^(now - step) + a_imp * importance/10 + a_rel * cosine
double rag_score(const RagRecord& record, const embed::Vector& query_embedding, Step current_step,
                 const RagParams& params);

struct AgentConfig {
    MemoryMode mode = MemoryMode::arigraph;
    int n_prev = 5;
    retrieval::SearchParams search;
    RagParams rag;
    int step_cap = 150;
    bool exploration = true;
    // full-history truncation budget, estimated at 4 characters per token
    std::int64_t token_budget = 12000;
    bool record_timings = false;
};

struct WorkingMemory {
    std::string main_goal;
    std::deque<std::pair<std::string, std::string>> recent_history;  // (observation, action)
    std::string current_observation;
    std::string retrieved_triplets;  // rendered E_s^Q
    std::string retrieved_episodes;  // top-k episode texts
    std::optional<llm::Plan> current_plan;
    std::string unexplored_exits;
    std::vector<std::string> valid_actions;
};

// Q = [observation, main goal] ++ plan sub-goals, deduplicated in order.
std::vector<std::string> build_queries(const WorkingMemory& wm);

struct StepRecord {
    Step step = 0;
    std::string observation;
    std::string action;
    int reward = 0;
    double score_norm = 0.0;
    std::map<std::string, double> stage_timings;  // only when record_timings
    std::vector<std::string> degraded_flags;
};

struct EpisodeLog {
    std::vector<StepRecord> steps;
    std::string status = "running";  // won | lost | cap | error
    int final_score = 0;
    int max_score = 0;
    double final_score_norm = 0.0;
    std::int64_t lm_calls = 0;
    std::int64_t approx_tokens = 0;
    std::string error;

    std::string to_jsonl(bool with_timings) const;
};

// One Ariadne (or baseline) agent bound to a gateway and an embedder.
// Owns the knowledge graph and all per-episode memory state.
class Agent {
  public:
    Agent(AgentConfig config, llm::Gateway& gateway, const embed::Embedder& embedder);

    // Full pipeline for one step; always returns a member of valid_actions.
    std::string agent_step(Step step, const std::string& observation,
                           const std::vector<std::string>& valid_actions, StepRecord& record);

    const KnowledgeGraph& graph() const { return graph_; }
    const WorkingMemory& working_memory() const { return wm_; }
    const std::string& location() const { return location_; }
    const std::string& summary() const { return summary_; }
    const std::vector<RagRecord>& rag_records() const { return rag_records_; }
    void set_main_goal(std::string goal) { wm_.main_goal = std::move(goal); }

    // Prompt renderers exposed for golden-prompt tests.
    std::string render_observations_slot() const;
    std::string full_history_slot(bool& truncated) const;

  private:
    bool graph_mode() const {
        return config_.mode == MemoryMode::arigraph ||
               config_.mode == MemoryMode::arigraph_no_episodic;
    }
    void learn_stage(Step step, const std::string& observation, StepRecord& record);
    void retrieve_stage(Step step, StepRecord& record);
    std::string knowledge_slot() const;  // {subgraph} per memory mode

    AgentConfig config_;
    llm::Gateway& gateway_;
    const embed::Embedder& embedder_;
    KnowledgeGraph graph_;
    WorkingMemory wm_;
    std::string location_;
    std::string summary_ = "None";
    std::vector<RagRecord> rag_records_;
    std::vector<Triplet> prev_extracted_;
    std::vector<std::pair<std::string, std::string>> full_history_;
    std::optional<std::string> last_action_;
};

// Location header "-= Room A =-" -> canonical room name; nullopt if absent.
std::optional<std::string> parse_location(const std::string& observation);

EpisodeLog run_episode(worlds::Game& game, const AgentConfig& config, llm::LanguageModel& lm,
                       const embed::Embedder& embedder, KnowledgeGraph* graph_out = nullptr,
                       std::vector<llm::LmCall>* transcript_out = nullptr);

}  // namespace arigraph::agent
