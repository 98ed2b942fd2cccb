#include "arigraph/agent.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "arigraph/prompts.hpp"
#include "nlohmann/json.hpp"

namespace arigraph::agent {

namespace {

using Clock = std::chrono::steady_clock;

class StageTimer {
  public:
    StageTimer(bool enabled, StepRecord& record, std::string stage)
        : enabled_(enabled), record_(record), stage_(std::move(stage)), start_(Clock::now()) {}
    ~StageTimer() {
        if (!enabled_) return;
        record_.stage_timings[stage_] =
            std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    }

  private:
    bool enabled_;
    StepRecord& record_;
    std::string stage_;
    Clock::time_point start_;
};

std::string render_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
    if (pairs.empty()) return "None";
    std::ostringstream out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i > 0) out << "\n";
        out << "Observation: " << pairs[i].first << "\nAction: " << pairs[i].second;
    }
    return out.str();
}

std::string render_action_list(const std::vector<std::string>& actions) {
    std::string out;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (i > 0) out += ", ";
        out += actions[i];
    }
    return out;
}

std::string status_name(worlds::GameStatus status) {
    switch (status) {
        case worlds::GameStatus::won: return "won";
        case worlds::GameStatus::lost: return "lost";
        case worlds::GameStatus::running: return "running";
    }
    return "?";
}

}  // namespace

std::string mode_name(MemoryMode mode) {
    switch (mode) {
        case MemoryMode::arigraph: return "arigraph";
        case MemoryMode::arigraph_no_episodic: return "arigraph_no_episodic";
        case MemoryMode::full_history: return "full_history";
        case MemoryMode::summary: return "summary";
        case MemoryMode::rag: return "rag";
    }
    return "?";
}

std::optional<MemoryMode> parse_mode(const std::string& name) {
    for (MemoryMode m : {MemoryMode::arigraph, MemoryMode::arigraph_no_episodic,
                         MemoryMode::full_history, MemoryMode::summary, MemoryMode::rag}) {
        if (mode_name(m) == name) return m;
    }
    return std::nullopt;
}

double rag_score(const RagRecord& record, const embed::Vector& query_embedding, Step current_step,
                 const RagParams& params) {
    double age = static_cast<double>(current_step - record.step);
    double recency = std::pow(params.gamma, age);
    double importance = static_cast<double>(record.importance) / 10.0;
    double relevance = embed::normalized_dot(query_embedding, record.embedding);
    return params.alpha_recency * recency + params.alpha_importance * importance +
           params.alpha_relevance * relevance;
}

std::vector<std::string> build_queries(const WorkingMemory& wm) {
    std::vector<std::string> queries{wm.current_observation, wm.main_goal};
    if (wm.current_plan) {
        for (const llm::PlanStep& step : wm.current_plan->steps) queries.push_back(step.sub_goal);
    }
    std::vector<std::string> unique;
    for (std::string& q : queries) {
        if (std::find(unique.begin(), unique.end(), q) == unique.end()) {
            unique.push_back(std::move(q));
        }
    }
    return unique;
}

std::optional<std::string> parse_location(const std::string& observation) {
    std::istringstream in(observation);
    std::string line;
    while (std::getline(in, line)) {
        if (line.size() > 6 && line.rfind("-= ", 0) == 0 &&
            line.substr(line.size() - 3) == " =-") {
            auto name = try_canonicalize(line.substr(3, line.size() - 6));
            if (name) return *name;
        }
    }
    return std::nullopt;
}

Agent::Agent(AgentConfig config, llm::Gateway& gateway, const embed::Embedder& embedder)
    : config_(std::move(config)), gateway_(gateway), embedder_(embedder) {}

std::string Agent::render_observations_slot() const {
    return render_pairs({wm_.recent_history.begin(), wm_.recent_history.end()});
}

std::string Agent::full_history_slot(bool& truncated) const {
    std::vector<std::pair<std::string, std::string>> pairs = full_history_;
    const std::int64_t char_budget = config_.token_budget * 4;
    auto total = [&] {
        std::int64_t chars = 0;
        for (const auto& [obs, act] : pairs) {
            chars += static_cast<std::int64_t>(obs.size() + act.size()) + 24;
        }
        return chars;
    };
    truncated = false;
    while (pairs.size() > 1 && total() > char_budget) {
        pairs.erase(pairs.begin());
        truncated = true;
    }
    return render_pairs(pairs);
}

std::string Agent::knowledge_slot() const {
    switch (config_.mode) {
        case MemoryMode::arigraph:
        case MemoryMode::arigraph_no_episodic: return wm_.retrieved_triplets;
        case MemoryMode::summary: return summary_;
        case MemoryMode::rag:
        case MemoryMode::full_history: return wm_.retrieved_episodes;
    }
    return "None";
}

void Agent::learn_stage(Step step, const std::string& observation, StepRecord& record) {
    if (graph_mode()) {
        auto extractor = [&](const std::string& obs) {
            return gateway_.extract_triplets(step, obs, prev_extracted_);
        };
        auto replacer = [&](const std::vector<Triplet>& existing,
                            const std::vector<Triplet>& fresh) {
            return gateway_.select_outdated(step, existing, fresh);
        };
        try {
            LearnReport report =
                graph_.learn(step, observation, last_action_, extractor, replacer);
            prev_extracted_ = report.extracted;
        } catch (const LearnError& e) {
            record.degraded_flags.push_back("learn_failed:" + e.stage);
        }
    } else if (config_.mode == MemoryMode::summary) {
        summary_ = gateway_.summarize_history(step, wm_.main_goal, config_.n_prev,
                                              render_observations_slot(), observation, summary_);
    } else if (config_.mode == MemoryMode::rag) {
        RagRecord rec;
        rec.step = step;
        rec.text = observation;
        rec.importance = gateway_.rate_importance(step, observation);
        rec.embedding = embedder_.embed(observation);
        rag_records_.push_back(std::move(rec));
    }
}

void Agent::retrieve_stage(Step step, StepRecord& record) {
    (void)step;
    (void)record;
    wm_.retrieved_triplets = "None";
    wm_.retrieved_episodes = "None";
    if (graph_mode()) {
        retrieval::SearchResult result = retrieval::memory_graph_search(
            graph_, embedder_, build_queries(wm_), config_.search);
        std::vector<Triplet> triplets;
        for (EdgeId id : result.triplets) triplets.push_back(graph_.edge(id).triplet());
        if (!triplets.empty()) wm_.retrieved_triplets = llm::render_triplet_list(triplets);
        if (config_.mode == MemoryMode::arigraph && !result.episodes.empty()) {
            std::ostringstream out;
            for (std::size_t i = 0; i < result.episodes.size(); ++i) {
                const Episode& ep =
                    graph_.episodes().at(static_cast<std::size_t>(result.episodes[i].step));
                if (i > 0) out << "\n\n";
                out << ep.observation;
            }
            wm_.retrieved_episodes = out.str();
        }
    } else if (config_.mode == MemoryMode::rag) {
        embed::Vector query = embedder_.embed(wm_.current_observation);
        // records written at earlier steps only; the current observation is
        // presented directly, not through retrieval
        std::vector<std::pair<double, std::size_t>> scored;
        for (std::size_t i = 0; i < rag_records_.size(); ++i) {
            scored.emplace_back(rag_score(rag_records_[i], query, step, config_.rag), i);
        }
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second > b.second;  // most recent first on ties
        });
        if (scored.size() > static_cast<std::size_t>(config_.rag.top_k)) {
            scored.resize(static_cast<std::size_t>(config_.rag.top_k));
        }
        if (!scored.empty()) {
            std::ostringstream out;
            for (std::size_t i = 0; i < scored.size(); ++i) {
                if (i > 0) out << "\n\n";
                out << rag_records_[scored[i].second].text;
            }
            wm_.retrieved_episodes = out.str();
        }
    }
}

std::string Agent::agent_step(Step step, const std::string& observation,
                              const std::vector<std::string>& valid_actions, StepRecord& record) {
    wm_.current_observation = observation;
    wm_.valid_actions = valid_actions;
    if (auto loc = parse_location(observation)) location_ = *loc;

    {
        StageTimer t(config_.record_timings, record, "learn");
        learn_stage(step, observation, record);
    }
    {
        StageTimer t(config_.record_timings, record, "retrieve");
        retrieve_stage(step, record);
    }

    std::string plan0 = wm_.current_plan ? llm::render_plan(*wm_.current_plan) : "None";
    wm_.unexplored_exits = "None";
    bool explore = false;
    if (graph_mode() && config_.exploration) {
        StageTimer t(config_.record_timings, record, "explore");
        explore = gateway_.check_exploration_need(step, plan0);
        if (explore && !location_.empty()) {
            std::vector<Triplet> exits = nav::unexplored_exits(graph_, location_);
            if (!exits.empty()) wm_.unexplored_exits = llm::render_triplet_list(exits);
        }
    }
    const bool exploration_slots = graph_mode() && config_.exploration;

    std::string observations_slot;
    if (config_.mode == MemoryMode::full_history) {
        bool truncated = false;
        observations_slot = full_history_slot(truncated);
        if (truncated) record.degraded_flags.push_back("history_truncated");
    } else {
        observations_slot = render_observations_slot();
    }
    const std::string knowledge = knowledge_slot();
    const std::string episodes =
        config_.mode == MemoryMode::arigraph ? wm_.retrieved_episodes : std::string("None");

    {
        StageTimer t(config_.record_timings, record, "plan");
        std::string prompt = llm::render_planning_prompt(
            wm_.main_goal, config_.n_prev, observations_slot, observation, knowledge,
            config_.search.episodic_k, episodes, plan0, wm_.unexplored_exits, exploration_slots);
        llm::PlanOutcome outcome = gateway_.generate_plan(step, prompt);
        if (outcome.plan) wm_.current_plan = std::move(outcome.plan);
        if (outcome.reprompted) record.degraded_flags.push_back("plan_reprompted");
        if (outcome.parse_failed) record.degraded_flags.push_back("plan_kept_previous");
    }
    std::string plan_now = wm_.current_plan ? llm::render_plan(*wm_.current_plan) : "None";

    std::vector<std::string> expanded = valid_actions;
    if (graph_mode() && !location_.empty()) {
        expanded = nav::expand_goto_actions(graph_, location_, valid_actions);
    }

    std::string action;
    {
        StageTimer t(config_.record_timings, record, "act");
        std::string prompt = llm::render_decision_prompt(
            wm_.main_goal, config_.n_prev, observations_slot, observation, knowledge,
            config_.search.episodic_k, episodes, plan_now, wm_.unexplored_exits,
            exploration_slots, render_action_list(expanded));
        llm::ActionOutcome outcome = gateway_.select_action(step, prompt, expanded);
        if (outcome.reprompted) record.degraded_flags.push_back("action_reprompted");
        if (outcome.forced_fallback) record.degraded_flags.push_back("action_forced_fallback");
        action = outcome.choice.action;
    }

    if (action.rfind("go to ", 0) == 0) {
        auto primitive = nav::resolve_goto(graph_, location_, action);
        action = primitive ? *primitive : valid_actions.front();
    }
    if (std::find(valid_actions.begin(), valid_actions.end(), action) == valid_actions.end()) {
        record.degraded_flags.push_back("action_not_valid");
        action = valid_actions.front();
    }

    wm_.recent_history.emplace_back(observation, action);
    while (wm_.recent_history.size() > static_cast<std::size_t>(config_.n_prev)) {
        wm_.recent_history.pop_front();
    }
    full_history_.emplace_back(observation, action);
    last_action_ = action;
    return action;
}

std::string EpisodeLog::to_jsonl(bool with_timings) const {
    std::ostringstream out;
    for (const StepRecord& s : steps) {
        nlohmann::ordered_json j;
        j["step"] = s.step;
        j["observation"] = s.observation;
        j["action"] = s.action;
        j["reward"] = s.reward;
        j["score_norm"] = s.score_norm;
        j["degraded_flags"] = s.degraded_flags;
        if (with_timings) j["stage_timings"] = s.stage_timings;
        out << j.dump() << "\n";
    }
    nlohmann::ordered_json tail;
    tail["status"] = status;
    tail["final_score"] = final_score;
    tail["max_score"] = max_score;
    tail["final_score_norm"] = final_score_norm;
    tail["lm_calls"] = lm_calls;
    tail["approx_tokens"] = approx_tokens;
    if (!error.empty()) tail["error"] = error;
    out << tail.dump() << "\n";
    return out.str();
}

EpisodeLog run_episode(worlds::Game& game, const AgentConfig& config, llm::LanguageModel& lm,
                       const embed::Embedder& embedder, KnowledgeGraph* graph_out,
                       std::vector<llm::LmCall>* transcript_out) {
    llm::Gateway gateway(lm);
    Agent agent(config, gateway, embedder);
    agent.set_main_goal(worlds::main_goal(game.spec().task));

    EpisodeLog log;
    log.max_score = game.max_score();
    worlds::StepResult result = game.reset();
    Step step = 0;
    try {
        while (result.status == worlds::GameStatus::running && step < config.step_cap) {
            StepRecord record;
            record.step = step;
            record.observation = result.observation;
            std::string action =
                agent.agent_step(step, result.observation, result.valid_actions, record);
            result = game.step(action);
            record.action = action;
            record.reward = result.reward_delta;
            record.score_norm = game.normalized_score();
            log.steps.push_back(std::move(record));
            ++step;
        }
        log.status = result.status == worlds::GameStatus::running ? "cap"
                                                                  : status_name(result.status);
    } catch (const std::exception& e) {
        log.status = "error";
        log.error = e.what();
    }
    log.final_score = game.score();
    log.final_score_norm = game.normalized_score();
    log.lm_calls = gateway.call_count();
    log.approx_tokens = gateway.approx_tokens();
    if (graph_out) *graph_out = agent.graph();
    if (transcript_out) *transcript_out = gateway.transcript();
    return log;
}

}  // namespace arigraph::agent
