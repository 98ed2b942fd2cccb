#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arigraph/agent.hpp"
#include "arigraph/worlds.hpp"

namespace arigraph::harness {

inline constexpr const char* kVersion = "1.0.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    worlds::Task task = worlds::Task::treasure_hunt;
    worlds::Difficulty difficulty = worlds::Difficulty::easy;
    agent::AgentConfig agent;
    int runs = 5;
    int report_best = 3;
    std::uint64_t seed_base = 1;
    // either a fixture file (shared by all runs) or a directory holding
    // seed_<seed>.jsonl per run; empty means a live endpoint is required
    std::string fixtures_path;
    std::string endpoint;
    std::string chat_model;
    std::string embed_model;  // empty: deterministic hashed-bag embedder
    std::string auth_token_env = "ARIGRAPH_API_KEY";
    std::string out_dir = "out";
    int workers = 1;

    void validate() const;  // throws ConfigError before any run
    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);
    std::uint64_t config_hash() const;
};

struct RunResult {
    std::uint64_t seed = 0;
    std::string dir;
    agent::EpisodeLog log;
    bool selected = false;
    bool failed = false;
    std::string error;
};

struct ExperimentResult {
    std::vector<RunResult> runs;
    std::vector<std::uint64_t> selected_seeds;
};

// Runs all seeds in a bounded worker pool, writes per-run artifacts
// (episode.jsonl, transcript.jsonl, graph.snapshot, world.txt) and
// summary.json, then applies the best-N selection rule.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Per-step normalized cumulative score, padded at the final value to the cap.
std::vector<double> score_curve(const agent::EpisodeLog& log, int step_cap);

struct Aggregate {
    std::vector<double> mean;
    std::vector<double> stddev;  // sample std; 0 for a single run
};

Aggregate aggregate_curves(const std::vector<std::vector<double>>& curves);

// Recomputes curves from the EpisodeLogs referenced by out_dir/summary.json
// (selected runs only) and writes out_dir/curves.csv; returns the aggregate.
Aggregate aggregate_results(const std::string& out_dir);

// Final-step comparison across several experiment directories, written as CSV.
void write_comparison(const std::vector<std::string>& out_dirs, const std::string& csv_path);

// Synthesizes a complete LM fixture stream for one world by replaying the
// scripted solver through the simulator: extraction/replacement responses come
// from the oracle annotations and the action responses name the solver's moves.
std::vector<llm::FixtureRecord> record_solver_fixtures(const worlds::WorldSpec& spec);

// Re-runs the episode recorded under run_dir (using the experiment's config
// and fixtures) and compares the regenerated episode.jsonl byte-for-byte.
bool replay_run(const std::string& out_dir, std::uint64_t seed, std::string* detail = nullptr);

}  // namespace arigraph::harness
