#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "arigraph/harness.hpp"
#include "arigraph/snapshot.hpp"

namespace {

using namespace arigraph;

int cmd_run(harness::ExperimentConfig config) {
    try {
        harness::ExperimentResult result = harness::run_experiment(config);
        for (const harness::RunResult& run : result.runs) {
            std::cout << "seed " << run.seed << ": " << run.log.status << ", score "
                      << run.log.final_score << "/" << run.log.max_score
                      << (run.selected ? " [selected]" : "") << "\n";
        }
        harness::aggregate_results(config.out_dir);
        std::cout << "summary: " << config.out_dir << "/summary.json\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_aggregate(const std::vector<std::string>& dirs, const std::string& comparison) {
    try {
        for (const std::string& dir : dirs) {
            harness::Aggregate agg = harness::aggregate_results(dir);
            double final = agg.mean.empty() ? 0.0 : agg.mean.back();
            std::cout << dir << ": final mean " << final << " (" << dir << "/curves.csv)\n";
        }
        if (!comparison.empty()) {
            harness::write_comparison(dirs, comparison);
            std::cout << "comparison: " << comparison << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "aggregate failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_replay(const std::string& out_dir, std::uint64_t seed) {
    try {
        std::string detail;
        bool match = harness::replay_run(out_dir, seed, &detail);
        std::cout << "replay seed " << seed << ": " << detail << "\n";
        return match ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "replay failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_play(const std::string& task_name, const std::string& difficulty_name,
             std::uint64_t seed) {
    auto task = worlds::parse_task(task_name);
    auto difficulty = worlds::parse_difficulty(difficulty_name);
    if (!task || !difficulty) {
        std::cerr << "unknown task or difficulty\n";
        return 1;
    }
    worlds::Game game(worlds::generate_world(*task, *difficulty, seed));
    worlds::StepResult result = game.reset();
    while (true) {
        std::cout << "\n" << result.observation << "\n";
        std::cout << "[score " << game.score() << "/" << game.max_score() << "]\n";
        if (result.status != worlds::GameStatus::running) break;
        std::cout << "valid actions:\n";
        for (const std::string& a : result.valid_actions) std::cout << "  " << a << "\n";
        std::cout << "> " << std::flush;
        std::string action;
        if (!std::getline(std::cin, action) || action == "quit") break;
        result = game.step(action);
    }
    return 0;
}

int cmd_snapshot(const std::string& in_path, const std::string& out_path) {
    try {
        KnowledgeGraph graph = SnapshotCodec::load_file(in_path);
        std::size_t active = graph.active_edge_ids().size();
        std::cout << "vertices: " << graph.vertices().size() << "\n"
                  << "edges: " << graph.edges().size() << " (" << active << " active, "
                  << graph.edges().size() - active << " tombstoned)\n"
                  << "episodes: " << graph.episodes().size() << "\n";
        if (!out_path.empty()) {
            SnapshotCodec::save_file(graph, out_path);
            std::cout << "written: " << out_path << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "snapshot failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_record_fixtures(const std::string& task_name, const std::string& difficulty_name,
                        std::uint64_t seed_base, int runs, const std::string& out_dir) {
    auto task = worlds::parse_task(task_name);
    auto difficulty = worlds::parse_difficulty(difficulty_name);
    if (!task || !difficulty) {
        std::cerr << "unknown task or difficulty\n";
        return 1;
    }
    std::filesystem::create_directories(out_dir);
    for (int i = 0; i < runs; ++i) {
        std::uint64_t seed = seed_base + static_cast<std::uint64_t>(i);
        worlds::WorldSpec spec = worlds::generate_world(*task, *difficulty, seed);
        auto records = harness::record_solver_fixtures(spec);
        std::string path = out_dir + "/seed_" + std::to_string(seed) + ".jsonl";
        llm::ScriptedModel::save_jsonl_file(records, path);
        std::cout << "recorded " << records.size() << " responses -> " << path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arigraph: graph-memory agent experiments on deterministic text worlds"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run an experiment (several seeded episodes)");
    harness::ExperimentConfig config;
    std::string config_path, task = "treasure_hunt", difficulty = "easy", mode = "arigraph";
    bool no_exploration = false;
    run->add_option("--config", config_path, "experiment config JSON file");
    run->add_option("--task", task, "treasure_hunt | cleaning | cooking");
    run->add_option("--difficulty", difficulty, "easy | medium | hard");
    run->add_option("--mode", mode,
                    "arigraph | arigraph_no_episodic | full_history | summary | rag");
    run->add_option("--runs", config.runs, "episodes to run");
    run->add_option("--report-best", config.report_best, "episodes selected for reporting");
    run->add_option("--seed-base", config.seed_base, "first seed; run i uses seed_base + i");
    run->add_option("--fixtures", config.fixtures_path, "fixture file or directory");
    run->add_option("--endpoint", config.endpoint, "OpenAI-compatible base URL");
    run->add_option("--chat-model", config.chat_model, "chat model name");
    run->add_option("--embed-model", config.embed_model, "embeddings model name");
    run->add_option("--step-cap", config.agent.step_cap, "max steps per episode");
    run->add_option("--workers", config.workers, "parallel runs");
    run->add_option("--out", config.out_dir, "output directory");
    run->add_flag("--no-exploration", no_exploration, "disable the exploration stage");
    run->add_flag("--record-timings", config.agent.record_timings,
                  "include stage timings in logs (breaks byte-stable replay)");

    // aggregate
    auto* aggregate = app.add_subcommand("aggregate", "recompute curves from episode logs");
    std::vector<std::string> agg_dirs;
    std::string comparison;
    aggregate->add_option("dirs", agg_dirs, "experiment output directories")->required();
    aggregate->add_option("--comparison", comparison, "write a cross-config comparison CSV");

    // replay
    auto* replay = app.add_subcommand("replay", "re-run a logged episode against its fixtures");
    std::string replay_dir;
    std::uint64_t replay_seed = 1;
    replay->add_option("--out", replay_dir, "experiment output directory")->required();
    replay->add_option("--seed", replay_seed, "seed of the run to replay")->required();

    // play
    auto* play = app.add_subcommand("play", "human REPL for a generated world");
    std::string play_task = "treasure_hunt", play_difficulty = "easy";
    std::uint64_t play_seed = 1;
    play->add_option("--task", play_task, "treasure_hunt | cleaning | cooking");
    play->add_option("--difficulty", play_difficulty, "easy | medium | hard");
    play->add_option("--seed", play_seed, "world seed");

    // snapshot
    auto* snapshot = app.add_subcommand("snapshot", "inspect or re-emit a graph snapshot");
    std::string snap_in, snap_out;
    snapshot->add_option("--in", snap_in, "snapshot file to load")->required();
    snapshot->add_option("--out", snap_out, "re-save the loaded graph here");

    // record-fixtures
    auto* record = app.add_subcommand("record-fixtures",
                                      "synthesize solver fixtures for offline runs");
    std::string rec_task = "treasure_hunt", rec_difficulty = "easy", rec_out = "fixtures";
    std::uint64_t rec_seed = 1;
    int rec_runs = 1;
    record->add_option("--task", rec_task, "treasure_hunt | cleaning | cooking");
    record->add_option("--difficulty", rec_difficulty, "easy | medium | hard");
    record->add_option("--seed-base", rec_seed, "first seed");
    record->add_option("--runs", rec_runs, "number of seeds");
    record->add_option("--out", rec_out, "fixture directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        if (!config_path.empty()) {
            try {
                config = harness::ExperimentConfig::from_json_file(config_path);
            } catch (const std::exception& e) {
                std::cerr << e.what() << "\n";
                return 1;
            }
        } else {
            auto t = worlds::parse_task(task);
            auto d = worlds::parse_difficulty(difficulty);
            auto m = agent::parse_mode(mode);
            if (!t || !d || !m) {
                std::cerr << "unknown task, difficulty, or mode\n";
                return 1;
            }
            config.task = *t;
            config.difficulty = *d;
            config.agent.mode = *m;
            config.agent.exploration = !no_exploration;
        }
        return cmd_run(config);
    }
    if (aggregate->parsed()) return cmd_aggregate(agg_dirs, comparison);
    if (replay->parsed()) return cmd_replay(replay_dir, replay_seed);
    if (play->parsed()) return cmd_play(play_task, play_difficulty, play_seed);
    if (snapshot->parsed()) return cmd_snapshot(snap_in, snap_out);
    if (record->parsed()) {
        return cmd_record_fixtures(rec_task, rec_difficulty, rec_seed, rec_runs, rec_out);
    }
    return 0;
}
