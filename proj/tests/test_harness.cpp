#include "doctest.h"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "arigraph/harness.hpp"

using namespace arigraph;
using namespace arigraph::harness;

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig fixture_experiment(const TempDir& dir, int runs) {
    ExperimentConfig config;
    config.task = worlds::Task::treasure_hunt;
    config.difficulty = worlds::Difficulty::easy;
    config.runs = runs;
    config.report_best = std::min(runs, 3);
    config.seed_base = 1;
    config.out_dir = (dir.path / "out").string();
    fs::path fixtures = dir.path / "fixtures";
    fs::create_directories(fixtures);
    for (int i = 0; i < runs; ++i) {
        std::uint64_t seed = config.seed_base + static_cast<std::uint64_t>(i);
        auto spec = worlds::generate_world(config.task, config.difficulty, seed);
        llm::ScriptedModel::save_jsonl_file(
            record_solver_fixtures(spec),
            (fixtures / ("seed_" + std::to_string(seed) + ".jsonl")).string());
    }
    config.fixtures_path = fixtures.string();
    return config;
}

}  // namespace

TEST_CASE("config validation fails before any run") {
    ExperimentConfig config;
    config.fixtures_path = "/definitely/not/here.jsonl";
    CHECK_THROWS_AS(config.validate(), ConfigError);

    config.fixtures_path.clear();
    CHECK_THROWS_AS(config.validate(), ConfigError);  // neither fixtures nor endpoint

    config.endpoint = "http://localhost:1";
    CHECK_NOTHROW(config.validate());

    config.report_best = 9;
    CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("config JSON round-trips") {
    ExperimentConfig config;
    config.task = worlds::Task::cooking;
    config.difficulty = worlds::Difficulty::hard;
    config.agent.mode = agent::MemoryMode::rag;
    config.agent.search.depth = 3;
    config.seed_base = 77;
    ExperimentConfig round = ExperimentConfig::from_json(config.to_json());
    CHECK(round.to_json() == config.to_json());
    CHECK(round.config_hash() == config.config_hash());
    CHECK_THROWS_AS(ExperimentConfig::from_json("{bad"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"task":"chess"})"), ConfigError);
}

TEST_CASE("score curves pad at the final value") {
    agent::EpisodeLog log;
    for (double v : {0.2, 0.4, 0.4}) {
        agent::StepRecord s;
        s.score_norm = v;
        log.steps.push_back(s);
    }
    auto curve = score_curve(log, 6);
    CHECK(curve == std::vector<double>{0.2, 0.4, 0.4, 0.4, 0.4, 0.4});
    CHECK(score_curve(agent::EpisodeLog{}, 3) == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("aggregation arithmetic") {
    Aggregate same = aggregate_curves({{1.0, 1.0}, {1.0, 1.0}});
    CHECK(same.mean == std::vector<double>{1.0, 1.0});
    CHECK(same.stddev == std::vector<double>{0.0, 0.0});

    Aggregate mixed = aggregate_curves({{0.0, 1.0}, {0.0, 0.0}});
    CHECK(mixed.mean.back() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mixed.stddev.back() == doctest::Approx(0.7071067811865476).epsilon(1e-12));

    Aggregate solo = aggregate_curves({{0.3}});
    CHECK(solo.stddev == std::vector<double>{0.0});
    CHECK(aggregate_curves({}).mean.empty());
}

TEST_CASE("run_experiment selects the best runs and writes full provenance") {
    TempDir dir("arigraph_harness_test");
    ExperimentConfig config = fixture_experiment(dir, 5);
    ExperimentResult result = run_experiment(config);
    REQUIRE(result.runs.size() == 5);
    CHECK(result.selected_seeds.size() == 3);
    for (const RunResult& run : result.runs) {
        CHECK(run.log.status == "won");
        CHECK(run.log.final_score_norm == 1.0);
        CHECK(fs::exists(fs::path(run.dir) / "episode.jsonl"));
        CHECK(fs::exists(fs::path(run.dir) / "transcript.jsonl"));
        CHECK(fs::exists(fs::path(run.dir) / "graph.snapshot"));
        CHECK(fs::exists(fs::path(run.dir) / "world.txt"));
    }

    std::ifstream in(fs::path(config.out_dir) / "summary.json");
    REQUIRE(in.good());
    nlohmann::json summary = nlohmann::json::parse(in);
    CHECK(summary["version"] == kVersion);
    CHECK(summary["config_hash"] == config.config_hash());
    CHECK(summary["selected_seeds"].size() == 3);
    CHECK(summary["runs"].size() == 5);
    CHECK(summary["runs"][0]["lm_calls"].get<int>() > 0);

    Aggregate agg = aggregate_results(config.out_dir);
    CHECK(agg.mean.back() == 1.0);
    CHECK(agg.stddev.back() == 0.0);
    CHECK(fs::exists(fs::path(config.out_dir) / "curves.csv"));

    write_comparison({config.out_dir}, (dir.path / "comparison.csv").string());
    CHECK(fs::exists(dir.path / "comparison.csv"));

    std::string detail;
    CHECK(replay_run(config.out_dir, 1, &detail));
    INFO(detail);
}

TEST_CASE("worker pool parallelism matches sequential output") {
    TempDir seq_dir("arigraph_harness_seq");
    TempDir par_dir("arigraph_harness_par");
    ExperimentConfig seq = fixture_experiment(seq_dir, 4);
    ExperimentConfig par = fixture_experiment(par_dir, 4);
    par.workers = 4;
    run_experiment(seq);
    run_experiment(par);
    for (int i = 1; i <= 4; ++i) {
        std::ifstream a(fs::path(seq.out_dir) / ("run_seed" + std::to_string(i)) /
                        "episode.jsonl");
        std::ifstream b(fs::path(par.out_dir) / ("run_seed" + std::to_string(i)) /
                        "episode.jsonl");
        std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
        std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
        CHECK(sa == sb);
        CHECK_FALSE(sa.empty());
    }
}
