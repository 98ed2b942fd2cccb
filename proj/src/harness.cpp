#include "arigraph/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "arigraph/embed.hpp"
#include "arigraph/snapshot.hpp"
#include "nlohmann/json.hpp"

namespace arigraph::harness {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string fixture_file_for(const ExperimentConfig& config, std::uint64_t seed) {
    if (fs::is_directory(config.fixtures_path)) {
        return (fs::path(config.fixtures_path) / ("seed_" + std::to_string(seed) + ".jsonl"))
            .string();
    }
    return config.fixtures_path;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (runs < 1) throw ConfigError("runs must be >= 1");
    if (report_best < 1 || report_best > runs) {
        throw ConfigError("report_best must be in [1, runs]");
    }
    if (fixtures_path.empty() && endpoint.empty()) {
        throw ConfigError("either fixtures or an endpoint is required");
    }
    if (!fixtures_path.empty()) {
        if (!fs::exists(fixtures_path)) throw ConfigError("fixtures not found: " + fixtures_path);
        if (fs::is_directory(fixtures_path)) {
            for (int i = 0; i < runs; ++i) {
                std::string file = fixture_file_for(*this, seed_base + static_cast<std::uint64_t>(i));
                if (!fs::exists(file)) throw ConfigError("fixture not found: " + file);
            }
        }
    }
    if (out_dir.empty()) throw ConfigError("out_dir is required");
}

std::string ExperimentConfig::to_json() const {
    ordered_json j;
    j["task"] = worlds::task_name(task);
    j["difficulty"] = worlds::difficulty_name(difficulty);
    j["mode"] = agent::mode_name(agent.mode);
    j["n_prev"] = agent.n_prev;
    j["search"] = {{"depth", agent.search.depth},
                   {"width", agent.search.width},
                   {"episodic_k", agent.search.episodic_k}};
    j["rag"] = {{"gamma", agent.rag.gamma},
                {"alpha_recency", agent.rag.alpha_recency},
                {"alpha_importance", agent.rag.alpha_importance},
                {"alpha_relevance", agent.rag.alpha_relevance},
                {"top_k", agent.rag.top_k}};
    j["step_cap"] = agent.step_cap;
    j["exploration"] = agent.exploration;
    j["token_budget"] = agent.token_budget;
    j["record_timings"] = agent.record_timings;
    j["runs"] = runs;
    j["report_best"] = report_best;
    j["seed_base"] = seed_base;
    j["fixtures"] = fixtures_path;
    j["endpoint"] = endpoint;
    j["chat_model"] = chat_model;
    j["embed_model"] = embed_model;
    j["auth_token_env"] = auth_token_env;
    j["out_dir"] = out_dir;
    j["workers"] = workers;
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid config JSON: ") + e.what());
    }
    ExperimentConfig c;
    if (j.contains("task")) {
        auto t = worlds::parse_task(j["task"].get<std::string>());
        if (!t) throw ConfigError("unknown task: " + j["task"].get<std::string>());
        c.task = *t;
    }
    if (j.contains("difficulty")) {
        auto d = worlds::parse_difficulty(j["difficulty"].get<std::string>());
        if (!d) throw ConfigError("unknown difficulty: " + j["difficulty"].get<std::string>());
        c.difficulty = *d;
    }
    if (j.contains("mode")) {
        auto m = agent::parse_mode(j["mode"].get<std::string>());
        if (!m) throw ConfigError("unknown mode: " + j["mode"].get<std::string>());
        c.agent.mode = *m;
    }
    if (j.contains("n_prev")) c.agent.n_prev = j["n_prev"].get<int>();
    if (j.contains("search")) {
        const auto& s = j["search"];
        if (s.contains("depth")) c.agent.search.depth = s["depth"].get<int>();
        if (s.contains("width")) c.agent.search.width = s["width"].get<int>();
        if (s.contains("episodic_k")) c.agent.search.episodic_k = s["episodic_k"].get<int>();
    }
    if (j.contains("rag")) {
        const auto& r = j["rag"];
        if (r.contains("gamma")) c.agent.rag.gamma = r["gamma"].get<double>();
        if (r.contains("alpha_recency")) c.agent.rag.alpha_recency = r["alpha_recency"].get<double>();
        if (r.contains("alpha_importance")) {
            c.agent.rag.alpha_importance = r["alpha_importance"].get<double>();
        }
        if (r.contains("alpha_relevance")) {
            c.agent.rag.alpha_relevance = r["alpha_relevance"].get<double>();
        }
        if (r.contains("top_k")) c.agent.rag.top_k = r["top_k"].get<int>();
    }
    if (j.contains("step_cap")) c.agent.step_cap = j["step_cap"].get<int>();
    if (j.contains("exploration")) c.agent.exploration = j["exploration"].get<bool>();
    if (j.contains("token_budget")) c.agent.token_budget = j["token_budget"].get<std::int64_t>();
    if (j.contains("record_timings")) c.agent.record_timings = j["record_timings"].get<bool>();
    if (j.contains("runs")) c.runs = j["runs"].get<int>();
    if (j.contains("report_best")) c.report_best = j["report_best"].get<int>();
    if (j.contains("seed_base")) c.seed_base = j["seed_base"].get<std::uint64_t>();
    if (j.contains("fixtures")) c.fixtures_path = j["fixtures"].get<std::string>();
    if (j.contains("endpoint")) c.endpoint = j["endpoint"].get<std::string>();
    if (j.contains("chat_model")) c.chat_model = j["chat_model"].get<std::string>();
    if (j.contains("embed_model")) c.embed_model = j["embed_model"].get<std::string>();
    if (j.contains("auth_token_env")) c.auth_token_env = j["auth_token_env"].get<std::string>();
    if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("workers")) c.workers = j["workers"].get<int>();
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    return from_json(read_file(path));
}

std::uint64_t ExperimentConfig::config_hash() const { return embed::stable_hash64(to_json()); }

namespace {

void execute_run(const ExperimentConfig& config, std::uint64_t seed, RunResult& result) {
    result.seed = seed;
    fs::path dir = fs::path(config.out_dir) / ("run_seed" + std::to_string(seed));
    fs::create_directories(dir);
    result.dir = dir.string();
    try {
        worlds::WorldSpec spec = worlds::generate_world(config.task, config.difficulty, seed);
        worlds::Game game(spec);

        std::unique_ptr<llm::LanguageModel> lm;
        if (!config.fixtures_path.empty()) {
            lm = std::make_unique<llm::ScriptedModel>(
                llm::ScriptedModel::from_jsonl_file(fixture_file_for(config, seed)));
        } else {
            const char* token = std::getenv(config.auth_token_env.c_str());
            lm = std::make_unique<llm::RemoteModel>(config.endpoint, config.chat_model,
                                                    token ? token : "");
        }
        std::shared_ptr<const embed::Embedder> base;
        if (!config.embed_model.empty() && !config.endpoint.empty()) {
            const char* token = std::getenv(config.auth_token_env.c_str());
            base = std::make_shared<embed::RemoteEmbedder>(config.endpoint, config.embed_model,
                                                           token ? token : "");
        } else {
            base = std::make_shared<embed::HashedBagEmbedder>();
        }
        embed::CachingEmbedder embedder(base);

        KnowledgeGraph graph;
        std::vector<llm::LmCall> transcript;
        result.log = agent::run_episode(game, config.agent, *lm, embedder, &graph, &transcript);

        write_file(dir / "world.txt", spec.serialize());
        write_file(dir / "episode.jsonl", result.log.to_jsonl(config.agent.record_timings));
        SnapshotCodec::save_file(graph, (dir / "graph.snapshot").string());
        std::ostringstream transcript_text;
        for (const llm::LmCall& call : transcript) {
            ordered_json j;
            j["stage"] = call.stage;
            j["step"] = call.step;
            j["prompt"] = call.prompt;
            j["response"] = call.response;
            transcript_text << j.dump() << "\n";
        }
        write_file(dir / "transcript.jsonl", transcript_text.str());
    } catch (const std::exception& e) {
        result.failed = true;
        result.error = e.what();
        result.log.status = "error";
        result.log.error = e.what();
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);

    ExperimentResult result;
    result.runs.resize(static_cast<std::size_t>(config.runs));
    std::atomic<int> next{0};
    int worker_count = std::clamp(config.workers, 1, config.runs);
    auto worker = [&] {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= config.runs) return;
            execute_run(config, config.seed_base + static_cast<std::uint64_t>(i),
                        result.runs[static_cast<std::size_t>(i)]);
        }
    };
    if (worker_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < worker_count; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    // best-N selection: highest final normalized score, lowest seed on ties
    std::vector<std::size_t> order(result.runs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double sa = result.runs[a].failed ? -1.0 : result.runs[a].log.final_score_norm;
        double sb = result.runs[b].failed ? -1.0 : result.runs[b].log.final_score_norm;
        if (sa != sb) return sa > sb;
        return result.runs[a].seed < result.runs[b].seed;
    });
    for (int i = 0; i < config.report_best; ++i) {
        result.runs[order[static_cast<std::size_t>(i)]].selected = true;
    }
    for (const RunResult& run : result.runs) {
        if (run.selected) result.selected_seeds.push_back(run.seed);
    }
    std::sort(result.selected_seeds.begin(), result.selected_seeds.end());

    ordered_json summary;
    summary["version"] = kVersion;
    summary["config"] = nlohmann::ordered_json::parse(config.to_json());
    summary["config_hash"] = config.config_hash();
    ordered_json runs = ordered_json::array();
    for (const RunResult& run : result.runs) {
        ordered_json j;
        j["seed"] = run.seed;
        j["dir"] = fs::path(run.dir).filename().string();
        j["status"] = run.log.status;
        j["steps"] = run.log.steps.size();
        j["final_score"] = run.log.final_score;
        j["max_score"] = run.log.max_score;
        j["final_score_norm"] = run.log.final_score_norm;
        j["lm_calls"] = run.log.lm_calls;
        j["approx_tokens"] = run.log.approx_tokens;
        j["selected"] = run.selected;
        if (run.failed) j["error"] = run.error;
        runs.push_back(std::move(j));
    }
    summary["runs"] = std::move(runs);
    summary["selected_seeds"] = result.selected_seeds;
    write_file(fs::path(config.out_dir) / "summary.json", summary.dump(2) + "\n");
    return result;
}

std::vector<double> score_curve(const agent::EpisodeLog& log, int step_cap) {
    std::vector<double> curve;
    double last = 0.0;
    for (const agent::StepRecord& s : log.steps) {
        last = s.score_norm;
        curve.push_back(last);
    }
    while (curve.size() < static_cast<std::size_t>(step_cap)) curve.push_back(last);
    return curve;
}

Aggregate aggregate_curves(const std::vector<std::vector<double>>& curves) {
    Aggregate agg;
    if (curves.empty()) return agg;
    std::size_t length = 0;
    for (const auto& c : curves) length = std::max(length, c.size());
    auto value_at = [](const std::vector<double>& c, std::size_t i) {
        if (c.empty()) return 0.0;
        return i < c.size() ? c[i] : c.back();
    };
    for (std::size_t i = 0; i < length; ++i) {
        double sum = 0.0;
        for (const auto& c : curves) sum += value_at(c, i);
        double mean = sum / static_cast<double>(curves.size());
        double var = 0.0;
        if (curves.size() > 1) {
            for (const auto& c : curves) {
                double d = value_at(c, i) - mean;
                var += d * d;
            }
            var /= static_cast<double>(curves.size() - 1);
        }
        agg.mean.push_back(mean);
        agg.stddev.push_back(std::sqrt(var));
    }
    return agg;
}

namespace {

std::vector<double> curve_from_episode_file(const std::string& path, int step_cap) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    std::vector<double> curve;
    double last = 0.0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        if (!j.contains("score_norm")) continue;  // trailer record
        last = j["score_norm"].get<double>();
        curve.push_back(last);
    }
    while (curve.size() < static_cast<std::size_t>(step_cap)) curve.push_back(last);
    return curve;
}

}  // namespace

Aggregate aggregate_results(const std::string& out_dir) {
    nlohmann::json summary = nlohmann::json::parse(read_file(out_dir + "/summary.json"));
    int step_cap = summary["config"]["step_cap"].get<int>();
    std::vector<std::vector<double>> curves;
    for (const auto& run : summary["runs"]) {
        if (!run["selected"].get<bool>()) continue;
        std::string episode =
            (fs::path(out_dir) / run["dir"].get<std::string>() / "episode.jsonl").string();
        curves.push_back(curve_from_episode_file(episode, step_cap));
    }
    Aggregate agg = aggregate_curves(curves);
    std::ostringstream csv;
    csv << "step,mean,std\n";
    csv.precision(12);
    for (std::size_t i = 0; i < agg.mean.size(); ++i) {
        csv << i << ',' << agg.mean[i] << ',' << agg.stddev[i] << '\n';
    }
    write_file(fs::path(out_dir) / "curves.csv", csv.str());
    return agg;
}

void write_comparison(const std::vector<std::string>& out_dirs, const std::string& csv_path) {
    std::ostringstream csv;
    csv << "out_dir,task,difficulty,mode,final_mean,final_std\n";
    csv.precision(12);
    for (const std::string& dir : out_dirs) {
        Aggregate agg = aggregate_results(dir);
        nlohmann::json summary = nlohmann::json::parse(read_file(dir + "/summary.json"));
        double mean = agg.mean.empty() ? 0.0 : agg.mean.back();
        double stddev = agg.stddev.empty() ? 0.0 : agg.stddev.back();
        csv << dir << ',' << summary["config"]["task"].get<std::string>() << ','
            << summary["config"]["difficulty"].get<std::string>() << ','
            << summary["config"]["mode"].get<std::string>() << ',' << mean << ',' << stddev
            << '\n';
    }
    write_file(csv_path, csv.str());
}

namespace {

std::string render_fixture_triplets(const std::vector<Triplet>& triplets) {
    std::string out;
    for (std::size_t i = 0; i < triplets.size(); ++i) {
        if (i > 0) out += "; ";
        out += embed::triplet_text(triplets[i]);
    }
    return out;
}

std::string render_fixture_replacements(
    const std::vector<std::pair<Triplet, Triplet>>& replacements) {
    if (replacements.empty()) return "[]";
    std::string out = "[";
    for (std::size_t i = 0; i < replacements.size(); ++i) {
        if (i > 0) out += ", ";
        out += "[" + embed::triplet_text(replacements[i].first) + " -> " +
               embed::triplet_text(replacements[i].second) + "]";
    }
    return out + "]";
}

}  // namespace

std::vector<llm::FixtureRecord> record_solver_fixtures(const worlds::WorldSpec& spec) {
    worlds::Game game(spec);
    worlds::StepResult result = game.reset();
    std::vector<std::string> solution = worlds::scripted_solution(spec);

    llm::Plan plan;
    plan.main_goal = worlds::main_goal(spec.task);
    plan.steps.push_back({"Follow the prepared route to the goal.",
                          "The environment layout and item locations are known."});
    plan.emotion = "confidence";
    plan.emotion_reason = "The next step is fully determined.";
    const std::string plan_json = llm::render_plan(plan);

    std::vector<llm::FixtureRecord> records;
    Step step = 0;
    for (const std::string& action : solution) {
        if (game.status() != worlds::GameStatus::running) break;
        const worlds::OracleAnnotation& oracle = game.last_oracle();
        records.push_back({llm::stage::extract, step, render_fixture_triplets(oracle.triplets)});
        records.push_back(
            {llm::stage::replace, step, render_fixture_replacements(oracle.replacements)});
        records.push_back({llm::stage::explore, step, "False"});
        records.push_back({llm::stage::plan, step, plan_json});
        nlohmann::ordered_json act;
        act["reason_for_action"] = "This is the next move of the prepared route.";
        act["action_to_take"] = action;
        records.push_back({llm::stage::act, step, act.dump()});
        result = game.step(action);
        ++step;
    }
    (void)result;
    return records;
}

bool replay_run(const std::string& out_dir, std::uint64_t seed, std::string* detail) {
    nlohmann::json summary = nlohmann::json::parse(read_file(out_dir + "/summary.json"));
    ExperimentConfig config = ExperimentConfig::from_json(summary["config"].dump());
    fs::path run_dir = fs::path(out_dir) / ("run_seed" + std::to_string(seed));
    if (!fs::exists(run_dir / "episode.jsonl")) {
        if (detail) *detail = "no recorded episode at " + (run_dir / "episode.jsonl").string();
        return false;
    }
    std::string recorded = read_file((run_dir / "episode.jsonl").string());

    worlds::WorldSpec spec = worlds::WorldSpec::deserialize(read_file((run_dir / "world.txt").string()));
    worlds::Game game(spec);
    llm::ScriptedModel lm = llm::ScriptedModel::from_jsonl_file(fixture_file_for(config, seed));
    embed::HashedBagEmbedder embedder;
    agent::EpisodeLog log = agent::run_episode(game, config.agent, lm, embedder);
    std::string regenerated = log.to_jsonl(config.agent.record_timings);
    bool match = regenerated == recorded;
    if (detail) {
        *detail = match ? "byte-identical (" + std::to_string(log.steps.size()) + " steps)"
                        : "mismatch: regenerated log differs from the recorded episode";
    }
    return match;
}

}  // namespace arigraph::harness
