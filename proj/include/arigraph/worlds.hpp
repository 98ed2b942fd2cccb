#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arigraph/graph.hpp"
#include "arigraph/nav.hpp"

namespace arigraph::worlds {

enum class Task { treasure_hunt, cleaning, cooking };
enum class Difficulty { easy, medium, hard };

std::string task_name(Task task);
std::string difficulty_name(Difficulty difficulty);
std::optional<Task> parse_task(const std::string& name);
std::optional<Difficulty> parse_difficulty(const std::string& name);

// Splitmix64-based generator; stable across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    std::size_t below(std::size_t n);  // uniform in [0, n)
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

  private:
    std::uint64_t state_;
};

struct RoomLink {
    std::string from;
    nav::Direction dir;
    std::string to;
};

struct TreasureSpec {
    std::string start_room;
    // chain_colors.back() == "golden"; key i shares the color of locker i.
    // key 0 and its note lie in the start room, key i+1 sits inside locker i.
    std::vector<std::string> chain_colors;
    std::vector<std::string> chain_locker_rooms;
    std::map<std::string, std::string> locker_color_by_room;  // every room has one
};

struct CleaningSpec {
    std::string agent_start;
    std::map<std::string, std::string> proper_room;  // item -> where it belongs
    std::map<std::string, std::string> start_room;   // item -> where it begins
    std::vector<std::string> misplaced;              // the 11 scored items
};

struct RecipeEntry {
    std::string ingredient;
    std::string cut;   // dice | slice | chop
    std::string cook;  // grill | fry | roast
};

struct CookingSpec {
    std::string agent_start;
    std::string kitchen = "kitchen";
    std::string bbq_room = "backyard";
    std::vector<RecipeEntry> recipe;
    std::map<std::string, std::string> ingredient_room;  // recipe ingredients
    std::map<std::string, std::string> distractor_room;  // non-recipe ingredients
};

struct WorldSpec {
    Task task = Task::treasure_hunt;
    Difficulty difficulty = Difficulty::easy;
    std::uint64_t seed = 0;
    std::vector<std::string> rooms;
    std::vector<RoomLink> links;  // directed; both directions stored
    TreasureSpec treasure;
    CleaningSpec cleaning;
    CookingSpec cooking;

    int max_score() const;
    std::string serialize() const;
    static WorldSpec deserialize(const std::string& text);
};

WorldSpec generate_world(Task task, Difficulty difficulty, std::uint64_t seed);

std::string main_goal(Task task);

enum class GameStatus { running, won, lost };

struct OracleAnnotation {
    std::vector<Triplet> triplets;
    std::vector<std::pair<Triplet, Triplet>> replacements;
    std::string current_location;
};

struct StepResult {
    std::string observation;
    int reward_delta = 0;
    std::vector<std::string> valid_actions;
    GameStatus status = GameStatus::running;
};

struct TerminalState : std::runtime_error {
    TerminalState() : std::runtime_error("env_step called on terminal game state") {}
};

class Game {
  public:
    explicit Game(WorldSpec spec);

    StepResult reset();
    StepResult step(const std::string& action);

    const OracleAnnotation& last_oracle() const { return oracle_; }
    const WorldSpec& spec() const { return spec_; }
    int score() const { return score_; }
    int max_score() const { return spec_.max_score(); }
    double normalized_score() const;
    GameStatus status() const { return status_; }
    const std::string& location() const { return location_; }

  private:
    std::vector<std::string> valid_actions() const;
    std::string room_description(bool with_header);
    StepResult finish_step(std::string observation, int reward);
    void describe_room_oracle();
    std::map<nav::Direction, std::string> exits_of(const std::string& room) const;

    // action handlers; each returns the observation text and updates state
    std::string do_go(nav::Direction dir, int& reward);
    std::string do_take(const std::string& item, int& reward);
    std::string do_drop(const std::string& item, int& reward);
    std::string do_open(const std::string& color, int& reward);
    std::string do_read(const std::string& what);
    std::string do_cut(const std::string& verb, const std::string& ingredient, int& reward);
    std::string do_cook(const std::string& verb, const std::string& ingredient, int& reward);
    std::string do_prepare(int& reward);
    std::string do_eat(int& reward);

    std::string note_name(std::size_t chain_index) const;
    std::string note_text(std::size_t chain_index) const;
    std::string recipe_text() const;
    std::optional<std::size_t> chain_index_of_color(const std::string& color) const;
    bool recipe_complete() const;

    WorldSpec spec_;
    std::string location_;
    std::set<std::string> inventory_;
    std::map<std::string, std::string> item_place_;  // item -> room | locker name | "inventory"
    std::map<std::string, bool> locker_open_;        // "<color> locker" -> open
    std::set<std::string> keys_scored_;
    std::set<std::string> pickup_scored_;  // cleaning
    std::set<std::string> place_scored_;   // cleaning
    std::map<std::string, bool> ing_cut_done_;
    std::map<std::string, bool> ing_cook_done_;
    bool meal_prepared_ = false;
    int score_ = 0;
    GameStatus status_ = GameStatus::running;
    OracleAnnotation oracle_;
    std::vector<std::string> last_valid_actions_;
};

// Ground-truth solutions used for solvability checks and fixture recording.
std::vector<std::string> scripted_solution(const WorldSpec& spec);

}  // namespace arigraph::worlds
