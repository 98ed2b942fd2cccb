#include "arigraph/worlds.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace arigraph::worlds {

namespace {

using nav::Direction;

Triplet make_triplet(const std::string& s, const std::string& r, const std::string& o) {
    return Triplet{normalize_entity(s), r, normalize_entity(o)};
}

const std::vector<std::string> kLockerColors{
    "blue", "red",    "green", "black",  "white",  "yellow", "purple", "orange",
    "pink", "brown",  "gray",  "cyan",   "silver", "maroon", "teal",   "violet"};

const std::vector<std::string> kCleaningRooms{
    "pool",        "kitchen", "bathroom",     "bedroom", "dining room",
    "living room", "garage",  "laundry room", "garden"};

const std::vector<std::pair<std::string, std::string>> kCleaningItems{
    {"frying pan", "kitchen"},        {"spatula", "kitchen"},
    {"kettle", "kitchen"},            {"toothbrush", "bathroom"},
    {"towel", "bathroom"},            {"soap", "bathroom"},
    {"pillow", "bedroom"},            {"blanket", "bedroom"},
    {"alarm clock", "bedroom"},       {"plate", "dining room"},
    {"fork", "dining room"},          {"napkin", "dining room"},
    {"remote control", "living room"},{"cushion", "living room"},
    {"magazine", "living room"},      {"wrench", "garage"},
    {"screwdriver", "garage"},        {"oil can", "garage"},
    {"detergent", "laundry room"},    {"iron", "laundry room"},
    {"clothes basket", "laundry room"},{"swimming goggles", "pool"},
    {"inflatable float", "pool"},     {"pool net", "pool"},
    {"watering can", "garden"},       {"rake", "garden"},
    {"flower pot", "garden"}};

const std::vector<std::string> kCookingRoomsMedium{
    "kitchen", "pantry",   "backyard", "garden",  "living room",
    "corridor", "cellar",  "bathroom", "driveway"};
const std::vector<std::string> kCookingRoomsHard{
    "kitchen",  "pantry", "backyard", "garden", "living room", "corridor",
    "cellar",   "bathroom", "driveway", "bedroom", "shed",     "street"};

const std::vector<std::string> kIngredients{"carrot",   "potato", "onion",
                                            "red apple", "pepper", "tomato",
                                            "cucumber", "eggplant"};
const std::vector<std::string> kCutVerbs{"slice", "dice", "chop"};
const std::vector<std::string> kCookVerbs{"grill", "fry", "roast"};

std::string past_participle(const std::string& verb) {
    if (verb == "slice") return "sliced";
    if (verb == "dice") return "diced";
    if (verb == "chop") return "chopped";
    if (verb == "grill") return "grilled";
    if (verb == "fry") return "fried";
    if (verb == "roast") return "roasted";
    return verb + "ed";
}

std::string cook_tool(const std::string& verb) {
    if (verb == "grill") return "bbq";
    if (verb == "fry") return "stove";
    return "oven";
}

std::string join_natural(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += (i + 1 == parts.size()) ? " and " : ", ";
        out += parts[i];
    }
    return out;
}

std::string capitalize(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

struct GridPos {
    int x = 0, y = 0;
    bool operator<(const GridPos& other) const {
        return std::tie(x, y) < std::tie(other.x, other.y);
    }
};

GridPos shift(GridPos p, Direction d) {
    switch (d) {
        case Direction::north: return {p.x, p.y + 1};
        case Direction::south: return {p.x, p.y - 1};
        case Direction::east: return {p.x + 1, p.y};
        case Direction::west: return {p.x - 1, p.y};
    }
    return p;
}

// Random lattice placement; every new room attaches to an existing one,
// so the result is a connected tree.
std::vector<RoomLink> lay_out_rooms(Rng& rng, const std::vector<std::string>& rooms) {
    std::vector<RoomLink> links;
    std::map<GridPos, std::size_t> occupied;
    std::vector<GridPos> placed{{0, 0}};
    occupied[{0, 0}] = 0;
    for (std::size_t i = 1; i < rooms.size(); ++i) {
        while (true) {
            std::size_t base = rng.below(placed.size());
            Direction dir = nav::kDirections[rng.below(4)];
            GridPos target = shift(placed[base], dir);
            if (occupied.count(target)) continue;
            occupied[target] = i;
            placed.push_back(target);
            links.push_back({rooms[base], dir, rooms[i]});
            links.push_back({rooms[i], nav::opposite(dir), rooms[base]});
            break;
        }
    }
    return links;
}

std::map<std::string, std::map<Direction, std::string>> adjacency(const WorldSpec& spec) {
    std::map<std::string, std::map<Direction, std::string>> adj;
    for (const RoomLink& link : spec.links) adj[link.from][link.dir] = link.to;
    return adj;
}

std::map<std::string, int> bfs_distances(const WorldSpec& spec, const std::string& from) {
    auto adj = adjacency(spec);
    std::map<std::string, int> dist{{from, 0}};
    std::vector<std::string> queue{from};
    for (std::size_t i = 0; i < queue.size(); ++i) {
        for (const auto& [dir, to] : adj[queue[i]]) {
            if (dist.emplace(to, dist[queue[i]] + 1).second) queue.push_back(to);
        }
    }
    return dist;
}

std::vector<std::pair<Direction, std::string>> bfs_route(const WorldSpec& spec,
                                                         const std::string& from,
                                                         const std::string& to) {
    auto adj = adjacency(spec);
    std::map<std::string, std::pair<std::string, Direction>> parent;
    std::vector<std::string> queue{from};
    parent.emplace(from, std::make_pair(std::string{}, Direction::north));
    for (std::size_t i = 0; i < queue.size() && !parent.count(to); ++i) {
        for (const auto& [dir, dest] : adj[queue[i]]) {
            if (parent.emplace(dest, std::make_pair(queue[i], dir)).second) queue.push_back(dest);
        }
    }
    std::vector<std::pair<Direction, std::string>> route;
    if (!parent.count(to)) return route;
    for (std::string node = to; node != from;) {
        auto& [prev, dir] = parent.at(node);
        route.emplace_back(dir, node);
        node = prev;
    }
    std::reverse(route.begin(), route.end());
    return route;
}

std::vector<std::string> room_names(std::size_t count) {
    std::vector<std::string> rooms;
    for (std::size_t i = 0; i < count; ++i) {
        rooms.push_back(std::string("room ") + static_cast<char>('a' + i));
    }
    return rooms;
}

}  // namespace

std::uint64_t Rng::next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::size_t Rng::below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(next() % n); }

std::string task_name(Task task) {
    switch (task) {
        case Task::treasure_hunt: return "treasure_hunt";
        case Task::cleaning: return "cleaning";
        case Task::cooking: return "cooking";
    }
    return "?";
}

std::string difficulty_name(Difficulty difficulty) {
    switch (difficulty) {
        case Difficulty::easy: return "easy";
        case Difficulty::medium: return "medium";
        case Difficulty::hard: return "hard";
    }
    return "?";
}

std::optional<Task> parse_task(const std::string& name) {
    for (Task t : {Task::treasure_hunt, Task::cleaning, Task::cooking}) {
        if (task_name(t) == name) return t;
    }
    return std::nullopt;
}

std::optional<Difficulty> parse_difficulty(const std::string& name) {
    for (Difficulty d : {Difficulty::easy, Difficulty::medium, Difficulty::hard}) {
        if (difficulty_name(d) == name) return d;
    }
    return std::nullopt;
}

std::string main_goal(Task task) {
    switch (task) {
        case Task::treasure_hunt:
            return "Unlock the golden locker and retrieve the treasure hidden within.";
        case Task::cleaning:
            return "Tidy up the house: find every misplaced item and return it to its proper "
                   "location.";
        case Task::cooking:
            return "Find the recipe, gather the ingredients, prepare the meal and eat it.";
    }
    return "";
}

int WorldSpec::max_score() const {
    switch (task) {
        case Task::treasure_hunt:
            return static_cast<int>(treasure.chain_colors.size()) + 1;
        case Task::cleaning:
            return static_cast<int>(cleaning.misplaced.size()) * 2;
        case Task::cooking: {
            int total = 2;  // prepare meal + eat meal
            for (const RecipeEntry& e : cooking.recipe) {
                total += 1;  // take
                if (!e.cut.empty()) total += 1;
                if (!e.cook.empty()) total += 1;
            }
            return total;
        }
    }
    return 0;
}

WorldSpec generate_world(Task task, Difficulty difficulty, std::uint64_t seed) {
    Rng rng(seed * 1000003ULL + static_cast<std::uint64_t>(task) * 101ULL +
            static_cast<std::uint64_t>(difficulty));
    WorldSpec spec;
    spec.task = task;
    spec.difficulty = difficulty;
    spec.seed = seed;

    if (task == Task::treasure_hunt) {
        const std::size_t n_rooms = difficulty == Difficulty::hard ? 16 : 12;
        const std::size_t n_keys = difficulty == Difficulty::hard ? 5 : 4;
        spec.rooms = room_names(n_rooms);
        spec.links = lay_out_rooms(rng, spec.rooms);
        TreasureSpec& t = spec.treasure;
        t.start_room = spec.rooms.front();

        std::vector<std::string> colors = kLockerColors;
        rng.shuffle(colors);
        t.chain_colors.assign(colors.begin(), colors.begin() + static_cast<long>(n_keys - 1));
        t.chain_colors.push_back("golden");

        std::vector<std::string> candidates(spec.rooms.begin() + 1, spec.rooms.end());
        rng.shuffle(candidates);
        if (difficulty == Difficulty::hard) {
            // the second key hides in the locker farthest from the start
            auto dist = bfs_distances(spec, t.start_room);
            std::string farthest = candidates.front();
            for (const std::string& room : candidates) {
                if (dist[room] > dist[farthest]) farthest = room;
            }
            candidates.erase(std::find(candidates.begin(), candidates.end(), farthest));
            candidates.insert(candidates.begin(), farthest);
        }
        t.chain_locker_rooms.assign(candidates.begin(),
                                    candidates.begin() + static_cast<long>(n_keys));
        for (std::size_t i = 0; i < n_keys; ++i) {
            t.locker_color_by_room[t.chain_locker_rooms[i]] = t.chain_colors[i];
        }
        std::size_t next_color = n_keys - 1;
        for (const std::string& room : spec.rooms) {
            if (!t.locker_color_by_room.count(room)) {
                t.locker_color_by_room[room] = colors[next_color++];
            }
        }
    } else if (task == Task::cleaning) {
        spec.rooms = kCleaningRooms;
        spec.links = lay_out_rooms(rng, spec.rooms);
        CleaningSpec& c = spec.cleaning;
        c.agent_start = spec.rooms[rng.below(spec.rooms.size())];
        for (const auto& [item, room] : kCleaningItems) {
            c.proper_room[item] = room;
            c.start_room[item] = room;
        }
        std::vector<std::string> items;
        for (const auto& [item, room] : kCleaningItems) items.push_back(item);
        rng.shuffle(items);
        items.resize(11);
        std::sort(items.begin(), items.end());
        c.misplaced = items;
        for (const std::string& item : c.misplaced) {
            while (true) {
                const std::string& room = spec.rooms[rng.below(spec.rooms.size())];
                if (room != c.proper_room[item]) {
                    c.start_room[item] = room;
                    break;
                }
            }
        }
    } else {
        const bool hard = difficulty == Difficulty::hard;
        spec.rooms = hard ? kCookingRoomsHard : kCookingRoomsMedium;
        spec.links = lay_out_rooms(rng, spec.rooms);
        CookingSpec& c = spec.cooking;
        c.agent_start = spec.rooms.front();
        const std::size_t n_ing = hard ? 4 : 3;
        std::vector<std::string> pool = kIngredients;
        rng.shuffle(pool);
        for (std::size_t i = 0; i < n_ing; ++i) {
            RecipeEntry entry;
            entry.ingredient = pool[i];
            entry.cut = kCutVerbs[rng.below(kCutVerbs.size())];
            entry.cook = kCookVerbs[rng.below(kCookVerbs.size())];
            c.recipe.push_back(entry);
            c.ingredient_room[entry.ingredient] = spec.rooms[rng.below(spec.rooms.size())];
        }
        std::sort(c.recipe.begin(), c.recipe.end(),
                  [](const RecipeEntry& a, const RecipeEntry& b) {
                      return a.ingredient < b.ingredient;
                  });
        for (std::size_t i = n_ing; i < n_ing + 2; ++i) {
            c.distractor_room[pool[i]] = spec.rooms[rng.below(spec.rooms.size())];
        }
    }
    return spec;
}

// ---------------------------------------------------------------------------
// serialization

std::string WorldSpec::serialize() const {
    std::ostringstream out;
    out << "ARIGRAPH-WORLD v1\n";
    out << "T\t" << task_name(task) << '\t' << difficulty_name(difficulty) << '\t' << seed << '\n';
    for (const std::string& room : rooms) out << "R\t" << room << '\n';
    for (const RoomLink& link : links) {
        out << "L\t" << link.from << '\t' << nav::direction_name(link.dir) << '\t' << link.to
            << '\n';
    }
    if (task == Task::treasure_hunt) {
        out << "TS\t" << treasure.start_room << '\n';
        for (std::size_t i = 0; i < treasure.chain_colors.size(); ++i) {
            out << "TC\t" << treasure.chain_colors[i] << '\t' << treasure.chain_locker_rooms[i]
                << '\n';
        }
        for (const auto& [room, color] : treasure.locker_color_by_room) {
            out << "TL\t" << room << '\t' << color << '\n';
        }
    } else if (task == Task::cleaning) {
        out << "CS\t" << cleaning.agent_start << '\n';
        for (const auto& [item, room] : cleaning.proper_room) {
            bool misplaced = std::find(cleaning.misplaced.begin(), cleaning.misplaced.end(),
                                       item) != cleaning.misplaced.end();
            out << "CI\t" << item << '\t' << room << '\t' << cleaning.start_room.at(item) << '\t'
                << (misplaced ? 1 : 0) << '\n';
        }
    } else {
        out << "KS\t" << cooking.agent_start << '\n';
        for (const RecipeEntry& e : cooking.recipe) {
            out << "KR\t" << e.ingredient << '\t' << e.cut << '\t' << e.cook << '\t'
                << cooking.ingredient_room.at(e.ingredient) << '\n';
        }
        for (const auto& [item, room] : cooking.distractor_room) {
            out << "KD\t" << item << '\t' << room << '\n';
        }
    }
    return out.str();
}

WorldSpec WorldSpec::deserialize(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "ARIGRAPH-WORLD v1") {
        throw std::runtime_error("bad world header");
    }
    WorldSpec spec;
    auto fail = [](const std::string& l) -> std::runtime_error {
        return std::runtime_error("bad world record: " + l);
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        size_t start = 0;
        while (true) {
            size_t pos = line.find('\t', start);
            if (pos == std::string::npos) {
                f.push_back(line.substr(start));
                break;
            }
            f.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        const std::string& tag = f[0];
        if (tag == "T" && f.size() == 4) {
            auto t = parse_task(f[1]);
            auto d = parse_difficulty(f[2]);
            if (!t || !d) throw fail(line);
            spec.task = *t;
            spec.difficulty = *d;
            spec.seed = std::stoull(f[3]);
        } else if (tag == "R" && f.size() == 2) {
            spec.rooms.push_back(f[1]);
        } else if (tag == "L" && f.size() == 4) {
            auto dir = nav::parse_direction(f[2]);
            if (!dir) throw fail(line);
            spec.links.push_back({f[1], *dir, f[3]});
        } else if (tag == "TS" && f.size() == 2) {
            spec.treasure.start_room = f[1];
        } else if (tag == "TC" && f.size() == 3) {
            spec.treasure.chain_colors.push_back(f[1]);
            spec.treasure.chain_locker_rooms.push_back(f[2]);
        } else if (tag == "TL" && f.size() == 3) {
            spec.treasure.locker_color_by_room[f[1]] = f[2];
        } else if (tag == "CS" && f.size() == 2) {
            spec.cleaning.agent_start = f[1];
        } else if (tag == "CI" && f.size() == 5) {
            spec.cleaning.proper_room[f[1]] = f[2];
            spec.cleaning.start_room[f[1]] = f[3];
            if (f[4] == "1") spec.cleaning.misplaced.push_back(f[1]);
        } else if (tag == "KS" && f.size() == 2) {
            spec.cooking.agent_start = f[1];
        } else if (tag == "KR" && f.size() == 5) {
            spec.cooking.recipe.push_back({f[1], f[2], f[3]});
            spec.cooking.ingredient_room[f[1]] = f[4];
        } else if (tag == "KD" && f.size() == 3) {
            spec.cooking.distractor_room[f[1]] = f[2];
        } else {
            throw fail(line);
        }
    }
    return spec;
}

// ---------------------------------------------------------------------------
// game

Game::Game(WorldSpec spec) : spec_(std::move(spec)) {}

double Game::normalized_score() const {
    double v = static_cast<double>(score_) / static_cast<double>(std::max(1, max_score()));
    return std::clamp(v, 0.0, 1.0);
}

std::map<Direction, std::string> Game::exits_of(const std::string& room) const {
    std::map<Direction, std::string> exits;
    for (const RoomLink& link : spec_.links) {
        if (link.from == room) exits[link.dir] = link.to;
    }
    return exits;
}

std::string Game::note_name(std::size_t chain_index) const {
    return spec_.treasure.chain_colors[chain_index] + " note";
}

std::string Game::note_text(std::size_t chain_index) const {
    const std::string& color = spec_.treasure.chain_colors[chain_index];
    const std::string& room = spec_.treasure.chain_locker_rooms[chain_index];
    return "the " + color + " key opens the " + color + " locker. The " + color +
           " locker is in " + room + ".";
}

std::string Game::recipe_text() const {
    std::vector<std::string> names;
    for (const RecipeEntry& e : spec_.cooking.recipe) names.push_back(e.ingredient);
    std::string text = "Recipe: gather the following ingredients: " + join_natural(names) +
                       ". Directions: ";
    std::vector<std::string> steps;
    for (const RecipeEntry& e : spec_.cooking.recipe) {
        if (!e.cut.empty()) steps.push_back(e.cut + " the " + e.ingredient);
        if (!e.cook.empty()) steps.push_back(e.cook + " the " + e.ingredient);
    }
    steps.push_back("prepare the meal");
    text += join_natural(steps) + ".";
    return text;
}

std::optional<std::size_t> Game::chain_index_of_color(const std::string& color) const {
    const auto& colors = spec_.treasure.chain_colors;
    auto it = std::find(colors.begin(), colors.end(), color);
    if (it == colors.end()) return std::nullopt;
    return static_cast<std::size_t>(it - colors.begin());
}

bool Game::recipe_complete() const {
    for (const RecipeEntry& e : spec_.cooking.recipe) {
        if (!inventory_.count(e.ingredient)) return false;
        if (!e.cut.empty() && !ing_cut_done_.at(e.ingredient)) return false;
        if (!e.cook.empty() && !ing_cook_done_.at(e.ingredient)) return false;
    }
    return true;
}

void Game::describe_room_oracle() {
    auto& o = oracle_;
    for (const auto& [dir, to] : exits_of(location_)) {
        o.triplets.push_back(make_triplet(location_, "has exit", nav::direction_name(dir)));
    }
    if (spec_.task == Task::treasure_hunt) {
        const std::string color = spec_.treasure.locker_color_by_room.at(location_);
        const std::string locker = color + " locker";
        o.triplets.push_back(make_triplet(location_, "contains", locker));
        o.triplets.push_back(
            make_triplet(locker, "state", locker_open_[locker] ? "open" : "closed"));
        if (locker_open_[locker]) {
            for (const auto& [item, place] : item_place_) {
                if (place == locker) o.triplets.push_back(make_triplet(item, "is in", locker));
            }
        }
    }
    if (spec_.task == Task::cooking) {
        if (location_ == spec_.cooking.kitchen) {
            o.triplets.push_back(make_triplet(location_, "contains", "stove"));
            o.triplets.push_back(make_triplet(location_, "contains", "oven"));
            o.triplets.push_back(make_triplet(location_, "contains", "knife"));
            o.triplets.push_back(make_triplet(location_, "contains", "cookbook"));
        }
        if (location_ == spec_.cooking.bbq_room) {
            o.triplets.push_back(make_triplet(location_, "contains", "bbq"));
        }
    }
    for (const auto& [item, place] : item_place_) {
        if (place == location_) o.triplets.push_back(make_triplet(item, "is in", location_));
    }
}

std::string Game::room_description(bool with_header) {
    std::ostringstream out;
    if (with_header) out << "-= " << capitalize(location_) << " =-\n";
    out << "You are in " << location_ << ".";
    if (spec_.task == Task::treasure_hunt) {
        const std::string color = spec_.treasure.locker_color_by_room.at(location_);
        const std::string locker = color + " locker";
        out << " You see a " << (locker_open_[locker] ? "opened " : "closed ") << locker << ".";
        if (locker_open_[locker]) {
            std::vector<std::string> inside;
            for (const auto& [item, place] : item_place_) {
                if (place == locker) inside.push_back("a " + item);
            }
            std::sort(inside.begin(), inside.end());
            if (!inside.empty()) out << " Inside it you see " << join_natural(inside) << ".";
        }
    }
    if (spec_.task == Task::cooking) {
        if (location_ == spec_.cooking.kitchen) {
            out << " You see a stove, an oven, a counter with a knife and a cookbook.";
        }
        if (location_ == spec_.cooking.bbq_room) {
            out << " You see a bbq.";
        }
    }
    std::vector<std::string> floor;
    for (const auto& [item, place] : item_place_) {
        if (place == location_) floor.push_back("a " + item);
    }
    std::sort(floor.begin(), floor.end());
    if (!floor.empty()) out << " There is " << join_natural(floor) << " here.";
    std::vector<std::string> exit_names;
    for (const auto& [dir, to] : exits_of(location_)) exit_names.push_back(nav::direction_name(dir));
    if (exit_names.size() == 1) {
        out << " There is an exit to the " << exit_names.front() << ".";
    } else {
        out << " There are exits to the " << join_natural(exit_names) << ".";
    }
    return out.str();
}

StepResult Game::reset() {
    inventory_.clear();
    item_place_.clear();
    locker_open_.clear();
    keys_scored_.clear();
    pickup_scored_.clear();
    place_scored_.clear();
    ing_cut_done_.clear();
    ing_cook_done_.clear();
    meal_prepared_ = false;
    score_ = 0;
    status_ = GameStatus::running;
    oracle_ = OracleAnnotation{};

    std::ostringstream intro;
    intro << main_goal(spec_.task) << "\n";
    if (spec_.task == Task::treasure_hunt) {
        const TreasureSpec& t = spec_.treasure;
        location_ = t.start_room;
        for (const auto& [room, color] : t.locker_color_by_room) locker_open_[color + " locker"] = false;
        item_place_[t.chain_colors[0] + " key"] = t.start_room;
        item_place_[note_name(0)] = t.start_room;
        for (std::size_t i = 1; i < t.chain_colors.size(); ++i) {
            const std::string holder = t.chain_colors[i - 1] + " locker";
            item_place_[t.chain_colors[i] + " key"] = holder;
            item_place_[note_name(i)] = holder;
        }
    } else if (spec_.task == Task::cleaning) {
        location_ = spec_.cleaning.agent_start;
        for (const auto& [item, room] : spec_.cleaning.start_room) item_place_[item] = room;
    } else {
        const CookingSpec& c = spec_.cooking;
        location_ = c.agent_start;
        for (const auto& [item, room] : c.ingredient_room) item_place_[item] = room;
        for (const auto& [item, room] : c.distractor_room) item_place_[item] = room;
        for (const RecipeEntry& e : c.recipe) {
            ing_cut_done_[e.ingredient] = false;
            ing_cook_done_[e.ingredient] = false;
        }
        intro << "Cooking instructions: the bbq is used for grilling, the stove is used for "
                 "frying and the oven is used for roasting. Use the knife in the kitchen to "
                 "slice, dice or chop ingredients. A wrong tool or a wrong action ruins the "
                 "meal. The cookbook with the recipe is in the kitchen.\n";
        oracle_.triplets.push_back(make_triplet("bbq", "used for", "grilling"));
        oracle_.triplets.push_back(make_triplet("stove", "used for", "frying"));
        oracle_.triplets.push_back(make_triplet("oven", "used for", "roasting"));
        oracle_.triplets.push_back(make_triplet("knife", "used for", "cutting"));
        oracle_.triplets.push_back(make_triplet("cookbook", "is in", "kitchen"));
    }
    oracle_.current_location = location_;
    describe_room_oracle();
    intro << room_description(true);
    StepResult result{intro.str(), 0, {}, status_};
    result.valid_actions = valid_actions();
    last_valid_actions_ = result.valid_actions;
    return result;
}

std::vector<std::string> Game::valid_actions() const {
    std::vector<std::string> actions;
    auto exits = exits_of(location_);
    for (Direction d : nav::kDirections) {
        if (exits.count(d)) actions.push_back("go " + nav::direction_name(d));
    }
    std::vector<std::string> extra;
    if (spec_.task == Task::treasure_hunt) {
        const std::string color = spec_.treasure.locker_color_by_room.at(location_);
        const std::string locker = color + " locker";
        for (const auto& [item, place] : item_place_) {
            if (place == location_ || (place == locker && locker_open_.at(locker))) {
                extra.push_back("take " + item);
            }
        }
        if (!locker_open_.at(locker)) extra.push_back("open " + locker);
        for (const std::string& item : inventory_) {
            if (item.size() > 5 && item.substr(item.size() - 5) == " note") {
                extra.push_back("read " + item);
            }
        }
    } else if (spec_.task == Task::cleaning) {
        for (const auto& [item, place] : item_place_) {
            if (place == location_) extra.push_back("take " + item);
        }
        for (const std::string& item : inventory_) extra.push_back("drop " + item);
    } else {
        for (const auto& [item, place] : item_place_) {
            if (place == location_) extra.push_back("take " + item);
        }
        if (location_ == spec_.cooking.kitchen) {
            extra.push_back("read cookbook");
            for (const std::string& item : inventory_) {
                for (const std::string& verb : kCutVerbs) extra.push_back(verb + " " + item);
                extra.push_back("fry " + item);
                extra.push_back("roast " + item);
            }
            if (!meal_prepared_) extra.push_back("prepare meal");
            if (meal_prepared_) extra.push_back("eat meal");
        }
        if (location_ == spec_.cooking.bbq_room) {
            for (const std::string& item : inventory_) extra.push_back("grill " + item);
        }
    }
    std::sort(extra.begin(), extra.end());
    actions.insert(actions.end(), extra.begin(), extra.end());
    return actions;
}

StepResult Game::finish_step(std::string observation, int reward) {
    score_ += reward;
    StepResult result{std::move(observation), reward, {}, status_};
    if (status_ == GameStatus::running) result.valid_actions = valid_actions();
    last_valid_actions_ = result.valid_actions;
    return result;
}

StepResult Game::step(const std::string& action) {
    if (status_ != GameStatus::running) throw TerminalState();
    oracle_ = OracleAnnotation{};
    oracle_.current_location = location_;
    if (std::find(last_valid_actions_.begin(), last_valid_actions_.end(), action) ==
        last_valid_actions_.end()) {
        return finish_step("You can't do that.", 0);
    }
    int reward = 0;
    std::string observation;
    auto word_after = [&](const std::string& prefix) { return action.substr(prefix.size()); };
    if (action.rfind("go ", 0) == 0) {
        observation = do_go(*nav::parse_direction(word_after("go ")), reward);
    } else if (action.rfind("take ", 0) == 0) {
        observation = do_take(word_after("take "), reward);
    } else if (action.rfind("drop ", 0) == 0) {
        observation = do_drop(word_after("drop "), reward);
    } else if (action.rfind("open ", 0) == 0) {
        std::string locker = word_after("open ");  // "<color> locker"
        observation = do_open(locker.substr(0, locker.size() - 7), reward);
    } else if (action.rfind("read ", 0) == 0) {
        observation = do_read(word_after("read "));
    } else if (action == "prepare meal") {
        observation = do_prepare(reward);
    } else if (action == "eat meal") {
        observation = do_eat(reward);
    } else {
        for (const std::string& verb : kCutVerbs) {
            if (action.rfind(verb + " ", 0) == 0) {
                observation = do_cut(verb, word_after(verb + " "), reward);
            }
        }
        for (const std::string& verb : kCookVerbs) {
            if (action.rfind(verb + " ", 0) == 0) {
                observation = do_cook(verb, word_after(verb + " "), reward);
            }
        }
    }
    oracle_.current_location = location_;
    return finish_step(std::move(observation), reward);
}

std::string Game::do_go(Direction dir, int& reward) {
    (void)reward;
    std::string from = location_;
    location_ = exits_of(location_).at(dir);
    oracle_.triplets.push_back(
        make_triplet(location_, "is " + nav::direction_name(dir) + " of", from));
    describe_room_oracle();
    return room_description(true);
}

std::string Game::do_take(const std::string& item, int& reward) {
    std::string old_place = item_place_.at(item);
    item_place_[item] = "inventory";
    inventory_.insert(item);
    Triplet now = make_triplet(item, "is in", "inventory");
    oracle_.triplets.push_back(now);
    oracle_.replacements.emplace_back(make_triplet(item, "is in", old_place), now);
    if (spec_.task == Task::treasure_hunt) {
        if (item.size() > 4 && item.substr(item.size() - 4) == " key" &&
            keys_scored_.insert(item).second) {
            reward += 1;
        }
    } else if (spec_.task == Task::cleaning) {
        if (old_place == spec_.cleaning.proper_room.at(item)) {
            reward -= 1;  // manipulation with a correctly placed item
        } else if (std::find(spec_.cleaning.misplaced.begin(), spec_.cleaning.misplaced.end(),
                             item) != spec_.cleaning.misplaced.end() &&
                   pickup_scored_.insert(item).second) {
            reward += 1;
        }
    } else {
        bool in_recipe = false;
        for (const RecipeEntry& e : spec_.cooking.recipe) in_recipe |= e.ingredient == item;
        if (in_recipe && pickup_scored_.insert(item).second) reward += 1;
    }
    return "You take the " + item + ".";
}

std::string Game::do_drop(const std::string& item, int& reward) {
    inventory_.erase(item);
    item_place_[item] = location_;
    Triplet now = make_triplet(item, "is in", location_);
    oracle_.triplets.push_back(now);
    oracle_.replacements.emplace_back(make_triplet(item, "is in", "inventory"), now);
    std::string text = "You drop the " + item + ".";
    if (spec_.task == Task::cleaning) {
        bool misplaced = std::find(spec_.cleaning.misplaced.begin(),
                                   spec_.cleaning.misplaced.end(),
                                   item) != spec_.cleaning.misplaced.end();
        if (misplaced && location_ == spec_.cleaning.proper_room.at(item) &&
            place_scored_.insert(item).second) {
            reward += 1;
        }
        bool done = true;
        for (const std::string& it : spec_.cleaning.misplaced) {
            done &= item_place_.at(it) == spec_.cleaning.proper_room.at(it);
        }
        if (done) {
            status_ = GameStatus::won;
            text += " The house is clean. You have won.";
        }
    }
    return text;
}

std::string Game::do_open(const std::string& color, int& reward) {
    const std::string locker = color + " locker";
    auto chain = chain_index_of_color(color);
    bool has_key = inventory_.count(color + " key") > 0;
    if (!chain || !has_key) {
        return "The " + locker + " is locked. You need the " + color + " key.";
    }
    locker_open_[locker] = true;
    Triplet open_state = make_triplet(locker, "state", "open");
    oracle_.triplets.push_back(open_state);
    oracle_.replacements.emplace_back(make_triplet(locker, "state", "closed"), open_state);
    if (color == "golden") {
        status_ = GameStatus::won;
        reward += 1;
        return "You unlock the golden locker with the golden key and retrieve the treasure. "
               "You have won.";
    }
    std::vector<std::string> inside;
    for (const auto& [item, place] : item_place_) {
        if (place == locker) {
            inside.push_back("the " + item);
            oracle_.triplets.push_back(make_triplet(item, "is in", locker));
        }
    }
    std::sort(inside.begin(), inside.end());
    return "You unlock the " + locker + " with the " + color + " key. Inside you find " +
           join_natural(inside) + ".";
}

std::string Game::do_read(const std::string& what) {
    if (what == "cookbook") {
        const std::string text = recipe_text();
        oracle_.triplets.push_back(make_triplet("cookbook", "contains", "recipe"));
        for (const RecipeEntry& e : spec_.cooking.recipe) {
            oracle_.triplets.push_back(make_triplet("recipe", "requires", e.ingredient));
            if (!e.cut.empty()) {
                oracle_.triplets.push_back(
                    make_triplet(e.ingredient, "to be", past_participle(e.cut)));
            }
            if (!e.cook.empty()) {
                oracle_.triplets.push_back(
                    make_triplet(e.ingredient, "to be", past_participle(e.cook)));
            }
        }
        return "You read the cookbook. " + text;
    }
    // "<color> note"
    const std::string color = what.substr(0, what.size() - 5);
    std::size_t index = *chain_index_of_color(color);
    const std::string& room = spec_.treasure.chain_locker_rooms[index];
    oracle_.triplets.push_back(make_triplet(what, "mentions", color + " locker"));
    oracle_.triplets.push_back(make_triplet(color + " key", "opens", color + " locker"));
    oracle_.triplets.push_back(make_triplet(color + " locker", "is in", room));
    return "The " + what + " reads: " + note_text(index);
}

std::string Game::do_cut(const std::string& verb, const std::string& ingredient, int& reward) {
    const RecipeEntry* entry = nullptr;
    for (const RecipeEntry& e : spec_.cooking.recipe) {
        if (e.ingredient == ingredient) entry = &e;
    }
    if (!entry || entry->cut != verb || ing_cut_done_.at(ingredient)) {
        status_ = GameStatus::lost;
        return "You " + verb + " the " + ingredient +
               ". That was not part of the recipe. The meal is ruined. You have lost.";
    }
    ing_cut_done_[ingredient] = true;
    reward += 1;
    Triplet done = make_triplet(ingredient, "has been", past_participle(verb));
    oracle_.triplets.push_back(done);
    oracle_.replacements.emplace_back(make_triplet(ingredient, "to be", past_participle(verb)),
                                      done);
    return "You " + verb + " the " + ingredient + " with the knife.";
}

std::string Game::do_cook(const std::string& verb, const std::string& ingredient, int& reward) {
    const RecipeEntry* entry = nullptr;
    for (const RecipeEntry& e : spec_.cooking.recipe) {
        if (e.ingredient == ingredient) entry = &e;
    }
    bool cut_pending = entry && !entry->cut.empty() && !ing_cut_done_.at(ingredient);
    if (!entry || entry->cook != verb || cut_pending || ing_cook_done_.at(ingredient)) {
        status_ = GameStatus::lost;
        return "You " + verb + " the " + ingredient + " on the " + cook_tool(verb) +
               ". That was a mistake. The meal is ruined. You have lost.";
    }
    ing_cook_done_[ingredient] = true;
    reward += 1;
    Triplet done = make_triplet(ingredient, "has been", past_participle(verb));
    oracle_.triplets.push_back(done);
    oracle_.replacements.emplace_back(make_triplet(ingredient, "to be", past_participle(verb)),
                                      done);
    return "You " + verb + " the " + ingredient + " on the " + cook_tool(verb) + ".";
}

std::string Game::do_prepare(int& reward) {
    if (!recipe_complete()) {
        status_ = GameStatus::lost;
        return "You try to prepare the meal, but the ingredients are not ready. The meal is "
               "ruined. You have lost.";
    }
    meal_prepared_ = true;
    reward += 1;
    oracle_.triplets.push_back(make_triplet("meal", "has been", "prepared"));
    return "You prepare the meal.";
}

std::string Game::do_eat(int& reward) {
    status_ = GameStatus::won;
    reward += 1;
    return "You eat the meal. Delicious! You have won.";
}

// ---------------------------------------------------------------------------
// scripted solvers

namespace {

void append_route(std::vector<std::string>& actions, const WorldSpec& spec, std::string& at,
                  const std::string& to) {
    for (const auto& [dir, dest] : bfs_route(spec, at, to)) {
        actions.push_back("go " + nav::direction_name(dir));
        at = dest;
    }
}

std::vector<std::string> solve_treasure(const WorldSpec& spec) {
    const TreasureSpec& t = spec.treasure;
    std::vector<std::string> actions;
    std::string at = t.start_room;
    actions.push_back("take " + t.chain_colors[0] + " key");
    actions.push_back("take " + t.chain_colors[0] + " note");
    actions.push_back("read " + t.chain_colors[0] + " note");
    for (std::size_t i = 0; i < t.chain_colors.size(); ++i) {
        append_route(actions, spec, at, t.chain_locker_rooms[i]);
        actions.push_back("open " + t.chain_colors[i] + " locker");
        if (i + 1 < t.chain_colors.size()) {
            actions.push_back("take " + t.chain_colors[i + 1] + " key");
            actions.push_back("take " + t.chain_colors[i + 1] + " note");
            actions.push_back("read " + t.chain_colors[i + 1] + " note");
        }
    }
    return actions;
}

std::vector<std::string> solve_cleaning(const WorldSpec& spec) {
    const CleaningSpec& c = spec.cleaning;
    auto adj = adjacency(spec);
    std::map<std::string, std::string> place = c.start_room;
    std::set<std::string> carried;
    std::vector<std::string> actions;

    auto visit_room = [&](const std::string& room) {
        // drop deliverables, then pick up misplaced items
        for (const std::string& item : c.misplaced) {
            if (carried.count(item) && c.proper_room.at(item) == room) {
                actions.push_back("drop " + item);
                carried.erase(item);
                place[item] = room;
            }
        }
        for (const std::string& item : c.misplaced) {
            if (place.at(item) == room && room != c.proper_room.at(item)) {
                actions.push_back("take " + item);
                carried.insert(item);
                place[item] = "inventory";
            }
        }
    };

    std::function<void(const std::string&, std::set<std::string>&)> dfs =
        [&](const std::string& room, std::set<std::string>& visited) {
            visited.insert(room);
            visit_room(room);
            for (Direction d : nav::kDirections) {
                auto it = adj[room].find(d);
                if (it == adj[room].end() || visited.count(it->second)) continue;
                actions.push_back("go " + nav::direction_name(d));
                dfs(it->second, visited);
                actions.push_back("go " + nav::direction_name(nav::opposite(d)));
                visit_room(room);
            }
        };
    for (int pass = 0; pass < 2; ++pass) {
        std::set<std::string> visited;
        dfs(c.agent_start, visited);
    }
    return actions;
}

std::vector<std::string> solve_cooking(const WorldSpec& spec) {
    const CookingSpec& c = spec.cooking;
    std::vector<std::string> actions;
    std::string at = c.agent_start;
    append_route(actions, spec, at, c.kitchen);
    actions.push_back("read cookbook");
    for (const RecipeEntry& e : c.recipe) {
        append_route(actions, spec, at, c.ingredient_room.at(e.ingredient));
        actions.push_back("take " + e.ingredient);
    }
    append_route(actions, spec, at, c.kitchen);
    for (const RecipeEntry& e : c.recipe) {
        if (!e.cut.empty()) actions.push_back(e.cut + " " + e.ingredient);
    }
    for (const RecipeEntry& e : c.recipe) {
        if (e.cook == "fry" || e.cook == "roast") actions.push_back(e.cook + " " + e.ingredient);
    }
    bool any_grill = false;
    for (const RecipeEntry& e : c.recipe) any_grill |= e.cook == "grill";
    if (any_grill) {
        append_route(actions, spec, at, c.bbq_room);
        for (const RecipeEntry& e : c.recipe) {
            if (e.cook == "grill") actions.push_back("grill " + e.ingredient);
        }
        append_route(actions, spec, at, c.kitchen);
    }
    actions.push_back("prepare meal");
    actions.push_back("eat meal");
    return actions;
}

}  // namespace

std::vector<std::string> scripted_solution(const WorldSpec& spec) {
    switch (spec.task) {
        case Task::treasure_hunt: return solve_treasure(spec);
        case Task::cleaning: return solve_cleaning(spec);
        case Task::cooking: return solve_cooking(spec);
    }
    return {};
}

}  // namespace arigraph::worlds
