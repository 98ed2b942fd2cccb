#include "arigraph/nav.hpp"

#include <algorithm>
#include <deque>

namespace arigraph::nav {

namespace {

const std::array<std::string, 4> kNames{"north", "south", "east", "west"};

// spatial relation "A <dir> of B" -> direction of A relative to B
std::optional<Direction> spatial_direction(const std::string& folded_relation) {
    for (Direction d : kDirections) {
        if (folded_relation.find(direction_name(d) + " of") != std::string::npos) return d;
    }
    return std::nullopt;
}

bool is_exit_relation(const std::string& folded_relation, const NavPatterns& patterns) {
    return folded_relation.find(patterns.exit_relation) != std::string::npos;
}

}  // namespace

const std::string& direction_name(Direction d) { return kNames[static_cast<size_t>(d)]; }

Direction opposite(Direction d) {
    switch (d) {
        case Direction::north: return Direction::south;
        case Direction::south: return Direction::north;
        case Direction::east: return Direction::west;
        case Direction::west: return Direction::east;
    }
    return Direction::north;
}

std::optional<Direction> parse_direction(const std::string& name) {
    for (Direction d : kDirections) {
        if (direction_name(d) == name) return d;
    }
    return std::nullopt;
}

SpatialMap build_spatial_map(const KnowledgeGraph& graph, const NavPatterns&) {
    SpatialMap map;
    for (const SemanticEdge& e : graph.edges()) {
        if (e.status != EdgeStatus::active) continue;
        auto dir = spatial_direction(fold_relation(e.relation));
        if (!dir) continue;
        // subject is <dir> of object: travel object -> subject via "go <dir>"
        map.links[e.object.canonical][*dir] = e.subject.canonical;
        map.links[e.subject.canonical][opposite(*dir)] = e.object.canonical;
    }
    return map;
}

std::vector<Triplet> unexplored_exits(const KnowledgeGraph& graph,
                                      const std::string& current_location,
                                      const NavPatterns& patterns) {
    if (!graph.has_vertex(current_location)) return {};
    std::vector<Triplet> exits;
    std::vector<EdgeId> incident = graph.incident_edges({current_location});
    for (EdgeId id : incident) {
        const SemanticEdge& e = graph.edge(id);
        if (e.subject.canonical != current_location) continue;  // outgoing only
        if (is_exit_relation(fold_relation(e.relation), patterns)) exits.push_back(e.triplet());
    }
    for (EdgeId id : incident) {
        const SemanticEdge& e = graph.edge(id);
        if (e.object.canonical != current_location) continue;  // incoming only
        auto dir = spatial_direction(fold_relation(e.relation));
        if (!dir) continue;
        // an exit in this direction leads to an already-explored location
        exits.erase(std::remove_if(exits.begin(), exits.end(),
                                   [&](const Triplet& t) {
                                       return t.object.canonical == direction_name(*dir);
                                   }),
                    exits.end());
    }
    return exits;
}

std::optional<std::vector<std::string>> find_route(const KnowledgeGraph& graph,
                                                   const std::string& from, const std::string& to,
                                                   const NavPatterns& patterns) {
    SpatialMap map = build_spatial_map(graph, patterns);
    if (from == to) {
        if (!map.has_location(from) && !graph.has_vertex(from)) return std::nullopt;
        return std::vector<std::string>{};
    }
    if (!map.has_location(from) || !map.has_location(to)) return std::nullopt;

    std::map<std::string, std::pair<std::string, Direction>> parent;  // node -> (prev, dir taken)
    std::deque<std::string> queue{from};
    parent.emplace(from, std::make_pair(std::string{}, Direction::north));
    while (!queue.empty()) {
        std::string here = queue.front();
        queue.pop_front();
        if (here == to) break;
        auto it = map.links.find(here);
        if (it == map.links.end()) continue;
        // expansion order: north < south < east < west, then alphabetical target
        std::vector<std::pair<Direction, std::string>> next(it->second.begin(), it->second.end());
        std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return static_cast<int>(a.first) < static_cast<int>(b.first);
            return a.second < b.second;
        });
        for (const auto& [dir, dest] : next) {
            if (parent.emplace(dest, std::make_pair(here, dir)).second) queue.push_back(dest);
        }
    }
    if (!parent.count(to)) return std::nullopt;
    std::vector<std::string> route;
    for (std::string node = to; node != from;) {
        const auto& [prev, dir] = parent.at(node);
        route.push_back("go " + direction_name(dir));
        node = prev;
    }
    std::reverse(route.begin(), route.end());
    return route;
}

std::vector<std::string> expand_goto_actions(const KnowledgeGraph& graph,
                                             const std::string& current_location,
                                             const std::vector<std::string>& valid_actions,
                                             const NavPatterns& patterns) {
    std::vector<std::string> out = valid_actions;
    SpatialMap map = build_spatial_map(graph, patterns);
    for (const auto& [location, _] : map.links) {
        if (location == current_location) continue;
        if (find_route(graph, current_location, location, patterns)) {
            out.push_back("go to " + location);
        }
    }
    return out;
}

std::optional<std::string> resolve_goto(const KnowledgeGraph& graph,
                                        const std::string& current_location,
                                        const std::string& action, const NavPatterns& patterns) {
    constexpr std::string_view prefix = "go to ";
    if (action.rfind(prefix, 0) != 0) return std::nullopt;
    std::string target = action.substr(prefix.size());
    auto route = find_route(graph, current_location, target, patterns);
    if (!route || route->empty()) return std::nullopt;
    return route->front();
}

}  // namespace arigraph::nav
