#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arigraph/graph.hpp"

namespace arigraph::nav {

enum class Direction { north, south, east, west };

constexpr std::array<Direction, 4> kDirections{Direction::north, Direction::south,
                                               Direction::east, Direction::west};

const std::string& direction_name(Direction d);
Direction opposite(Direction d);
std::optional<Direction> parse_direction(const std::string& name);

struct NavPatterns {
    std::string exit_relation = "has exit";  // substring match on folded relation
    // spatial relation matched as "<dir> of" substring ("is east of", "east of")
};

// Traversal links derived from active spatial edges. "A is east of B" yields
// (B, east, A) and (A, west, B).
struct SpatialMap {
    std::map<std::string, std::map<Direction, std::string>> links;
    bool has_location(const std::string& canonical) const { return links.count(canonical) > 0; }
};

SpatialMap build_spatial_map(const KnowledgeGraph& graph, const NavPatterns& patterns = {});

// Exit triplets from the current location whose direction has no learned
// spatial link into it: exits not yet known to lead anywhere explored.
std::vector<Triplet> unexplored_exits(const KnowledgeGraph& graph,
                                      const std::string& current_location,
                                      const NavPatterns& patterns = {});

// Shortest path as "go <direction>" actions; std::nullopt when unreachable
// or either location is unknown, empty when from == to. Ties prefer
// north < south < east < west, then alphabetical destination.
std::optional<std::vector<std::string>> find_route(const KnowledgeGraph& graph,
                                                   const std::string& from, const std::string& to,
                                                   const NavPatterns& patterns = {});

// "go to <location>" synthetic actions for every reachable known location.
std::vector<std::string> expand_goto_actions(const KnowledgeGraph& graph,
                                             const std::string& current_location,
                                             const std::vector<std::string>& valid_actions,
                                             const NavPatterns& patterns = {});

// First primitive step towards the target of a "go to <location>" action;
// std::nullopt when the action is not a goto or no route exists.
std::optional<std::string> resolve_goto(const KnowledgeGraph& graph,
                                        const std::string& current_location,
                                        const std::string& action,
                                        const NavPatterns& patterns = {});

}  // namespace arigraph::nav
