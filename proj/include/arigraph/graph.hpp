#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "arigraph/entity.hpp"

namespace arigraph {

using EdgeId = std::int64_t;
using Step = std::int64_t;

// One (subject, relation, object) fact. Entities are canonicalized,
// the relation is kept verbatim and compared case-insensitively.
struct Triplet {
    EntityName subject;
    std::string relation;
    EntityName object;

    // canonical comparison key
    std::string key() const;
    bool operator==(const Triplet& other) const { return key() == other.key(); }
};

enum class EdgeStatus { active, tombstoned };

struct SemanticEdge {
    EdgeId id = 0;
    EntityName subject;
    std::string relation;
    EntityName object;
    EdgeStatus status = EdgeStatus::active;
    Step created_step = 0;
    std::optional<EdgeId> replaced_by;

    Triplet triplet() const { return Triplet{subject, relation, object}; }
};

// One time step's observation bound to the semantic edges extracted from it.
// linked_edge_ids never changes after creation, even if edges are later
// tombstoned; original_link_count is frozen at creation.
struct Episode {
    Step step = 0;
    std::string observation;
    std::optional<std::string> action_taken;
    std::vector<EdgeId> linked_edge_ids;  // sorted, unique
    std::int64_t original_link_count = 0;
};

struct DuplicateEpisode : std::runtime_error {
    explicit DuplicateEpisode(Step step)
        : std::runtime_error("episode already recorded for step " + std::to_string(step)) {}
};

struct LearnError : std::runtime_error {
    std::string stage;
    LearnError(std::string stage_name, const std::string& what)
        : std::runtime_error("learn failed at stage " + stage_name + ": " + what),
          stage(std::move(stage_name)) {}
};

struct UpsertResult {
    std::vector<EdgeId> added;             // extraction order, deduplicated
    std::vector<EdgeId> matched_existing;  // extraction order, deduplicated
    std::vector<std::string> skipped;      // triplets with empty slots, rendered
};

struct ReplacementResult {
    std::vector<EdgeId> tombstoned;
    std::int64_t ignored = 0;
};

struct LearnReport {
    std::vector<Triplet> extracted;
    std::vector<EdgeId> added;
    std::vector<EdgeId> matched_existing;
    std::vector<EdgeId> tombstoned;
    std::int64_t replacements_ignored = 0;
    Step episode_step = 0;
};

using Extractor = std::function<std::vector<Triplet>(const std::string& observation)>;
using Replacer = std::function<std::vector<std::pair<Triplet, Triplet>>(
    const std::vector<Triplet>& existing, const std::vector<Triplet>& fresh)>;

// Joint semantic/episodic memory graph. Tombstoning never deletes:
// edge ids are stable and never reused.
class KnowledgeGraph {
  public:
    UpsertResult upsert_triplets(Step step, const std::vector<Triplet>& triplets);

    // Active edges whose subject or object is in the vertex set.
    std::vector<EdgeId> incident_edges(const std::set<std::string>& canonical_vertices) const;

    ReplacementResult apply_replacements(Step step,
                                         const std::vector<std::pair<Triplet, Triplet>>& replacements);

    const Episode& add_episode(Step step, std::string observation,
                               std::optional<std::string> action_taken,
                               const std::vector<EdgeId>& edge_ids);

    // Full per-step learning pipeline: extract, collect incident edges,
    // select replacements, apply them, upsert, record episode.
    // The graph is untouched if extractor or replacer fails.
    LearnReport learn(Step step, const std::string& observation,
                      std::optional<std::string> action_taken,
                      const Extractor& extractor, const Replacer& replacer);

    const SemanticEdge& edge(EdgeId id) const { return edges_.at(static_cast<size_t>(id)); }
    bool has_edge(EdgeId id) const { return id >= 0 && static_cast<size_t>(id) < edges_.size(); }
    const std::vector<SemanticEdge>& edges() const { return edges_; }
    std::vector<EdgeId> active_edge_ids() const;
    std::optional<EdgeId> find_active(const Triplet& t) const;

    const std::vector<Episode>& episodes() const { return episodes_; }
    const std::set<std::string>& vertices() const { return vertices_; }
    bool has_vertex(const std::string& canonical) const { return vertices_.count(canonical) > 0; }

  private:
    EdgeId insert_edge(Step step, const Triplet& t);

    std::set<std::string> vertices_;
    std::vector<SemanticEdge> edges_;  // id == index
    std::unordered_map<std::string, EdgeId> active_by_key_;
    std::unordered_map<std::string, std::vector<EdgeId>> incident_;
    std::vector<Episode> episodes_;

    friend class SnapshotCodec;
};

}  // namespace arigraph
