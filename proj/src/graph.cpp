#include "arigraph/graph.hpp"

#include <algorithm>

namespace arigraph {

std::string Triplet::key() const {
    return subject.canonical + '\x1f' + fold_relation(relation) + '\x1f' + object.canonical;
}

EdgeId KnowledgeGraph::insert_edge(Step step, const Triplet& t) {
    EdgeId id = static_cast<EdgeId>(edges_.size());
    SemanticEdge e;
    e.id = id;
    e.subject = t.subject;
    e.relation = t.relation;
    e.object = t.object;
    e.status = EdgeStatus::active;
    e.created_step = step;
    edges_.push_back(std::move(e));
    vertices_.insert(t.subject.canonical);
    vertices_.insert(t.object.canonical);
    incident_[t.subject.canonical].push_back(id);
    if (t.object.canonical != t.subject.canonical) incident_[t.object.canonical].push_back(id);
    active_by_key_[t.key()] = id;
    return id;
}

UpsertResult KnowledgeGraph::upsert_triplets(Step step, const std::vector<Triplet>& triplets) {
    UpsertResult result;
    std::set<std::string> seen_keys;
    for (const Triplet& t : triplets) {
        if (t.subject.canonical.empty() || t.object.canonical.empty() ||
            fold_relation(t.relation).empty()) {
            result.skipped.push_back(t.subject.canonical + ", " + t.relation + ", " +
                                     t.object.canonical);
            continue;
        }
        const std::string key = t.key();
        if (!seen_keys.insert(key).second) continue;  // duplicate within this call
        auto it = active_by_key_.find(key);
        if (it != active_by_key_.end()) {
            result.matched_existing.push_back(it->second);
        } else {
            result.added.push_back(insert_edge(step, t));
        }
    }
    return result;
}

std::vector<EdgeId> KnowledgeGraph::incident_edges(const std::set<std::string>& canonical_vertices) const {
    std::set<EdgeId> out;
    for (const std::string& v : canonical_vertices) {
        auto it = incident_.find(v);
        if (it == incident_.end()) continue;
        for (EdgeId id : it->second) {
            if (edges_[static_cast<size_t>(id)].status == EdgeStatus::active) out.insert(id);
        }
    }
    return {out.begin(), out.end()};
}

ReplacementResult KnowledgeGraph::apply_replacements(
    Step step, const std::vector<std::pair<Triplet, Triplet>>& replacements) {
    ReplacementResult result;
    for (const auto& [outdated, actual] : replacements) {
        if (outdated.key() == actual.key()) {
            ++result.ignored;
            continue;
        }
        auto it = active_by_key_.find(outdated.key());
        if (it == active_by_key_.end()) {
            ++result.ignored;
            continue;
        }
        EdgeId outdated_id = it->second;
        UpsertResult up = upsert_triplets(step, {actual});
        EdgeId actual_id = up.added.empty() ? up.matched_existing.at(0) : up.added.at(0);
        SemanticEdge& e = edges_[static_cast<size_t>(outdated_id)];
        e.status = EdgeStatus::tombstoned;
        e.replaced_by = actual_id;
        active_by_key_.erase(it);
        result.tombstoned.push_back(outdated_id);
    }
    return result;
}

const Episode& KnowledgeGraph::add_episode(Step step, std::string observation,
                                           std::optional<std::string> action_taken,
                                           const std::vector<EdgeId>& edge_ids) {
    if (!episodes_.empty() && episodes_.back().step >= step) throw DuplicateEpisode(step);
    for (EdgeId id : edge_ids) {
        if (!has_edge(id)) throw std::out_of_range("add_episode: unknown edge id " + std::to_string(id));
    }
    Episode ep;
    ep.step = step;
    ep.observation = std::move(observation);
    ep.action_taken = std::move(action_taken);
    ep.linked_edge_ids = edge_ids;
    std::sort(ep.linked_edge_ids.begin(), ep.linked_edge_ids.end());
    ep.linked_edge_ids.erase(std::unique(ep.linked_edge_ids.begin(), ep.linked_edge_ids.end()),
                             ep.linked_edge_ids.end());
    ep.original_link_count = static_cast<std::int64_t>(ep.linked_edge_ids.size());
    episodes_.push_back(std::move(ep));
    return episodes_.back();
}

LearnReport KnowledgeGraph::learn(Step step, const std::string& observation,
                                  std::optional<std::string> action_taken,
                                  const Extractor& extractor, const Replacer& replacer) {
    LearnReport report;
    report.episode_step = step;

    // Stages 1-3 are read-only; any failure leaves the graph untouched.
    std::vector<Triplet> extracted;
    try {
        extracted = extractor(observation);
    } catch (const std::exception& e) {
        throw LearnError("extract", e.what());
    }
    report.extracted = extracted;

    std::set<std::string> new_vertices;
    for (const Triplet& t : extracted) {
        if (!t.subject.canonical.empty()) new_vertices.insert(t.subject.canonical);
        if (!t.object.canonical.empty()) new_vertices.insert(t.object.canonical);
    }
    std::vector<EdgeId> related = incident_edges(new_vertices);
    std::vector<Triplet> related_triplets;
    related_triplets.reserve(related.size());
    for (EdgeId id : related) related_triplets.push_back(edge(id).triplet());

    std::vector<std::pair<Triplet, Triplet>> replacements;
    try {
        replacements = replacer(related_triplets, extracted);
    } catch (const std::exception& e) {
        throw LearnError("replace", e.what());
    }

    // Stages 4-6: mutations, applied together.
    ReplacementResult rep = apply_replacements(step, replacements);
    report.tombstoned = rep.tombstoned;
    report.replacements_ignored = rep.ignored;

    UpsertResult up = upsert_triplets(step, extracted);
    report.added = up.added;
    report.matched_existing = up.matched_existing;

    std::vector<EdgeId> links = up.added;
    links.insert(links.end(), up.matched_existing.begin(), up.matched_existing.end());
    add_episode(step, observation, std::move(action_taken), links);
    return report;
}

std::vector<EdgeId> KnowledgeGraph::active_edge_ids() const {
    std::vector<EdgeId> out;
    for (const SemanticEdge& e : edges_) {
        if (e.status == EdgeStatus::active) out.push_back(e.id);
    }
    return out;
}

std::optional<EdgeId> KnowledgeGraph::find_active(const Triplet& t) const {
    auto it = active_by_key_.find(t.key());
    if (it == active_by_key_.end()) return std::nullopt;
    return it->second;
}

}  // namespace arigraph
