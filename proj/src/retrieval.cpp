#include "arigraph/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

namespace arigraph::retrieval {

std::vector<EdgeId> embed_and_retrieve(const KnowledgeGraph& graph,
                                       const embed::Embedder& embedder,
                                       const std::string& query,
                                       const std::vector<EdgeId>& candidates, int width) {
    if (width < 1 || candidates.empty()) return {};
    embed::Vector q = embedder.embed(query);
    std::vector<std::pair<double, EdgeId>> scored;
    scored.reserve(candidates.size());
    for (EdgeId id : candidates) {
        embed::Vector e = embedder.embed(embed::triplet_text(graph.edge(id)));
        scored.emplace_back(embed::dot(q, e), id);
    }
    auto better = [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    };
    std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(width), scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                      scored.end(), better);
    std::vector<EdgeId> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(scored[i].second);
    return out;
}

std::set<EdgeId> semantic_search(const KnowledgeGraph& graph, const embed::Embedder& embedder,
                                 const std::string& query, int depth, int width) {
    std::set<EdgeId> result;
    std::vector<EdgeId> active = graph.active_edge_ids();
    if (active.empty()) return result;

    std::deque<std::pair<std::string, int>> queue;
    std::unordered_set<std::string> enqueued;
    queue.emplace_back(query, 0);
    enqueued.insert(query);
    while (!queue.empty()) {
        auto [text, distance] = queue.front();
        queue.pop_front();
        if (distance >= depth) continue;
        std::vector<EdgeId> found = embed_and_retrieve(graph, embedder, text, active, width);
        for (EdgeId id : found) {
            const SemanticEdge& e = graph.edge(id);
            for (const std::string& v : {e.subject.canonical, e.object.canonical}) {
                if (enqueued.insert(v).second) queue.emplace_back(v, distance + 1);
            }
            result.insert(id);
        }
    }
    return result;
}

double episodic_relevance(const Episode& episode, const std::set<EdgeId>& input_edge_ids) {
    std::int64_t n = 0;
    for (EdgeId id : episode.linked_edge_ids) {
        if (input_edge_ids.count(id)) ++n;
    }
    double denom = static_cast<double>(std::max<std::int64_t>(episode.original_link_count, 1));
    return (static_cast<double>(n) / denom) * std::log(denom);
}

std::vector<ScoredEpisode> episodic_search(const KnowledgeGraph& graph,
                                           const std::set<EdgeId>& input_edge_ids, int k) {
    std::vector<ScoredEpisode> scored;
    if (k <= 0) return scored;
    for (const Episode& ep : graph.episodes()) {
        double rel = episodic_relevance(ep, input_edge_ids);
        if (rel <= 0.0) continue;
        std::int64_t n = 0;
        for (EdgeId id : ep.linked_edge_ids) {
            if (input_edge_ids.count(id)) ++n;
        }
        scored.push_back(ScoredEpisode{ep.step, rel, n, ep.original_link_count});
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredEpisode& a, const ScoredEpisode& b) {
        if (a.relevance != b.relevance) return a.relevance > b.relevance;
        return a.step > b.step;
    });
    if (scored.size() > static_cast<std::size_t>(k)) scored.resize(static_cast<std::size_t>(k));
    return scored;
}

SearchResult memory_graph_search(const KnowledgeGraph& graph, const embed::Embedder& embedder,
                                 const std::vector<std::string>& queries,
                                 const SearchParams& params) {
    SearchResult result;
    for (const std::string& q : queries) {
        std::set<EdgeId> found = semantic_search(graph, embedder, q, params.depth, params.width);
        result.triplets.insert(found.begin(), found.end());
    }
    result.episodes = episodic_search(graph, result.triplets, params.episodic_k);
    return result;
}

}  // namespace arigraph::retrieval
