#pragma once

#include <set>
#include <string>
#include <vector>

#include "arigraph/embed.hpp"
#include "arigraph/graph.hpp"

namespace arigraph::retrieval {

struct SearchParams {
    int depth = 2;       // semantic search depth d
    int width = 5;       // semantic search width w
    int episodic_k = 2;  // number of episodic vertices k
};

struct ScoredEpisode {
    Step step = 0;
    double relevance = 0.0;
    std::int64_t matched = 0;   // n
    std::int64_t original = 0;  // N
};

struct SearchResult {
    std::set<EdgeId> triplets;           // E_s^Q
    std::vector<ScoredEpisode> episodes;  // V_e^Q, relevance-ranked
};

// Top-w active edges by descending dot product between the query embedding
// and the triplet-text embedding; ties broken by ascending edge id.
std::vector<EdgeId> embed_and_retrieve(const KnowledgeGraph& graph,
                                       const embed::Embedder& embedder,
                                       const std::string& query,
                                       const std::vector<EdgeId>& candidates, int width);

// BFS-like search over the semantic graph: retrieve top-w edges for each
// queued query text, enqueue incident vertex names at distance+1, stop
// expanding at the depth limit.
std::set<EdgeId> semantic_search(const KnowledgeGraph& graph, const embed::Embedder& embedder,
                                 const std::string& query, int depth, int width);

// rel = (n / max(N,1)) * ln(max(N,1)) with n the overlap between the input
// edge set and the episode's linked edges, N the original link count.
double episodic_relevance(const Episode& episode, const std::set<EdgeId>& input_edge_ids);

// Top-k episodes by descending relevance, most recent step first on ties.
// Zero-relevance episodes are never returned.
std::vector<ScoredEpisode> episodic_search(const KnowledgeGraph& graph,
                                           const std::set<EdgeId>& input_edge_ids, int k);

SearchResult memory_graph_search(const KnowledgeGraph& graph, const embed::Embedder& embedder,
                                 const std::vector<std::string>& queries,
                                 const SearchParams& params);

}  // namespace arigraph::retrieval
