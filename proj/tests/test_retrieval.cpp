#include "doctest.h"

#include <cmath>

#include "arigraph/retrieval.hpp"
#include "arigraph/worlds.hpp"

using namespace arigraph;
using namespace arigraph::retrieval;

namespace {

Triplet t(const std::string& s, const std::string& r, const std::string& o) {
    return Triplet{normalize_entity(s), r, normalize_entity(o)};
}

}  // namespace

TEST_CASE("embed_and_retrieve basics") {
    KnowledgeGraph g;
    embed::HashedBagEmbedder e;
    auto only = g.upsert_triplets(0, {t("key", "is in", "locker")}).added;
    CHECK(embed_and_retrieve(g, e, "key", g.active_edge_ids(), 3) == only);
    CHECK(embed_and_retrieve(g, e, "key", {}, 3).empty());

    g.upsert_triplets(0, {t("apple", "is on", "table"), t("door", "leads to", "garden")});
    auto top = embed_and_retrieve(g, e, "key, is in, locker", g.active_edge_ids(), 1);
    REQUIRE(top.size() == 1);
    CHECK(g.edge(top[0]).triplet() == t("key", "is in", "locker"));
}

TEST_CASE("embed_and_retrieve ties prefer lower edge ids") {
    KnowledgeGraph g;
    embed::HashedBagEmbedder e;
    // two edges with identical triplet text modulo tokenization -> equal scores
    g.upsert_triplets(0, {t("a b", "r", "c"), t("a", "b r", "c")});
    auto top = embed_and_retrieve(g, e, "a b r c", g.active_edge_ids(), 2);
    REQUIRE(top.size() == 2);
    CHECK(top[0] < top[1]);
}

TEST_CASE("semantic_search depth 0 returns nothing") {
    KnowledgeGraph g;
    embed::HashedBagEmbedder e;
    g.upsert_triplets(0, {t("a", "r", "b")});
    CHECK(semantic_search(g, e, "a", 0, 5).empty());
    CHECK(semantic_search(KnowledgeGraph{}, e, "a", 3, 5).empty());
}

TEST_CASE("semantic_search walks the chain graph") {
    KnowledgeGraph g;
    embed::HashedBagEmbedder e;
    auto ab = g.upsert_triplets(0, {t("alpha", "linked to", "beta")}).added[0];
    auto bc = g.upsert_triplets(0, {t("beta", "linked to", "gamma")}).added[0];
    g.upsert_triplets(0, {t("gamma", "linked to", "epsilon")});
    // d=1, w=1: only the best match for the seed query itself
    CHECK(semantic_search(g, e, "alpha", 1, 1) == std::set<EdgeId>{ab});
    // d=2 expands through vertex "beta" and reaches the second chain link
    std::set<EdgeId> result = semantic_search(g, e, "alpha", 2, 2);
    CHECK(result.count(ab) == 1);
    CHECK(result.count(bc) == 1);
}

TEST_CASE("semantic_search excludes tombstones and saturates at full budget") {
    KnowledgeGraph g;
    embed::HashedBagEmbedder e;
    g.upsert_triplets(0, {t("key a", "near", "key b"), t("key b", "near", "key c"),
                          t("key c", "near", "key d")});
    auto dead = g.upsert_triplets(0, {t("key a", "near", "key z")}).added[0];
    g.apply_replacements(1, {{t("key a", "near", "key z"), t("key a", "near", "key q")}});

    std::set<EdgeId> all = semantic_search(g, e, "key", 3, 100);
    CHECK(all.count(dead) == 0);
    CHECK(all.size() == g.active_edge_ids().size());  // every triplet shares "key"
}

TEST_CASE("semantic_search is monotonic in depth and width") {
    embed::HashedBagEmbedder e;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        worlds::Rng rng(seed);
        KnowledgeGraph g;
        const std::vector<std::string> nouns{"key", "lock", "room", "door", "map",
                                             "note", "gate", "card", "vault"};
        for (int i = 0; i < 30; ++i) {
            g.upsert_triplets(0, {t(nouns[rng.below(nouns.size())], "near",
                                    nouns[rng.below(nouns.size())])});
        }
        for (int d = 0; d < 3; ++d) {
            for (int w = 1; w < 4; ++w) {
                auto base = semantic_search(g, e, "key", d, w);
                auto deeper = semantic_search(g, e, "key", d + 1, w);
                auto wider = semantic_search(g, e, "key", d, w + 1);
                CHECK(std::includes(deeper.begin(), deeper.end(), base.begin(), base.end()));
                CHECK(std::includes(wider.begin(), wider.end(), base.begin(), base.end()));
            }
        }
    }
}

TEST_CASE("episodic_relevance matches Eq. (1)") {
    Episode ep;
    ep.linked_edge_ids = {0, 1, 2, 3};
    ep.original_link_count = 4;
    CHECK(episodic_relevance(ep, {}) == 0.0);
    CHECK(episodic_relevance(ep, {0, 1}) == doctest::Approx(0.5 * std::log(4.0)).epsilon(1e-12));
    CHECK(episodic_relevance(ep, {0, 1}) == doctest::Approx(0.693147).epsilon(1e-5));

    Episode single;
    single.linked_edge_ids = {7};
    single.original_link_count = 1;
    CHECK(episodic_relevance(single, {7}) == 0.0);  // ln(1) = 0

    Episode empty;
    empty.original_link_count = 0;
    CHECK(episodic_relevance(empty, {1}) == 0.0);
}

TEST_CASE("episodic_search ranks, breaks ties recent-first, drops zero relevance") {
    KnowledgeGraph g;
    auto e0 = g.upsert_triplets(0, {t("a", "r", "b"), t("c", "r", "d")}).added;
    g.add_episode(0, "zero", std::nullopt, e0);
    auto e1 = g.upsert_triplets(1, {t("e", "r", "f"), t("g", "r", "h")}).added;
    g.add_episode(1, "one", std::nullopt, e1);
    auto e2 = g.upsert_triplets(2, {t("i", "r", "j"), t("k", "r", "l")}).added;
    g.add_episode(2, "two", std::nullopt, e2);

    std::set<EdgeId> inputs{e0[0], e2[0]};  // episodes 0 and 2 tie, episode 1 scores 0
    auto ranked = episodic_search(g, inputs, 5);
    REQUIRE(ranked.size() == 2);
    CHECK(ranked[0].step == 2);  // most recent first on ties
    CHECK(ranked[1].step == 0);
    CHECK(ranked[0].relevance == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));

    CHECK(episodic_search(g, inputs, 0).empty());
    CHECK(episodic_search(g, inputs, 1).size() == 1);
    CHECK(episodic_search(g, {}, 5).empty());  // all relevance 0
}

TEST_CASE("memory_graph_search unions per-query results") {
    KnowledgeGraph g;
    embed::HashedBagEmbedder e;
    g.upsert_triplets(0, {t("key", "is in", "locker"), t("door", "leads to", "garden"),
                          t("apple", "is on", "table")});
    g.add_episode(0, "obs", std::nullopt, g.active_edge_ids());
    SearchParams params;

    SearchResult none = memory_graph_search(g, e, {}, params);
    CHECK(none.triplets.empty());
    CHECK(none.episodes.empty());

    auto a = memory_graph_search(g, e, {"key"}, params).triplets;
    auto b = memory_graph_search(g, e, {"garden"}, params).triplets;
    auto both = memory_graph_search(g, e, {"key", "garden"}, params).triplets;
    std::set<EdgeId> manual = a;
    manual.insert(b.begin(), b.end());
    CHECK(both == manual);

    CHECK(memory_graph_search(g, e, {"key", "key"}, params).triplets == a);
}
