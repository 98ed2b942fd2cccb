#include "doctest.h"

#include <cmath>

#include "arigraph/embed.hpp"
#include "arigraph/parsers.hpp"

using namespace arigraph;
using namespace arigraph::embed;

TEST_CASE("non-empty embeddings are L2-normalized") {
    HashedBagEmbedder e;
    CHECK(dot(e.embed("key"), e.embed("key")) == doctest::Approx(1.0).epsilon(1e-9));
    double norm = std::sqrt(dot(e.embed("the golden locker is closed"),
                                e.embed("the golden locker is closed")));
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("empty text embeds to the zero vector") {
    HashedBagEmbedder e;
    Vector z = e.embed("");
    CHECK(z.size() == 256);
    CHECK(dot(z, e.embed("anything")) == 0.0);
    CHECK(dot(e.embed(" ,.!"), e.embed(" ,.!")) == 0.0);  // no alphanumeric tokens
}

TEST_CASE("bag-of-tokens order invariance") {
    HashedBagEmbedder e;
    CHECK(dot(e.embed("golden locker"), e.embed("locker golden")) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.embed("Golden LOCKER") == e.embed("golden locker"));
}

TEST_CASE("embedding is deterministic across instances") {
    HashedBagEmbedder a, b;
    CHECK(a.embed("room a has exit east") == b.embed("room a has exit east"));
    CHECK(stable_hash64("key") == stable_hash64("key"));
    CHECK(stable_hash64("key") != stable_hash64("kez"));
}

TEST_CASE("dot product is symmetric") {
    HashedBagEmbedder e;
    Vector a = e.embed("apple on table"), b = e.embed("key in locker");
    CHECK(dot(a, b) == doctest::Approx(dot(b, a)).epsilon(1e-15));
    CHECK(normalized_dot(a, b) == doctest::Approx(normalized_dot(b, a)).epsilon(1e-15));
}

TEST_CASE("caching embedder returns bitwise-equal vectors") {
    auto inner = std::make_shared<HashedBagEmbedder>();
    CachingEmbedder cache(inner);
    Vector fresh = inner->embed("blue key");
    CHECK(cache.embed("blue key") == fresh);  // miss then insert
    CHECK(cache.embed("blue key") == fresh);  // hit
}

TEST_CASE("triplet_text uses the prompt surface form") {
    Triplet t{normalize_entity("bbq"), "used for", normalize_entity("grilling")};
    CHECK(triplet_text(t) == "bbq, used for, grilling");
    Triplet t2{normalize_entity("a"), "r", normalize_entity("b")};
    CHECK(triplet_text(t2) == "a, r, b");
}

TEST_CASE("triplet_text round-trips through the parser") {
    std::vector<Triplet> cases{
        {normalize_entity("blue key"), "opens", normalize_entity("blue locker")},
        {normalize_entity("john"), "position", normalize_entity("engineer in google")},
        {normalize_entity("room b"), "is east of", normalize_entity("room a")},
    };
    for (const Triplet& t : cases) {
        auto parsed = llm::parse_triplet(triplet_text(t));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == t);
    }
}
