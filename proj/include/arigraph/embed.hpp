#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "arigraph/graph.hpp"

namespace arigraph::embed {

using Vector = std::vector<double>;

struct EmbedUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Embedder {
  public:
    virtual ~Embedder() = default;
    virtual Vector embed(const std::string& text) const = 0;
    virtual std::size_t dimension() const = 0;
};

// Offline deterministic embedder: lowercase alphanumeric tokens, each token
// hashed to a (bucket, sign) pair, signed counts accumulated, L2-normalized.
// Empty token list yields the zero vector. Stable across platforms.
class HashedBagEmbedder : public Embedder {
  public:
    explicit HashedBagEmbedder(std::size_t dimension = 256) : dimension_(dimension) {}
    Vector embed(const std::string& text) const override;
    std::size_t dimension() const override { return dimension_; }

  private:
    std::size_t dimension_;
};

// Thread-safe exact-text cache in front of another embedder.
class CachingEmbedder : public Embedder {
  public:
    explicit CachingEmbedder(std::shared_ptr<const Embedder> inner) : inner_(std::move(inner)) {}
    Vector embed(const std::string& text) const override;
    std::size_t dimension() const override { return inner_->dimension(); }

    void save_sidecar(const std::string& path) const;
    void load_sidecar(const std::string& path);

  private:
    std::shared_ptr<const Embedder> inner_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<std::string, Vector> cache_;
};

// OpenAI-compatible embeddings endpoint client.
class RemoteEmbedder : public Embedder {
  public:
    RemoteEmbedder(std::string base_url, std::string model, std::string auth_token);
    Vector embed(const std::string& text) const override;
    std::vector<Vector> embed_batch(const std::vector<std::string>& texts) const;
    std::size_t dimension() const override;

  private:
    std::string base_url_;
    std::string model_;
    std::string auth_token_;
    mutable std::size_t dimension_ = 0;
    mutable std::mutex mutex_;
};

double dot(const Vector& a, const Vector& b);
double normalized_dot(const Vector& a, const Vector& b);  // cosine; 0 if either is zero

// "subject, relation, object" — the triplet surface form used in prompts
// and as embedding input.
std::string triplet_text(const SemanticEdge& edge);
std::string triplet_text(const Triplet& triplet);

std::uint64_t stable_hash64(std::string_view text);

}  // namespace arigraph::embed
