#include "arigraph/embed.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "arigraph/snapshot.hpp"

namespace arigraph::embed {

namespace {
constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;
constexpr std::uint64_t kSeed = 0x41726947726170ULL;  // embedder hash seed
}  // namespace

std::uint64_t stable_hash64(std::string_view text) {
    std::uint64_t h = kFnvOffset ^ kSeed;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= kFnvPrime;
    }
    return h;
}

Vector HashedBagEmbedder::embed(const std::string& text) const {
    Vector v(dimension_, 0.0);
    bool any = false;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        std::uint64_t h = stable_hash64(token);
        std::size_t index = static_cast<std::size_t>(h % dimension_);
        double sign = ((h >> 32) & 1u) ? 1.0 : -1.0;
        v[index] += sign;
        any = true;
        token.clear();
    };
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else {
            flush();
        }
    }
    flush();
    if (!any) return v;
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (double& x : v) x /= norm;
    }
    return v;
}

Vector CachingEmbedder::embed(const std::string& text) const {
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(text);
        if (it != cache_.end()) return it->second;
    }
    Vector v = inner_->embed(text);
    std::unique_lock lock(mutex_);
    return cache_.emplace(text, std::move(v)).first->second;
}

void CachingEmbedder::save_sidecar(const std::string& path) const {
    std::shared_lock lock(mutex_);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.precision(17);
    for (const auto& [text, vec] : cache_) {
        out << base64_encode(text);
        for (double x : vec) out << ' ' << x;
        out << '\n';
    }
}

void CachingEmbedder::load_sidecar(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::unique_lock lock(mutex_);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string key;
        if (!(row >> key)) continue;
        Vector vec;
        double x;
        while (row >> x) vec.push_back(x);
        if (vec.size() == dimension()) cache_[base64_decode(key)] = std::move(vec);
    }
}

double dot(const Vector& a, const Vector& b) {
    std::size_t n = std::min(a.size(), b.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

double normalized_dot(const Vector& a, const Vector& b) {
    double na = std::sqrt(dot(a, a));
    double nb = std::sqrt(dot(b, b));
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(a, b) / (na * nb);
}

std::string triplet_text(const SemanticEdge& edge) {
    return edge.subject.canonical + ", " + edge.relation + ", " + edge.object.canonical;
}

std::string triplet_text(const Triplet& triplet) {
    return triplet.subject.canonical + ", " + triplet.relation + ", " + triplet.object.canonical;
}

}  // namespace arigraph::embed
