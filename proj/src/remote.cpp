#include <nlohmann/json.hpp>

#include "arigraph/embed.hpp"
#include "arigraph/llm.hpp"

#define CPPHTTPLIB_NO_EXCEPTIONS 0
#include <httplib.h>

namespace arigraph {

namespace {

// Splits "http://host:port" from the path prefix, if any.
std::pair<std::string, std::string> split_url(const std::string& url) {
    size_t scheme = url.find("://");
    size_t path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start == std::string::npos) return {url, ""};
    return {url.substr(0, path_start), url.substr(path_start)};
}

httplib::Headers auth_headers(const std::string& token) {
    httplib::Headers headers{{"Content-Type", "application/json"}};
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
    return headers;
}

}  // namespace

namespace embed {

RemoteEmbedder::RemoteEmbedder(std::string base_url, std::string model, std::string auth_token)
    : base_url_(std::move(base_url)), model_(std::move(model)), auth_token_(std::move(auth_token)) {}

std::vector<Vector> RemoteEmbedder::embed_batch(const std::vector<std::string>& texts) const {
    auto [host, prefix] = split_url(base_url_);
    httplib::Client client(host);
    client.set_read_timeout(60, 0);
    nlohmann::json body{{"input", texts}, {"model", model_}};
    auto res = client.Post((prefix + "/embeddings").c_str(), auth_headers(auth_token_),
                           body.dump(), "application/json");
    if (!res || res->status != 200) {
        throw EmbedUnavailable("embeddings endpoint unavailable (status " +
                               std::to_string(res ? res->status : 0) + ")");
    }
    nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded() || !doc.contains("data")) {
        throw EmbedUnavailable("malformed embeddings response");
    }
    std::vector<Vector> out;
    for (const auto& item : doc["data"]) {
        out.push_back(item.at("embedding").get<Vector>());
    }
    if (out.size() != texts.size()) throw EmbedUnavailable("embedding count mismatch");
    std::lock_guard lock(mutex_);
    if (dimension_ == 0 && !out.empty()) dimension_ = out.front().size();
    return out;
}

Vector RemoteEmbedder::embed(const std::string& text) const {
    return embed_batch({text}).front();
}

std::size_t RemoteEmbedder::dimension() const {
    std::lock_guard lock(mutex_);
    return dimension_;
}

}  // namespace embed

namespace llm {

RemoteModel::RemoteModel(std::string base_url, std::string model, std::string auth_token,
                         double temperature)
    : base_url_(std::move(base_url)),
      model_(std::move(model)),
      auth_token_(std::move(auth_token)),
      temperature_(temperature) {}

std::string RemoteModel::complete(const std::string&, Step, const std::string& prompt) {
    auto [host, prefix] = split_url(base_url_);
    httplib::Client client(host);
    client.set_read_timeout(180, 0);
    nlohmann::json body{{"model", model_},
                        {"temperature", temperature_},
                        {"messages", {{{"role", "user"}, {"content", prompt}}}}};
    auto res = client.Post((prefix + "/chat/completions").c_str(), auth_headers(auth_token_),
                           body.dump(), "application/json");
    if (!res || res->status != 200) {
        throw TransportError("chat endpoint unavailable (status " +
                             std::to_string(res ? res->status : 0) + ")");
    }
    nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded() || !doc.contains("choices") || doc["choices"].empty()) {
        throw TransportError("malformed chat response");
    }
    return doc["choices"][0]["message"]["content"].get<std::string>();
}

}  // namespace llm

}  // namespace arigraph
