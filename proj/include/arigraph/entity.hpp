#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace arigraph {

// Canonical entity name: lowercase, whitespace-collapsed, edge punctuation
// stripped. Canonicalization is idempotent.
struct EntityName {
    std::string canonical;
    std::string raw;

    bool operator==(const EntityName& other) const { return canonical == other.canonical; }
    bool operator<(const EntityName& other) const { return canonical < other.canonical; }
};

struct NormalizationEmpty : std::runtime_error {
    explicit NormalizationEmpty(const std::string& raw)
        : std::runtime_error("entity empty after normalization: \"" + raw + "\"") {}
};

// Returns std::nullopt when the input normalizes to nothing.
std::optional<std::string> try_canonicalize(std::string_view raw);

// Throws NormalizationEmpty on empty result.
EntityName normalize_entity(std::string_view raw);

// Lowercase + trim + collapse internal whitespace, keeps punctuation.
// Used for case-insensitive relation comparison.
std::string fold_relation(std::string_view raw);

}  // namespace arigraph
