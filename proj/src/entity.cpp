#include "arigraph/entity.hpp"

#include <cctype>

namespace arigraph {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

std::string lower_collapse(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (is_space(c)) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

}  // namespace

std::optional<std::string> try_canonicalize(std::string_view raw) {
    std::string s = lower_collapse(raw);
    size_t begin = 0, end = s.size();
    while (begin < end && (is_punct(s[begin]) || s[begin] == ' ')) ++begin;
    while (end > begin && (is_punct(s[end - 1]) || s[end - 1] == ' ')) --end;
    if (begin >= end) return std::nullopt;
    return s.substr(begin, end - begin);
}

EntityName normalize_entity(std::string_view raw) {
    auto canon = try_canonicalize(raw);
    if (!canon) throw NormalizationEmpty(std::string(raw));
    return EntityName{*canon, std::string(raw)};
}

std::string fold_relation(std::string_view raw) {
    return lower_collapse(raw);
}

}  // namespace arigraph
