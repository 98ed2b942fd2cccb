#pragma once

#include <stdexcept>
#include <string>

#include "arigraph/graph.hpp"

namespace arigraph {

struct SnapshotCorrupt : std::runtime_error {
    std::size_t line = 0;
    SnapshotCorrupt(std::size_t line_no, const std::string& what)
        : std::runtime_error("snapshot corrupt at line " + std::to_string(line_no) + ": " + what),
          line(line_no) {}
};

// Line-oriented UTF-8 snapshot, bit-exact round trip: save(load(s)) == s.
class SnapshotCodec {
  public:
    static std::string save(const KnowledgeGraph& graph);
    static KnowledgeGraph load(const std::string& text);

    static void save_file(const KnowledgeGraph& graph, const std::string& path);
    static KnowledgeGraph load_file(const std::string& path);
};

std::string base64_encode(std::string_view data);
std::string base64_decode(std::string_view text);  // throws std::invalid_argument

}  // namespace arigraph
