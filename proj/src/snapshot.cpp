#include "arigraph/snapshot.hpp"

#include <fstream>
#include <sstream>

namespace arigraph {

namespace {

constexpr const char* kHeader = "ARIGRAPH-SNAPSHOT v1";
constexpr const char* kB64Alphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::int64_t parse_int(const std::string& s, size_t line_no) {
    try {
        size_t pos = 0;
        std::int64_t v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SnapshotCorrupt(line_no, "bad integer \"" + s + "\"");
    }
}

}  // namespace

std::string base64_encode(std::string_view data) {
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    size_t i = 0;
    while (i + 3 <= data.size()) {
        unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                     (static_cast<unsigned char>(data[i + 1]) << 8) |
                     static_cast<unsigned char>(data[i + 2]);
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back(kB64Alphabet[v & 63]);
        i += 3;
    }
    size_t rest = data.size() - i;
    if (rest == 1) {
        unsigned v = static_cast<unsigned char>(data[i]) << 16;
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out += "==";
    } else if (rest == 2) {
        unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                     (static_cast<unsigned char>(data[i + 1]) << 8);
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::string base64_decode(std::string_view text) {
    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    if (text.size() % 4 != 0) throw std::invalid_argument("base64 length");
    std::string out;
    out.reserve(text.size() / 4 * 3);
    for (size_t i = 0; i < text.size(); i += 4) {
        int pad = 0;
        unsigned v = 0;
        for (size_t j = 0; j < 4; ++j) {
            char c = text[i + j];
            if (c == '=') {
                if (i + 4 != text.size() || j < 2) throw std::invalid_argument("base64 padding");
                ++pad;
                v <<= 6;
                continue;
            }
            if (pad > 0) throw std::invalid_argument("base64 padding");
            int d = value_of(c);
            if (d < 0) throw std::invalid_argument("base64 symbol");
            v = (v << 6) | static_cast<unsigned>(d);
        }
        out.push_back(static_cast<char>((v >> 16) & 0xff));
        if (pad < 2) out.push_back(static_cast<char>((v >> 8) & 0xff));
        if (pad < 1) out.push_back(static_cast<char>(v & 0xff));
    }
    return out;
}

std::string SnapshotCodec::save(const KnowledgeGraph& graph) {
    std::ostringstream out;
    out << kHeader << '\n';
    for (const std::string& v : graph.vertices_) {
        out << "V\t" << v << '\n';
    }
    for (const SemanticEdge& e : graph.edges_) {
        out << "E\t" << e.id << '\t'
            << (e.status == EdgeStatus::active ? "active" : "tombstoned") << '\t'
            << e.created_step << '\t' << e.subject.canonical << '\t' << e.relation << '\t'
            << e.object.canonical;
        if (e.replaced_by) out << '\t' << *e.replaced_by;
        out << '\n';
    }
    for (const Episode& ep : graph.episodes_) {
        out << "P\t" << ep.step << '\t' << ep.original_link_count << '\t';
        for (size_t i = 0; i < ep.linked_edge_ids.size(); ++i) {
            if (i > 0) out << ',';
            out << ep.linked_edge_ids[i];
        }
        out << '\t' << base64_encode(ep.observation) << '\t'
            << (ep.action_taken ? base64_encode(*ep.action_taken) : "-") << '\n';
    }
    return out.str();
}

KnowledgeGraph SnapshotCodec::load(const std::string& text) {
    KnowledgeGraph graph;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    if (!std::getline(in, line) || line != kHeader) throw SnapshotCorrupt(1, "missing header");
    line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) throw SnapshotCorrupt(line_no, "empty record");
        auto fields = split_tabs(line);
        const std::string& tag = fields[0];
        if (tag == "V") {
            if (fields.size() != 2 || fields[1].empty())
                throw SnapshotCorrupt(line_no, "bad vertex record");
            if (!graph.vertices_.insert(fields[1]).second)
                throw SnapshotCorrupt(line_no, "duplicate vertex");
        } else if (tag == "E") {
            if (fields.size() != 7 && fields.size() != 8)
                throw SnapshotCorrupt(line_no, "bad edge record");
            SemanticEdge e;
            e.id = parse_int(fields[1], line_no);
            if (e.id != static_cast<EdgeId>(graph.edges_.size()))
                throw SnapshotCorrupt(line_no, "edge ids out of order");
            if (fields[2] == "active") {
                e.status = EdgeStatus::active;
            } else if (fields[2] == "tombstoned") {
                e.status = EdgeStatus::tombstoned;
            } else {
                throw SnapshotCorrupt(line_no, "unknown edge status");
            }
            e.created_step = parse_int(fields[3], line_no);
            e.subject = EntityName{fields[4], fields[4]};
            e.relation = fields[5];
            e.object = EntityName{fields[6], fields[6]};
            if (e.subject.canonical.empty() || e.object.canonical.empty())
                throw SnapshotCorrupt(line_no, "empty edge endpoint");
            if (!graph.vertices_.count(e.subject.canonical) ||
                !graph.vertices_.count(e.object.canonical))
                throw SnapshotCorrupt(line_no, "edge endpoint not declared as vertex");
            if (fields.size() == 8) {
                if (e.status != EdgeStatus::tombstoned)
                    throw SnapshotCorrupt(line_no, "replaced_by on active edge");
                e.replaced_by = parse_int(fields[7], line_no);
            }
            graph.incident_[e.subject.canonical].push_back(e.id);
            if (e.object.canonical != e.subject.canonical)
                graph.incident_[e.object.canonical].push_back(e.id);
            if (e.status == EdgeStatus::active) {
                if (!graph.active_by_key_.emplace(e.triplet().key(), e.id).second)
                    throw SnapshotCorrupt(line_no, "duplicate active triplet");
            }
            graph.edges_.push_back(std::move(e));
        } else if (tag == "P") {
            if (fields.size() != 6) throw SnapshotCorrupt(line_no, "bad episode record");
            Episode ep;
            ep.step = parse_int(fields[1], line_no);
            if (!graph.episodes_.empty() && graph.episodes_.back().step >= ep.step)
                throw SnapshotCorrupt(line_no, "episode steps not increasing");
            ep.original_link_count = parse_int(fields[2], line_no);
            if (!fields[3].empty()) {
                std::istringstream ids(fields[3]);
                std::string part;
                while (std::getline(ids, part, ',')) {
                    EdgeId id = parse_int(part, line_no);
                    if (!graph.has_edge(id)) throw SnapshotCorrupt(line_no, "episode links unknown edge");
                    ep.linked_edge_ids.push_back(id);
                }
            }
            if (ep.original_link_count != static_cast<std::int64_t>(ep.linked_edge_ids.size()))
                throw SnapshotCorrupt(line_no, "link count mismatch");
            try {
                ep.observation = base64_decode(fields[4]);
                if (fields[5] != "-") ep.action_taken = base64_decode(fields[5]);
            } catch (const std::invalid_argument& e) {
                throw SnapshotCorrupt(line_no, e.what());
            }
            graph.episodes_.push_back(std::move(ep));
        } else {
            throw SnapshotCorrupt(line_no, "unknown record tag \"" + tag + "\"");
        }
    }
    return graph;
}

void SnapshotCodec::save_file(const KnowledgeGraph& graph, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << save(graph);
}

KnowledgeGraph SnapshotCodec::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load(buf.str());
}

}  // namespace arigraph
