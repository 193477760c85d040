#ifndef TRACERW_IO_HPP
#define TRACERW_IO_HPP

#include <map>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cospan.hpp"

namespace tracerw::io {

using nlohmann::json;

class FormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void only_fields(const json& j, std::initializer_list<const char*> allowed, const char* what) {
    if (!j.is_object()) throw FormatError(std::string(what) + ": expected an object");
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok |= k == a;
        if (!ok) throw FormatError(std::string(what) + ": unknown field '" + k + "'");
    }
}

inline const json& field(const json& j, const char* key, const char* what) {
    auto it = j.find(key);
    if (it == j.end()) throw FormatError(std::string(what) + ": missing field '" + key + "'");
    return *it;
}

inline std::vector<std::uint64_t> id_list(const json& j, const char* what) {
    if (!j.is_array()) throw FormatError(std::string(what) + ": expected an array of ids");
    std::vector<std::uint64_t> out;
    for (const json& x : j) {
        if (!x.is_number_unsigned() && !(x.is_number_integer() && x.get<std::int64_t>() >= 0))
            throw FormatError(std::string(what) + ": ids must be non-negative integers");
        out.push_back(x.get<std::uint64_t>());
    }
    return out;
}

// file ids -> dense ids in listed order
inline std::map<std::uint64_t, Id> read_vertices(const json& j) {
    std::map<std::uint64_t, Id> dense;
    for (auto v : id_list(field(j, "vertices", "hypergraph"), "vertices"))
        if (!dense.emplace(v, dense.size()).second)
            throw FormatError("vertices: id " + std::to_string(v) + " listed twice");
    return dense;
}

inline std::vector<Id> remap(const std::map<std::uint64_t, Id>& dense, const json& j, const char* what) {
    std::vector<Id> out;
    for (auto v : id_list(j, what)) {
        auto it = dense.find(v);
        if (it == dense.end()) throw FormatError(std::string(what) + ": unknown vertex " + std::to_string(v));
        out.push_back(it->second);
    }
    return out;
}

inline Hypergraph read_graph(const json& j, const std::map<std::uint64_t, Id>& dense) {
    Hypergraph h;
    h.num_vertices = dense.size();
    const json& edges = field(j, "edges", "hypergraph");
    if (!edges.is_array()) throw FormatError("edges: expected an array");
    for (const json& e : edges) {
        only_fields(e, {"label", "sources", "targets"}, "edge");
        const json& label = field(e, "label", "edge");
        if (!label.is_string()) throw FormatError("edge: label must be a string");
        h.edges.push_back(Edge{label.get<std::string>(), remap(dense, field(e, "sources", "edge"), "sources"),
                               remap(dense, field(e, "targets", "edge"), "targets")});
    }
    return h;
}

} // namespace detail

inline json to_json(const Hypergraph& h) {
    json vs = json::array();
    for (Id v = 0; v < h.num_vertices; ++v) vs.push_back(v);
    json es = json::array();
    for (const Edge& e : h.edges) es.push_back({{"label", e.label}, {"sources", e.sources}, {"targets", e.targets}});
    return {{"vertices", vs}, {"edges", es}};
}

inline json to_json(const Cospan& c) {
    json j = to_json(c.graph);
    j["input"] = c.input;
    j["output"] = c.output;
    return j;
}

inline Hypergraph hypergraph_from_json(const json& j) {
    detail::only_fields(j, {"vertices", "edges"}, "hypergraph");
    return detail::read_graph(j, detail::read_vertices(j));
}

inline Cospan cospan_from_json(const json& j) {
    detail::only_fields(j, {"vertices", "edges", "input", "output"}, "cospan");
    auto dense = detail::read_vertices(j);
    Cospan c;
    c.graph = detail::read_graph(j, dense);
    c.input = detail::remap(dense, detail::field(j, "input", "cospan"), "input");
    c.output = detail::remap(dense, detail::field(j, "output", "cospan"), "output");
    return c;
}

inline json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\' || ch == '{' || ch == '}' || ch == '|' || ch == '<' || ch == '>') out += '\\';
        out += ch;
    }
    return out;
}

// Vertices are points, edges are record boxes with ports s<k> and t<k>,
// interface positions are plain text nodes numbered 0..m-1 and m..m+n-1.
inline std::string to_dot(const Cospan& c, const std::string& graph_name = "cospan") {
    std::ostringstream os;
    os << "digraph " << graph_name << " {\n  rankdir=LR;\n";
    for (Id v = 0; v < c.graph.num_vertices; ++v) os << "  v" << v << " [shape=point];\n";
    for (Id e = 0; e < c.graph.edges.size(); ++e) {
        const Edge& ed = c.graph.edges[e];
        os << "  e" << e << " [shape=record,label=\"{";
        for (std::size_t k = 0; k < ed.sources.size(); ++k) os << (k ? "|" : "") << "<s" << k << "> " << k;
        os << (ed.sources.empty() ? "" : "}|{") << dot_escape(ed.label) << (ed.targets.empty() ? "" : "}|{");
        for (std::size_t k = 0; k < ed.targets.size(); ++k) os << (k ? "|" : "") << "<t" << k << "> " << k;
        os << "}\"];\n";
        for (std::size_t k = 0; k < ed.sources.size(); ++k)
            os << "  v" << ed.sources[k] << " -> e" << e << ":s" << k << " [arrowhead=none];\n";
        for (std::size_t k = 0; k < ed.targets.size(); ++k)
            os << "  e" << e << ":t" << k << " -> v" << ed.targets[k] << " [arrowhead=none];\n";
    }
    const std::size_t m = c.input.size();
    for (std::size_t k = 0; k < m; ++k)
        os << "  i" << k << " [shape=plaintext,label=\"" << k << "\"];\n  i" << k << " -> v" << c.input[k]
           << " [style=dotted,arrowhead=none];\n";
    for (std::size_t k = 0; k < c.output.size(); ++k)
        os << "  o" << k << " [shape=plaintext,label=\"" << m + k << "\"];\n  v" << c.output[k] << " -> o" << k
           << " [style=dotted,arrowhead=none];\n";
    if (m) {
        os << "  { rank=source;";
        for (std::size_t k = 0; k < m; ++k) os << " i" << k << ";";
        os << " }\n";
    }
    if (!c.output.empty()) {
        os << "  { rank=sink;";
        for (std::size_t k = 0; k < c.output.size(); ++k) os << " o" << k << ";";
        os << " }\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace tracerw::io

#endif
