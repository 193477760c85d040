#ifndef TRACERW_COSPAN_HPP
#define TRACERW_COSPAN_HPP

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hypergraph.hpp"

namespace tracerw {

/** A hypergraph with ordered input and output interfaces. */
struct Cospan {
    Hypergraph graph;
    std::vector<Id> input;
    std::vector<Id> output;

    std::size_t dom() const { return input.size(); }
    std::size_t cod() const { return output.size(); }
    bool operator==(const Cospan&) const = default;
};

enum class Validity { General, PartialLeftMonogamous, PartialMonogamous };

inline const char* to_string(Validity v) {
    switch (v) {
    case Validity::PartialMonogamous: return "PartialMonogamous";
    case Validity::PartialLeftMonogamous: return "PartialLeftMonogamous";
    default: return "General";
    }
}

inline void check_cospan(const Cospan& c) {
    for (Id v : c.input) c.graph.check_vertex(v);
    for (Id v : c.output) c.graph.check_vertex(v);
}

inline Cospan discrete_cospan(std::size_t vertices, std::vector<Id> input, std::vector<Id> output) {
    Cospan c;
    c.graph.num_vertices = vertices;
    c.input = std::move(input);
    c.output = std::move(output);
    check_cospan(c);
    return c;
}

inline Cospan identity(std::size_t n) {
    std::vector<Id> ids(n);
    std::iota(ids.begin(), ids.end(), Id{0});
    return discrete_cospan(n, ids, ids);
}

// inputs [a(m) b(n)], outputs [b a]
inline Cospan symmetry(std::size_t m, std::size_t n) {
    std::vector<Id> in(m + n), out;
    std::iota(in.begin(), in.end(), Id{0});
    for (std::size_t k = 0; k < n; ++k) out.push_back(m + k);
    for (std::size_t k = 0; k < m; ++k) out.push_back(k);
    return discrete_cospan(m + n, in, out);
}

inline Cospan copy(std::size_t n) {
    std::vector<Id> ids(n);
    std::iota(ids.begin(), ids.end(), Id{0});
    std::vector<Id> twice = ids;
    twice.insert(twice.end(), ids.begin(), ids.end());
    return discrete_cospan(n, ids, twice);
}

inline Cospan merge(std::size_t n) {
    Cospan c = copy(n);
    std::swap(c.input, c.output);
    return c;
}

inline Cospan discard(std::size_t n) {
    std::vector<Id> ids(n);
    std::iota(ids.begin(), ids.end(), Id{0});
    return discrete_cospan(n, ids, {});
}

inline Cospan init(std::size_t n) {
    Cospan c = discard(n);
    std::swap(c.input, c.output);
    return c;
}

// 0 -> 2n and 2n -> 0, built from the Frobenius structure
inline Cospan cup(std::size_t n) {
    Cospan c = copy(n);
    c.input.clear();
    return c;
}

inline Cospan cap(std::size_t n) {
    Cospan c = merge(n);
    c.output.clear();
    return c;
}

// single edge with fresh source and target vertices
inline Cospan generator(const std::string& label, std::size_t in, std::size_t out) {
    Cospan c;
    std::vector<Id> s, t;
    for (std::size_t k = 0; k < in; ++k) s.push_back(c.graph.add_vertex());
    for (std::size_t k = 0; k < out; ++k) t.push_back(c.graph.add_vertex());
    c.graph.add_edge(label, s, t);
    c.input = s;
    c.output = t;
    return c;
}

inline Cospan compose(const Cospan& a, const Cospan& b) {
    if (a.cod() != b.dom())
        throw std::invalid_argument("compose: codomain " + std::to_string(a.cod()) + " does not match domain " +
                                    std::to_string(b.dom()));
    Hypergraph k;
    k.num_vertices = a.cod();
    Homomorphism f{a.output, {}}, g{b.input, {}};
    Injections po = pushout(k, a.graph, b.graph, f, g);
    Cospan r;
    r.graph = std::move(po.graph);
    for (Id v : a.input) r.input.push_back(po.left.vmap[v]);
    for (Id v : b.output) r.output.push_back(po.right.vmap[v]);
    return r;
}

inline Cospan tensor(const Cospan& a, const Cospan& b) {
    Injections co = coproduct(a.graph, b.graph);
    Cospan r;
    r.graph = std::move(co.graph);
    r.input = a.input;
    r.output = a.output;
    for (Id v : b.input) r.input.push_back(co.right.vmap[v]);
    for (Id v : b.output) r.output.push_back(co.right.vmap[v]);
    return r;
}

// Glues input[k] to output[k] for k < x and keeps the remaining interface.
inline Cospan trace(std::size_t x, const Cospan& c) {
    if (c.dom() < x || c.cod() < x) throw std::invalid_argument("trace: interface narrower than trace width");
    detail::DisjointSets ds(c.graph.num_vertices);
    for (std::size_t k = 0; k < x; ++k) ds.unite(c.input[k], c.output[k]);
    std::vector<Id> cls(c.graph.num_vertices, npos);
    Cospan r;
    for (Id v = 0; v < c.graph.num_vertices; ++v) {
        Id root = ds.find(v);
        if (cls[root] == npos) cls[root] = r.graph.add_vertex();
        cls[v] = cls[root];
    }
    for (const Edge& e : c.graph.edges) {
        Edge ed = e;
        for (Id& v : ed.sources) v = cls[v];
        for (Id& v : ed.targets) v = cls[v];
        r.graph.edges.push_back(std::move(ed));
    }
    for (std::size_t k = x; k < c.dom(); ++k) r.input.push_back(cls[c.input[k]]);
    for (std::size_t k = x; k < c.cod(); ++k) r.output.push_back(cls[c.output[k]]);
    return r;
}

namespace detail {

inline bool duplicate_free(const std::vector<Id>& xs) {
    std::set<Id> s(xs.begin(), xs.end());
    return s.size() == xs.size();
}

inline std::vector<char> membership(std::size_t n, const std::vector<Id>& xs) {
    std::vector<char> m(n, 0);
    for (Id v : xs) m[v] = 1;
    return m;
}

} // namespace detail

struct Violation {
    Id vertex = npos;
    Degree degree;
    std::string reason;
};

// First vertex breaking partial monogamy, if any.
inline std::optional<Violation> monogamy_violation(const Cospan& c) {
    if (!detail::duplicate_free(c.input)) return Violation{npos, {}, "input interface has duplicates"};
    if (!detail::duplicate_free(c.output)) return Violation{npos, {}, "output interface has duplicates"};
    auto in = detail::membership(c.graph.num_vertices, c.input);
    auto out = detail::membership(c.graph.num_vertices, c.output);
    auto deg = degrees(c.graph);
    for (Id v = 0; v < c.graph.num_vertices; ++v) {
        const Degree d = deg[v];
        bool ok;
        if (in[v] && out[v]) ok = d == Degree{0, 0};
        else if (in[v]) ok = d == Degree{0, 1};
        else if (out[v]) ok = d == Degree{1, 0};
        else ok = d == Degree{0, 0} || d == Degree{1, 1};
        if (!ok) return Violation{v, d, "degree does not fit the partial monogamy table"};
    }
    return std::nullopt;
}

inline std::optional<Violation> left_monogamy_violation(const Cospan& c) {
    if (!detail::duplicate_free(c.input)) return Violation{npos, {}, "input interface has duplicates"};
    auto in = detail::membership(c.graph.num_vertices, c.input);
    auto deg = degrees(c.graph);
    for (Id v = 0; v < c.graph.num_vertices; ++v) {
        if (in[v] ? deg[v].in != 0 : deg[v].in > 1)
            return Violation{v, deg[v], in[v] ? "input vertex has a producer" : "vertex has more than one producer"};
    }
    return std::nullopt;
}

inline bool is_partial_monogamous(const Cospan& c) { return !monogamy_violation(c); }
inline bool is_partial_left_monogamous(const Cospan& c) { return !left_monogamy_violation(c); }

inline Validity classify(const Cospan& c) {
    if (is_partial_monogamous(c)) return Validity::PartialMonogamous;
    if (is_partial_left_monogamous(c)) return Validity::PartialLeftMonogamous;
    return Validity::General;
}

// Graph isomorphism commuting with both interfaces.
inline std::optional<Homomorphism> cospan_isomorphism(const Cospan& a, const Cospan& b) {
    if (a.dom() != b.dom() || a.cod() != b.cod())
        throw std::invalid_argument("isomorphic_cospans: interface lengths differ");
    Homomorphism anchor = partial_map(a.graph);
    auto pin = [&](Id va, Id vb) {
        if (anchor.vmap[va] != npos && anchor.vmap[va] != vb) return false;
        anchor.vmap[va] = vb;
        return true;
    };
    for (std::size_t k = 0; k < a.dom(); ++k)
        if (!pin(a.input[k], b.input[k])) return std::nullopt;
    for (std::size_t k = 0; k < a.cod(); ++k)
        if (!pin(a.output[k], b.output[k])) return std::nullopt;
    // interface positions become part of the colour so refinement sees them
    auto seed = [](const Cospan& c) {
        std::vector<std::vector<std::size_t>> s(c.graph.num_vertices);
        for (std::size_t k = 0; k < c.dom(); ++k) s[c.input[k]].push_back(2 * k);
        for (std::size_t k = 0; k < c.cod(); ++k) s[c.output[k]].push_back(2 * k + 1);
        return s;
    };
    return find_isomorphism(a.graph, b.graph, anchor, seed(a), seed(b));
}

inline bool isomorphic_cospans(const Cospan& a, const Cospan& b) {
    return cospan_isomorphism(a, b).has_value();
}

inline Cospan tensor_all(const std::vector<Cospan>& cs) {
    Cospan r;
    for (const Cospan& c : cs) r = tensor(r, c);
    return r;
}

} // namespace tracerw

#endif
