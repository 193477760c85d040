#ifndef TRACERW_EXTRACTION_HPP
#define TRACERW_EXTRACTION_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "term.hpp"

namespace tracerw {

class ExtractionError : public std::invalid_argument {
public:
    ExtractionError(const Violation& v, bool comonoid)
        : std::invalid_argument(message(v, comonoid)), violation_(v) {}
    const Violation& violation() const { return violation_; }

private:
    static std::string message(const Violation& v, bool comonoid) {
        std::string s = std::string("cospan is not ") + (comonoid ? "partial left-monogamous" : "partial monogamous");
        if (v.vertex != npos)
            s += ": vertex " + std::to_string(v.vertex) + " has degree (" + std::to_string(v.degree.in) + "," +
                 std::to_string(v.degree.out) + ")";
        return s + " (" + v.reason + ")";
    }
    Violation violation_;
};

// Peephole cleanup; never changes the interpretation.
inline Term simplify(const Term& t) {
    using term::id;
    switch (t->kind) {
    case Kind::Compose: {
        Term l = simplify(t->left), r = simplify(t->right);
        if (l->kind == Kind::Identity) return r;
        if (r->kind == Kind::Identity) return l;
        return term::seq(l, r);
    }
    case Kind::Tensor: {
        Term l = simplify(t->left), r = simplify(t->right);
        if (l->kind == Kind::Identity && l->a == 0) return r;
        if (r->kind == Kind::Identity && r->a == 0) return l;
        if (l->kind == Kind::Identity && r->kind == Kind::Identity) return id(l->a + r->a);
        return term::par(l, r);
    }
    case Kind::Trace: {
        Term b = simplify(t->left);
        if (t->a == 0) return b;
        return term::tr(t->a, b);
    }
    default: return t;
    }
}

namespace detail {

// 1 -> k fan-out per wire of `from`, then a permutation onto `to`.
inline Term wiring(const std::vector<Id>& from, const std::vector<Id>& to) {
    std::vector<Term> spiders;
    std::vector<std::size_t> dest;
    std::vector<char> used(to.size(), 0);
    for (Id w : from) {
        std::size_t k = 0;
        for (std::size_t j = 0; j < to.size(); ++j)
            if (to[j] == w) {
                dest.push_back(j);
                used[j] = 1;
                ++k;
            }
        spiders.push_back(term::spider(k));
    }
    if (std::find(used.begin(), used.end(), 0) != used.end())
        throw std::logic_error("extract: wire needed before it is produced");
    return term::seq(term::par_all(spiders), term::permutation(dest));
}

// Vertices to cut so that the producer relation becomes acyclic: targets
// of DFS back edges.
inline std::vector<char> cut_vertices(const Hypergraph& g) {
    std::vector<std::vector<Id>> succ(g.num_vertices);
    for (const Edge& e : g.edges)
        for (Id s : e.sources)
            for (Id t : e.targets) succ[s].push_back(t);
    std::vector<char> colour(g.num_vertices, 0), cut(g.num_vertices, 0);
    for (Id root = 0; root < g.num_vertices; ++root) {
        if (colour[root]) continue;
        std::vector<std::pair<Id, std::size_t>> stack{{root, 0}};
        colour[root] = 1;
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            if (next == succ[v].size()) {
                colour[v] = 2;
                stack.pop_back();
                continue;
            }
            Id w = succ[v][next++];
            if (colour[w] == 1) cut[w] = 1;
            else if (colour[w] == 0) {
                colour[w] = 1;
                stack.push_back({w, 0});
            }
        }
    }
    return cut;
}

// Topological layering of an acyclic cospan: one layer per edge, each a
// wiring followed by the edge in place.
inline Term layered(const Cospan& c) {
    const Hypergraph& g = c.graph;
    std::vector<std::size_t> uses(g.num_vertices, 0);
    for (const Edge& e : g.edges)
        for (Id v : e.sources) ++uses[v];
    for (Id v : c.output) ++uses[v];
    std::vector<char> ready(g.num_vertices, 0), done(g.edges.size(), 0);
    for (Id v : c.input) ready[v] = 1;

    std::vector<Id> wires = c.input;
    std::vector<Term> layers;
    for (std::size_t placed = 0; placed < g.edges.size(); ++placed) {
        Id next = npos;
        for (Id e = 0; e < g.edges.size() && next == npos; ++e) {
            if (done[e]) continue;
            bool ok = true;
            for (Id v : g.edges[e].sources) ok &= ready[v] != 0;
            if (ok) next = e;
        }
        if (next == npos) throw std::logic_error("extract: body is not acyclic");
        const Edge& e = g.edges[next];
        done[next] = 1;
        for (Id v : e.sources) --uses[v];
        std::size_t p = wires.size();
        if (!e.sources.empty()) p = std::find(wires.begin(), wires.end(), e.sources[0]) - wires.begin();
        std::vector<Id> before, after;
        for (std::size_t k = 0; k < wires.size(); ++k)
            if (uses[wires[k]] > 0) (k < p ? before : after).push_back(wires[k]);
        std::vector<Id> target = before;
        target.insert(target.end(), e.sources.begin(), e.sources.end());
        target.insert(target.end(), after.begin(), after.end());
        layers.push_back(wiring(wires, target));
        layers.push_back(term::par_all({term::id(before.size()), term::gen(e.label, e.sources.size(), e.targets.size()),
                                        term::id(after.size())}));
        for (Id v : e.targets) ready[v] = 1;
        wires = before;
        wires.insert(wires.end(), e.targets.begin(), e.targets.end());
        wires.insert(wires.end(), after.begin(), after.end());
    }
    layers.push_back(wiring(wires, c.output));
    return term::seq_all(layers, c.dom());
}

} // namespace detail

// Cuts the cycles at a few vertices (and every producerless loop vertex),
// layers the acyclic rest and closes the cuts with one trace.
inline Term extract(const Cospan& c, bool allow_comonoid) {
    if (auto v = allow_comonoid ? left_monogamy_violation(c) : monogamy_violation(c))
        throw ExtractionError(*v, allow_comonoid);
    const Hypergraph& g = c.graph;
    const std::size_t V = g.num_vertices;
    std::vector<char> cut = detail::cut_vertices(g);
    std::vector<char> produced(V, 0), is_input(V, 0);
    for (const Edge& e : g.edges)
        for (Id t : e.targets) produced[t] = 1;
    for (Id v : c.input) is_input[v] = 1;

    Cospan body;
    body.graph = g;
    std::vector<Id> prod_of(V, npos);
    for (Id v = 0; v < V; ++v)
        if (cut[v]) prod_of[v] = body.graph.add_vertex();
    for (Edge& e : body.graph.edges)
        for (Id& t : e.targets)
            if (cut[t]) t = prod_of[t];
    std::size_t x = 0;
    for (Id v = 0; v < V; ++v) {
        if (cut[v]) {
            body.input.push_back(v);
            body.output.push_back(prod_of[v]);
            ++x;
        } else if (!produced[v] && !is_input[v]) {
            body.input.push_back(v);
            body.output.push_back(v);
            ++x;
        }
    }
    body.input.insert(body.input.end(), c.input.begin(), c.input.end());
    body.output.insert(body.output.end(), c.output.begin(), c.output.end());
    return simplify(term::tr(x, detail::layered(body)));
}

inline bool equal_modulo_axioms(const Term& a, const Term& b, bool allow_comonoid) {
    if (a->dom != b->dom || a->cod != b->cod)
        throw TypeError("equal_modulo_axioms: terms have different types");
    if (!allow_comonoid && (uses_comonoid(a) || uses_comonoid(b)))
        throw TypeError("equal_modulo_axioms: copy/discard used without comonoid structure");
    return isomorphic_cospans(interpret(a), interpret(b));
}

} // namespace tracerw

#endif
