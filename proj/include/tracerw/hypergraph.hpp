#ifndef TRACERW_HYPERGRAPH_HPP
#define TRACERW_HYPERGRAPH_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tracerw {

using Id = std::size_t;
inline constexpr Id npos = std::numeric_limits<Id>::max();

struct Arity {
    std::size_t in = 0;
    std::size_t out = 0;
    bool operator==(const Arity&) const = default;
};

/** Generator names with their arity and coarity. */
class Signature {
public:
    void add(const std::string& name, std::size_t in, std::size_t out) {
        auto [it, fresh] = gens_.emplace(name, Arity{in, out});
        if (!fresh && !(it->second == Arity{in, out}))
            throw std::invalid_argument("generator '" + name + "' declared twice with different types");
    }
    bool contains(const std::string& name) const { return gens_.count(name) != 0; }
    const Arity& at(const std::string& name) const {
        auto it = gens_.find(name);
        if (it == gens_.end()) throw std::out_of_range("unknown generator '" + name + "'");
        return it->second;
    }
    const std::map<std::string, Arity>& generators() const { return gens_; }

private:
    std::map<std::string, Arity> gens_;
};

struct Edge {
    std::string label;
    std::vector<Id> sources;
    std::vector<Id> targets;
    bool operator==(const Edge&) const = default;
};

// Vertices are 0..num_vertices-1, edges are indices into `edges`.
struct Hypergraph {
    std::size_t num_vertices = 0;
    std::vector<Edge> edges;

    Id add_vertex() { return num_vertices++; }
    Id add_vertices(std::size_t n) {
        Id first = num_vertices;
        num_vertices += n;
        return first;
    }
    Id add_edge(std::string label, std::vector<Id> sources, std::vector<Id> targets) {
        for (Id v : sources) check_vertex(v);
        for (Id v : targets) check_vertex(v);
        edges.push_back(Edge{std::move(label), std::move(sources), std::move(targets)});
        return edges.size() - 1;
    }
    std::size_t vertex_count() const { return num_vertices; }
    std::size_t edge_count() const { return edges.size(); }
    bool discrete() const { return edges.empty(); }
    void check_vertex(Id v) const {
        if (v >= num_vertices) throw std::out_of_range("vertex " + std::to_string(v) + " does not exist");
    }
    bool operator==(const Hypergraph&) const = default;
};

inline void validate(const Hypergraph& h, const Signature& sig) {
    for (std::size_t e = 0; e < h.edges.size(); ++e) {
        const Edge& ed = h.edges[e];
        const Arity& a = sig.at(ed.label);
        if (ed.sources.size() != a.in || ed.targets.size() != a.out)
            throw std::invalid_argument("edge " + std::to_string(e) + " (" + ed.label +
                                        ") has the wrong number of tentacles");
        for (Id v : ed.sources) h.check_vertex(v);
        for (Id v : ed.targets) h.check_vertex(v);
    }
}

struct Homomorphism {
    std::vector<Id> vmap;
    std::vector<Id> emap;
    bool operator==(const Homomorphism&) const = default;
    auto operator<=>(const Homomorphism&) const = default;
};

// Homomorphism with every entry unset, used as an empty anchor.
inline Homomorphism partial_map(const Hypergraph& pattern) {
    return Homomorphism{std::vector<Id>(pattern.num_vertices, npos), std::vector<Id>(pattern.edges.size(), npos)};
}

inline Homomorphism identity_map(const Hypergraph& h) {
    Homomorphism m;
    m.vmap.resize(h.num_vertices);
    m.emap.resize(h.edges.size());
    std::iota(m.vmap.begin(), m.vmap.end(), Id{0});
    std::iota(m.emap.begin(), m.emap.end(), Id{0});
    return m;
}

// g after f
inline Homomorphism then(const Homomorphism& f, const Homomorphism& g) {
    Homomorphism r;
    r.vmap.reserve(f.vmap.size());
    r.emap.reserve(f.emap.size());
    for (Id v : f.vmap) r.vmap.push_back(v == npos ? npos : g.vmap.at(v));
    for (Id e : f.emap) r.emap.push_back(e == npos ? npos : g.emap.at(e));
    return r;
}

inline bool is_homomorphism(const Homomorphism& m, const Hypergraph& from, const Hypergraph& to) {
    if (m.vmap.size() != from.num_vertices || m.emap.size() != from.edges.size()) return false;
    for (Id v : m.vmap)
        if (v >= to.num_vertices) return false;
    for (std::size_t e = 0; e < from.edges.size(); ++e) {
        Id t = m.emap[e];
        if (t >= to.edges.size()) return false;
        const Edge& a = from.edges[e];
        const Edge& b = to.edges[t];
        if (a.label != b.label || a.sources.size() != b.sources.size() || a.targets.size() != b.targets.size())
            return false;
        for (std::size_t i = 0; i < a.sources.size(); ++i)
            if (m.vmap[a.sources[i]] != b.sources[i]) return false;
        for (std::size_t i = 0; i < a.targets.size(); ++i)
            if (m.vmap[a.targets[i]] != b.targets[i]) return false;
    }
    return true;
}

struct Degree {
    std::size_t in = 0;
    std::size_t out = 0;
    bool operator==(const Degree&) const = default;
};

// in counts target tentacles at v, out counts source tentacles.
inline Degree degree(const Hypergraph& h, Id v) {
    h.check_vertex(v);
    Degree d;
    for (const Edge& e : h.edges) {
        d.in += static_cast<std::size_t>(std::count(e.targets.begin(), e.targets.end(), v));
        d.out += static_cast<std::size_t>(std::count(e.sources.begin(), e.sources.end(), v));
    }
    return d;
}

inline std::vector<Degree> degrees(const Hypergraph& h) {
    std::vector<Degree> d(h.num_vertices);
    for (const Edge& e : h.edges) {
        for (Id v : e.targets) ++d[v].in;
        for (Id v : e.sources) ++d[v].out;
    }
    return d;
}

namespace detail {

struct Tentacle {
    Id edge;
    bool target;
    std::size_t pos;
};

inline std::vector<std::vector<Tentacle>> incidence(const Hypergraph& h) {
    std::vector<std::vector<Tentacle>> inc(h.num_vertices);
    for (Id e = 0; e < h.edges.size(); ++e) {
        const Edge& ed = h.edges[e];
        for (std::size_t i = 0; i < ed.sources.size(); ++i) inc[ed.sources[i]].push_back({e, false, i});
        for (std::size_t i = 0; i < ed.targets.size(); ++i) inc[ed.targets[i]].push_back({e, true, i});
    }
    return inc;
}

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    // keeps the smaller root so class order follows first appearance
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
};

// Joint colour refinement of two graphs. Vertices with different final
// colours can never correspond under an isomorphism respecting `seed`.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
refine_colors(const Hypergraph& a, const Hypergraph& b, const std::vector<std::vector<std::size_t>>& seed_a,
              const std::vector<std::vector<std::size_t>>& seed_b, int rounds = 3) {
    using Key = std::vector<std::size_t>;
    std::map<std::string, std::size_t> labels;
    for (const auto* g : {&a, &b})
        for (const Edge& e : g->edges) labels.emplace(e.label, labels.size());

    std::map<Key, std::size_t> dict;
    auto code = [&dict](const Key& k) { return dict.emplace(k, dict.size()).first->second; };

    auto initial = [&](const Hypergraph& g, const std::vector<std::vector<std::size_t>>& seed) {
        std::vector<Key> keys(g.num_vertices);
        for (Id v = 0; v < g.num_vertices; ++v)
            if (v < seed.size()) keys[v] = seed[v];
        for (const Edge& e : g.edges) {
            std::size_t l = labels.at(e.label);
            for (std::size_t i = 0; i < e.sources.size(); ++i) keys[e.sources[i]].push_back(((l * 64 + i) * 2) + 1000003);
            for (std::size_t i = 0; i < e.targets.size(); ++i) keys[e.targets[i]].push_back(((l * 64 + i) * 2 + 1) + 1000003);
        }
        std::vector<std::size_t> col(g.num_vertices);
        for (Id v = 0; v < g.num_vertices; ++v) {
            std::sort(keys[v].begin(), keys[v].end());
            col[v] = code(keys[v]);
        }
        return col;
    };
    auto ca = initial(a, seed_a);
    auto cb = initial(b, seed_b);

    auto step = [&](const Hypergraph& g, const std::vector<std::size_t>& col) {
        std::vector<Key> keys(g.num_vertices);
        for (Id v = 0; v < g.num_vertices; ++v) keys[v].push_back(col[v]);
        for (const Edge& e : g.edges) {
            Key ek{labels.at(e.label)};
            for (Id v : e.sources) ek.push_back(col[v]);
            ek.push_back(npos);
            for (Id v : e.targets) ek.push_back(col[v]);
            std::size_t ec = code(ek);
            for (std::size_t i = 0; i < e.sources.size(); ++i) keys[e.sources[i]].push_back(ec * 128 + i * 2);
            for (std::size_t i = 0; i < e.targets.size(); ++i) keys[e.targets[i]].push_back(ec * 128 + i * 2 + 1);
        }
        std::vector<std::size_t> out(g.num_vertices);
        for (Id v = 0; v < g.num_vertices; ++v) {
            std::sort(keys[v].begin() + 1, keys[v].end());
            out[v] = code(keys[v]);
        }
        return out;
    };
    for (int r = 0; r < rounds; ++r) {
        ca = step(a, ca);
        cb = step(b, cb);
    }
    return {ca, cb};
}

struct SearchOptions {
    bool injective = false;
    const std::vector<std::size_t>* pattern_color = nullptr;
    const std::vector<std::size_t>* host_color = nullptr;
};

// Backtracking homomorphism search. Edges are assigned first, most
// constrained edge first, then any vertex left untouched by edges.
class HomSearch {
public:
    HomSearch(const Hypergraph& p, const Hypergraph& h, SearchOptions opts)
        : p_(p), h_(h), opts_(opts), hinc_(incidence(h)), pinc_(incidence(p)) {
        for (Id e = 0; e < h.edges.size(); ++e) by_label_[h.edges[e].label].push_back(e);
    }

    // fn returns false to stop the search
    void run(const Homomorphism& anchor, const std::function<bool(const Homomorphism&)>& fn) {
        cur_ = partial_map(p_);
        vused_.assign(h_.num_vertices, 0);
        eused_.assign(h_.edges.size(), 0);
        stop_ = false;
        fn_ = &fn;
        if (anchor.vmap.size() != p_.num_vertices || anchor.emap.size() != p_.edges.size())
            throw std::invalid_argument("anchor has the wrong shape");
        for (Id v = 0; v < p_.num_vertices; ++v)
            if (anchor.vmap[v] != npos && !assign_vertex(v, anchor.vmap[v])) return;
        for (Id e = 0; e < p_.edges.size(); ++e) {
            if (anchor.emap[e] == npos) continue;
            std::vector<Id> touched;
            if (!assign_edge(e, anchor.emap[e], touched)) return;
        }
        search_edges();
    }

private:
    bool vertex_ok(Id pv, Id hv) const {
        if (hv >= h_.num_vertices) return false;
        if (opts_.pattern_color && (*opts_.pattern_color)[pv] != (*opts_.host_color)[hv]) return false;
        if (opts_.injective && vused_[hv]) return false;
        return true;
    }
    bool assign_vertex(Id pv, Id hv) {
        if (cur_.vmap[pv] != npos) return cur_.vmap[pv] == hv;
        if (!vertex_ok(pv, hv)) return false;
        cur_.vmap[pv] = hv;
        ++vused_[hv];
        return true;
    }
    void unassign_vertex(Id pv) {
        --vused_[cur_.vmap[pv]];
        cur_.vmap[pv] = npos;
    }
    // on failure, everything assigned here is rolled back
    bool assign_edge(Id pe, Id he, std::vector<Id>& touched) {
        if (cur_.emap[pe] != npos) return cur_.emap[pe] == he;
        if (he >= h_.edges.size()) return false;
        const Edge& a = p_.edges[pe];
        const Edge& b = h_.edges[he];
        if (a.label != b.label || a.sources.size() != b.sources.size() || a.targets.size() != b.targets.size())
            return false;
        if (opts_.injective && eused_[he]) return false;
        auto bind = [&](Id pv, Id hv) {
            if (cur_.vmap[pv] != npos) return cur_.vmap[pv] == hv;
            if (!assign_vertex(pv, hv)) return false;
            touched.push_back(pv);
            return true;
        };
        bool ok = true;
        for (std::size_t i = 0; ok && i < a.sources.size(); ++i) ok = bind(a.sources[i], b.sources[i]);
        for (std::size_t i = 0; ok && i < a.targets.size(); ++i) ok = bind(a.targets[i], b.targets[i]);
        if (!ok) {
            for (Id v : touched) unassign_vertex(v);
            touched.clear();
            return false;
        }
        cur_.emap[pe] = he;
        ++eused_[he];
        return true;
    }
    void unassign_edge(Id pe, const std::vector<Id>& touched) {
        --eused_[cur_.emap[pe]];
        cur_.emap[pe] = npos;
        for (Id v : touched) unassign_vertex(v);
    }

    void search_edges() {
        if (stop_) return;
        Id best = npos;
        std::size_t best_score = 0, best_pool = 0;
        for (Id e = 0; e < p_.edges.size(); ++e) {
            if (cur_.emap[e] != npos) continue;
            const Edge& ed = p_.edges[e];
            std::size_t score = 1;
            for (Id v : ed.sources) score += cur_.vmap[v] != npos;
            for (Id v : ed.targets) score += cur_.vmap[v] != npos;
            auto it = by_label_.find(ed.label);
            std::size_t pool = it == by_label_.end() ? 0 : it->second.size();
            if (best == npos || score > best_score || (score == best_score && pool < best_pool)) {
                best = e;
                best_score = score;
                best_pool = pool;
            }
        }
        if (best == npos) {
            search_vertices(0);
            return;
        }
        const Edge& ed = p_.edges[best];
        // candidate host edges come from a mapped tentacle when there is one
        const std::vector<Id>* cands = nullptr;
        std::vector<Id> local;
        auto try_tentacles = [&](const std::vector<Id>& vs, bool target) {
            for (std::size_t i = 0; i < vs.size() && !cands; ++i) {
                Id hv = cur_.vmap[vs[i]];
                if (hv == npos) continue;
                for (const Tentacle& t : hinc_[hv])
                    if (t.target == target && t.pos == i) local.push_back(t.edge);
                std::sort(local.begin(), local.end());
                local.erase(std::unique(local.begin(), local.end()), local.end());
                cands = &local;
            }
        };
        try_tentacles(ed.sources, false);
        try_tentacles(ed.targets, true);
        static const std::vector<Id> none;
        if (!cands) {
            auto it = by_label_.find(ed.label);
            cands = it == by_label_.end() ? &none : &it->second;
        }
        for (Id he : *cands) {
            std::vector<Id> touched;
            if (!assign_edge(best, he, touched)) continue;
            search_edges();
            unassign_edge(best, touched);
            if (stop_) return;
        }
    }

    void search_vertices(Id from) {
        if (stop_) return;
        Id v = from;
        while (v < p_.num_vertices && cur_.vmap[v] != npos) ++v;
        if (v == p_.num_vertices) {
            if (!(*fn_)(cur_)) stop_ = true;
            return;
        }
        for (Id hv = 0; hv < h_.num_vertices; ++hv) {
            if (!assign_vertex(v, hv)) continue;
            search_vertices(v + 1);
            unassign_vertex(v);
            if (stop_) return;
        }
    }

    const Hypergraph& p_;
    const Hypergraph& h_;
    SearchOptions opts_;
    std::vector<std::vector<Tentacle>> hinc_;
    std::vector<std::vector<Tentacle>> pinc_;
    std::map<std::string, std::vector<Id>> by_label_;
    Homomorphism cur_;
    std::vector<int> vused_;
    std::vector<int> eused_;
    bool stop_ = false;
    const std::function<bool(const Homomorphism&)>* fn_ = nullptr;
};

} // namespace detail

struct MatchOptions {
    bool injective = false;
    std::size_t limit = npos;
};

// Streams homomorphisms extending `anchor` (npos entries are free) to fn;
// fn returns false to stop early. Order is the search order.
inline void for_each_homomorphism(const Hypergraph& pattern, const Hypergraph& host, const Homomorphism& anchor,
                                  const MatchOptions& opts, const std::function<bool(const Homomorphism&)>& fn) {
    detail::SearchOptions so;
    so.injective = opts.injective;
    detail::HomSearch search(pattern, host, so);
    std::size_t count = 0;
    search.run(anchor, [&](const Homomorphism& m) {
        ++count;
        return fn(m) && count < opts.limit;
    });
}

// All homomorphisms extending anchor, sorted by (vertex map, edge map).
inline std::vector<Homomorphism> find_homomorphisms(const Hypergraph& pattern, const Hypergraph& host,
                                                    const Homomorphism& anchor, const MatchOptions& opts = {}) {
    std::vector<Homomorphism> out;
    for_each_homomorphism(pattern, host, anchor, opts, [&](const Homomorphism& m) {
        out.push_back(m);
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Homomorphism> find_homomorphisms(const Hypergraph& pattern, const Hypergraph& host) {
    return find_homomorphisms(pattern, host, partial_map(pattern));
}

// Isomorphism search. seed_a/seed_b attach extra colours to vertices (used to
// pin interface positions); anchor fixes some of the correspondence.
inline std::optional<Homomorphism> find_isomorphism(const Hypergraph& a, const Hypergraph& b,
                                                    const Homomorphism& anchor,
                                                    const std::vector<std::vector<std::size_t>>& seed_a = {},
                                                    const std::vector<std::vector<std::size_t>>& seed_b = {}) {
    if (a.num_vertices != b.num_vertices || a.edges.size() != b.edges.size()) return std::nullopt;
    std::map<std::string, long> labels;
    for (const Edge& e : a.edges) ++labels[e.label];
    for (const Edge& e : b.edges) --labels[e.label];
    for (const auto& [l, n] : labels)
        if (n != 0) return std::nullopt;
    auto [ca, cb] = detail::refine_colors(a, b, seed_a, seed_b);
    std::vector<std::size_t> sa = ca, sb = cb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;

    detail::SearchOptions so;
    so.injective = true;
    so.pattern_color = &ca;
    so.host_color = &cb;
    detail::HomSearch search(a, b, so);
    std::optional<Homomorphism> found;
    search.run(anchor, [&](const Homomorphism& m) {
        found = m;
        return false;
    });
    return found;
}

inline std::optional<Homomorphism> isomorphic(const Hypergraph& a, const Hypergraph& b) {
    return find_isomorphism(a, b, partial_map(a));
}

struct Injections {
    Hypergraph graph;
    Homomorphism left;
    Homomorphism right;
};

inline Injections coproduct(const Hypergraph& a, const Hypergraph& b) {
    Injections r;
    r.graph.num_vertices = a.num_vertices + b.num_vertices;
    r.graph.edges = a.edges;
    r.left = identity_map(a);
    r.right.vmap.resize(b.num_vertices);
    r.right.emap.resize(b.edges.size());
    for (Id v = 0; v < b.num_vertices; ++v) r.right.vmap[v] = a.num_vertices + v;
    for (Id e = 0; e < b.edges.size(); ++e) {
        Edge ed = b.edges[e];
        for (Id& v : ed.sources) v += a.num_vertices;
        for (Id& v : ed.targets) v += a.num_vertices;
        r.right.emap[e] = r.graph.edges.size();
        r.graph.edges.push_back(std::move(ed));
    }
    return r;
}

// Pushout of B <-f- K -g-> C by quotienting B + C. Classes are numbered in
// order of their first element, B before C.
inline Injections pushout(const Hypergraph& K, const Hypergraph& B, const Hypergraph& C, const Homomorphism& f,
                          const Homomorphism& g) {
    if (f.vmap.size() != K.num_vertices || g.vmap.size() != K.num_vertices || f.emap.size() != K.edges.size() ||
        g.emap.size() != K.edges.size())
        throw std::invalid_argument("pushout: maps do not share the domain");
    const std::size_t nb = B.num_vertices, nc = C.num_vertices;
    const std::size_t eb = B.edges.size(), ec = C.edges.size();
    detail::DisjointSets vs(nb + nc), es(eb + ec);
    for (Id k = 0; k < K.num_vertices; ++k) vs.unite(f.vmap[k], nb + g.vmap[k]);
    for (Id k = 0; k < K.edges.size(); ++k) es.unite(f.emap[k], eb + g.emap[k]);

    auto edge_at = [&](std::size_t i) -> const Edge& { return i < eb ? B.edges[i] : C.edges[i - eb]; };
    auto vert_at = [&](std::size_t i, Id v) { return i < eb ? v : nb + v; };
    // identified edges force their tentacles together
    for (std::size_t i = 0; i < eb + ec; ++i) {
        std::size_t r = es.find(i);
        if (r == i) continue;
        const Edge& a = edge_at(i);
        const Edge& b = edge_at(r);
        if (a.label != b.label || a.sources.size() != b.sources.size() || a.targets.size() != b.targets.size())
            throw std::invalid_argument("pushout: identified edges have different labels");
        for (std::size_t t = 0; t < a.sources.size(); ++t) vs.unite(vert_at(i, a.sources[t]), vert_at(r, b.sources[t]));
        for (std::size_t t = 0; t < a.targets.size(); ++t) vs.unite(vert_at(i, a.targets[t]), vert_at(r, b.targets[t]));
    }

    Injections r;
    std::vector<Id> vclass(nb + nc, npos), eclass(eb + ec, npos);
    for (std::size_t i = 0; i < nb + nc; ++i) {
        std::size_t root = vs.find(i);
        if (vclass[root] == npos) vclass[root] = r.graph.add_vertex();
        vclass[i] = vclass[root];
    }
    for (std::size_t i = 0; i < eb + ec; ++i) {
        std::size_t root = es.find(i);
        if (eclass[root] == npos) {
            Edge ed = edge_at(i);
            for (Id& v : ed.sources) v = vclass[vert_at(i, v)];
            for (Id& v : ed.targets) v = vclass[vert_at(i, v)];
            eclass[root] = r.graph.edges.size();
            r.graph.edges.push_back(std::move(ed));
        }
        eclass[i] = eclass[root];
    }
    r.left.vmap.assign(vclass.begin(), vclass.begin() + static_cast<std::ptrdiff_t>(nb));
    r.right.vmap.assign(vclass.begin() + static_cast<std::ptrdiff_t>(nb), vclass.end());
    r.left.emap.assign(eclass.begin(), eclass.begin() + static_cast<std::ptrdiff_t>(eb));
    r.right.emap.assign(eclass.begin() + static_cast<std::ptrdiff_t>(eb), eclass.end());
    return r;
}

} // namespace tracerw

#endif
