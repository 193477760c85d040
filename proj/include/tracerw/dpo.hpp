#ifndef TRACERW_DPO_HPP
#define TRACERW_DPO_HPP

#include <functional>
#include <string>
#include <vector>

#include "extraction.hpp"
#include "term.hpp"

namespace tracerw {

enum class Mode { Traced, TracedComonoid };
enum class Strategy { FirstMatch, Exhaustive };

/** Rule with both sides folded to 0 -> i+j. */
struct RewriteRule {
    std::string name;
    Cospan lhs;
    Cospan rhs;
    std::size_t i = 0;
    std::size_t j = 0;
    // extra side condition on matchings into the folded host; empty means none
    std::function<bool(const Cospan& folded_host, const Homomorphism&)> guard;
};

inline RewriteRule make_rule(std::string name, const Cospan& lhs, const Cospan& rhs) {
    if (lhs.dom() != rhs.dom() || lhs.cod() != rhs.cod())
        throw std::invalid_argument("rule '" + name + "': sides have different types");
    return RewriteRule{std::move(name), fold(lhs), fold(rhs), lhs.dom(), lhs.cod(), {}};
}

inline RewriteRule make_rule(std::string name, const Term& lhs, const Term& rhs) {
    return make_rule(std::move(name), interpret(lhs), interpret(rhs));
}

inline bool valid_for(const Cospan& c, Mode mode) {
    return mode == Mode::Traced ? is_partial_monogamous(c) : is_partial_left_monogamous(c);
}

inline void validate_rule(const RewriteRule& r, Mode mode) {
    if (r.lhs.output.size() != r.i + r.j || r.rhs.output.size() != r.i + r.j || !r.lhs.input.empty() ||
        !r.rhs.input.empty())
        throw std::invalid_argument("rule '" + r.name + "': sides are not folded to i+j");
    if (!valid_for(unfold(r.lhs, r.i), mode) || !valid_for(unfold(r.rhs, r.i), mode))
        throw std::invalid_argument("rule '" + r.name + "': sides are not valid for the rewriting mode");
}

// Every host edge outside the image touches the image only at boundary points.
inline bool check_no_dangling(const Cospan& lhs, const Homomorphism& hom, const Hypergraph& host) {
    std::vector<char> image(host.num_vertices, 0), boundary(host.num_vertices, 0), eimage(host.edges.size(), 0);
    for (Id v : hom.vmap) image[v] = 1;
    for (Id v : lhs.output) boundary[hom.vmap[v]] = 1;
    for (Id v : lhs.input) boundary[hom.vmap[v]] = 1;
    for (Id e : hom.emap) eimage[e] = 1;
    for (Id e = 0; e < host.edges.size(); ++e) {
        if (eimage[e]) continue;
        for (const auto* vs : {&host.edges[e].sources, &host.edges[e].targets})
            for (Id v : *vs)
                if (image[v] && !boundary[v]) return false;
    }
    return true;
}

// Same, with the interface of the folded host counted as attachments that
// may only sit on boundary points.
inline bool check_no_dangling(const Cospan& lhs, const Homomorphism& hom, const Cospan& folded_host) {
    if (!check_no_dangling(lhs, hom, folded_host.graph)) return false;
    std::vector<char> boundary(folded_host.graph.num_vertices, 0), image(folded_host.graph.num_vertices, 0);
    for (Id v : hom.vmap) image[v] = 1;
    for (Id v : lhs.output) boundary[hom.vmap[v]] = 1;
    for (Id v : lhs.input) boundary[hom.vmap[v]] = 1;
    for (Id v : folded_host.output)
        if (image[v] && !boundary[v]) return false;
    return true;
}

// Distinct lhs elements sharing an image must both be boundary points.
inline bool check_no_identification(const Cospan& lhs, const Homomorphism& hom) {
    std::vector<char> iface(lhs.graph.num_vertices, 0);
    for (Id v : lhs.output) iface[v] = 1;
    for (Id v : lhs.input) iface[v] = 1;
    std::map<Id, Id> seen;
    for (Id v = 0; v < hom.vmap.size(); ++v) {
        auto [it, fresh] = seen.emplace(hom.vmap[v], v);
        if (!fresh && (!iface[v] || !iface[it->second])) return false;
    }
    std::set<Id> edges(hom.emap.begin(), hom.emap.end());
    return edges.size() == hom.emap.size();
}

inline std::vector<Homomorphism> find_matchings(const RewriteRule& r, const Cospan& folded_host) {
    const Hypergraph& host = folded_host.graph;
    std::vector<Homomorphism> out;
    for (auto& h : find_homomorphisms(r.lhs.graph, host))
        if (check_no_dangling(r.lhs, h, folded_host) && check_no_identification(r.lhs, h) &&
            (!r.guard || r.guard(folded_host, h)))
            out.push_back(std::move(h));
    return out;
}

/** Context C with c: i+j -> C (input) and d: m+n -> C (output). */
struct Complement {
    Cospan context;
    Homomorphism to_host;
    std::size_t i = 0, j = 0, m = 0, n = 0;
};

// j+m -> C <- i+n
inline Cospan rearranged(const Complement& c) {
    const auto& in = c.context.input;
    const auto& out = c.context.output;
    Cospan r;
    r.graph = c.context.graph;
    r.input.assign(in.begin() + static_cast<std::ptrdiff_t>(c.i), in.end());
    r.input.insert(r.input.end(), out.begin(), out.begin() + static_cast<std::ptrdiff_t>(c.m));
    r.output.assign(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(c.i));
    r.output.insert(r.output.end(), out.begin() + static_cast<std::ptrdiff_t>(c.m), out.end());
    return r;
}

inline bool is_traced_boundary(const Complement& c) {
    const auto& in = c.context.input;
    std::vector<Id> c1(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(c.i));
    std::vector<Id> c2(in.begin() + static_cast<std::ptrdiff_t>(c.i), in.end());
    return detail::duplicate_free(c1) && detail::duplicate_free(c2) && is_partial_monogamous(rearranged(c));
}

inline bool is_traced_left_boundary(const Complement& c) {
    const auto& in = c.context.input;
    std::vector<Id> c2(in.begin() + static_cast<std::ptrdiff_t>(c.i), in.end());
    return detail::duplicate_free(c2) && is_partial_left_monogamous(rearranged(c));
}

inline bool accepted(const Complement& c, Mode mode) {
    return mode == Mode::Traced ? is_traced_boundary(c) : is_traced_left_boundary(c);
}

class GluingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

// restricted growth strings: all set partitions of k points
inline std::vector<std::vector<std::size_t>> set_partitions(std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> rgs(k, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t blocks) {
        if (pos == k) {
            out.push_back(rgs);
            return;
        }
        for (std::size_t b = 0; b <= blocks && (pos > 0 || b == 0); ++b) {
            rgs[pos] = b;
            rec(pos + 1, std::max(blocks, b + 1));
        }
    };
    rec(0, 0);
    return out;
}

// One way of splitting a boundary host vertex: a partition of the rule
// interface points over it and a block for every incident site.
struct FiberOption {
    std::vector<std::size_t> block_of_point;
    std::size_t blocks = 0;
    std::vector<std::size_t> block_of_site;
    std::size_t idle = 0;
};

struct Site {
    bool is_iface;     // host interface position rather than a tentacle
    std::size_t index; // interface position, or edge
    bool target = false;
    std::size_t pos = 0;
};

class ComplementEnumerator {
public:
    ComplementEnumerator(const RewriteRule& r, const Homomorphism& hom, const Cospan& host, std::size_t m,
                         const Mode* prune)
        : r_(r), hom_(hom), host_(host), m_(m) {
        const Hypergraph& G = host.graph;
        if (!check_no_dangling(r.lhs, hom, host) || !check_no_identification(r.lhs, hom))
            throw GluingError("matching violates the gluing conditions");
        const std::size_t npts = r.i + r.j;
        std::vector<char> image(G.num_vertices, 0);
        for (Id v : hom.vmap) image[v] = 1;
        eimage_.assign(G.edges.size(), 0);
        for (Id e : hom.emap) eimage_[e] = 1;

        fiber_index_.assign(G.num_vertices, npos);
        for (std::size_t x = 0; x < npts; ++x) {
            Id w = hom.vmap[r.lhs.output[x]];
            if (fiber_index_[w] == npos) {
                fiber_index_[w] = fibers_.size();
                fibers_.push_back(w);
                points_.emplace_back();
                sites_.emplace_back();
            }
            points_[fiber_index_[w]].push_back(x);
        }
        // fibers in host vertex order
        std::vector<std::size_t> order(fibers_.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fibers_[a] < fibers_[b]; });
        auto permute = [&](auto& v) {
            auto copy = v;
            for (std::size_t k = 0; k < order.size(); ++k) v[k] = copy[order[k]];
        };
        permute(fibers_);
        permute(points_);
        for (std::size_t k = 0; k < fibers_.size(); ++k) fiber_index_[fibers_[k]] = k;

        retained_.assign(G.num_vertices, npos);
        for (Id v = 0; v < G.num_vertices; ++v)
            if (!image[v]) retained_[v] = nretained_++;

        for (Id e = 0; e < G.edges.size(); ++e) {
            if (eimage_[e]) continue;
            const Edge& ed = G.edges[e];
            for (std::size_t p = 0; p < ed.sources.size(); ++p)
                if (image[ed.sources[p]]) sites_[fiber_index_[ed.sources[p]]].push_back({false, e, false, p});
            for (std::size_t p = 0; p < ed.targets.size(); ++p)
                if (image[ed.targets[p]]) sites_[fiber_index_[ed.targets[p]]].push_back({false, e, true, p});
        }
        for (std::size_t k = 0; k < host.output.size(); ++k) {
            Id w = host.output[k];
            if (!image[w]) continue;
            if (fiber_index_[w] == npos) {
                dead_ = true; // host interface on a deleted vertex
                continue;
            }
            sites_[fiber_index_[w]].push_back({true, k});
        }

        for (std::size_t f = 0; f < fibers_.size(); ++f) options_.push_back(fiber_options(f, prune));
    }

    bool empty() const {
        if (dead_) return true;
        for (const auto& o : options_)
            if (o.empty()) return true;
        return false;
    }

    // fn receives each verified complement in enumeration order; return false to stop
    void run(const std::function<bool(Complement&&)>& fn) const {
        if (empty()) return;
        std::vector<std::size_t> choice(fibers_.size(), 0);
        while (true) {
            if (auto c = build(choice)) {
                if (!fn(std::move(*c))) return;
            }
            std::size_t k = fibers_.size();
            while (k > 0) {
                --k;
                if (++choice[k] < options_[k].size()) break;
                choice[k] = 0;
                if (k == 0) return;
            }
            if (fibers_.empty()) return;
        }
    }

private:
    std::vector<FiberOption> fiber_options(std::size_t f, const Mode* prune) const {
        const auto& pts = points_[f];
        const auto& sites = sites_[f];
        std::vector<FiberOption> out;
        for (const auto& part : set_partitions(pts.size())) {
            std::size_t blocks = part.empty() ? 0 : *std::max_element(part.begin(), part.end()) + 1;
            if (prune && !partition_may_pass(pts, part, *prune)) continue;
            std::vector<std::size_t> att(sites.size(), 0);
            while (true) {
                FiberOption o{part, blocks, att, 0};
                std::vector<char> used(blocks, 0);
                for (std::size_t b : att) used[b] = 1;
                for (char u : used) o.idle += !u;
                out.push_back(std::move(o));
                std::size_t k = att.size();
                bool done = true;
                while (k > 0) {
                    --k;
                    if (++att[k] < blocks) {
                        done = false;
                        break;
                    }
                    att[k] = 0;
                }
                if (done) break;
            }
        }
        std::stable_sort(out.begin(), out.end(),
                         [](const FiberOption& a, const FiberOption& b) { return a.idle < b.idle; });
        return out;
    }

    // mono conditions of the filters can be decided per fiber
    bool partition_may_pass(const std::vector<std::size_t>& pts, const std::vector<std::size_t>& part,
                            Mode mode) const {
        for (std::size_t a = 0; a < pts.size(); ++a)
            for (std::size_t b = a + 1; b < pts.size(); ++b) {
                if (part[a] != part[b]) continue;
                bool ia = pts[a] < r_.i, ib = pts[b] < r_.i;
                if (!ia && !ib) return false;
                if (mode == Mode::Traced && ia && ib) return false;
            }
        return true;
    }

    std::optional<Complement> build(const std::vector<std::size_t>& choice) const {
        const Hypergraph& G = host_.graph;
        Complement c;
        c.i = r_.i;
        c.j = r_.j;
        c.m = m_;
        c.n = host_.output.size() - m_;
        Hypergraph& C = c.context.graph;
        C.num_vertices = nretained_;
        c.to_host.vmap.assign(nretained_, npos);
        for (Id v = 0; v < G.num_vertices; ++v)
            if (retained_[v] != npos) c.to_host.vmap[retained_[v]] = v;
        std::vector<Id> block_base(fibers_.size());
        for (std::size_t f = 0; f < fibers_.size(); ++f) {
            const FiberOption& o = options_[f][choice[f]];
            block_base[f] = C.add_vertices(o.blocks);
            for (std::size_t b = 0; b < o.blocks; ++b) c.to_host.vmap.push_back(fibers_[f]);
        }
        // interface points
        c.context.input.assign(r_.i + r_.j, npos);
        for (std::size_t f = 0; f < fibers_.size(); ++f) {
            const FiberOption& o = options_[f][choice[f]];
            for (std::size_t k = 0; k < points_[f].size(); ++k)
                c.context.input[points_[f][k]] = block_base[f] + o.block_of_point[k];
        }
        // where each boundary site lands
        std::map<std::tuple<std::size_t, bool, std::size_t>, Id> tentacle;
        std::vector<Id> iface(host_.output.size(), npos);
        for (std::size_t f = 0; f < fibers_.size(); ++f) {
            const FiberOption& o = options_[f][choice[f]];
            for (std::size_t s = 0; s < sites_[f].size(); ++s) {
                const Site& st = sites_[f][s];
                Id v = block_base[f] + o.block_of_site[s];
                if (st.is_iface) iface[st.index] = v;
                else tentacle[{st.index, st.target, st.pos}] = v;
            }
        }
        auto place = [&](Id hv, std::size_t e, bool target, std::size_t p) {
            if (retained_[hv] != npos) return retained_[hv];
            return tentacle.at({e, target, p});
        };
        for (Id e = 0; e < G.edges.size(); ++e) {
            if (eimage_[e]) continue;
            const Edge& ed = G.edges[e];
            Edge ne{ed.label, {}, {}};
            for (std::size_t p = 0; p < ed.sources.size(); ++p) ne.sources.push_back(place(ed.sources[p], e, false, p));
            for (std::size_t p = 0; p < ed.targets.size(); ++p) ne.targets.push_back(place(ed.targets[p], e, true, p));
            C.edges.push_back(std::move(ne));
            c.to_host.emap.push_back(e);
        }
        for (std::size_t k = 0; k < host_.output.size(); ++k) {
            Id hv = host_.output[k];
            c.context.output.push_back(retained_[hv] != npos ? retained_[hv] : iface[k]);
        }
        if (!verify(c)) return std::nullopt;
        return c;
    }

    // recompute the pushout L <- i+j -> C and compare it with the host
    bool verify(const Complement& c) const {
        const Hypergraph& G = host_.graph;
        Hypergraph K;
        K.num_vertices = r_.i + r_.j;
        Injections po = pushout(K, r_.lhs.graph, c.context.graph, Homomorphism{r_.lhs.output, {}},
                                Homomorphism{c.context.input, {}});
        std::vector<Id> u(po.graph.num_vertices, npos), ue(po.graph.edges.size(), npos);
        auto set = [](std::vector<Id>& m, Id at, Id to) {
            if (m[at] != npos && m[at] != to) return false;
            m[at] = to;
            return true;
        };
        for (Id v = 0; v < r_.lhs.graph.num_vertices; ++v)
            if (!set(u, po.left.vmap[v], hom_.vmap[v])) return false;
        for (Id v = 0; v < c.context.graph.num_vertices; ++v)
            if (!set(u, po.right.vmap[v], c.to_host.vmap[v])) return false;
        for (Id e = 0; e < r_.lhs.graph.edges.size(); ++e)
            if (!set(ue, po.left.emap[e], hom_.emap[e])) return false;
        for (Id e = 0; e < c.context.graph.edges.size(); ++e)
            if (!set(ue, po.right.emap[e], c.to_host.emap[e])) return false;
        if (po.graph.num_vertices != G.num_vertices || po.graph.edges.size() != G.edges.size()) return false;
        std::set<Id> sv(u.begin(), u.end()), se(ue.begin(), ue.end());
        if (sv.size() != G.num_vertices || se.size() != G.edges.size() || sv.count(npos) || se.count(npos))
            return false;
        for (std::size_t k = 0; k < host_.output.size(); ++k)
            if (c.to_host.vmap[c.context.output[k]] != host_.output[k]) return false;
        return is_homomorphism(Homomorphism{u, ue}, po.graph, G);
    }

    const RewriteRule& r_;
    const Homomorphism& hom_;
    const Cospan& host_;
    std::size_t m_;
    std::vector<char> eimage_;
    std::vector<Id> fibers_;
    std::vector<std::size_t> fiber_index_;
    std::vector<std::vector<std::size_t>> points_;
    std::vector<std::vector<Site>> sites_;
    std::vector<std::vector<FiberOption>> options_;
    std::vector<Id> retained_;
    std::size_t nretained_ = 0;
    bool dead_ = false;
};

} // namespace detail

// All pushout complements of a matching into the folded host 0 -> m+n,
// verified and deduplicated up to isomorphism.
inline std::vector<Complement> pushout_complements(const RewriteRule& r, const Homomorphism& hom,
                                                   const Cospan& folded_host, std::size_t m) {
    detail::ComplementEnumerator en(r, hom, folded_host, m, nullptr);
    std::vector<Complement> out;
    en.run([&](Complement&& c) {
        for (const Complement& o : out)
            if (isomorphic_cospans(o.context, c.context)) return true;
        out.push_back(std::move(c));
        return true;
    });
    return out;
}

// Recomposes Tr^i((L * id_m) ; C') and compares it with the host m -> n.
inline bool check_decomposition(const Cospan& host, const RewriteRule& r, const Complement& c) {
    Cospan l = unfold(r.lhs, r.i);
    Cospan whole = trace(r.i, compose(tensor(l, identity(c.m)), rearranged(c)));
    return isomorphic_cospans(whole, host);
}

using StepObserver =
    std::function<void(const Cospan& host, const RewriteRule&, const Homomorphism&, const Complement&)>;

// Called on every rewrite step that is carried out; tests use it to run the
// decomposition oracle everywhere.
inline StepObserver& step_observer() {
    static StepObserver observer;
    return observer;
}

inline Cospan apply_complement(const RewriteRule& r, const Complement& c) {
    Hypergraph K;
    K.num_vertices = r.i + r.j;
    Injections po =
        pushout(K, c.context.graph, r.rhs.graph, Homomorphism{c.context.input, {}}, Homomorphism{r.rhs.output, {}});
    Cospan h;
    h.graph = std::move(po.graph);
    for (Id v : c.context.output) h.output.push_back(po.left.vmap[v]);
    return unfold(h, c.m);
}

struct StepResult {
    Cospan result;
    std::size_t match = 0;
    std::size_t complement = 0;
};

inline void require_host(const Cospan& host, Mode mode) {
    if (!valid_for(host, mode))
        throw std::invalid_argument(mode == Mode::Traced ? "host is not partial monogamous"
                                                         : "host is not partial left-monogamous");
}

inline std::vector<StepResult> rewrite_step_detailed(const Cospan& host, const RewriteRule& rule, Mode mode) {
    require_host(host, mode);
    Cospan g = fold(host);
    std::vector<StepResult> out;
    auto matches = find_matchings(rule, g);
    for (std::size_t mi = 0; mi < matches.size(); ++mi) {
        auto comps = pushout_complements(rule, matches[mi], g, host.dom());
        std::size_t ci = 0;
        for (const Complement& c : comps) {
            if (!accepted(c, mode)) continue;
            if (step_observer()) step_observer()(host, rule, matches[mi], c);
            Cospan h = apply_complement(rule, c);
            bool dup = false;
            for (const StepResult& s : out)
                if (isomorphic_cospans(s.result, h)) dup = true;
            if (!dup) out.push_back({std::move(h), mi, ci});
            ++ci;
        }
    }
    return out;
}

inline std::vector<Cospan> rewrite_step(const Cospan& host, const RewriteRule& rule, Mode mode) {
    std::vector<Cospan> out;
    for (auto& s : rewrite_step_detailed(host, rule, mode)) out.push_back(std::move(s.result));
    return out;
}

// First accepted rewrite of one rule, in (matching, complement) order.
inline std::optional<StepResult> first_rewrite(const Cospan& host, const RewriteRule& rule, Mode mode) {
    Cospan g = fold(host);
    std::optional<StepResult> found;
    std::size_t mi = 0;
    for (const Homomorphism& hom : find_matchings(rule, g)) {
        Mode m = mode;
        detail::ComplementEnumerator en(rule, hom, g, host.dom(), &m);
        en.run([&](Complement&& c) {
            if (!accepted(c, mode)) return true;
            if (step_observer()) step_observer()(host, rule, hom, c);
            found = StepResult{apply_complement(rule, c), mi, 0};
            return false;
        });
        if (found) return found;
        ++mi;
    }
    return found;
}

struct NormalizeResult {
    Cospan result;
    std::vector<std::string> log;
    std::size_t steps = 0;
    bool budget_exhausted = false;
};

// first_match performs at most one step; exhaustive rewrites until no rule
// applies. Both stop at max_steps.
inline NormalizeResult normalize(const Cospan& host, const std::vector<RewriteRule>& rules, Mode mode,
                                 Strategy strategy, std::size_t max_steps) {
    require_host(host, mode);
    NormalizeResult nr;
    nr.result = host;
    const std::size_t limit = strategy == Strategy::FirstMatch ? std::min<std::size_t>(max_steps, 1) : max_steps;
    while (true) {
        std::optional<StepResult> step;
        const RewriteRule* used = nullptr;
        for (const RewriteRule& r : rules) {
            step = first_rewrite(nr.result, r, mode);
            if (step) {
                used = &r;
                break;
            }
        }
        if (!step) return nr;
        if (nr.steps >= limit) {
            nr.budget_exhausted = strategy == Strategy::Exhaustive || max_steps == 0;
            return nr;
        }
        nr.log.push_back("step " + std::to_string(nr.steps) + ": rule " + used->name + " match " +
                         std::to_string(step->match) + " complement " + std::to_string(step->complement));
        nr.result = std::move(step->result);
        ++nr.steps;
    }
}

} // namespace tracerw

#endif
