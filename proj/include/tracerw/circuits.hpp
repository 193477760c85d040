#ifndef TRACERW_CIRCUITS_HPP
#define TRACERW_CIRCUITS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpo.hpp"

namespace tracerw::circuits {

// bot < t, f < top
enum class Value : std::uint8_t { Bot = 0, T = 1, F = 2, Top = 3 };

inline constexpr std::array<Value, 4> all_values{Value::Bot, Value::T, Value::F, Value::Top};

inline Value join(Value a, Value b) {
    return static_cast<Value>(static_cast<std::uint8_t>(a) | static_cast<std::uint8_t>(b));
}
inline Value meet(Value a, Value b) {
    return static_cast<Value>(static_cast<std::uint8_t>(a) & static_cast<std::uint8_t>(b));
}
inline bool leq(Value a, Value b) { return join(a, b) == b; }

inline const char* name(Value v) {
    switch (v) {
    case Value::T: return "t";
    case Value::F: return "f";
    case Value::Top: return "top";
    default: return "bot";
    }
}

inline std::optional<Value> parse_value(const std::string& s) {
    if (s == "t") return Value::T;
    if (s == "f") return Value::F;
    if (s == "top") return Value::Top;
    if (s == "bot") return Value::Bot;
    return std::nullopt;
}

inline std::string format_tuple(const std::vector<Value>& vs) {
    std::string s = "(";
    for (std::size_t k = 0; k < vs.size(); ++k) s += (k ? "," : "") + std::string(name(vs[k]));
    return s + ")";
}

using Table2 = std::array<std::array<Value, 4>, 4>;

/** Gate truth tables over V, indexed by the Value enum order (bot, t, f, top). */
struct GateTables {
    Table2 and_gate;
    Table2 or_gate;
    std::array<Value, 4> not_gate;
};

inline const GateTables& gate_tables() {
    using enum Value;
    static const GateTables tables{
        // and: f absorbs, and(bot, top) = f is forced by monotonicity
        Table2{{{Bot, Bot, F, F}, {Bot, T, F, Top}, {F, F, F, F}, {F, Top, F, Top}}},
        // or: t absorbs, or(bot, top) = t
        Table2{{{Bot, T, Bot, T}, {T, T, T, T}, {Bot, T, F, Top}, {T, T, Top, Top}}},
        {Bot, F, T, Top},
    };
    return tables;
}

inline std::size_t idx(Value v) { return static_cast<std::size_t>(v); }

inline bool is_gate(const std::string& label) { return label == "and" || label == "or" || label == "not"; }

inline Value eval_gate(const std::string& gate, const std::vector<Value>& in) {
    const GateTables& t = gate_tables();
    if (gate == "and") return t.and_gate[idx(in.at(0))][idx(in.at(1))];
    if (gate == "or") return t.or_gate[idx(in.at(0))][idx(in.at(1))];
    if (gate == "not") return t.not_gate[idx(in.at(0))];
    throw std::invalid_argument("unknown gate '" + gate + "'");
}

// bot is drawn by init; the other values have their own generators
inline std::string value_label(Value v) { return v == Value::Bot ? "init" : std::string("v:") + name(v); }

inline std::optional<Value> label_value(const std::string& label) {
    if (label == "init") return Value::Bot;
    if (label.rfind("v:", 0) == 0) {
        auto v = parse_value(label.substr(2));
        if (v && *v != Value::Bot) return v;
    }
    return std::nullopt;
}

inline Signature circuit_signature() {
    Signature s;
    s.add("and", 2, 1);
    s.add("or", 2, 1);
    s.add("not", 1, 1);
    s.add("init", 0, 1);
    s.add("merge", 2, 1);
    s.add("delay", 1, 1);
    s.add("v:t", 0, 1);
    s.add("v:f", 0, 1);
    s.add("v:top", 0, 1);
    return s;
}

inline Term value_term(Value v) { return term::gen(value_label(v), 0, 1); }

// delay joined with the initial value; joining with bot changes nothing
inline Term register_term(Value v) {
    if (v == Value::Bot) return term::gen("delay", 1, 1);
    return term::seq(term::par(term::gen("delay", 1, 1), value_term(v)), term::gen("merge", 2, 1));
}

inline std::optional<Term> circuit_atom(const std::string& w) {
    if (w.rfind("reg:", 0) == 0) {
        std::vector<Term> regs;
        std::string rest = w.substr(4);
        std::size_t start = 0;
        while (start <= rest.size()) {
            std::size_t comma = rest.find(',', start);
            std::string part = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            auto v = parse_value(part);
            if (!v) return std::nullopt;
            regs.push_back(register_term(*v));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return term::par_all(regs);
    }
    if (w == "v:bot") return value_term(Value::Bot);
    return std::nullopt;
}

inline Term parse_circuit(const std::string& src) {
    static const Signature sig = circuit_signature();
    return parse(src, sig, circuit_atom);
}

inline void check_circuit(const Hypergraph& g) {
    static const Signature sig = circuit_signature();
    validate(g, sig);
}

// Fork, Join, Stub and one Prim instance per gate and input tuple.
inline std::vector<RewriteRule> local_rules() {
    using namespace term;
    std::vector<RewriteRule> rules;
    for (Value v : all_values) {
        RewriteRule fork = make_rule(std::string("Fork[") + name(v) + "]", seq(value_term(v), copy()),
                                     par(value_term(v), value_term(v)));
        // only where the value really fans out, otherwise Fork and Stub undo each other
        fork.guard = [](const Cospan& host, const Homomorphism& h) {
            Id w = host.graph.edges[h.emap[0]].targets[0];
            std::size_t uses = std::count(host.output.begin(), host.output.end(), w);
            for (const Edge& e : host.graph.edges) uses += std::count(e.sources.begin(), e.sources.end(), w);
            return uses >= 2;
        };
        rules.push_back(std::move(fork));
    }
    for (Value v : all_values)
        for (Value w : all_values)
            rules.push_back(make_rule(std::string("Join[") + name(v) + "," + name(w) + "]",
                                      seq(par(value_term(v), value_term(w)), gen("merge", 2, 1)),
                                      value_term(join(v, w))));
    for (Value v : all_values)
        rules.push_back(make_rule(std::string("Stub[") + name(v) + "]", seq(value_term(v), discard()), id(0)));
    for (const char* g : {"and", "or"})
        for (Value v : all_values)
            for (Value w : all_values)
                rules.push_back(make_rule(std::string("Prim[") + g + "," + name(v) + "," + name(w) + "]",
                                          seq(par(value_term(v), value_term(w)), gen(g, 2, 1)),
                                          value_term(eval_gate(g, {v, w}))));
    for (Value v : all_values)
        rules.push_back(make_rule(std::string("Prim[not,") + name(v) + "]", seq(value_term(v), gen("not", 1, 1)),
                                  value_term(eval_gate("not", {v}))));
    return rules;
}

// Tr^x(h) => Tr^x((id_x * copy_m) ; (h * id_m) ; (id_x * swap(n,m)) ; (h * discard_n))
inline Term unfolded(const Term& h, std::size_t x) {
    using namespace term;
    if (h->dom < x || h->cod < x) throw TypeError("unfolded: trace width exceeds interface");
    std::size_t m = h->dom - x, n = h->cod - x;
    Term body = seq_all({par(id(x), copy_n(m)), par(h, id(m)), par(id(x), swap(n, m)), par(h, discard_n(n))}, 0);
    return tr(x, body);
}

inline RewriteRule unfolding_rule(const Term& h, std::size_t x, std::string rule_name = "Unfold") {
    return make_rule(std::move(rule_name), term::tr(x, h), unfolded(h, x));
}

// Copy and discard naturality for every generator of the signature.
inline std::vector<RewriteRule> cartesian_rules(const Signature& sig) {
    using namespace term;
    std::vector<RewriteRule> rules;
    for (const auto& [g, a] : sig.generators()) {
        Term e = gen(g, a.in, a.out);
        rules.push_back(make_rule("CopyNat[" + g + "]", seq(e, copy_n(a.out)), seq(copy_n(a.in), par(e, e))));
        rules.push_back(make_rule("DiscardNat[" + g + "]", seq(e, discard_n(a.out)), discard_n(a.in)));
    }
    return rules;
}

/** Circuit as Tr^s(core ; (registers * id_n)); core is combinational and acyclic. */
struct Mealy {
    Cospan core; // s+m -> s+n
    std::vector<Value> state;
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t feedback = 0; // width removed by IF
};

namespace detail {

inline std::vector<std::vector<Id>> successors(const Hypergraph& g) {
    std::vector<std::vector<Id>> succ(g.num_vertices);
    for (const Edge& e : g.edges)
        for (Id s : e.sources)
            for (Id t : e.targets) succ[s].push_back(t);
    return succ;
}

inline bool acyclic(const std::vector<std::vector<Id>>& succ, const std::vector<char>& cut) {
    const std::size_t n = succ.size();
    std::vector<std::size_t> indeg(n, 0);
    for (Id v = 0; v < n; ++v)
        if (!cut[v])
            for (Id w : succ[v])
                if (!cut[w]) ++indeg[w];
    std::vector<Id> stack;
    for (Id v = 0; v < n; ++v)
        if (!cut[v] && indeg[v] == 0) stack.push_back(v);
    std::size_t seen = 0, alive = 0;
    for (Id v = 0; v < n; ++v) alive += !cut[v];
    while (!stack.empty()) {
        Id v = stack.back();
        stack.pop_back();
        ++seen;
        for (Id w : succ[v])
            if (!cut[w] && --indeg[w] == 0) stack.push_back(w);
    }
    return seen == alive;
}

// Smallest vertex set whose removal breaks every cycle; exhaustive up to
// size 3, greedy beyond.
inline std::vector<Id> feedback_vertices(const Hypergraph& g) {
    auto succ = successors(g);
    const std::size_t n = g.num_vertices;
    std::vector<char> cut(n, 0);
    if (acyclic(succ, cut)) return {};
    std::vector<char> has_in(n, 0);
    for (Id u = 0; u < n; ++u)
        for (Id w : succ[u]) has_in[w] = 1;
    std::vector<Id> cand;
    for (Id v = 0; v < n; ++v)
        if (has_in[v] && !succ[v].empty()) cand.push_back(v);
    std::vector<Id> pick;
    std::function<bool(std::size_t, std::size_t)> choose = [&](std::size_t from, std::size_t left) {
        if (left == 0) return acyclic(succ, cut);
        for (std::size_t k = from; k < cand.size(); ++k) {
            cut[cand[k]] = 1;
            pick.push_back(cand[k]);
            if (choose(k + 1, left - 1)) return true;
            cut[cand[k]] = 0;
            pick.pop_back();
        }
        return false;
    };
    for (std::size_t size = 1; size <= 3 && cand.size() <= 60; ++size)
        if (choose(0, size)) return pick;
    // greedy: cut the remaining candidate with the largest fan-out
    pick.clear();
    std::fill(cut.begin(), cut.end(), 0);
    while (!acyclic(succ, cut)) {
        Id best = npos;
        for (Id v : cand)
            if (!cut[v] && (best == npos || succ[v].size() > succ[best].size())) best = v;
        cut[best] = 1;
        pick.push_back(best);
    }
    return pick;
}

} // namespace detail

// Registers are pulled out of the netlist (Mealy), then instantaneous
// feedback is unrolled 2x+1 times from bot (IF).
inline Mealy mealy_form(const Term& circuit) {
    Cospan c = interpret(circuit);
    check_circuit(c.graph);
    Mealy mf;
    mf.m = c.dom();
    mf.n = c.cod();

    const Hypergraph& g = c.graph;
    std::vector<std::size_t> uses(g.num_vertices, 0);
    std::vector<Id> producer(g.num_vertices, npos);
    for (Id v : c.input) uses[v] += 2; // interface vertices never belong to a register
    for (Id v : c.output) uses[v] += 2;
    for (Id e = 0; e < g.edges.size(); ++e) {
        for (Id v : g.edges[e].sources) ++uses[v];
        for (Id v : g.edges[e].targets) producer[v] = e;
    }
    // producer of v when v feeds exactly one tentacle; label null means any value
    auto private_from = [&](Id v, const char* label) {
        Id e = producer[v];
        if (uses[v] != 1 || e == npos) return npos;
        bool ok = label ? g.edges[e].label == label : label_value(g.edges[e].label).has_value();
        return ok ? e : npos;
    };

    Cospan core;
    core.graph.num_vertices = g.num_vertices;
    std::vector<Id> reg_in, reg_out;
    std::vector<char> taken(g.edges.size(), 0);
    // (delay * v) ; merge is one register holding v
    for (Id e = 0; e < g.edges.size(); ++e) {
        if (g.edges[e].label != "merge") continue;
        Id d = private_from(g.edges[e].sources[0], "delay");
        Id val = private_from(g.edges[e].sources[1], nullptr);
        if (d == npos || val == npos || taken[d] || taken[val]) continue;
        taken[e] = taken[d] = taken[val] = 1;
        mf.state.push_back(*label_value(g.edges[val].label));
        reg_out.push_back(g.edges[e].targets[0]);
        reg_in.push_back(g.edges[d].sources[0]);
    }
    for (Id e = 0; e < g.edges.size(); ++e) {
        if (taken[e]) continue;
        const Edge& ed = g.edges[e];
        if (ed.label == "delay") {
            mf.state.push_back(Value::Bot);
            reg_out.push_back(ed.targets[0]);
            reg_in.push_back(ed.sources[0]);
        } else if (auto v = label_value(ed.label); v && ed.label != "init") {
            mf.state.push_back(*v);
            reg_out.push_back(ed.targets[0]);
            Id fresh = core.graph.add_vertex();
            core.graph.add_edge("init", {}, {fresh});
            reg_in.push_back(fresh);
        } else {
            core.graph.edges.push_back(ed);
        }
    }
    const std::size_t s = mf.state.size();
    core.input = reg_out;
    core.input.insert(core.input.end(), c.input.begin(), c.input.end());
    core.output = reg_in;
    core.output.insert(core.output.end(), c.output.begin(), c.output.end());

    // drop the private vertices of recognised registers
    {
        std::vector<Id> renum(core.graph.num_vertices, npos);
        auto touch = [&](Id v) { renum[v] = 0; };
        for (Id v : core.input) touch(v);
        for (Id v : core.output) touch(v);
        for (const Edge& e : core.graph.edges) {
            for (Id v : e.sources) touch(v);
            for (Id v : e.targets) touch(v);
        }
        std::size_t n = 0;
        for (Id& r : renum)
            if (r != npos) r = n++;
        core.graph.num_vertices = n;
        for (Id& v : core.input) v = renum[v];
        for (Id& v : core.output) v = renum[v];
        for (Edge& e : core.graph.edges) {
            for (Id& v : e.sources) v = renum[v];
            for (Id& v : e.targets) v = renum[v];
        }
    }

    // an undriven wire carries bot; make that explicit so reduction never stalls on it
    {
        std::vector<char> driven(core.graph.num_vertices, 0);
        for (Id v : core.input) driven[v] = 1;
        for (const Edge& e : core.graph.edges)
            for (Id t : e.targets) driven[t] = 1;
        for (Id v = 0; v < driven.size(); ++v)
            if (!driven[v]) core.graph.add_edge("init", {}, {v});
    }

    // IF: split every feedback vertex into a producer half and a consumer half
    std::vector<Id> fvs = detail::feedback_vertices(core.graph);
    const std::size_t x = fvs.size();
    mf.feedback = x;
    if (x == 0) {
        mf.core = std::move(core);
        return mf;
    }
    Cospan f = core;
    std::vector<Id> prod(x);
    for (std::size_t k = 0; k < x; ++k) prod[k] = f.graph.add_vertex();
    for (Edge& e : f.graph.edges)
        for (Id& t : e.targets)
            for (std::size_t k = 0; k < x; ++k)
                if (t == fvs[k]) t = prod[k];
    f.input.insert(f.input.begin(), fvs.begin(), fvs.end());
    f.output.insert(f.output.begin(), prod.begin(), prod.end());

    const std::size_t width = s + mf.m;
    Cospan unrolled;
    std::vector<Id> shared(width);
    for (Id& v : shared) v = unrolled.graph.add_vertex();
    std::vector<Id> fb(x);
    for (Id& v : fb) {
        v = unrolled.graph.add_vertex();
        unrolled.graph.add_edge("init", {}, {v});
    }
    std::vector<Id> outs;
    for (std::size_t round = 0; round < 2 * x + 1; ++round) {
        std::vector<Id> map(f.graph.num_vertices, npos);
        for (std::size_t k = 0; k < x; ++k) map[f.input[k]] = fb[k];
        for (std::size_t k = 0; k < width; ++k) map[f.input[x + k]] = shared[k];
        for (Id& v : map)
            if (v == npos) v = unrolled.graph.add_vertex();
        for (const Edge& e : f.graph.edges) {
            Edge ne = e;
            for (Id& v : ne.sources) v = map[v];
            for (Id& v : ne.targets) v = map[v];
            unrolled.graph.edges.push_back(std::move(ne));
        }
        for (std::size_t k = 0; k < x; ++k) fb[k] = map[f.output[k]];
        outs.clear();
        for (std::size_t k = x; k < f.output.size(); ++k) outs.push_back(map[f.output[k]]);
    }
    unrolled.input = shared;
    unrolled.output = outs;
    mf.core = std::move(unrolled);
    return mf;
}

inline Term to_term(const Mealy& mf) {
    using namespace term;
    Term core = extract(mf.core, true);
    std::vector<Term> regs;
    for (Value v : mf.state) regs.push_back(register_term(v));
    regs.push_back(id(mf.n));
    const std::size_t s = mf.state.size();
    return simplify(tr(s, seq(core, par_all(regs))));
}

inline Term to_mealy_form(const Term& circuit) { return to_term(mealy_form(circuit)); }

struct StepOutput {
    std::vector<Value> outputs;
    Mealy next;
    std::size_t rewrites = 0;
};

class ReductionStuck : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Feeds state and inputs into a copy of the core (the `now' copy of Str),
// reduces it with the local rules and reads off outputs and next state.
inline StepOutput step(const Mealy& mf, const std::vector<Value>& inputs,
                       const std::vector<RewriteRule>& rules = local_rules()) {
    if (inputs.size() != mf.m)
        throw std::invalid_argument("step: expected " + std::to_string(mf.m) + " inputs, got " +
                                    std::to_string(inputs.size()));
    Cospan now;
    now.graph = mf.core.graph;
    std::vector<Value> feed = mf.state;
    feed.insert(feed.end(), inputs.begin(), inputs.end());
    for (std::size_t k = 0; k < feed.size(); ++k) now.graph.add_edge(value_label(feed[k]), {}, {mf.core.input[k]});
    now.output = mf.core.output;

    NormalizeResult nr = normalize(now, rules, Mode::TracedComonoid, Strategy::Exhaustive, 1000000);
    const Cospan& done = nr.result;
    std::vector<Id> producer(done.graph.num_vertices, npos);
    std::vector<char> is_out(done.graph.num_vertices, 0);
    for (Id v : done.output) is_out[v] = 1;
    for (Id e = 0; e < done.graph.edges.size(); ++e) {
        const Edge& ed = done.graph.edges[e];
        if (!label_value(ed.label) || !is_out[ed.targets[0]])
            throw ReductionStuck("reduction stuck at edge '" + ed.label + "'");
        producer[ed.targets[0]] = e;
    }
    std::vector<Value> vals;
    for (Id v : done.output)
        vals.push_back(producer[v] == npos ? Value::Bot : *label_value(done.graph.edges[producer[v]].label));
    StepOutput out;
    const std::size_t s = mf.state.size();
    out.next = mf;
    out.next.state.assign(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(s));
    out.outputs.assign(vals.begin() + static_cast<std::ptrdiff_t>(s), vals.end());
    out.rewrites = nr.steps;
    return out;
}

inline std::vector<std::vector<Value>> run(const Term& circuit, const std::vector<std::vector<Value>>& stream) {
    Mealy mf = mealy_form(circuit);
    std::vector<std::vector<Value>> outs;
    static const std::vector<RewriteRule> rules = local_rules();
    for (const auto& in : stream) {
        StepOutput so = step(mf, in, rules);
        outs.push_back(so.outputs);
        mf = std::move(so.next);
    }
    return outs;
}

// Direct netlist simulation: delays start at bot, value generators fire
// once, merge is join, each tick is a least fixpoint from bot.
inline std::vector<std::vector<Value>> oracle_simulate(const Term& circuit,
                                                       const std::vector<std::vector<Value>>& stream) {
    Cospan c = interpret(circuit);
    check_circuit(c.graph);
    const Hypergraph& g = c.graph;
    std::vector<Value> reg(g.edges.size(), Value::Bot);
    std::vector<std::vector<Value>> outs;
    for (std::size_t tick = 0; tick < stream.size(); ++tick) {
        const auto& in = stream[tick];
        if (in.size() != c.dom()) throw std::invalid_argument("oracle_simulate: wrong input width");
        std::vector<Value> val(g.num_vertices, Value::Bot);
        for (std::size_t k = 0; k < in.size(); ++k) val[c.input[k]] = join(val[c.input[k]], in[k]);
        bool changed = true;
        while (changed) {
            changed = false;
            for (Id e = 0; e < g.edges.size(); ++e) {
                const Edge& ed = g.edges[e];
                Value out;
                if (ed.label == "delay") out = reg[e];
                else if (ed.label == "merge") out = join(val[ed.sources[0]], val[ed.sources[1]]);
                else if (ed.label == "init") out = Value::Bot;
                else if (auto v = label_value(ed.label)) out = tick == 0 ? *v : Value::Bot;
                else {
                    std::vector<Value> args;
                    for (Id s : ed.sources) args.push_back(val[s]);
                    out = eval_gate(ed.label, args);
                }
                Id t = ed.targets[0];
                if (val[t] != out) {
                    val[t] = out;
                    changed = true;
                }
            }
        }
        std::vector<Value> o;
        for (Id v : c.output) o.push_back(val[v]);
        outs.push_back(std::move(o));
        for (Id e = 0; e < g.edges.size(); ++e)
            if (g.edges[e].label == "delay") reg[e] = val[g.edges[e].sources[0]];
    }
    return outs;
}

// Cross-coupled NOR gates; the loop back into the top gate has two delays,
// the one into the bottom gate has one. Inputs S R, outputs Q Qbar.
inline const char* sr_latch_source() {
    return "tr^2( (id:1 * swap:1,2) ; (swap:1,2 * id:1) ; (swap:1,1 * id:2) ; (id:1 * swap:1,1 * id:1)\n"
           "    ; ((or ; not) * (or ; not)) ; (copy * copy) ; (swap:2,1 * id:1)\n"
           "    ; ((delay ; delay) * delay * id:2) )\n";
}

} // namespace tracerw::circuits

#endif
