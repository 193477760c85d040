// Acceptance runner: `acceptance N` checks criterion N, no argument runs all.
// Prints one line per criterion and exits nonzero on any failure.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "fixtures.hpp"
#include "generators.hpp"

using namespace tracerw;
using rnd::Rng;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

// decomposition oracle, run on every executed step
struct StepAudit {
    std::size_t steps = 0;
    std::size_t failures = 0;
    StepAudit() {
        step_observer() = [this](const Cospan& host, const RewriteRule& r, const Homomorphism&, const Complement& c) {
            ++steps;
            if (!check_decomposition(host, r, c)) ++failures;
        };
    }
    ~StepAudit() { step_observer() = nullptr; }
};

Outcome c1_round_trip() {
    Rng rng(1);
    std::size_t ok = 0, total = 500, traced = 0, comonoid = 0;
    for (std::size_t k = 0; k < total; ++k) {
        bool cm = k % 2 == 1;
        Term t = rnd::random_term(rng, 6, cm);
        cm = uses_comonoid(t);
        comonoid += cm;
        traced += to_string(t).find("tr^") != std::string::npos;
        Term back = extract(interpret(t), cm);
        ok += equal_modulo_axioms(t, back, cm);
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " round trips (" +
                             std::to_string(comonoid) + " with copy/discard, " + std::to_string(traced) +
                             " with traces)"};
}

Outcome c2_axioms() {
    using namespace term;
    Rng rng(2);
    std::size_t failures = 0, checked = 0;
    auto eq = [&](const Term& a, const Term& b) {
        ++checked;
        if (!isomorphic_cospans(interpret(a), interpret(b))) ++failures;
    };
    auto eqc = [&](const Cospan& a, const Cospan& b) {
        ++checked;
        if (!isomorphic_cospans(a, b)) ++failures;
    };
    auto w = [&] { return rnd::pick(rng, 0, 3); };
    auto rt = [&](std::size_t d, std::size_t c) { return rnd::random_term(rng, d, c, 3, rnd::coin(rng)); };
    for (int k = 0; k < 200; ++k) {
        std::size_t a0 = w(), a1 = w(), a2 = w(), a3 = w(), b0 = w(), b1 = w(), b2 = w();
        Term a = rt(a0, a1), b = rt(a1, a2), c = rt(a2, a3);
        Term x = rt(b0, b1), y = rt(b1, b2);
        // PROP
        eq(seq(seq(a, b), c), seq(a, seq(b, c)));
        eq(seq(id(a0), a), a);
        eq(seq(a, id(a1)), a);
        eq(par(par(a, x), c), par(a, par(x, c)));
        eq(par(id(0), a), a);
        eq(par(a, id(0)), a);
        eq(par(seq(a, b), seq(x, y)), seq(par(a, x), par(b, y)));
        eq(par(id(a0), id(b0)), id(a0 + b0));
        // symmetric monoidal
        eq(seq(swap(a0, b0), swap(b0, a0)), id(a0 + b0));
        eq(seq(par(a, x), swap(a1, b1)), seq(swap(a0, b0), par(x, a)));
        eq(swap(a0, b0 + a2), seq(par(swap(a0, b0), id(a2)), par(id(b0), swap(a0, a2))));
        eq(swap(0, a0), id(a0));
        // traced
        std::size_t tx = rnd::pick(rng, 1, 2), ty = rnd::pick(rng, 1, 2);
        Term f = rt(tx + a1, tx + a2);
        eq(tr(tx, seq(par(id(tx), a), seq(f, par(id(tx), c)))), seq(a, seq(tr(tx, f), c)));
        Term s = rt(tx, ty), fb = rt(ty + a1, tx + a2);
        eq(tr(ty, seq(fb, par(s, id(a2)))), tr(tx, seq(par(s, id(a1)), fb)));
        eq(tr(0, a), a);
        Term g2 = rt(tx + ty + a1, tx + ty + a2);
        eq(tr(tx + ty, g2), tr(tx, tr(ty, g2)));
        eq(par(tr(tx, f), x), tr(tx, par(f, x)));
        eq(tr(a0, swap(a0, a0)), id(a0));
        // comonoid
        eq(seq(copy(), par(copy(), id(1))), seq(copy(), par(id(1), copy())));
        eq(seq(copy(), swap(1, 1)), copy());
        eq(seq(copy(), par(discard(), id(1))), id(1));
        eq(seq(copy_n(a0), swap(a0, a0)), copy_n(a0));
        eq(seq(copy_n(a0), par(discard_n(a0), id(a0))), id(a0));
        // snakes and the trace through cup and cap
        std::size_t n = a0;
        eqc(compose(tensor(identity(n), cup(n)), tensor(cap(n), identity(n))), identity(n));
        eqc(compose(tensor(cup(n), identity(n)), tensor(identity(n), cap(n))), identity(n));
        Cospan fc = interpret(f);
        Cospan via = compose(compose(tensor(cup(tx), identity(a1)), tensor(identity(tx), fc)),
                             tensor(cap(tx), identity(a2)));
        eqc(trace(tx, fc), via);
    }
    return {failures == 0, std::to_string(checked) + " equations, " + std::to_string(failures) + " failures"};
}

Outcome c3_validity() {
    Rng rng(3);
    std::size_t failures = 0, checked = 0;
    for (bool plm : {false, true}) {
        auto valid = [&](const Cospan& c) { return plm ? is_partial_left_monogamous(c) : is_partial_monogamous(c); };
        auto fresh = [&](std::size_t d, std::size_t c) { return interpret(rnd::random_term(rng, d, c, 3, plm)); };
        std::vector<Cospan> pool;
        for (int k = 0; k < 10; ++k) pool.push_back(fresh(rnd::pick(rng, 0, 3), rnd::pick(rng, 0, 3)));
        for (int k = 0; k < 500; ++k) {
            const Cospan a = pool[rnd::pick(rng, 0, pool.size() - 1)];
            Cospan r;
            switch (rnd::pick(rng, 0, 2)) {
            case 0: r = compose(a, fresh(a.cod(), rnd::pick(rng, 0, 3))); break;
            case 1: r = tensor(a, pool[rnd::pick(rng, 0, pool.size() - 1)]); break;
            default: {
                std::size_t x = rnd::pick(rng, 0, std::min(a.dom(), a.cod()));
                r = trace(x, a);
            }
            }
            ++checked;
            if (!valid(r)) ++failures;
            if (r.dom() <= 4 && r.cod() <= 4 && r.graph.edges.size() < 40) pool.push_back(r);
            if (pool.size() > 40) pool.erase(pool.begin());
        }
    }
    return {failures == 0, std::to_string(checked) + " combinations, " + std::to_string(failures) + " failures"};
}

Outcome c4_pushout() {
    Rng rng(4);
    std::size_t failures = 0, cocones = 0;
    for (int k = 0; k < 100; ++k) {
        Hypergraph K = rnd::random_graph(rng, 3, 1);
        Hypergraph B = rnd::random_graph(rng, 5, 1), C = rnd::random_graph(rng, 5, 1);
        Homomorphism f = rnd::random_map(rng, K, B), g = rnd::random_map(rng, K, C);
        Injections po = pushout(K, B, C, f, g);
        bool ok = is_homomorphism(po.left, B, po.graph) && is_homomorphism(po.right, C, po.graph) &&
                  then(f, po.left) == then(g, po.right);
        // every cocone into a small target factors through the pushout exactly once
        for (int q = 0; q < 3 && ok; ++q) {
            Hypergraph Q;
            Q.num_vertices = rnd::pick(rng, 1, 3);
            auto anywhere = [&](std::size_t k) {
                std::vector<Id> vs;
                for (std::size_t i = 0; i < k; ++i) vs.push_back(rnd::pick(rng, 0, Q.num_vertices - 1));
                return vs;
            };
            for (const Hypergraph* side : {&B, &C})
                for (const Edge& e : side->edges) {
                    Q.add_edge(e.label, std::vector<Id>(e.sources.size(), 0), std::vector<Id>(e.targets.size(), 0));
                    Q.add_edge(e.label, anywhere(e.sources.size()), anywhere(e.targets.size()));
                }
            auto into_b = find_homomorphisms(B, Q, partial_map(B), {false, 40});
            auto into_c = find_homomorphisms(C, Q, partial_map(C), {false, 40});
            for (const Homomorphism& qb : into_b)
                for (const Homomorphism& qc : into_c) {
                    if (then(f, qb) != then(g, qc)) continue;
                    ++cocones;
                    Homomorphism anchor = partial_map(po.graph);
                    std::size_t mediators = 0;
                    for (const Homomorphism& u : find_homomorphisms(po.graph, Q, anchor)) {
                        mediators += then(po.left, u) == qb && then(po.right, u) == qc;
                    }
                    if (mediators != 1) ok = false;
                }
        }
        failures += !ok;
    }
    return {failures == 0, "100 spans, " + std::to_string(cocones) + " cocones, " + std::to_string(failures) +
                               " failures"};
}

Outcome c5_fixtures() {
    using namespace fixtures;
    std::vector<std::pair<std::string, bool>> checks;
    {
        SplitLoop f;
        auto rs = rewrite_step(f.host, f.r, Mode::Traced);
        checks.push_back({"split-loop", accepted_complements(f.r, f.host, Mode::Traced) == 1 && rs.size() == 1 &&
                                            isomorphic_cospans(rs[0], f.expected)});
    }
    {
        LoopMatch f;
        auto rs = rewrite_step(f.host, f.r, Mode::Traced);
        checks.push_back({"loop-matching", rs.size() == 1 && isomorphic_cospans(rs[0], f.expected)});
    }
    {
        NonConvex f;
        auto rs = rewrite_step(f.host, f.r, Mode::Traced);
        checks.push_back({"non-convex", rs.size() == 1 && isomorphic_cospans(rs[0], f.expected)});
    }
    {
        NonUniqueTraced f;
        auto cs = accepted_for(f.r, constant_match(f.r, middle_vertex(f.host)), f.host, Mode::Traced);
        bool ok = cs.size() == 2;
        if (ok) {
            Cospan r0 = apply_complement(f.r, cs[0]), r1 = apply_complement(f.r, cs[1]);
            ok = (isomorphic_cospans(r0, f.expected[0]) && isomorphic_cospans(r1, f.expected[1])) ||
                 (isomorphic_cospans(r0, f.expected[1]) && isomorphic_cospans(r1, f.expected[0]));
        }
        checks.push_back({"non-unique traced (2)", ok});
    }
    {
        NonUniqueComonoid f;
        checks.push_back({"non-unique comonoid (2)", accepted_complements(f.r, f.host, Mode::TracedComonoid) == 2});
    }
    {
        FrobeniusOnly f;
        auto all = pushout_complements(f.r, constant_match(f.r, middle_vertex(f.host)), fold(f.host), 1);
        std::size_t a = 0;
        for (const Complement& c : all) a += accepted(c, Mode::Traced) + accepted(c, Mode::TracedComonoid);
        checks.push_back({"frobenius-only (0)", !all.empty() && a == 0});
    }
    {
        Unfolding f;
        auto rs = rewrite_step(f.host, f.r, Mode::TracedComonoid);
        checks.push_back({"unfolding", rs.size() == 1 && isomorphic_cospans(rs[0], f.expected)});
    }
    bool pass = true;
    std::string detail;
    for (auto& [n, ok] : checks) {
        pass &= ok;
        detail += (detail.empty() ? "" : ", ") + n + (ok ? " ok" : " FAILED");
    }
    return {pass, detail};
}

Outcome c7_adhesive() {
    Rng rng(7);
    std::size_t rules = 0, failures = 0, matches = 0;
    while (rules < 100) {
        Term lt = rnd::random_term(rng, rnd::pick(rng, 0, 2), rnd::pick(rng, 0, 2), 2, false);
        Cospan lhs = interpret(lt);
        RewriteRule r = make_rule("r" + std::to_string(rules), lhs, lhs);
        if (!detail::duplicate_free(r.lhs.output) || r.lhs.graph.edges.empty()) continue;
        ++rules;
        // host: the lhs inside random traced contexts
        Cospan a = interpret(rnd::random_term(rng, rnd::pick(rng, 0, 2), lhs.dom(), 2, false));
        std::size_t extra = rnd::pick(rng, 0, 2);
        Cospan mid = tensor(lhs, interpret(rnd::random_term(rng, extra, extra, 2, false)));
        Cospan b = interpret(rnd::random_term(rng, lhs.cod() + extra, rnd::pick(rng, 0, 2), 2, false));
        Cospan host = compose(compose(tensor(a, identity(extra)), mid), b);
        Cospan g = fold(host);
        std::size_t found = 0;
        for_each_homomorphism(r.lhs.graph, g.graph, partial_map(r.lhs.graph), {true, npos}, [&](const Homomorphism& h) {
            if (!check_no_dangling(r.lhs, h, g) || !check_no_identification(r.lhs, h)) return true;
            ++found;
            if (pushout_complements(r, h, g, host.dom()).size() != 1) {
                ++failures;
                std::cerr << "rule " << to_string(lt) << " host " << io::to_json(host).dump() << "\n";
            }
            return true;
        });
        matches += found;
        if (found == 0) ++failures;
    }
    return {failures == 0, std::to_string(rules) + " rules, " + std::to_string(matches) + " mono matchings, " +
                               std::to_string(failures) + " failures"};
}

// Tr^x(body) over the circuit signature with at most `gates` logic gates.
Term random_circuit(Rng& rng, std::size_t m, std::size_t n, std::size_t x, std::size_t gates) {
    using namespace term;
    using namespace circuits;
    std::size_t width = x + m;
    Term t = id(width);
    std::size_t used = 0;
    auto at = [&](Term e) {
        std::size_t w = t->cod;
        std::size_t pos = rnd::pick(rng, 0, w - e->dom);
        t = seq(t, par(par(id(pos), e), id(w - pos - e->dom)));
    };
    std::size_t layers = rnd::pick(rng, 2, 8);
    for (std::size_t k = 0; k < layers; ++k) {
        std::size_t w = t->cod;
        switch (rnd::pick(rng, 0, 7)) {
        case 0:
            if (w >= 2 && used < gates) at(gen(rnd::coin(rng) ? "and" : "or", 2, 1)), ++used;
            break;
        case 1:
            if (w >= 1 && used < gates) at(gen("not", 1, 1)), ++used;
            break;
        case 2:
            if (w >= 1) at(gen("delay", 1, 1));
            break;
        case 3:
            if (w >= 1 && w < 5) at(copy());
            break;
        case 4:
            if (w < 5) at(value_term(all_values[rnd::pick(rng, 0, 3)]));
            break;
        case 5:
            if (w >= 2) at(gen("merge", 2, 1));
            break;
        case 6:
            if (w >= 2) at(swap(1, 1));
            break;
        default:
            if (w >= 2) at(discard());
        }
    }
    while (t->cod > x + n) {
        if (used < gates) at(gen(rnd::coin(rng) ? "and" : "or", 2, 1)), ++used;
        else at(gen("merge", 2, 1));
    }
    while (t->cod < x + n) {
        if (t->cod == 0) t = seq(t, value_term(all_values[rnd::pick(rng, 0, 3)]));
        else at(copy());
    }
    return tr(x, t);
}

std::vector<std::vector<circuits::Value>> random_stream(Rng& rng, std::size_t m, std::size_t ticks) {
    std::vector<std::vector<circuits::Value>> s(ticks);
    for (auto& tick : s)
        for (std::size_t k = 0; k < m; ++k) tick.push_back(circuits::all_values[rnd::pick(rng, 0, 3)]);
    return s;
}

std::vector<std::vector<circuits::Value>> latch_scenario() {
    using circuits::Value;
    std::vector<std::vector<Value>> s;
    for (int k = 0; k < 3; ++k) s.push_back({Value::F, Value::T}); // reset
    for (int k = 0; k < 3; ++k) s.push_back({Value::T, Value::F}); // set
    for (int k = 0; k < 4; ++k) s.push_back({Value::F, Value::F}); // hold
    return s;
}

Outcome c8_circuits() {
    using namespace circuits;
    Rng rng(8);
    std::size_t mismatches = 0, errors = 0;
    for (int k = 0; k < 200; ++k) {
        std::size_t m = rnd::pick(rng, 0, 2), n = rnd::pick(rng, 1, 2), x = rnd::pick(rng, 0, 2);
        Term c = random_circuit(rng, m, n, x, 8);
        auto stream = random_stream(rng, m, 4);
        try {
            if (run(c, stream) != oracle_simulate(c, stream)) {
                ++mismatches;
                std::cerr << "mismatch: " << to_string(c) << "\n";
            }
        } catch (const std::exception& e) {
            ++errors;
            std::cerr << "error on " << to_string(c) << ": " << e.what() << "\n";
        }
    }
    Term latch = parse_circuit(sr_latch_source());
    auto s = latch_scenario();
    auto got = run(latch, s), want = oracle_simulate(latch, s);
    bool latch_ok = got == want;
    for (std::size_t k = 6; k < s.size(); ++k) latch_ok &= got[k][0] == Value::T && got[k][1] == Value::F;
    return {mismatches == 0 && errors == 0 && latch_ok,
            "200 random circuits: " + std::to_string(mismatches) + " mismatches, " + std::to_string(errors) +
                " errors; latch " + (latch_ok ? "holds Q=t after set" : "FAILED")};
}

Outcome c6_decomposition() {
    StepAudit audit;
    // every rewriting workload of the acceptance suite
    c5_fixtures();
    {
        Rng rng(6);
        using namespace circuits;
        for (int k = 0; k < 20; ++k) {
            std::size_t m = rnd::pick(rng, 0, 2), x = rnd::pick(rng, 0, 2);
            Term c = random_circuit(rng, m, 1, x, 8);
            run(c, random_stream(rng, m, 2));
        }
        run(parse_circuit(sr_latch_source()), latch_scenario());
    }
    {
        // rewrites of every accepted complement, not only the first
        using namespace fixtures;
        NonUniqueTraced f;
        for (const RewriteRule& r : {f.r, rule("fuse", "p ; q", "k")})
            for (Mode m : {Mode::Traced, Mode::TracedComonoid}) rewrite_step(c("tr^1(p ; q) * (p ; q)"), r, m);
    }
    return {audit.failures == 0 && audit.steps > 0,
            std::to_string(audit.steps) + " steps audited, " + std::to_string(audit.failures) + " failures"};
}

Outcome c9_gates() {
    using namespace circuits;
    std::size_t violations = 0;
    auto boolean = [](Value v) { return v == Value::T || v == Value::F; };
    auto as_bool = [](Value v) { return v == Value::T; };
    auto of_bool = [](bool b) { return b ? Value::T : Value::F; };
    for (const char* g : {"and", "or"})
        for (Value a : all_values)
            for (Value b : all_values) {
                Value r = eval_gate(g, {a, b});
                for (Value a2 : all_values)
                    for (Value b2 : all_values)
                        if (leq(a, a2) && leq(b, b2) && !leq(r, eval_gate(g, {a2, b2}))) ++violations;
                if (boolean(a) && boolean(b)) {
                    bool e = std::string(g) == "and" ? as_bool(a) && as_bool(b) : as_bool(a) || as_bool(b);
                    if (r != of_bool(e)) ++violations;
                }
            }
    for (Value a : all_values) {
        for (Value a2 : all_values)
            if (leq(a, a2) && !leq(eval_gate("not", {a}), eval_gate("not", {a2}))) ++violations;
        if (boolean(a) && eval_gate("not", {a}) != of_bool(!as_bool(a))) ++violations;
    }
    return {violations == 0, "AND/OR/NOT over V: " + std::to_string(violations) + " violations"};
}

Outcome run_criterion(int n) {
    switch (n) {
    case 1: return c1_round_trip();
    case 2: return c2_axioms();
    case 3: return c3_validity();
    case 4: return c4_pushout();
    case 5: return c5_fixtures();
    case 6: return c6_decomposition();
    case 7: return c7_adhesive();
    case 8: return c8_circuits();
    case 9: return c9_gates();
    }
    return {false, "no such criterion"};
}

} // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    if (argc > 1) which.push_back(std::atoi(argv[1]));
    else
        for (int k = 1; k <= 9; ++k) which.push_back(k);
    bool all = true;
    for (int n : which) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run_criterion(n);
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d: %s - %s (%.2fs)\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        all &= o.pass;
    }
    return all ? 0 : 1;
}
