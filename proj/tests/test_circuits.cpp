#include <catch_amalgamated.hpp>

#include "audit.hpp"
#include "generators.hpp"

using namespace tracerw;
using namespace tracerw::circuits;
using enum Value;

namespace {

using Stream = std::vector<std::vector<Value>>;

Stream ticks(std::initializer_list<Value> vs) {
    Stream s;
    for (Value v : vs) s.push_back({v});
    return s;
}

Stream silent(std::size_t n) { return Stream(n); }

// the value produced by a single-rule rewrite of `src`
Value reduce_once(const std::string& src) {
    Cospan host = interpret(parse_circuit(src));
    auto nr = normalize(host, local_rules(), Mode::TracedComonoid, Strategy::Exhaustive, 100);
    REQUIRE(nr.result.graph.edges.size() == 1);
    return *label_value(nr.result.graph.edges[0].label);
}

} // namespace

TEST_CASE("value lattice") {
    CHECK(join(T, F) == Top);
    CHECK(join(Bot, T) == T);
    CHECK(meet(T, F) == Bot);
    CHECK(leq(Bot, F));
    CHECK_FALSE(leq(T, F));
    CHECK(leq(F, Top));
}

TEST_CASE("gate tables") {
    CHECK(eval_gate("and", {T, F}) == F);
    CHECK(eval_gate("and", {T, T}) == T);
    CHECK(eval_gate("and", {Bot, Top}) == F);
    CHECK(eval_gate("or", {Bot, Top}) == T);
    CHECK(eval_gate("or", {F, F}) == F);
    CHECK(eval_gate("not", {Top}) == Top);
    CHECK(eval_gate("not", {Bot}) == Bot);
    CHECK_THROWS(eval_gate("xor", {T, T}));
}

TEST_CASE("local rules") {
    auto rules = local_rules();
    CHECK(rules.size() == 4 + 16 + 4 + 32 + 4);
    for (const auto& r : rules) CHECK_NOTHROW(validate_rule(r, Mode::TracedComonoid));
    CHECK(reduce_once("(v:t * v:f) ; and") == F);
    CHECK(reduce_once("(v:t * v:f) ; merge") == Top);
    CHECK(reduce_once("v:top ; not") == Top);
    CHECK(reduce_once("(init * v:t) ; or") == T);
    auto nr = normalize(interpret(parse_circuit("v:t ; discard")), rules, Mode::TracedComonoid, Strategy::Exhaustive,
                        10);
    CHECK(nr.result.graph.edges.empty());
    auto fork = normalize(interpret(parse_circuit("v:f ; copy")), rules, Mode::TracedComonoid, Strategy::Exhaustive,
                          10);
    CHECK(isomorphic_cospans(fork.result, interpret(parse_circuit("v:f * v:f"))));
    CHECK(fork.steps == 1);
}

TEST_CASE("parse_circuit sugar") {
    Term r = parse_circuit("reg:t,bot");
    CHECK(r->dom == 2);
    CHECK(isomorphic_cospans(interpret(r), interpret(parse_circuit("((delay * v:t) ; merge) * delay"))));
    CHECK(parse_circuit("v:bot")->cod == 1);
    CHECK_THROWS(parse_circuit("reg:x"));
    CHECK_THROWS(parse_circuit("xor"));
}

TEST_CASE("oracle simulator") {
    CHECK(oracle_simulate(parse_circuit("and"), {{T, T}}) == Stream{{T}});
    CHECK(oracle_simulate(parse_circuit("delay"), ticks({T, F})) == ticks({Bot, T}));
    CHECK(oracle_simulate(parse_circuit("tr^1(or ; copy)"), {{T}}) == Stream{{T}});
    CHECK(oracle_simulate(parse_circuit("v:t"), silent(2)) == ticks({T, Bot}));
    CHECK(oracle_simulate(parse_circuit("tr^1(not ; copy)"), silent(1)) == Stream{{Bot}});
}

TEST_CASE("rewriting pipeline") {
    CHECK(run(parse_circuit("v:t"), silent(2)) == ticks({T, Bot}));
    CHECK(run(parse_circuit("delay"), ticks({T, F})) == ticks({Bot, T}));
    CHECK(run(parse_circuit("and"), {{T, T}, {Bot, F}}) == Stream{{T}, {F}});
    // instantaneous feedback through NOT settles at the oracle's fixpoint
    Term neg = parse_circuit("tr^1(not ; copy)");
    CHECK(mealy_form(neg).feedback == 1);
    CHECK(run(neg, silent(2)) == oracle_simulate(neg, silent(2)));
    CHECK(run(parse_circuit("tr^1(or ; copy)"), ticks({T, F})) == oracle_simulate(parse_circuit("tr^1(or ; copy)"),
                                                                                   ticks({T, F})));
    CHECK_THROWS(step(mealy_form(parse_circuit("and")), {T}));
}

TEST_CASE("step returns the next state") {
    Mealy mf = mealy_form(parse_circuit("delay"));
    REQUIRE(mf.state == std::vector<Value>{Bot});
    StepOutput s = step(mf, {T});
    CHECK(s.outputs == std::vector<Value>{Bot});
    CHECK(s.next.state == std::vector<Value>{T});
    CHECK(step(s.next, {F}).outputs == std::vector<Value>{T});
}

TEST_CASE("Mealy form") {
    Term already = parse_circuit("tr^1(and ; copy ; (reg:t * id:1))");
    CHECK(equal_modulo_axioms(to_mealy_form(already), already, true));
    // a bare value becomes a register fed by init: same behaviour, different graph
    Term bare = parse_circuit("tr^1((id:1 * v:f) ; and ; copy ; (reg:t * id:1))");
    Term bare_form = to_mealy_form(bare);
    CHECK_FALSE(equal_modulo_axioms(bare_form, bare, true));
    Stream in = silent(4);
    CHECK(run(bare_form, in) == oracle_simulate(bare, in));
    Term latch = parse_circuit(sr_latch_source());
    Mealy mf = mealy_form(latch);
    CHECK(mf.state.size() == 3);
    CHECK(mf.feedback == 0);
    CHECK(mf.m == 2);
    CHECK(mf.n == 2);
    CHECK(is_partial_left_monogamous(mf.core));
    Term form = to_mealy_form(latch);
    CHECK(form->dom == 2);
    CHECK(form->cod == 2);
    // the Mealy form behaves like the original
    Stream s{{F, T}, {F, T}, {T, F}, {T, F}, {F, F}, {F, F}};
    CHECK(run(form, s) == oracle_simulate(latch, s));
}

TEST_CASE("SR latch") {
    Term latch = parse_circuit(sr_latch_source());
    Stream s;
    for (int k = 0; k < 3; ++k) s.push_back({F, T});
    for (int k = 0; k < 3; ++k) s.push_back({T, F});
    for (int k = 0; k < 3; ++k) s.push_back({F, F});
    auto got = run(latch, s);
    CHECK(got == oracle_simulate(latch, s));
    CHECK(got[2] == std::vector<Value>{F, T});
    for (std::size_t k = 5; k < s.size(); ++k) CHECK(got[k] == std::vector<Value>{T, F});
}

TEST_CASE("unfolding and cartesian rules") {
    Term h = parse_circuit("(id:1 * v:t) ; and ; copy");
    RewriteRule u = unfolding_rule(h, 1);
    CHECK(u.i == 0);
    CHECK(u.j == 1);
    auto rs = rewrite_step(interpret(term::tr(1, h)), u, Mode::TracedComonoid);
    REQUIRE(rs.size() == 1);
    CHECK(isomorphic_cospans(rs[0], interpret(unfolded(h, 1))));
    auto cart = cartesian_rules(circuit_signature());
    CHECK(cart.size() == 2 * circuit_signature().generators().size());
    for (const auto& r : cart) CHECK_NOTHROW(validate_rule(r, Mode::TracedComonoid));
    auto nr = normalize(interpret(parse_circuit("not ; copy")), cart, Mode::TracedComonoid, Strategy::FirstMatch, 1);
    CHECK(isomorphic_cospans(nr.result, interpret(parse_circuit("copy ; (not * not)"))));
}
