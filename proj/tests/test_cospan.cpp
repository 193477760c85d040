#include <catch_amalgamated.hpp>

#include "generators.hpp"

using namespace tracerw;

namespace {

Cospan phi() { return generator("phi", 1, 1); }
Cospan psi() { return generator("psi", 1, 1); }

} // namespace

TEST_CASE("Frobenius generators have the expected legs") {
    Cospan c = copy(1);
    CHECK(c.graph.num_vertices == 1);
    CHECK(c.input == std::vector<Id>{0});
    CHECK(c.output == std::vector<Id>{0, 0});
    Cospan d = discard(1);
    CHECK(d.input.size() == 1);
    CHECK(d.output.empty());
    Cospan s = symmetry(1, 1);
    CHECK(s.graph.num_vertices == 2);
    CHECK(s.output == std::vector<Id>{s.input[1], s.input[0]});
    CHECK(merge(2).dom() == 4);
    CHECK(init(3).cod() == 3);
}

TEST_CASE("compose") {
    Cospan c = compose(phi(), psi());
    CHECK(c.graph.num_vertices == 3);
    CHECK(c.graph.edges.size() == 2);
    CHECK(isomorphic_cospans(compose(identity(1), phi()), phi()));
    CHECK(isomorphic_cospans(compose(symmetry(1, 1), symmetry(1, 1)), identity(2)));
    CHECK_THROWS_AS(compose(identity(1), identity(2)), std::invalid_argument);
}

TEST_CASE("tensor") {
    CHECK(isomorphic_cospans(tensor(Cospan{}, phi()), phi()));
    CHECK(isomorphic_cospans(tensor(identity(1), identity(1)), identity(2)));
    CHECK(tensor(phi(), compose(phi(), psi())).graph.edges.size() == 3);
}

TEST_CASE("trace") {
    Cospan loop = trace(1, identity(1));
    CHECK(loop.graph.num_vertices == 1);
    CHECK(loop.dom() == 0);
    CHECK(loop.cod() == 0);
    CHECK(isomorphic_cospans(trace(1, symmetry(1, 1)), identity(1)));
    Cospan fork = trace(1, copy(1));
    CHECK(fork.graph.num_vertices == 1);
    CHECK(fork.input.empty());
    CHECK(fork.output.size() == 1);
    CHECK(degree(fork.graph, 0) == Degree{0, 0});
    CHECK_THROWS(trace(2, identity(1)));
}

TEST_CASE("canonical trace agrees with cup and cap") {
    rnd::Rng rng(5);
    for (int k = 0; k < 100; ++k) {
        std::size_t x = rnd::pick(rng, 1, 2), m = rnd::pick(rng, 0, 2), n = rnd::pick(rng, 0, 2);
        Cospan f = interpret(rnd::random_term(rng, x + m, x + n, 3, rnd::coin(rng)));
        Cospan via = compose(compose(tensor(cup(x), identity(m)), tensor(identity(x), f)), tensor(cap(x), identity(n)));
        CHECK(isomorphic_cospans(trace(x, f), via));
    }
}

TEST_CASE("partial monogamy") {
    CHECK(is_partial_monogamous(phi()));
    CHECK(is_partial_monogamous(generator("g", 2, 1)));
    CHECK(is_partial_monogamous(trace(1, identity(1))));
    Cospan bad;
    bad.graph.add_vertices(3);
    bad.graph.add_edge("psi", {1}, {0});
    bad.graph.add_edge("psi", {1}, {2});
    bad.output = {0, 2};
    auto v = monogamy_violation(bad);
    REQUIRE(v);
    CHECK(v->vertex == 1);
    CHECK(v->degree == Degree{0, 2});
    CHECK_FALSE(is_partial_monogamous(copy(1)));
    CHECK(classify(copy(1)) == Validity::PartialLeftMonogamous);
    CHECK(classify(merge(1)) == Validity::General);
    CHECK(classify(identity(3)) == Validity::PartialMonogamous);
}

TEST_CASE("partial left-monogamy") {
    CHECK(is_partial_left_monogamous(compose(copy(1), tensor(phi(), phi()))));
    Cospan two;
    two.graph.add_vertices(3);
    two.graph.add_edge("psi", {0}, {2});
    two.graph.add_edge("psi", {1}, {2});
    two.input = {0, 1};
    two.output = {2};
    CHECK_FALSE(is_partial_left_monogamous(two));
    rnd::Rng rng(6);
    for (int k = 0; k < 50; ++k) {
        Cospan c = interpret(rnd::random_term(rng, 4, false));
        REQUIRE(is_partial_monogamous(c));
        CHECK(is_partial_left_monogamous(c));
    }
}

TEST_CASE("isomorphism respects interfaces") {
    Cospan a = compose(phi(), psi());
    Cospan b = a;
    // permute internal ids
    std::vector<Id> perm{2, 0, 1};
    for (Edge& e : b.graph.edges) {
        for (Id& v : e.sources) v = perm[v];
        for (Id& v : e.targets) v = perm[v];
    }
    for (Id& v : b.input) v = perm[v];
    for (Id& v : b.output) v = perm[v];
    CHECK(isomorphic_cospans(a, b));
    CHECK_FALSE(isomorphic_cospans(compose(phi(), psi()), compose(psi(), phi())));
    CHECK_FALSE(isomorphic_cospans(symmetry(1, 1), identity(2)));
    CHECK_THROWS(isomorphic_cospans(copy(1), merge(1)));
}

TEST_CASE("special commutative Frobenius equations hold in cospans") {
    auto id1 = identity(1);
    // associativity, unit, commutativity of the monoid and comonoid
    CHECK(isomorphic_cospans(compose(tensor(merge(1), id1), merge(1)), compose(tensor(id1, merge(1)), merge(1))));
    CHECK(isomorphic_cospans(compose(tensor(init(1), id1), merge(1)), id1));
    CHECK(isomorphic_cospans(compose(symmetry(1, 1), merge(1)), merge(1)));
    CHECK(isomorphic_cospans(compose(copy(1), tensor(copy(1), id1)), compose(copy(1), tensor(id1, copy(1)))));
    CHECK(isomorphic_cospans(compose(copy(1), tensor(discard(1), id1)), id1));
    CHECK(isomorphic_cospans(compose(copy(1), symmetry(1, 1)), copy(1)));
    // Frobenius and special
    CHECK(isomorphic_cospans(compose(tensor(copy(1), id1), tensor(id1, merge(1))), compose(merge(1), copy(1))));
    CHECK(isomorphic_cospans(compose(tensor(id1, copy(1)), tensor(merge(1), id1)), compose(merge(1), copy(1))));
    CHECK(isomorphic_cospans(compose(copy(1), merge(1)), id1));
}
