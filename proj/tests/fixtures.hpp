#ifndef TRACERW_TESTS_FIXTURES_HPP
#define TRACERW_TESTS_FIXTURES_HPP

#include <tracerw/tracerw.hpp>

namespace fixtures {

using namespace tracerw;

inline const Signature& signature() {
    static const Signature sig = [] {
        Signature s;
        for (const char* g : {"phi", "psi", "chi", "phi2", "psi2", "k", "p", "q", "delay"}) s.add(g, 1, 1);
        s.add("f", 2, 2);
        s.add("psi0", 0, 1);
        return s;
    }();
    return sig;
}

inline Term t(const std::string& src) { return parse(src, signature()); }
inline Cospan c(const std::string& src) { return interpret(t(src)); }

inline RewriteRule rule(const std::string& name, const std::string& lhs, const std::string& rhs) {
    return make_rule(name, t(lhs), t(rhs));
}

// every matching, every verified complement, kept when the mode accepts it
inline std::size_t accepted_complements(const RewriteRule& r, const Cospan& host, Mode mode,
                                        std::size_t* verified = nullptr) {
    Cospan g = fold(host);
    std::size_t n = 0, all = 0;
    for (const Homomorphism& h : find_matchings(r, g))
        for (const Complement& cc : pushout_complements(r, h, g, host.dom())) {
            ++all;
            n += accepted(cc, mode);
        }
    if (verified) *verified = all;
    return n;
}

inline std::vector<Complement> accepted_for(const RewriteRule& r, const Homomorphism& h, const Cospan& host,
                                            Mode mode) {
    std::vector<Complement> out;
    for (Complement& cc : pushout_complements(r, h, fold(host), host.dom()))
        if (accepted(cc, mode)) out.push_back(std::move(cc));
    return out;
}

// the single matching sending every vertex of a discrete lhs to `target`
inline Homomorphism constant_match(const RewriteRule& r, Id target) {
    return Homomorphism{std::vector<Id>(r.lhs.graph.num_vertices, target), {}};
}

// the vertex between the two edges of a host a ; b
inline Id middle_vertex(const Cospan& host) { return host.graph.edges.at(0).targets.at(0); }

struct SplitLoop {
    Cospan host = c("tr^1(swap:1,1 ; (phi * psi))");
    RewriteRule r = rule("fuse", "phi ; psi", "chi");
    Cospan expected = c("chi");
};

struct LoopMatch {
    Cospan host = c("tr^1(phi ; psi)");
    RewriteRule r = rule("fuse", "phi ; psi", "chi");
    Cospan expected = c("tr^1(chi)");
};

struct NonConvex {
    Cospan host = c("phi ; k ; psi");
    RewriteRule r = rule("pair", "phi * psi", "phi2 * psi2");
    Cospan expected = c("phi2 ; k ; psi2");
};

struct NonUniqueTraced {
    Cospan host = c("p ; q");
    RewriteRule r = rule("insert", "id:2", "phi * psi");
    std::vector<Cospan> expected{c("p ; phi ; psi ; q"), c("p ; psi ; phi ; q")};
};

struct NonUniqueComonoid {
    Cospan host = c("copy ; (id:1 * phi)");
    RewriteRule r = rule("swap-branch", "copy ; (phi * id:1)", "copy ; (psi * id:1)");
};

// A rule whose left side is a bare wire bent into a cup: only meaningful
// with Frobenius structure, so no traced complement may exist.
struct FrobeniusOnly {
    Cospan host = c("p ; q");
    RewriteRule r{"bend", fold(cup(1)), fold(c("psi0 ; copy")), 0, 2, {}};
};

struct Unfolding {
    Term h = t("f ; (delay * id:1)");
    RewriteRule r = circuits::unfolding_rule(h, 1);
    Cospan host = interpret(term::tr(1, h));
    Cospan expected = interpret(circuits::unfolded(h, 1));
};

} // namespace fixtures

#endif
