#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "hyperspars/hypergraph.hpp"
#include "hyperspars/reference.hpp"

using namespace hyperspars;

namespace {

DirectedHypergraph single_edge(const char* w = "3") {
    return parse_dhg(std::string("dhg 2 1\nv 1 1\nv 2 1\ne ") + w + " T 1 H 2\n");
}

DirectedHypergraph abc() { return parse_dhg("dhg 3 1\nv a 1\nv b 1\nv c 1\ne 2 T a b H c\n"); }

Subset named(const DirectedHypergraph& h, std::initializer_list<const char*> names) {
    Subset s(h.n(), false);
    for (auto nm : names) s[h.index_of(nm)] = true;
    return s;
}

// Cut weight straight from the definition, over std::set membership.
Rational naive_out(const DirectedHypergraph& h, const std::set<int>& s) {
    Rational w = 0;
    for (const auto& e : h.edges()) {
        bool t = false, hd = false;
        for (int v : e.tail) t = t || s.count(v);
        for (int v : e.head) hd = hd || !s.count(v);
        if (t && hd) w += e.weight;
    }
    return w;
}

}  // namespace

TEST_CASE("parse the two-vertex example") {
    auto h = single_edge();
    CHECK(h.n() == 2);
    CHECK(h.m() == 1);
    CHECK(h.r() == 2);
    CHECK(h.omega_hat() == 2);
    CHECK(h.edge(0).weight == 3);
}

TEST_CASE("parse rejects malformed input with a line number") {
    CHECK_THROWS_AS(parse_dhg("dhg 2 1\nv 1 1\nv 2 1\ne 3 T 1 H\n"), ParseError);
    CHECK_THROWS_AS(parse_dhg("dhg 2 1\nv 1 1\nv 2 1\ne 3 T H 2\n"), ParseError);
    CHECK_THROWS_AS(parse_dhg("dhg 2 0\nv 1 3\nv 2 1\n"), ParseError);  // kappa = n + 1
    CHECK_THROWS_AS(parse_dhg("dhg 2 0\nv 1 0\nv 2 1\n"), ParseError);
    CHECK_THROWS_AS(parse_dhg("dhg 2 0\nv 1 1\nv 1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_dhg("dhg 2 1\nv 1 1\nv 2 1\ne -1 T 1 H 2\n"), ParseError);
    CHECK_THROWS_AS(parse_dhg("dhg 2 1\nv 1 1\nv 2 1\ne 1/0 T 1 H 2\n"), ParseError);
    CHECK_THROWS_AS(parse_dhg("dhg 2 1\nv 1 1\nv 2 1\ne 1 T 1 H 3\n"), ParseError);
    try {
        parse_dhg("dhg 2 1\n# comment\nv 1 1\nv 2 1\ne 3 T 1 H\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 5);
    }
}

TEST_CASE("comments, decimals and fractions") {
    auto h = parse_dhg("# header next\ndhg 2 2\nv x 2 # weight two\nv y 1\ne 0.25 T x H y\ne 6/4 T y H x\n");
    CHECK(h.edge(0).weight == Rational(1, 4));
    CHECK(h.edge(1).weight == Rational(3, 2));
    CHECK(h.kappa() == 2);
}

TEST_CASE("sparsity examples") {
    auto h = single_edge();
    CHECK(sparsity(h, named(h, {"1"})) == 3);
    CHECK(sparsity(h, named(h, {"2"})) == 0);
    auto g = abc();
    CHECK(sparsity(g, named(g, {"a"})) == 1);
    CHECK_THROWS_AS(sparsity(h, Subset(2, false)), std::invalid_argument);
    CHECK_THROWS_AS(sparsity(h, Subset(2, true)), std::invalid_argument);
}

TEST_CASE("sparsity agrees with the set-based definition on every proper subset") {
    auto g = abc();
    for (unsigned mask = 1; mask < 7; ++mask) {
        std::set<int> s;
        Subset sub(3, false);
        for (int i = 0; i < 3; ++i)
            if (mask >> i & 1) s.insert(i), sub[i] = true;
        const Rational want = naive_out(g, s) / Rational(static_cast<long>(s.size() * (3 - s.size())));
        CHECK(sparsity(g, sub) == want);
    }
}

TEST_CASE("expansion uses weighted degrees") {
    auto h = single_edge();
    auto x = expansion(h, named(h, {"1"}));
    CHECK(x.phi_plus == 1);
    CHECK(x.phi_minus == 0);
    CHECK(x.phi == 0);
    auto y = expansion(h, named(h, {"2"}));
    CHECK(y.phi_plus == 0);
    CHECK(y.phi_minus == 1);
    auto g = abc();
    auto z = expansion(g, named(g, {"c"}));
    CHECK(z.phi_plus == 0);
    CHECK(z.phi_minus == 1);
    auto iso = parse_dhg("dhg 3 1\nv a 1\nv b 1\nv c 1\ne 1 T a H b\n");
    CHECK_THROWS_AS(expansion(iso, named(iso, {"c"})), UndefinedExpansion);
}

TEST_CASE("reduction shape") {
    auto g = reduce_to_digraph(abc());
    CHECK(g.vertex_count() == 5);
    CHECK(g.arcs.size() == 4);
    CHECK(g.big_weight == 6);
    auto empty = reduce_to_digraph(parse_dhg("dhg 2 0\nv a 1\nv b 1\n"));
    CHECK(empty.vertex_count() == 2);
    CHECK(empty.arcs.empty());
    auto two = parse_dhg("dhg 3 2\nv a 1\nv b 1\nv c 1\ne 1 T a H b c\ne 2 T a b H c\n");
    auto g2 = reduce_to_digraph(two);
    std::size_t want = 0;
    for (const auto& e : two.edges()) want += 1 + e.tail.size() + e.head.size();
    CHECK(g2.arcs.size() == want);
    CHECK(g2.big_weight == 9);
}

TEST_CASE("transform and restrict on the three-vertex edge") {
    auto h = abc();
    auto g = reduce_to_digraph(h);
    auto t = transform_subset(h, named(h, {"a"}));
    CHECK(t == Subset{true, false, false, true, false});
    CHECK(reduced_out_weight(g, t) == 2);
    auto r = restrict_subset(g, t);
    CHECK(r.subset == named(h, {"a"}));
    CHECK(r.preserved);
    Subset gadget(5, false);
    gadget[3] = true;
    auto r2 = restrict_subset(g, gadget);
    CHECK(r2.reduced_cut == 2);
    CHECK(r2.preserved);
    Subset only_a(5, false);
    only_a[0] = true;
    auto r3 = restrict_subset(g, only_a);
    CHECK(r3.reduced_cut == 6);
    CHECK_FALSE(r3.preserved);
    CHECK(transform_subset(h, Subset(3, false)) == Subset(5, false));
    auto full = transform_subset(h, Subset(3, true));
    CHECK(full == Subset(5, true));
    CHECK(reduced_out_weight(g, full) == 0);
    CHECK(restrict_subset(g, Subset(5, false)).preserved);
}

TEST_CASE("cut weight survives the reduction on random instances") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        GeneratorSpec sp;
        sp.n = 5;
        sp.m = 4;
        sp.r_max = 4;
        sp.seed = seed;
        auto h = generate(sp);
        auto g = reduce_to_digraph(h);
        for (unsigned mask = 0; mask < 32; ++mask) {
            Subset s(5);
            std::set<int> ss;
            for (int i = 0; i < 5; ++i)
                if (mask >> i & 1) s[i] = true, ss.insert(i);
            CHECK(reduced_out_weight(g, transform_subset(h, s)) == naive_out(h, ss));
        }
    }
}

TEST_CASE("scaling edge weights scales sparsity") {
    GeneratorSpec sp;
    sp.n = 6;
    sp.m = 8;
    sp.seed = 3;
    auto h = generate(sp);
    const Rational lam(7, 3);
    auto hs = h.scaled(lam);
    for (unsigned mask = 1; mask < 63; ++mask) {
        Subset s(6);
        for (int i = 0; i < 6; ++i) s[i] = mask >> i & 1;
        CHECK(sparsity(hs, s) == lam * sparsity(h, s));
    }
}

TEST_CASE("reversal swaps the two sides of every cut") {
    GeneratorSpec sp;
    sp.n = 5;
    sp.m = 7;
    sp.seed = 11;
    auto h = generate(sp);
    auto r = h.reversed();
    for (unsigned mask = 1; mask < 31; ++mask) {
        Subset s(5), c(5);
        for (int i = 0; i < 5; ++i) s[i] = mask >> i & 1, c[i] = !s[i];
        CHECK(sparsity(h, s) == sparsity(r, c));
    }
}

TEST_CASE("serialization is canonical and round-trips") {
    auto h = parse_dhg("dhg 3 2\nv zed 1\nv alpha 2\nv mid 1\ne 2/4 T zed alpha H mid\ne 3 T mid H zed\n");
    const auto text = serialize_dhg(h);
    CHECK(text == "dhg 3 2\nv alpha 2\nv mid 1\nv zed 1\ne 1/2 T alpha zed H mid\ne 3 T mid H zed\n");
    CHECK(serialize_dhg(parse_dhg(text)) == text);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        GeneratorSpec sp;
        sp.seed = seed;
        sp.kappa = 3;
        const auto t = serialize_dhg(generate(sp));
        CHECK(serialize_dhg(parse_dhg(t)) == t);
    }
}
