#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hyperspars/flownet.hpp"
#include "hyperspars/reference.hpp"

using namespace hyperspars;

namespace {

struct RawArc {
    int from, to;
    double cap;
};

// Minimum s-t cut by enumerating every vertex set containing s and not t.
double exhaustive_min_cut(int nodes, int s, int t, const std::vector<RawArc>& arcs) {
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << nodes); ++mask) {
        if (!(mask >> s & 1) || (mask >> t & 1)) continue;
        double c = 0;
        for (const auto& a : arcs)
            if ((mask >> a.from & 1) && !(mask >> a.to & 1)) c += a.cap;
        best = std::min(best, c);
    }
    return best;
}

GramState random_gram(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat v(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) v(i, k) = g(rng);
    return make_gram(v * v.transpose(), Side::ZeroIn);
}

FlowAssignment random_flow(const DirectedHypergraph& h, std::mt19937_64& rng, double fill = 1.0) {
    std::uniform_real_distribution<double> u(0, 1);
    FlowAssignment f;
    for (int e = 0; e < h.m(); ++e) {
        const auto& he = h.edge(e);
        std::vector<FlowEntry> es;
        double s = 0;
        for (int i : he.tail)
            for (int j : he.head) {
                es.push_back({e, i, j, u(rng)});
                s += es.back().value;
            }
        const double budget = to_double(he.weight) / 2 * fill * u(rng);
        for (auto& x : es) {
            x.value *= budget / s;
            f.entries.push_back(x);
        }
    }
    return f;
}

}  // namespace

TEST_CASE("tiny networks") {
    FlowNetwork a(2);
    a.add_arc(0, 1, 5);
    CHECK(a.max_flow(0, 1, 1e-12) == doctest::Approx(5));
    FlowNetwork d(4);
    d.add_arc(0, 1, 1);
    d.add_arc(0, 2, 1);
    d.add_arc(1, 3, 1);
    d.add_arc(2, 3, 1);
    CHECK(d.max_flow(0, 3, 1e-12) == doctest::Approx(2));
}

TEST_CASE("max flow equals the exhaustive min cut") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> cap(0, 10);
    for (int trial = 0; trial < 100; ++trial) {
        const int nodes = 2 + trial % 9;
        std::vector<RawArc> arcs;
        std::uniform_int_distribution<int> pick(0, nodes - 1);
        const int m = nodes * 2;
        for (int k = 0; k < m; ++k) {
            int a = pick(rng), b = pick(rng);
            if (a != b) arcs.push_back({a, b, std::floor(cap(rng)) / 2});
        }
        FlowNetwork net(nodes);
        for (const auto& x : arcs) net.add_arc(x.from, x.to, x.cap);
        const double f = net.max_flow(0, nodes - 1, 1e-12);
        CHECK(f == doctest::Approx(exhaustive_min_cut(nodes, 0, nodes - 1, arcs)).epsilon(1e-9));
        auto reach = net.residual_reachable(0, 1e-12);
        double c = 0;
        for (const auto& x : arcs)
            if (reach[x.from] && !reach[x.to]) c += x.cap;
        CHECK(c == doctest::Approx(f).epsilon(1e-9));
    }
}

TEST_CASE("lifting pairs gadget inflow with outflow") {
    auto h = parse_dhg("dhg 3 1\nv a 1\nv b 1\nv c 1\ne 2 T a b H c\n");
    auto g = reduce_to_digraph(h);
    auto f = lift_flow(g, h, {1.0, 0.3, 0.7, 1.0});
    REQUIRE(f.entries.size() == 2);
    CHECK(f.entries[0].i == 0);
    CHECK(f.entries[0].value == doctest::Approx(0.3));
    CHECK(f.entries[1].value == doctest::Approx(0.7));
    CHECK_THROWS_AS(lift_flow(g, h, {1.0, 0.3, 0.5, 1.0}), FlowInconsistency);

    auto one = parse_dhg("dhg 2 1\nv a 1\nv b 1\ne 1 T a H b\n");
    auto g1 = reduce_to_digraph(one);
    auto f1 = lift_flow(g1, one, {0.5, 0.5, 0.5});
    REQUIRE(f1.entries.size() == 1);
    CHECK(f1.entries[0].value == doctest::Approx(0.5));

    auto quad = parse_dhg("dhg 4 1\nv a 1\nv b 1\nv c 1\nv d 1\ne 2 T a b H c d\n");
    auto gq = reduce_to_digraph(quad);
    auto fq = lift_flow(gq, quad, {1.0, 0.5, 0.5, 0.25, 0.75});
    double row[4] = {0, 0, 0, 0}, col[4] = {0, 0, 0, 0};
    for (const auto& x : fq.entries) row[x.i] += x.value, col[x.j] += x.value;
    CHECK(row[0] == doctest::Approx(0.5));
    CHECK(row[1] == doctest::Approx(0.5));
    CHECK(col[2] == doctest::Approx(0.25));
    CHECK(col[3] == doctest::Approx(0.75));
}

TEST_CASE("hypergraph max flow respects capacities and lifts cleanly") {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        GeneratorSpec sp;
        sp.n = 6;
        sp.m = 9;
        sp.r_max = 4;
        sp.seed = seed;
        auto h = generate(sp);
        auto g = reduce_to_digraph(h);
        auto inst = make_flow_instance(g, {{0, 3.0}, {1, 2.0}}, {{4, 2.5}, {5, 4.0}});
        auto mf = max_flow(inst);
        auto f = lift_flow(g, h, mf.arc_flow);
        CHECK(capacity_violation(f, h).empty());
        std::vector<double> per(h.m(), 0.0);
        for (const auto& x : f.entries) per[x.e] += x.value;
        for (int e = 0; e < h.m(); ++e) CHECK(per[e] == doctest::Approx(mf.arc_flow[g.edge_arc[e]]));
        double src = 0;
        for (double x : mf.source_flow) src += x;
        CHECK(src == doctest::Approx(mf.value));
    }
}

TEST_CASE("flow matrix") {
    FlowAssignment zero;
    CHECK(flow_matrix(zero, 4, Side::ZeroIn).isZero());
    FlowAssignment unit;
    unit.entries.push_back({0, 1, 2, 1.0});
    CHECK((flow_matrix(unit, 4, Side::ZeroIn) - mat_A(4, 1, 2, Side::ZeroIn)).norm() == 0);
    std::mt19937_64 rng(3);
    GeneratorSpec sp;
    sp.n = 5;
    sp.m = 7;
    sp.seed = 1;
    auto h = generate(sp);
    for (int t = 0; t < 20; ++t) {
        auto f = random_flow(h, rng);
        auto g = random_gram(5, rng);
        double direct = 0;
        for (const auto& x : f.entries) direct += x.value * g.directed_distance(x.i, x.j);
        CHECK(frob(flow_matrix(f, 5, Side::ZeroIn), g.X) == doctest::Approx(direct).epsilon(1e-10));
        CHECK((flow_matrix(f, 5, Side::ZeroIn) * Vec::Ones(5)).norm() <= 1e-12);
    }
}

TEST_CASE("decomposition of a two-hop path") {
    FlowAssignment f;
    f.entries.push_back({0, 0, 1, 1.0});
    f.entries.push_back({1, 1, 2, 1.0});
    auto d = decompose(f, 3);
    REQUIRE(d.triangles.size() == 1);
    CHECK(d.triangles[0].first == Triangle{0, 1, 2});
    CHECK(d.triangles[0].second == doctest::Approx(1));
    REQUIRE(d.demand.size() == 1);
    CHECK(d.demand[0].i == 0);
    CHECK(d.demand[0].j == 2);
    Mat lhs = mat_A(3, 0, 1, Side::ZeroIn) + mat_A(3, 1, 2, Side::ZeroIn);
    Mat rhs = mat_T(3, {0, 1, 2}) + mat_A(3, 0, 2, Side::ZeroIn);
    CHECK((lhs - rhs).norm() <= 1e-14);

    FlowAssignment hop;
    hop.entries.push_back({0, 2, 0, 0.5});
    auto d1 = decompose(hop, 3);
    CHECK(d1.triangles.empty());
    REQUIRE(d1.demand.size() == 1);
    CHECK(d1.demand[0].value == doctest::Approx(0.5));
}

TEST_CASE("cycles are dropped and recorded") {
    FlowAssignment f;
    f.entries.push_back({0, 0, 1, 1.0});
    f.entries.push_back({1, 1, 0, 1.0});
    f.entries.push_back({2, 2, 2, 0.25});
    auto d = decompose(f, 3);
    CHECK(d.demand.empty());
    CHECK(d.kept.entries.empty());
    CHECK(d.dropped_cycle_mass == doctest::Approx(2.25));
}

TEST_CASE("decomposition reconstructs the kept flow") {
    std::mt19937_64 rng(11);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        GeneratorSpec sp;
        sp.n = 4 + static_cast<int>(seed % 5);
        sp.m = 10;
        sp.r_max = 4;
        sp.seed = seed;
        auto h = generate(sp);
        auto f = random_flow(h, rng);
        const int n = h.n();
        auto d = decompose(f, n);
        Mat rec = demand_matrix(d.demand, n, Side::ZeroIn);
        for (const auto& [p, v] : d.triangles) add_T(rec, p, v);
        Mat kept = flow_matrix(d.kept, n, Side::ZeroIn);
        CHECK((rec - kept).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(capacity_violation(d.kept, h).empty());
        CHECK(d.dropped_cycle_mass >= 0);
        double moved = 0;
        for (const auto& x : d.kept.entries) moved += x.value;
        CHECK(moved <= f.total() + 1e-12);
    }
}

TEST_CASE("demand norm bound") {
    CHECK(demand_norm_bound({}, 8) == 0);
    CHECK(demand_matrix({}, 3, Side::ZeroIn).isZero());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(spectral_norm(mat_A(4, i, j, Side::ZeroIn)) <= 8);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + t % 9;
        std::vector<DemandEntry> d;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && u(rng) < 0.3) d.push_back({i, j, u(rng)});
        CHECK(spectral_norm(demand_matrix(d, n, Side::ZeroIn)) <= demand_norm_bound(d, 8) + 1e-12);
    }
}

TEST_CASE("capacity duality and capacity violations") {
    std::mt19937_64 rng(13);
    GeneratorSpec sp;
    sp.n = 6;
    sp.m = 8;
    sp.seed = 4;
    auto h = generate(sp);
    CHECK(capacity_duality_check(FlowAssignment{}, h, random_gram(6, rng)));
    for (int t = 0; t < 200; ++t) CHECK(capacity_duality_check(random_flow(h, rng), h, random_gram(6, rng)));

    // Saturated single edge on an integral embedding: equality.
    auto one = parse_dhg("dhg 2 1\nv a 1\nv b 1\ne 4 T a H b\n");
    Mat v(2, 1);
    v << 0.5, -0.5;
    auto g = make_gram(v * v.transpose(), Side::ZeroIn);
    FlowAssignment sat;
    sat.entries.push_back({0, 0, 1, 2.0});
    CHECK(capacity_duality_check(sat, one, g));
    CHECK(frob(flow_matrix(sat, 2, Side::ZeroIn), g.X) == doctest::Approx(2.0 * 8 * 0.25));

    FlowAssignment over = sat;
    over.entries[0].value = 2.5;
    CHECK_FALSE(capacity_violation(over, one).empty());
    FlowAssignment wrong;
    wrong.entries.push_back({0, 1, 0, 0.1});
    CHECK_FALSE(capacity_violation(wrong, one).empty());
    FlowAssignment neg;
    neg.entries.push_back({0, 0, 1, -0.1});
    CHECK_FALSE(capacity_violation(neg, one).empty());
}
