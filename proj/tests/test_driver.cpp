#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hyperspars/driver.hpp"
#include "hyperspars/reference.hpp"

using namespace hyperspars;

namespace {

DirectedHypergraph triangle() {
    return parse_dhg(
        "dhg 3 6\nv a 1\nv b 1\nv c 1\n"
        "e 1 T a H b\ne 1 T b H c\ne 1 T c H a\ne 1 T b H a\ne 1 T c H b\ne 1 T a H c\n");
}

// exp(-eta S) on the complement of 1 via a full-space exponential: a large
// multiple of J / n pushes the 1 direction out.
Mat reference_gram(const Mat& S, const Mat& K, double eta) {
    const int n = static_cast<int>(S.rows());
    const Mat P = Mat::Identity(n, n) - Mat::Constant(n, n, 1.0 / n);
    const Mat J = Mat::Constant(n, n, 1.0 / n);
    Mat W = mat_exp(-eta * (P * S * P) - 200.0 * J);
    W = P * W * P;
    return W / frob(K, W);
}

}  // namespace

TEST_CASE("iterate normalization and centring") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    for (int n : {2, 3, 5, 8}) {
        std::vector<double> omega(n);
        for (int i = 0; i < n; ++i) omega[i] = 1 + i % 3;
        const Mat K = mat_K(omega);
        MwState mw(n);
        GramState g0 = mw.gram(K, 0.3);
        CHECK(frob(K, g0.X) == doctest::Approx(1));
        CHECK((g0.X * Vec::Ones(n)).norm() < 1e-10);
        CHECK(((mw.basis.transpose() * mw.basis) - Mat::Identity(n - 1, n - 1)).norm() < 1e-12);
        for (int rep = 0; rep < 5; ++rep) {
            Mat A(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) A(i, j) = g(rng);
            mw.S += (A + A.transpose()) / 2;
            const double eta = 0.05 + 0.2 * rep;
            double kw = 0;
            GramState gs = mw.gram(K, eta, &kw);
            CHECK(frob(K, gs.X) == doctest::Approx(1));
            CHECK((gs.X - gs.V * gs.V.transpose()).norm() < 1e-10);
            CHECK((gs.X - reference_gram(mw.S, K, eta)).norm() < 1e-8);
            CHECK(kw > 0);
            CHECK(min_eigenvalue(gs.X) > -1e-12);
        }
    }
}

TEST_CASE("theoretical iteration count") {
    auto h = triangle();
    OracleContext ctx(h, h.omega_double());
    OracleConfig cfg;
    const double alpha = 0.01;
    const double rho = ctx.rho(alpha, cfg);
    CHECK(rho == doctest::Approx(16 * alpha * 9 * std::sqrt(std::log(3.0))));
    const double t = 16 * rho * rho * 9 * std::log(3.0) / (alpha * alpha * 81);
    CHECK(theoretical_T(alpha, rho, ctx) == static_cast<std::int64_t>(std::ceil(t)));
    CHECK(theoretical_T(alpha, rho, ctx) == 44493);
    // Independent of alpha once rho scales with it.
    CHECK(theoretical_T(3 * alpha, ctx.rho(3 * alpha, cfg), ctx) == 44493);
}

TEST_CASE("default constants never certify under the default cap") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto h = generate({.n = 3 + static_cast<int>(seed % 6), .m = 8, .kappa = 1, .seed = seed});
        OracleContext ctx(h, h.omega_double());
        CHECK(theoretical_T(1.0, ctx.rho(1.0, {}), ctx) > SolverConfig{}.T_cap);
    }
}

TEST_CASE("certified lower bound on the bidirected triangle") {
    auto h = triangle();
    const auto opt = brute_force_sparsest(h);
    CHECK(opt.value == Rational(1));
    SolverConfig cfg;
    cfg.T_cap = 50000;
    cfg.record_limit = 5;
    const double alpha = to_double(opt.value) / 64;
    auto r = run_both_sides(h, h.omega_double(), alpha, cfg, 11);
    REQUIRE(r.runs.size() == 2);
    CHECK(r.outcome == RunOutcome::LowerBoundCertified);
    CHECK(r.lower_bound == doctest::Approx(alpha / 2));
    CHECK(r.lower_bound <= to_double(opt.value));
    for (const auto& rr : r.runs) {
        CHECK(rr.T_run == rr.T_theory);
        CHECK(rr.iterations == rr.T_run);
        CHECK(rr.lambda_min >= -cfg.safety_tol);
        CHECK(rr.recorded);
        CHECK(static_cast<int>(rr.certificates.size()) == rr.iterations);
        for (const auto& rec : rr.log) {
            CHECK(rec.m_norm <= 1 + 1e-6);
            CHECK(rec.width <= rr.rho * (1 + 1e-9));
        }
    }
}

TEST_CASE("conjunction rule") {
    auto h = triangle();
    SolverConfig cfg;
    cfg.T_cap = 50000;
    cfg.side_policy = SidePolicy::ZeroIn;
    auto one = run_both_sides(h, h.omega_double(), 1.0 / 64, cfg, 3);
    CHECK(one.runs.size() == 1);
    CHECK(one.outcome == RunOutcome::LowerBoundCertified);
    // A capped run on either side blocks the bound.
    cfg.side_policy = SidePolicy::Both;
    cfg.T_cap = 100;
    auto capped = run_both_sides(h, h.omega_double(), 1.0 / 64, cfg, 3);
    CHECK(capped.runs.size() == 2);
    CHECK(capped.outcome == RunOutcome::Exhausted);
    CHECK(capped.lower_bound == 0);
    for (const auto& rr : capped.runs) {
        CHECK(rr.outcome == RunOutcome::Exhausted);
        CHECK(rr.certificates.empty());  // 100 iterations exceed the record limit
        CHECK_FALSE(rr.recorded);
    }
}

TEST_CASE("planted cuts are found") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        GeneratorSpec sp;
        sp.n = 8;
        sp.m = 16;
        sp.model = GenModel::PlantedCut;
        sp.crossing_w = 0.5;
        sp.inside_w = 6;
        sp.seed = seed;
        auto h = generate(sp);
        SolverConfig cfg;
        cfg.seed = seed;
        auto res = binary_search(h, h.omega_double(), cfg);
        const auto opt = brute_force_sparsest(h);
        REQUIRE(res.cut.size() == 8u);
        CHECK(res.sparsity == doctest::Approx(to_double(sparsity(h, res.cut))));
        CHECK(res.sparsity >= to_double(opt.value) - 1e-12);
        if (opt.value > 0) {
            CHECK(res.alpha_hi / res.alpha_lo <= cfg.search_ratio * (1 + 1e-12));
            for (const auto& p : res.probes) CHECK(p.alpha > 0);
        }
        CHECK_FALSE(res.lower_bound);
    }
}

TEST_CASE("zero-out side reports cuts in original orientation") {
    auto h = parse_dhg("dhg 4 4\nv a 1\nv b 1\nv c 1\nv d 1\ne 1 T a H b\ne 1 T b H a\ne 1 T c H d\ne 1 T d H c\n");
    // Only edges inside {a,b} and {c,d}: every cut separating them is free.
    SolverConfig cfg;
    cfg.side_policy = SidePolicy::ZeroOut;
    auto r = run_both_sides(h, h.omega_double(), 0.01, cfg, 5);
    REQUIRE(r.runs.size() == 1);
    if (r.outcome == RunOutcome::CutFound) CHECK(to_double(sparsity(h, r.cut)) == doctest::Approx(r.cut_sparsity));
    SideInstance si(h, h.omega_double(), Side::ZeroOut);
    Subset s = subset_from_indices(4, {0, 1});
    CHECK(sparsity(si.h, s) == sparsity(h, si.to_original(s)));
}

TEST_CASE("disconnected instance returns sparsity zero without probes") {
    auto h = parse_dhg("dhg 4 2\nv a 1\nv b 2\nv c 1\nv d 1\ne 2 T a H b\ne 3 T c H d\n");
    auto res = binary_search(h, h.omega_double(), {});
    CHECK(res.sparsity == 0);
    CHECK(res.probes.empty());
    CHECK(sparsity(h, res.cut) == Rational(0));
}

TEST_CASE("closed non-singleton sets are found without probes") {
    // {c, d} has nothing leaving it; no singleton or co-singleton does.
    auto h = parse_dhg("dhg 4 5\nv a 1\nv b 2\nv c 1\nv d 1\n"
                       "e 3 T a H b\ne 3 T b H a\ne 1/2 T b H c\ne 3 T c H d\ne 3 T d H c\n");
    for (int i = 0; i < 4; ++i) CHECK(sparsity(h, subset_from_indices(4, {i})) > 0);
    auto res = binary_search(h, h.omega_double(), {});
    CHECK(res.sparsity == 0);
    CHECK(res.probes.empty());
    CHECK(res.cut == subset_from_indices(4, {2, 3}));
}

TEST_CASE("default bracket") {
    auto h = triangle();
    auto [lo, hi] = default_bracket(h, h.omega_double());
    CHECK(lo == doctest::Approx(1.0 / (9.0 / 4)));
    CHECK(hi == doctest::Approx(4.0));
}

TEST_CASE("binary search is deterministic in the seed") {
    auto h = generate({.n = 7, .m = 14, .kappa = 2, .model = GenModel::ExpanderLike, .seed = 9});
    SolverConfig cfg;
    cfg.seed = 42;
    auto a = binary_search(h, h.omega_double(), cfg);
    auto b = binary_search(h, h.omega_double(), cfg);
    CHECK(a.cut == b.cut);
    CHECK(a.sparsity == b.sparsity);
    REQUIRE(a.probes.size() == b.probes.size());
    for (std::size_t k = 0; k < a.probes.size(); ++k) {
        CHECK(a.probes[k].alpha == b.probes[k].alpha);
        CHECK(a.probes[k].outcome == b.probes[k].outcome);
    }
    // Each probe sits at the geometric mean of the bracket it narrows.
    auto [lo, hi] = default_bracket(h, h.omega_double());
    for (const auto& p : a.probes) {
        CHECK(p.alpha == doctest::Approx(std::sqrt(lo * hi)));
        (p.outcome == RunOutcome::CutFound ? hi : lo) = p.alpha;
    }
}

TEST_CASE("single alpha and argument checks") {
    auto h = triangle();
    auto res = single_alpha(h, h.omega_double(), 2.0, {});
    CHECK(res.probes.size() == 1);
    CHECK(res.alpha_lo == 2.0);
    CHECK_THROWS(run_algorithm1(h, h.omega_double(), 0.0, Side::ZeroIn, {}, 0));
    SolverConfig bad;
    bad.search_ratio = 1;
    CHECK_THROWS(binary_search(h, h.omega_double(), bad));
}
