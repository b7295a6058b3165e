#include "hyperspars/reference.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>

namespace hyperspars {

namespace {

using Mask = std::uint32_t;

Mask to_mask(const std::vector<int>& v) {
    Mask m = 0;
    for (int i : v) m |= Mask{1} << i;
    return m;
}

// Sorted-index-list order on masks.
bool lex_less(Mask a, Mask b) {
    if (a == b) return false;
    const Mask diff = a ^ b;
    const int i = __builtin_ctz(diff);
    const Mask above = ~((Mask{2} << i) - 1);
    if (a & (Mask{1} << i)) return (b & above) != 0;
    return (a & above) == 0;
}

struct Scaled {
    std::vector<BigInt> w;  // edge weights times the common denominator
    BigInt denom;
};

Scaled scale_weights(const std::vector<Rational>& ws) {
    Scaled s;
    s.denom = 1;
    for (const auto& r : ws) s.denom = boost::multiprecision::lcm(s.denom, denominator(r));
    for (const auto& r : ws) s.w.push_back(numerator(r) * (s.denom / denominator(r)));
    return s;
}

// Fraction num / den compared by cross multiplication in type W.
template <class I, class W>
struct Frac {
    I num, den;
    bool operator<(const Frac& o) const { return W(num) * W(o.den) < W(o.num) * W(den); }
    bool operator==(const Frac& o) const { return W(num) * W(o.den) == W(o.num) * W(den); }
};

template <class I, class W, class Score>
std::pair<Mask, Frac<I, W>> scan(int n, Score score) {
    const Mask full = (Mask{1} << n) - 1;
    bool have = false;
    Mask best = 0;
    Frac<I, W> bv{0, 1};
    for (Mask s = 1; s < full; ++s) {
        Frac<I, W> v;
        if (!score(s, v)) continue;
        if (!have || v < bv || (v == bv && lex_less(s, best))) {
            have = true;
            best = s;
            bv = v;
        }
    }
    if (!have) throw UndefinedExpansion("no admissible subset");
    return {best, bv};
}

Subset mask_subset(Mask s, int n) {
    Subset out(n);
    for (int i = 0; i < n; ++i) out[i] = (s >> i) & 1;
    return out;
}

void guard(const DirectedHypergraph& h) {
    if (h.n() > kBruteForceMaxN)
        throw TooLarge("brute force limited to n <= " + std::to_string(kBruteForceMaxN) + ", got " +
                       std::to_string(h.n()));
}

struct EdgeMasks {
    std::vector<Mask> tail, head;
};

EdgeMasks edge_masks(const DirectedHypergraph& h) {
    EdgeMasks em;
    for (const auto& e : h.edges()) {
        em.tail.push_back(to_mask(e.tail));
        em.head.push_back(to_mask(e.head));
    }
    return em;
}

template <class I, class W>
ExactCut sparsest_impl(const DirectedHypergraph& h, const std::vector<I>& w, const BigInt& denom) {
    const int n = h.n();
    const Mask full = (Mask{1} << n) - 1;
    const auto em = edge_masks(h);
    std::vector<std::int64_t> om = h.omega();
    const std::int64_t total = h.omega_hat();
    auto [best, v] = scan<I, W>(n, [&](Mask s, Frac<I, W>& out) {
        I cut = 0;
        std::int64_t ws = 0;
        for (int i = 0; i < n; ++i)
            if ((s >> i) & 1) ws += om[i];
        const Mask sc = full & ~s;
        for (std::size_t e = 0; e < w.size(); ++e)
            if ((em.tail[e] & s) && (em.head[e] & sc)) cut += w[e];
        out = {cut, I(ws * (total - ws))};
        return true;
    });
    return {mask_subset(best, n), Rational(BigInt(v.num)) / Rational(BigInt(v.den) * denom)};
}

template <class I, class W>
ExactCut expansion_impl(const DirectedHypergraph& h, const std::vector<I>& w, const BigInt& denom) {
    const int n = h.n();
    const Mask full = (Mask{1} << n) - 1;
    const auto em = edge_masks(h);
    std::vector<I> deg(n, I(0));
    I total = 0;
    for (std::size_t e = 0; e < w.size(); ++e)
        for (int i = 0; i < n; ++i)
            if (((em.tail[e] | em.head[e]) >> i) & 1) deg[i] += w[e], total += w[e];
    auto [best, v] = scan<I, W>(n, [&](Mask s, Frac<I, W>& out) {
        I ws = 0;
        for (int i = 0; i < n; ++i)
            if ((s >> i) & 1) ws += deg[i];
        if (ws == 0 || W(2) * W(ws) > W(total)) return false;
        const Mask sc = full & ~s;
        I op = 0, in = 0;
        for (std::size_t e = 0; e < w.size(); ++e) {
            if ((em.tail[e] & s) && (em.head[e] & sc)) op += w[e];
            if ((em.tail[e] & sc) && (em.head[e] & s)) in += w[e];
        }
        out = {std::min(op, in), ws};
        return true;
    });
    (void)denom;  // the common scale cancels in cut / degree
    return {mask_subset(best, n), Rational(BigInt(v.num)) / Rational(BigInt(v.den))};
}

template <class F>
ExactCut dispatch(const DirectedHypergraph& h, int fanout, F&& run) {
    std::vector<Rational> ws;
    for (const auto& e : h.edges()) ws.push_back(e.weight);
    Scaled sc = scale_weights(ws);
    BigInt sum = 0;
    for (const auto& x : sc.w) sum += x;
    if (sum * fanout < (BigInt(1) << 62)) {
        std::vector<std::int64_t> w;
        for (const auto& x : sc.w) w.push_back(static_cast<std::int64_t>(x));
        return run(w, sc.denom, std::int64_t{});
    }
    return run(sc.w, sc.denom, BigInt{});
}

}  // namespace

ExactCut brute_force_sparsest(const DirectedHypergraph& h) {
    guard(h);
    return dispatch(h, 1, [&](const auto& w, const BigInt& d, auto tag) {
        using I = decltype(tag);
        if constexpr (std::is_same_v<I, std::int64_t>)
            return sparsest_impl<std::int64_t, __int128>(h, w, d);
        else
            return sparsest_impl<BigInt, BigInt>(h, w, d);
    });
}

ExactCut brute_force_expansion(const DirectedHypergraph& h) {
    guard(h);
    return dispatch(h, std::max(1, h.n()), [&](const auto& w, const BigInt& d, auto tag) {
        using I = decltype(tag);
        if constexpr (std::is_same_v<I, std::int64_t>)
            return expansion_impl<std::int64_t, __int128>(h, w, d);
        else
            return expansion_impl<BigInt, BigInt>(h, w, d);
    });
}

GenModel parse_model(const std::string& s) {
    if (s == "uniform-random" || s == "uniform") return GenModel::UniformRandom;
    if (s == "planted-cut" || s == "planted") return GenModel::PlantedCut;
    if (s == "expander-like" || s == "expander") return GenModel::ExpanderLike;
    throw std::invalid_argument("unknown generator model '" + s + "'");
}

const char* model_name(GenModel m) {
    switch (m) {
        case GenModel::UniformRandom: return "uniform-random";
        case GenModel::PlantedCut: return "planted-cut";
        case GenModel::ExpanderLike: return "expander-like";
    }
    return "?";
}

namespace {

Rational decimal(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed);
    return parse_rational(std::string_view(buf, res.ptr - buf));
}

Hyperedge random_edge(int n, int r_max, std::mt19937_64& rng) {
    const int k = std::uniform_int_distribution<int>(2, std::min(r_max, n))(rng);
    std::vector<int> verts(n);
    std::iota(verts.begin(), verts.end(), 0);
    for (int i = 0; i < k; ++i) std::swap(verts[i], verts[std::uniform_int_distribution<int>(i, n - 1)(rng)]);
    const int t = std::uniform_int_distribution<int>(1, k - 1)(rng);
    Hyperedge e;
    e.tail.assign(verts.begin(), verts.begin() + t);
    e.head.assign(verts.begin() + t, verts.begin() + k);
    std::sort(e.tail.begin(), e.tail.end());
    std::sort(e.head.begin(), e.head.end());
    return e;
}

}  // namespace

DirectedHypergraph generate(const GeneratorSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("generator needs n >= 2");
    if (spec.n > 100000) throw std::invalid_argument("generator n too large");
    if (spec.m < 0) throw std::invalid_argument("generator needs m >= 0");
    if (spec.r_max < 2) throw std::invalid_argument("generator needs r_max >= 2");
    if (spec.kappa < 1 || spec.kappa > spec.n) throw std::invalid_argument("generator needs 1 <= kappa <= n");
    const auto wlo = static_cast<std::int64_t>(std::ceil(spec.w_lo));
    const auto whi = static_cast<std::int64_t>(std::floor(spec.w_hi));
    if (wlo < 0 || wlo > whi) throw std::invalid_argument("weight range holds no non-negative integer");
    if (spec.model == GenModel::PlantedCut &&
        (!(spec.balance > 0) || !(spec.balance < 1) || spec.inside_w < 0 || spec.crossing_w < 0))
        throw std::invalid_argument("planted model needs 0 < balance < 1 and non-negative weights");
    const int cycle = spec.n == 2 ? 2 : 2 * spec.n;
    if (spec.model == GenModel::ExpanderLike && spec.m < cycle)
        throw std::invalid_argument("expander model needs m >= " + std::to_string(cycle));

    std::mt19937_64 rng(spec.seed);
    const int n = spec.n;
    std::vector<std::string> names;
    std::vector<std::int64_t> omega;
    for (int i = 0; i < n; ++i) {
        names.push_back("v" + std::to_string(i + 1));
        omega.push_back(std::uniform_int_distribution<std::int64_t>(1, spec.kappa)(rng));
    }
    std::uniform_int_distribution<std::int64_t> wdist(wlo, whi);
    std::vector<Hyperedge> edges;
    if (spec.model == GenModel::ExpanderLike) {
        for (int i = 0; i < n && static_cast<int>(edges.size()) < cycle; ++i) {
            const int j = (i + 1) % n;
            edges.push_back({{i}, {j}, Rational(wdist(rng))});
            edges.push_back({{j}, {i}, Rational(wdist(rng))});
        }
    }
    const int planted = static_cast<int>(std::ceil(spec.balance * n));
    const Rational inside = decimal(spec.inside_w), crossing = decimal(spec.crossing_w);
    while (static_cast<int>(edges.size()) < spec.m) {
        Hyperedge e = random_edge(n, spec.r_max, rng);
        if (spec.model == GenModel::PlantedCut) {
            const bool leaves = e.tail.front() < planted && e.head.back() >= planted;
            e.weight = leaves ? crossing : inside;
        } else {
            e.weight = Rational(wdist(rng));
        }
        edges.push_back(std::move(e));
    }
    return DirectedHypergraph(std::move(names), std::move(omega), std::move(edges));
}

}  // namespace hyperspars
