#include "hyperspars/driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/QR>

namespace hyperspars {

const char* outcome_name(RunOutcome o) {
    switch (o) {
        case RunOutcome::CutFound: return "cut-found";
        case RunOutcome::LowerBoundCertified: return "lower-bound-certified";
        case RunOutcome::Aborted: return "aborted";
        case RunOutcome::Exhausted: return "exhausted";
    }
    return "?";
}

SideInstance::SideInstance(const DirectedHypergraph& orig, const std::vector<double>& omega, Side s)
    : side(s), h(s == Side::ZeroIn ? orig : orig.reversed()), ctx(h, omega) {}

Subset SideInstance::to_original(const Subset& t) const {
    if (side == Side::ZeroIn || t.empty()) return t;
    Subset out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = !t[i];
    return out;
}

std::int64_t theoretical_T(double alpha, double rho, const OracleContext& ctx) {
    const double n = ctx.n(), wh = ctx.omega_hat;
    const double t = std::ceil(16 * ctx.kappa * ctx.kappa * rho * rho * n * n * std::log(n) /
                               (alpha * alpha * wh * wh * wh * wh));
    if (!(t < 9e18)) return std::numeric_limits<std::int64_t>::max();
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(t));
}

MwState::MwState(int n_) : n(n_), S(Mat::Zero(n_, n_)) {
    Eigen::HouseholderQR<Mat> qr(Mat::Ones(n, 1));
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    basis = q.rightCols(n - 1);
}

GramState MwState::gram(const Mat& K, double eta, double* kw) const {
    Eigen::SelfAdjointEigenSolver<Mat> es(basis.transpose() * S * basis);
    const Vec a = -eta * es.eigenvalues();
    const double shift = a.maxCoeff();
    const Mat Q = basis * es.eigenvectors();
    Vec e = (a.array() - shift).exp();
    double denom = 0;
    for (int k = 0; k < e.size(); ++k) denom += e[k] * Q.col(k).dot(K * Q.col(k));
    if (kw) *kw = denom * std::exp(shift);
    GramState g;
    g.side = Side::ZeroIn;
    g.V = Q * (e / denom).cwiseSqrt().asDiagonal();
    g.X = g.V * g.V.transpose();
    return g;
}

Mat update_matrix(const DualCertificate& c, const OracleContext& ctx, double rho) {
    return -dual_residual(c, ctx, Side::ZeroIn) / rho;
}

namespace {

void consider(Subset& best, double& best_sp, const Subset& s, double sp) {
    if (s.empty()) return;
    if (best_sp < 0 || sp < best_sp) {
        best = s;
        best_sp = sp;
    }
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

RunReport run_algorithm1(const DirectedHypergraph& h, const std::vector<double>& omega, double alpha, Side side,
                         const SolverConfig& cfg, std::uint64_t run_seed) {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    SideInstance si(h, omega, side);
    const OracleContext& ctx = si.ctx;
    const int n = ctx.n();
    RunReport rep;
    rep.alpha = alpha;
    rep.side = side;
    rep.rho = ctx.rho(alpha, cfg.oracle);
    rep.T_theory = theoretical_T(alpha, rep.rho, ctx);
    rep.T_run = static_cast<int>(std::min<std::int64_t>(rep.T_theory, cfg.T_cap));
    rep.eta = cfg.eta_override ? *cfg.eta_override : std::sqrt(std::log(static_cast<double>(n)) / rep.T_run);
    const bool can_certify = rep.T_run == rep.T_theory;
    std::mt19937_64 rng(run_seed);
    MwState mw(n);

    auto finish_certs = [&] {
        rep.recorded = rep.outcome == RunOutcome::LowerBoundCertified || rep.iterations <= cfg.record_limit;
        if (!rep.recorded) rep.certificates.clear();
    };

    for (int t = 1; t <= rep.T_run; ++t) {
        rep.iterations = t;
        IterationRecord rec;
        rec.t = t;
        GramState g = mw.gram(ctx.K, rep.eta, &rec.kw);
        OracleOutcome o;
        try {
            o = run_oracle(alpha, g, ctx, cfg.oracle, rng, cfg.tol);
        } catch (const std::exception& ex) {
            rep.outcome = RunOutcome::Aborted;
            rep.reason = std::string("oracle error: ") + ex.what();
            rep.log.push_back(rec);
            finish_certs();
            return rep;
        }
        if (o.best_candidate_sparsity >= 0)
            consider(rep.best_cut, rep.best_sparsity, si.to_original(o.best_candidate), o.best_candidate_sparsity);
        rec.branch = o.branch;
        rec.fallback = o.fallback;
        if (o.kind == OracleOutcome::Kind::Cut) {
            rep.log.push_back(rec);
            rep.outcome = RunOutcome::CutFound;
            rep.cut = si.to_original(o.cut);
            rep.cut_sparsity = o.cut_sparsity;
            rep.ratio_bound = o.ratio_bound;
            consider(rep.best_cut, rep.best_sparsity, rep.cut, rep.cut_sparsity);
            finish_certs();
            return rep;
        }
        if (o.kind == OracleOutcome::Kind::Failure) {
            rec.branch = "failure";
            rep.log.push_back(rec);
            rep.outcome = RunOutcome::Aborted;
            rep.reason = "oracle failure at t=" + std::to_string(t) + ": " + o.reason;
            finish_certs();
            return rep;
        }
        rec.width = o.width;
        Mat M = update_matrix(o.dual, ctx, rep.rho);
        rec.m_norm = spectral_norm(M);
        rep.log.push_back(rec);
        if (rec.m_norm > 1 + 1e-6) {
            rep.outcome = RunOutcome::Aborted;
            rep.reason = "update norm " + std::to_string(rec.m_norm) + " exceeds 1 at t=" + std::to_string(t) +
                         " (observed width " + std::to_string(o.width) + ", rho " + std::to_string(rep.rho) + ")";
            finish_certs();
            return rep;
        }
        mw.S += M;
        if (can_certify || static_cast<int>(rep.certificates.size()) < cfg.record_limit)
            rep.certificates.push_back(std::move(o.dual));
    }
    if (!can_certify) {
        rep.outcome = RunOutcome::Exhausted;
        rep.reason = "T_cap " + std::to_string(rep.T_run) + " below theoretical T " + std::to_string(rep.T_theory);
        finish_certs();
        return rep;
    }
    Mat zk = (rep.rho / rep.T_run) * mw.S + (alpha / 2) * ctx.K;
    rep.lambda_min = min_eigenvalue(zk);
    if (rep.lambda_min >= -cfg.safety_tol) {
        rep.outcome = RunOutcome::LowerBoundCertified;
    } else {
        rep.outcome = RunOutcome::Aborted;
        rep.reason = "monotone-safety check failed: lambda_min = " + std::to_string(rep.lambda_min);
    }
    finish_certs();
    return rep;
}

SidesReport run_both_sides(const DirectedHypergraph& h, const std::vector<double>& omega, double alpha,
                           const SolverConfig& cfg, std::uint64_t probe_seed) {
    SidesReport r;
    r.alpha = alpha;
    std::vector<Side> sides;
    if (cfg.side_policy != SidePolicy::ZeroOut) sides.push_back(Side::ZeroIn);
    if (cfg.side_policy != SidePolicy::ZeroIn) sides.push_back(Side::ZeroOut);
    bool all_cert = true, any_abort = false;
    double best = -1;
    for (Side s : sides) {
        r.runs.push_back(run_algorithm1(h, omega, alpha, s, cfg, mix(probe_seed, s == Side::ZeroIn ? 1 : 2)));
        const RunReport& rr = r.runs.back();
        if (rr.outcome == RunOutcome::CutFound) consider(r.cut, best, rr.cut, rr.cut_sparsity);
        all_cert = all_cert && rr.outcome == RunOutcome::LowerBoundCertified;
        any_abort = any_abort || rr.outcome == RunOutcome::Aborted;
    }
    if (best >= 0) {
        r.outcome = RunOutcome::CutFound;
        r.cut_sparsity = best;
    } else if (all_cert) {
        r.outcome = RunOutcome::LowerBoundCertified;
        r.lower_bound = alpha / 2;
    } else {
        r.outcome = any_abort ? RunOutcome::Aborted : RunOutcome::Exhausted;
    }
    return r;
}

std::pair<double, double> default_bracket(const DirectedHypergraph& h, const std::vector<double>& omega) {
    const int n = h.n();
    double hi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        Subset s(n, false);
        s[i] = true;
        hi = std::min(hi, sparsity_weighted(h, s, omega));
        s.flip();
        hi = std::min(hi, sparsity_weighted(h, s, omega));
    }
    double wmin = std::numeric_limits<double>::infinity();
    for (const auto& e : h.edges())
        if (e.weight > 0) wmin = std::min(wmin, to_double(e.weight));
    double wh = 0;
    for (double w : omega) wh += w;
    return {wmin / (wh * wh / 4), 4 * hi};
}

namespace {

// Vertices reachable from i along positive-weight edges, tail to head. A
// proper closure has nothing leaving it, so its sparsity is zero.
Subset closure(const DirectedHypergraph& h, int i) {
    Subset seen(h.n(), false);
    std::vector<int> stack{i};
    seen[i] = true;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (const auto& e : h.edges()) {
            if (!(e.weight > 0) || !std::binary_search(e.tail.begin(), e.tail.end(), u)) continue;
            for (int v : e.head)
                if (!seen[v]) seen[v] = true, stack.push_back(v);
        }
    }
    return seen;
}

SearchResult seed_result(const DirectedHypergraph& h, const std::vector<double>& omega) {
    SearchResult res;
    res.sparsity = -1;
    const int n = h.n();
    for (int i = 0; i < n; ++i) {
        Subset s(n, false);
        s[i] = true;
        consider(res.cut, res.sparsity, s, sparsity_weighted(h, s, omega));
        s.flip();
        consider(res.cut, res.sparsity, s, sparsity_weighted(h, s, omega));
    }
    for (int i = 0; i < n && res.sparsity > 0; ++i) {
        Subset c = closure(h, i);
        if (std::count(c.begin(), c.end(), true) < n) consider(res.cut, res.sparsity, c, sparsity_weighted(h, c, omega));
    }
    return res;
}

void absorb(SearchResult& res, const SidesReport& p) {
    for (const auto& r : p.runs) {
        if (r.outcome == RunOutcome::CutFound) consider(res.cut, res.sparsity, r.cut, r.cut_sparsity);
        if (r.best_sparsity >= 0) consider(res.cut, res.sparsity, r.best_cut, r.best_sparsity);
    }
    if (p.outcome == RunOutcome::LowerBoundCertified)
        res.lower_bound = std::max(res.lower_bound.value_or(0.0), p.lower_bound);
}

}  // namespace

SearchResult binary_search(const DirectedHypergraph& h, const std::vector<double>& omega, const SolverConfig& cfg) {
    if (!(cfg.search_ratio > 1)) throw std::invalid_argument("search_ratio must exceed 1");
    SearchResult res = seed_result(h, omega);
    auto [lo, hi] = default_bracket(h, omega);
    if (cfg.alpha_lo) lo = *cfg.alpha_lo;
    if (cfg.alpha_hi) hi = *cfg.alpha_hi;
    if (res.sparsity == 0 && !cfg.alpha_hi) {
        res.alpha_lo = res.alpha_hi = 0;
        return res;
    }
    if (!(lo > 0) || !(lo <= hi)) throw std::invalid_argument("need 0 < alpha_lo <= alpha_hi");
    std::uint64_t k = 0;
    do {
        const double mid = std::sqrt(lo * hi);
        res.probes.push_back(run_both_sides(h, omega, mid, cfg, mix(cfg.seed, k++)));
        const SidesReport& p = res.probes.back();
        absorb(res, p);
        if (p.outcome == RunOutcome::CutFound)
            hi = mid;
        else
            lo = mid;
        if (res.sparsity == 0) break;
    } while (hi / lo > cfg.search_ratio);
    res.alpha_lo = lo;
    res.alpha_hi = hi;
    return res;
}

SearchResult single_alpha(const DirectedHypergraph& h, const std::vector<double>& omega, double alpha,
                          const SolverConfig& cfg) {
    SearchResult res = seed_result(h, omega);
    res.probes.push_back(run_both_sides(h, omega, alpha, cfg, mix(cfg.seed, 0)));
    absorb(res, res.probes.back());
    res.alpha_lo = res.alpha_hi = alpha;
    return res;
}

}  // namespace hyperspars
