#include "hyperspars/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hyperspars {

int OracleConfig::directions(int n) const {
    if (n_dirs > 0) return n_dirs;
    return 8 * std::max(1, static_cast<int>(std::ceil(std::log2(std::max(2, n)))));
}

int OracleConfig::path_cap(double omega_hat) const {
    return std::max(2, static_cast<int>(std::ceil(2 * C_path / mu * std::sqrt(std::log(omega_hat)))));
}

OracleContext::OracleContext(const DirectedHypergraph& hg, std::vector<double> weights)
    : h(&hg), omega(std::move(weights)), g(reduce_to_digraph(hg)), K(mat_K(omega)) {
    omega_hat = std::accumulate(omega.begin(), omega.end(), 0.0);
    kappa = *std::max_element(omega.begin(), omega.end());
}

double OracleContext::log_kn() const { return std::log(kappa * n()); }

double OracleContext::rho(double alpha, const OracleConfig& cfg) const {
    return cfg.c_rho * alpha * omega_hat * omega_hat * std::sqrt(log_kn());
}

double OracleContext::ratio_bound_case2(double alpha, const OracleConfig& cfg) const {
    return cfg.c_A2 * std::sqrt(log_kn()) * alpha;
}

Mat dual_residual(const DualCertificate& c, const OracleContext& ctx, Side side) {
    Mat m = c.z * ctx.K;
    for (const auto& [p, v] : c.f) add_T(m, p, v);
    m -= flow_matrix(c.flow, ctx.n(), side);
    return m;
}

CheckResult certificate_check(const DualCertificate& c, double alpha, const GramState& g, const OracleContext& ctx,
                              double rho) {
    CheckResult r;
    auto fail = [&](const char* bullet, std::string detail) {
        r.ok = false;
        r.bullet = bullet;
        r.detail = std::move(detail);
        return r;
    };
    const int n = ctx.n();
    if (!(c.z >= alpha)) return fail("z>=alpha", "z = " + std::to_string(c.z) + " < alpha = " + std::to_string(alpha));
    for (const auto& [p, v] : c.f) {
        if (!(v >= 0) || !std::isfinite(v)) return fail("f_p>=0", "negative or non-finite triangle weight");
        if (p.i < 0 || p.j < 0 || p.k < 0 || p.i >= n || p.j >= n || p.k >= n || p.i == p.j || p.j == p.k ||
            p.i == p.k)
            return fail("f_p>=0", "malformed triangle");
    }
    if (auto why = capacity_violation(c.flow, *ctx.h); !why.empty()) return fail("capacity", why);
    double lhs = c.z * frob(ctx.K, g.X);
    for (const auto& [p, v] : c.f) lhs += v * g.triangle_form(p);
    double rhs = 0;
    for (const auto& x : c.flow.entries) rhs += x.value * g.directed_distance(x.i, x.j);
    if (!(lhs <= rhs + 1e-7))
        return fail("dual-inequality", "(sum f T + z K).X = " + std::to_string(lhs) + " > F.X = " + std::to_string(rhs));
    const Mat F = flow_matrix(c.flow, n, g.side);
    const double fscale = std::max(1.0, F.cwiseAbs().maxCoeff());
    if ((F * Vec::Ones(n)).cwiseAbs().maxCoeff() > 1e-9 * fscale) return fail("F1=0", "F does not annihilate 1");
    r.width = spectral_norm(dual_residual(c, ctx, g.side));
    if (!(r.width <= rho * (1 + 1e-9)))
        return fail("width", "width " + std::to_string(r.width) + " exceeds rho " + std::to_string(rho));
    return r;
}

Subset ball(const GramState& g, int i, double radius) {
    Subset b(g.n(), false);
    const double r2 = radius * radius;
    for (int j = 0; j < g.n(); ++j) b[j] = g.sqdist(i, j) <= r2;
    return b;
}

double subset_weight(const Subset& s, const std::vector<double>& omega) {
    double w = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i]) w += omega[i];
    return w;
}

namespace {

bool proper(const Subset& s) {
    auto k = std::count(s.begin(), s.end(), true);
    return k > 0 && k < static_cast<long>(s.size());
}

// Tracks the cheapest cut met along the way.
void note_candidate(OracleOutcome& o, const Subset& s, const OracleContext& ctx) {
    if (!proper(s)) return;
    double sp = sparsity_weighted(*ctx.h, s, ctx.omega);
    if (o.best_candidate_sparsity < 0 || sp < o.best_candidate_sparsity) {
        o.best_candidate = s;
        o.best_candidate_sparsity = sp;
    }
}

Subset vertex_part(const Subset& reach, int n) { return Subset(reach.begin(), reach.begin() + n); }

bool try_cut(OracleOutcome& o, const Subset& s, double bound, const OracleContext& ctx, const char* branch,
             bool fallback) {
    if (!proper(s)) return false;
    double sp = sparsity_weighted(*ctx.h, s, ctx.omega);
    if (!(sp <= bound)) return false;
    o.kind = OracleOutcome::Kind::Cut;
    o.branch = branch;
    o.fallback = fallback;
    o.cut = s;
    o.cut_sparsity = sp;
    o.ratio_bound = bound;
    return true;
}

// Lift a max flow, decompose it, and scale it so that D.X equals alpha.
bool try_flow_dual(OracleOutcome& o, double alpha, const MaxFlowResult& mf, const GramState& g,
                   const OracleContext& ctx, const OracleConfig& cfg, const char* branch, bool fallback,
                   std::string& why) {
    FlowAssignment fa = lift_flow(ctx.g, *ctx.h, mf.arc_flow);
    FlowDecomposition dec = decompose(fa, ctx.n());
    const double ddot = demand_dot(dec.demand, g);
    if (!(ddot >= alpha)) {
        why = "D.X = " + std::to_string(ddot) + " below alpha";
        return false;
    }
    const double lam = alpha / ddot;
    DualCertificate c;
    c.z = alpha;
    c.flow = std::move(dec.kept);
    c.flow.scale(lam);
    for (auto& [p, v] : dec.triangles) c.f.emplace_back(p, v * lam);
    auto chk = certificate_check(c, alpha, g, ctx, ctx.rho(alpha, cfg));
    if (!chk.ok) {
        why = "flow dual rejected at " + chk.bullet + ": " + chk.detail;
        return false;
    }
    o.kind = OracleOutcome::Kind::Dual;
    o.branch = branch;
    o.fallback = fallback;
    o.dual = std::move(c);
    o.width = chk.width;
    return true;
}

}  // namespace

OracleOutcome case1(double alpha, const GramState& g, const OracleContext& ctx, const OracleConfig& cfg, int i0) {
    OracleOutcome o;
    const int n = ctx.n();
    const double wh = ctx.omega_hat;
    Subset L = ball(g, i0, 1.0 / (std::sqrt(8.0) * wh));
    Subset R(n);
    for (int i = 0; i < n; ++i) R[i] = !L[i];
    const double wL = subset_weight(L, ctx.omega), wR = subset_weight(R, ctx.omega);
    if (wR <= 0) {
        o.reason = "case 1 ball covers every vertex";
        return o;
    }
    const double gamma = wR / wL;
    double QL = 0, QR = 0;
    std::vector<Terminal> lt, rt;
    for (int i = 0; i < n; ++i) {
        if (L[i]) {
            QL += gamma * ctx.omega[i] * g.anchor_sqdist(i);
            lt.push_back({i, cfg.cap_c1 * gamma * wh * ctx.omega[i] * alpha});
        } else {
            QR += ctx.omega[i] * g.anchor_sqdist(i);
            rt.push_back({i, cfg.cap_c1 * wh * ctx.omega[i] * alpha});
        }
    }
    o.reversed = QL > QR;
    auto inst = o.reversed ? make_flow_instance(ctx.g, rt, lt) : make_flow_instance(ctx.g, lt, rt);
    MaxFlowResult mf = max_flow(inst);
    o.flow_value = mf.value;
    const double total = cfg.cap_c1 * wh * wR * alpha;
    const bool saturated = mf.value >= total * (1 - 1e-9);
    const Subset S = vertex_part(mf.reachable, n);
    note_candidate(o, S, ctx);
    const double bound = ctx.ratio_bound_case1(alpha, cfg);
    std::string why;
    if (!saturated && try_cut(o, S, bound, ctx, "case1.A", false)) return o;
    if (try_flow_dual(o, alpha, mf, g, ctx, cfg, "case1.B", !saturated, why)) return o;
    if (saturated && try_cut(o, S, bound, ctx, "case1.A", true)) return o;
    o.kind = OracleOutcome::Kind::Failure;
    o.reason = std::string("case 1 ") + (saturated ? "saturated" : "unsaturated") + " and no valid output: " + why;
    return o;
}

std::optional<Preprocessed> preprocess_wellspread(const GramState& g, const OracleContext& ctx) {
    const double r = 3.0 / ctx.omega_hat;
    Preprocessed best;
    double bw = -1;
    for (int i = 0; i < ctx.n(); ++i) {
        Subset b = ball(g, i, r);
        double w = subset_weight(b, ctx.omega);
        if (w > bw) {
            bw = w;
            best.S = std::move(b);
            best.i0 = i;
        }
    }
    if (bw < ctx.omega_hat / 2) return std::nullopt;
    return best;
}

std::optional<DirectionSplit> direction_split(const Mat& vhat, const Vec& anchor, const Subset& S,
                                              const std::vector<double>& omega, double omega_hat,
                                              const OracleConfig& cfg, std::mt19937_64& rng) {
    const int n = static_cast<int>(vhat.rows());
    const int d = static_cast<int>(vhat.cols());
    std::normal_distribution<double> gauss(0.0, 1.0);
    DirectionSplit out;
    out.u.resize(d);
    for (int k = 0; k < d; ++k) out.u[k] = gauss(rng);
    const double un = out.u.norm();
    if (!(un > 0)) return std::nullopt;
    out.u /= un;

    std::vector<int> members;
    for (int i = 0; i < n; ++i)
        if (S[i]) members.push_back(i);
    Vec proj = vhat * out.u;
    std::sort(members.begin(), members.end(),
              [&](int a, int b) { return proj[a] != proj[b] ? proj[a] < proj[b] : a < b; });
    const double need = cfg.c * omega_hat;
    std::size_t a = 0;
    for (double w = 0; a < members.size() && w < need; ++a) w += omega[members[a]];
    std::size_t b = 0;
    for (double w = 0; b < members.size() && w < need; ++b) w += omega[members[members.size() - 1 - b]];
    if (a == 0 || b == 0 || a + b > members.size()) return std::nullopt;
    std::vector<int> L0(members.begin(), members.begin() + a), R0(members.end() - b, members.end());
    out.stretch = proj[R0.front()] - proj[L0.back()];
    if (!(out.stretch >= cfg.sigma / std::sqrt(omega_hat))) return std::nullopt;

    auto dist = [&](int i) { return (vhat.row(i).transpose() - anchor).norm(); };
    std::vector<int> byd = L0;
    std::sort(byd.begin(), byd.end(), [&](int x, int y) { return dist(x) != dist(y) ? dist(x) < dist(y) : x < y; });
    double wl0 = 0;
    for (int i : L0) wl0 += omega[i];
    double r = 0, acc = 0;
    for (int i : byd) {
        acc += omega[i];
        r = dist(i);
        if (acc >= wl0 / 2) break;
    }
    Subset Lm(n, false), Lp(n, false), Rm(n, false), Rp(n, false);
    for (int i : L0) {
        if (dist(i) <= r) Lm[i] = true;
        if (dist(i) >= r) Lp[i] = true;
    }
    double wRp = 0, wRm = 0;
    for (int i : R0) {
        if (dist(i) <= r) Rm[i] = true, wRm += omega[i];
        if (dist(i) >= r) Rp[i] = true, wRp += omega[i];
    }
    if (wRp >= wRm) {
        out.L = Lm;
        out.R = Rp;
    } else {
        out.L = Rm;
        out.R = Lp;
    }
    if (std::count(out.L.begin(), out.L.end(), true) == 0) return std::nullopt;
    if (std::count(out.R.begin(), out.R.end(), true) == 0) return std::nullopt;
    return out;
}

std::optional<ViolatedPath> find_violated_path(const GramState& g, int max_hops, double threshold) {
    const int n = g.n();
    if (n < 3 || max_hops < 2) return std::nullopt;
    Mat d1(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d1(i, j) = g.sqdist(i, j);
    // level[h](a, b): shortest walk with at most h + 1 hops; pred[h](a, b) is
    // the vertex before b when level h improved on level h - 1, else -1.
    std::vector<Mat> level{d1};
    std::vector<Eigen::MatrixXi> pred{Eigen::MatrixXi::Constant(n, n, -1)};
    for (int h = 1; h < max_hops; ++h) {
        Mat cur = level.back();
        Eigen::MatrixXi pr = Eigen::MatrixXi::Constant(n, n, -1);
        const Mat& prev = level.back();
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (a == b) continue;
                for (int w = 0; w < n; ++w) {
                    if (w == a || w == b) continue;
                    double c = prev(a, w) + d1(w, b);
                    if (c < cur(a, b)) {
                        cur(a, b) = c;
                        pr(a, b) = w;
                    }
                }
            }
        level.push_back(std::move(cur));
        pred.push_back(std::move(pr));
    }
    const Mat& top = level.back();
    double best = 0;
    int ba = -1, bb = -1;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            double v = top(a, b) - d1(a, b);
            if (v < best) {
                best = v;
                ba = a;
                bb = b;
            }
        }
    if (ba < 0 || !(best <= -threshold)) return std::nullopt;
    std::vector<int> rev{bb};
    int h = max_hops - 1, a = ba, b = bb;
    while (true) {
        while (h > 0 && pred[h](a, b) < 0) --h;
        if (h == 0) break;
        int w = pred[h](a, b);
        rev.push_back(w);
        b = w;
        --h;
    }
    rev.push_back(ba);
    ViolatedPath p;
    p.vertices.assign(rev.rbegin(), rev.rend());
    double hops = 0;
    for (std::size_t j = 1; j < p.vertices.size(); ++j) hops += d1(p.vertices[j - 1], p.vertices[j]);
    p.violation = hops - d1(ba, bb);
    if (!(p.violation <= -threshold) || p.vertices.size() < 3) return std::nullopt;
    return p;
}

OracleOutcome case2(double alpha, const GramState& g, const OracleContext& ctx, const OracleConfig& cfg,
                    std::mt19937_64& rng) {
    OracleOutcome o;
    const int n = ctx.n();
    const double wh = ctx.omega_hat;
    auto pre = preprocess_wellspread(g, ctx);
    if (!pre) {
        o.reason = "inconsistent state: no ball B(i, 3/omega_hat) carries half the weight";
        return o;
    }
    const double sc = wh / 3.0;
    Mat vhat = sc * (g.V.rowwise() - g.V.row(pre->i0));
    Vec anchor = sc * ((g.side == Side::ZeroIn ? 1.0 : -1.0) * g.V.row(0) - g.V.row(pre->i0)).transpose();

    const double slog = std::sqrt(std::log(wh));
    const double beta = cfg.beta();
    const double threshold = cfg.c * beta * wh * wh / 4 * slog * alpha;
    const double bound = ctx.ratio_bound_case2(alpha, cfg);
    const double path_threshold = 9 * cfg.s / (wh * wh);
    bool path_searched = false;
    std::optional<ViolatedPath> path;
    std::string why;
    const int dirs = cfg.directions(n);
    for (int t = 0; t < dirs; ++t) {
        o.directions_tried = t + 1;
        auto split = direction_split(vhat, anchor, pre->S, ctx.omega, wh, cfg, rng);
        if (!split) {
            why = "no stretched split along sampled direction";
            continue;
        }
        std::vector<Terminal> src, snk;
        for (int i = 0; i < n; ++i) {
            if (split->L[i]) src.push_back({i, beta * wh * slog * ctx.omega[i] * alpha});
            if (split->R[i]) snk.push_back({i, beta * wh * slog * ctx.omega[i] * alpha});
        }
        MaxFlowResult mf = max_flow(make_flow_instance(ctx.g, src, snk));
        o.flow_value = mf.value;
        const Subset S = vertex_part(mf.reachable, n);
        note_candidate(o, S, ctx);
        const bool small = mf.value < threshold;
        if (small && try_cut(o, S, bound, ctx, "case2.A", false)) return o;
        if (try_flow_dual(o, alpha, mf, g, ctx, cfg, "case2.B", small, why)) return o;
        if (!path_searched) {
            path = find_violated_path(g, cfg.path_cap(wh), path_threshold);
            path_searched = true;
        }
        if (path) {
            DualCertificate c;
            c.z = alpha;
            const double fp = wh * wh * alpha / (9 * cfg.s);
            const auto& q = path->vertices;
            for (std::size_t j = 1; j + 1 < q.size(); ++j) c.f.emplace_back(Triangle{q[0], q[j], q[j + 1]}, fp);
            auto chk = certificate_check(c, alpha, g, ctx, ctx.rho(alpha, cfg));
            if (chk.ok) {
                o.kind = OracleOutcome::Kind::Dual;
                o.branch = "case2.C";
                o.fallback = small;
                o.dual = std::move(c);
                o.width = chk.width;
                return o;
            }
            why = "path dual rejected at " + chk.bullet + ": " + chk.detail;
        }
        if (!small && try_cut(o, S, bound, ctx, "case2.A", true)) return o;
    }
    o.kind = OracleOutcome::Kind::Failure;
    o.reason = "case 2 exhausted " + std::to_string(dirs) + " directions; last: " + why;
    return o;
}

OracleOutcome run_oracle(double alpha, const GramState& g, const OracleContext& ctx, const OracleConfig& cfg,
                         std::mt19937_64& rng, const Tolerances& tol) {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    const double kx = frob(ctx.K, g.X);
    if (std::abs(kx - 1) > tol.norm) throw NotNormalized("K.X = " + std::to_string(kx) + ", expected 1");
    const double r1 = 1.0 / (std::sqrt(8.0) * ctx.omega_hat);
    int i0 = -1;
    double bw = -1;
    for (int i = 0; i < ctx.n(); ++i) {
        double w = subset_weight(ball(g, i, r1), ctx.omega);
        if (w > bw) {
            bw = w;
            i0 = i;
        }
    }
    if (bw >= cfg.c_ball * ctx.omega_hat) return case1(alpha, g, ctx, cfg, i0);
    return case2(alpha, g, ctx, cfg, rng);
}

}  // namespace hyperspars
