#include "hyperspars/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace hyperspars {

namespace {

// Field table shared by apply_constants and constants_json.
template <class F>
void for_each_constant(OracleConfig& c, F&& f) {
    f("c_ball", c.c_ball);
    f("cap_c1", c.cap_c1);
    f("c_A", c.c_A);
    f("c_A2", c.c_A2);
    f("c_rho", c.c_rho);
    f("c_D", c.c_D);
    f("sigma", c.sigma);
    f("c", c.c);
    f("s", c.s);
    f("C_path", c.C_path);
    f("mu", c.mu);
    f("n_dirs", c.n_dirs);
}

const char* policy_name(SidePolicy p) {
    switch (p) {
        case SidePolicy::Both: return "both";
        case SidePolicy::ZeroIn: return "in";
        case SidePolicy::ZeroOut: return "out";
    }
    return "?";
}

SidePolicy parse_policy(const std::string& s) {
    if (s == "both") return SidePolicy::Both;
    if (s == "in") return SidePolicy::ZeroIn;
    if (s == "out") return SidePolicy::ZeroOut;
    throw std::invalid_argument("side must be both, in or out");
}

json names_of(const DirectedHypergraph& h, const Subset& s) {
    json out = json::array();
    for (int i = 0; i < h.n(); ++i)
        if (s[i]) out.push_back(h.names()[i]);
    return out;
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json certificate_json(int run, int t, const DualCertificate& c) {
    json tri = json::array(), flow = json::array();
    for (const auto& [p, f] : c.f) tri.push_back({p.i, p.j, p.k, f});
    for (const auto& x : c.flow.entries) flow.push_back({x.e, x.i, x.j, x.value});
    return {{"run", run}, {"t", t}, {"z", c.z}, {"triangles", tri}, {"flow", flow}};
}

DualCertificate certificate_from(const json& j) {
    DualCertificate c;
    c.z = j.at("z").get<double>();
    for (const auto& t : j.at("triangles"))
        c.f.emplace_back(Triangle{t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()}, t.at(3).get<double>());
    for (const auto& x : j.at("flow"))
        c.flow.entries.push_back({x.at(0).get<int>(), x.at(1).get<int>(), x.at(2).get<int>(), x.at(3).get<double>()});
    return c;
}

json run_json(int id, const RunReport& r) {
    std::map<std::string, int> branches;
    double max_w = 0, max_m = 0;
    for (const auto& it : r.log) {
        ++branches[it.branch];
        max_w = std::max(max_w, it.width);
        max_m = std::max(max_m, it.m_norm);
    }
    json j = {{"id", id},
              {"side", side_name(r.side)},
              {"alpha", r.alpha},
              {"T_theory", r.T_theory},
              {"T_run", r.T_run},
              {"eta", r.eta},
              {"rho", r.rho},
              {"outcome", outcome_name(r.outcome)},
              {"reason", r.reason},
              {"iterations", r.iterations},
              {"branches", branches},
              {"max_width", max_w},
              {"max_m_norm", max_m},
              {"lambda_min", r.lambda_min},
              {"recorded", r.recorded}};
    if (r.outcome == RunOutcome::CutFound) {
        j["cut_sparsity"] = r.cut_sparsity;
        j["ratio_bound"] = r.ratio_bound;
    }
    if (r.best_sparsity >= 0) j["best_sparsity"] = r.best_sparsity;
    if (r.recorded) {
        json its = json::array();
        for (const auto& it : r.log)
            its.push_back({{"t", it.t},
                           {"branch", it.branch},
                           {"fallback", it.fallback},
                           {"width", it.width},
                           {"m_norm", it.m_norm},
                           {"kw", it.kw}});
        j["iteration_detail"] = its;
    }
    return j;
}

json config_json(const SolveRequest& req, const std::vector<double>& omega) {
    OracleConfig oc = req.cfg.oracle;
    return {{"mode", req.mode == Mode::Sparsity ? "sparsity" : "expansion"},
            {"weights", req.mode == Mode::Sparsity ? "file" : "degree"},
            {"omega", omega},
            {"seed", req.cfg.seed},
            {"alpha", opt(req.alpha)},
            {"no_search", req.no_search},
            {"t_cap", req.cfg.T_cap},
            {"eta", opt(req.cfg.eta_override)},
            {"alpha_lo", opt(req.cfg.alpha_lo)},
            {"alpha_hi", opt(req.cfg.alpha_hi)},
            {"search_ratio", req.cfg.search_ratio},
            {"side", policy_name(req.cfg.side_policy)},
            {"record_limit", req.cfg.record_limit},
            {"safety_tol", req.cfg.safety_tol},
            {"tolerances",
             {{"psd_rel", req.cfg.tol.psd_rel}, {"chol", req.cfg.tol.chol}, {"norm", req.cfg.tol.norm}}},
            {"constants", constants_json(oc)}};
}

json instance_json(const DirectedHypergraph& h) {
    return {{"n", h.n()},
            {"m", h.m()},
            {"r", h.r()},
            {"kappa", h.kappa()},
            {"omega_hat", h.omega_hat()},
            {"vertices", h.names()},
            {"dhg", serialize_dhg(h)}};
}

}  // namespace

void apply_constants(OracleConfig& cfg, const json& j) {
    if (!j.is_object()) throw std::invalid_argument("constants must be a JSON object");
    std::vector<std::string> known;
    for_each_constant(cfg, [&](const char* k, auto&) { known.push_back(k); });
    for (const auto& [k, v] : j.items())
        if (std::find(known.begin(), known.end(), k) == known.end())
            throw std::invalid_argument("unknown constant '" + k + "'");
    for_each_constant(cfg, [&](const char* k, auto& field) {
        if (!j.contains(k)) return;
        if (!j[k].is_number()) throw std::invalid_argument(std::string("constant '") + k + "' must be a number");
        field = j[k].get<std::remove_reference_t<decltype(field)>>();
        if (!(field >= 0)) throw std::invalid_argument(std::string("constant '") + k + "' must be non-negative");
    });
}

json constants_json(const OracleConfig& cfg) {
    OracleConfig c = cfg;
    json j = json::object();
    for_each_constant(c, [&](const char* k, auto& field) { j[k] = field; });
    j["beta"] = c.beta();
    return j;
}

SolveRequest request_from_json(const json& j) {
    SolveRequest r;
    if (j.is_null()) return r;
    if (!j.is_object()) throw std::invalid_argument("options must be a JSON object");
    static const std::vector<std::string> known = {"mode",     "alpha",        "no_search",    "seed",
                                                   "t_cap",    "side",         "eta",          "alpha_lo",
                                                   "alpha_hi", "search_ratio", "record_limit", "constants"};
    for (const auto& [k, v] : j.items())
        if (std::find(known.begin(), known.end(), k) == known.end())
            throw std::invalid_argument("unknown option '" + k + "'");
    if (j.contains("mode")) {
        const auto m = j["mode"].get<std::string>();
        if (m == "sparsity")
            r.mode = Mode::Sparsity;
        else if (m == "expansion")
            r.mode = Mode::Expansion;
        else
            throw std::invalid_argument("mode must be sparsity or expansion");
    }
    if (j.contains("alpha") && !j["alpha"].is_null()) r.alpha = j["alpha"].get<double>();
    if (j.contains("no_search")) r.no_search = j["no_search"].get<bool>();
    if (j.contains("seed")) r.cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("t_cap")) r.cfg.T_cap = j["t_cap"].get<int>();
    if (j.contains("side")) r.cfg.side_policy = parse_policy(j["side"].get<std::string>());
    if (j.contains("eta") && !j["eta"].is_null()) r.cfg.eta_override = j["eta"].get<double>();
    if (j.contains("alpha_lo") && !j["alpha_lo"].is_null()) r.cfg.alpha_lo = j["alpha_lo"].get<double>();
    if (j.contains("alpha_hi") && !j["alpha_hi"].is_null()) r.cfg.alpha_hi = j["alpha_hi"].get<double>();
    if (j.contains("search_ratio")) r.cfg.search_ratio = j["search_ratio"].get<double>();
    if (j.contains("record_limit")) r.cfg.record_limit = j["record_limit"].get<int>();
    if (j.contains("constants")) apply_constants(r.cfg.oracle, j["constants"]);
    if (r.cfg.T_cap < 1) throw std::invalid_argument("t_cap must be at least 1");
    if (r.no_search && !r.alpha) throw std::invalid_argument("no_search needs alpha");
    if (r.alpha && !(*r.alpha > 0)) throw std::invalid_argument("alpha must be positive");
    if (r.cfg.eta_override && !(*r.cfg.eta_override > 0 && *r.cfg.eta_override <= 1))
        throw std::invalid_argument("eta must lie in (0, 1]");
    return r;
}

std::vector<double> solver_weights(const DirectedHypergraph& h, Mode mode) {
    if (mode == Mode::Sparsity) {
        auto w = h.omega_double();
        return w;
    }
    const auto deg = weighted_degrees(h);
    Rational dmin = 0;
    for (const auto& d : deg)
        if (d > 0 && (dmin == 0 || d < dmin)) dmin = d;
    std::vector<double> w;
    for (const auto& d : deg) w.push_back(d > 0 ? to_double(d / dmin) : 1.0);
    return w;
}

SolveOutput solve(const DirectedHypergraph& h, const SolveRequest& req) {
    if (h.n() < 2) throw std::invalid_argument("need at least two vertices");
    const auto omega = solver_weights(h, req.mode);
    SearchResult res;
    if (req.no_search) {
        res = single_alpha(h, omega, *req.alpha, req.cfg);
    } else {
        SolverConfig cfg = req.cfg;
        if (req.alpha && !cfg.alpha_hi) cfg.alpha_hi = *req.alpha;
        res = binary_search(h, omega, cfg);
    }

    json transcript = json::array(), certs = json::array();
    int id = 0;
    bool any_cut = false;
    for (std::size_t k = 0; k < res.probes.size(); ++k) {
        const auto& p = res.probes[k];
        json runs = json::array();
        for (const auto& r : p.runs) {
            runs.push_back(run_json(id, r));
            if (r.recorded)
                for (std::size_t t = 0; t < r.certificates.size(); ++t)
                    certs.push_back(certificate_json(id, static_cast<int>(t) + 1, r.certificates[t]));
            ++id;
        }
        any_cut = any_cut || p.outcome == RunOutcome::CutFound;
        transcript.push_back({{"probe", k},
                              {"alpha", p.alpha},
                              {"outcome", outcome_name(p.outcome)},
                              {"lower_bound", p.outcome == RunOutcome::LowerBoundCertified ? json(p.lower_bound)
                                                                                            : json(nullptr)},
                              {"runs", runs}});
    }

    std::string outcome;
    if (any_cut || (res.probes.empty() && res.sparsity == 0))
        outcome = "cut-found";
    else if (res.lower_bound)
        outcome = "lower-bound-certified";
    else if (!res.probes.empty())
        outcome = outcome_name(res.probes.back().outcome);
    else
        outcome = "exhausted";

    json rep;
    rep["instance"] = instance_json(h);
    rep["config"] = config_json(req, omega);
    rep["outcome"] = outcome;
    rep["cut"] = names_of(h, res.cut);
    rep["sparsity"] = res.sparsity;
    if (req.mode == Mode::Sparsity) rep["sparsity_exact"] = to_string(sparsity(h, res.cut));
    rep["lower_bound"] = opt(res.lower_bound);
    rep["approximation_ratio"] =
        res.lower_bound && *res.lower_bound > 0 ? json(res.sparsity / *res.lower_bound) : json(nullptr);
    rep["search"] = {{"alpha_lo", res.alpha_lo}, {"alpha_hi", res.alpha_hi}, {"probes", res.probes.size()}};
    if (req.mode == Mode::Expansion) {
        Subset light = res.cut;
        double ws = 0, total = 0;
        for (int i = 0; i < h.n(); ++i) {
            total += omega[i];
            if (light[i]) ws += omega[i];
        }
        if (2 * ws > total) light.flip();
        json ex;
        ex["cut"] = names_of(h, light);
        try {
            const auto e = expansion(h, light);
            ex["phi"] = to_double(e.phi);
            ex["phi_exact"] = to_string(e.phi);
        } catch (const UndefinedExpansion&) {
            ex["phi"] = nullptr;
        }
        const auto deg = weighted_degrees(h);
        const bool isolated = std::any_of(deg.begin(), deg.end(), [](const Rational& d) { return d == 0; });
        if (res.lower_bound && !isolated) {
            Rational dmin = *std::min_element(deg.begin(), deg.end());
            ex["lower_bound"] = *res.lower_bound * total / (2 * to_double(dmin));
        } else {
            ex["lower_bound"] = nullptr;
        }
        rep["expansion"] = ex;
    }
    rep["transcript"] = transcript;
    rep["certificates"] = certs;
    return {rep, outcome == "cut-found"};
}

json exact_report(const DirectedHypergraph& h) {
    json rep;
    rep["instance"] = instance_json(h);
    const auto sp = brute_force_sparsest(h);
    rep["sparsest"] = {{"cut", names_of(h, sp.subset)}, {"value", to_double(sp.value)}, {"exact", to_string(sp.value)}};
    try {
        const auto ex = brute_force_expansion(h);
        rep["expansion"] = {
            {"cut", names_of(h, ex.subset)}, {"value", to_double(ex.value)}, {"exact", to_string(ex.value)}};
    } catch (const UndefinedExpansion&) {
        rep["expansion"] = nullptr;
    }
    return rep;
}

DirectedHypergraph reorder(const DirectedHypergraph& h, const std::vector<std::string>& order) {
    if (static_cast<int>(order.size()) != h.n()) throw std::invalid_argument("vertex list has the wrong length");
    std::vector<int> to_new(h.n(), -1);
    std::vector<std::int64_t> omega(h.n());
    for (int k = 0; k < h.n(); ++k) {
        const int old = h.index_of(order[k]);
        if (old < 0 || to_new[old] >= 0) throw std::invalid_argument("vertex list does not match the instance");
        to_new[old] = k;
        omega[k] = h.omega()[old];
    }
    std::vector<Hyperedge> edges;
    for (const auto& e : h.edges()) {
        Hyperedge ne{{}, {}, e.weight};
        for (int v : e.tail) ne.tail.push_back(to_new[v]);
        for (int v : e.head) ne.head.push_back(to_new[v]);
        std::sort(ne.tail.begin(), ne.tail.end());
        std::sort(ne.head.begin(), ne.head.end());
        edges.push_back(std::move(ne));
    }
    return DirectedHypergraph(order, std::move(omega), std::move(edges));
}

namespace {

ReportCheck fail(ReportCheck r, std::string bullet, std::string detail) {
    r.ok = false;
    r.bullet = std::move(bullet);
    r.detail = std::move(detail);
    return r;
}

}  // namespace

ReportCheck check_report(const json& report, const DirectedHypergraph* given) {
    ReportCheck out;
    try {
        const auto& inst = report.at("instance");
        const auto order = inst.at("vertices").get<std::vector<std::string>>();
        const std::string dhg = inst.at("dhg").get<std::string>();
        const DirectedHypergraph h = reorder(given ? *given : parse_dhg(dhg), order);
        if (serialize_dhg(h) != dhg) return fail(out, "instance", "input does not match the reported instance");

        const auto& cfgj = report.at("config");
        const auto omega = cfgj.at("omega").get<std::vector<double>>();
        if (static_cast<int>(omega.size()) != h.n()) return fail(out, "instance", "omega has the wrong length");
        OracleConfig oc;
        json consts = cfgj.at("constants");
        consts.erase("beta");
        apply_constants(oc, consts);
        const double safety_tol = cfgj.at("safety_tol").get<double>();

        std::map<int, std::vector<const json*>> by_run;
        for (const auto& c : report.at("certificates")) by_run[c.at("run").get<int>()].push_back(&c);

        std::optional<double> best_bound;
        for (const auto& probe : report.at("transcript")) {
            bool all_cert = true;
            for (const auto& run : probe.at("runs")) {
                const int id = run.at("id").get<int>();
                const std::string outcome = run.at("outcome").get<std::string>();
                const bool certified = outcome == outcome_name(RunOutcome::LowerBoundCertified);
                all_cert = all_cert && certified;
                if (!run.at("recorded").get<bool>()) {
                    if (certified) return fail(out, "transcript", "certified run " + std::to_string(id) + " kept no certificates");
                    continue;
                }
                const Side side = run.at("side").get<std::string>() == "in" ? Side::ZeroIn : Side::ZeroOut;
                const double alpha = run.at("alpha").get<double>();
                const double rho = run.at("rho").get<double>();
                const double eta = run.at("eta").get<double>();
                SideInstance si(h, omega, side);
                if (std::abs(rho - si.ctx.rho(alpha, oc)) > 1e-9 * rho)
                    return fail(out, "width", "run " + std::to_string(id) + " rho disagrees with its constants");
                auto& certs = by_run[id];
                std::sort(certs.begin(), certs.end(),
                          [](const json* a, const json* b) { return a->at("t").get<int>() < b->at("t").get<int>(); });
                MwState mw(h.n());
                int t = 0;
                for (const json* cj : certs) {
                    if (cj->at("t").get<int>() != ++t)
                        return fail(out, "transcript", "run " + std::to_string(id) + " has a gap at t=" + std::to_string(t));
                    const DualCertificate c = certificate_from(*cj);
                    const GramState g = mw.gram(si.ctx.K, eta);
                    const CheckResult chk = certificate_check(c, alpha, g, si.ctx, rho);
                    ++out.certificates_checked;
                    if (!chk.ok)
                        return fail(out, chk.bullet,
                                    "run " + std::to_string(id) + ", t=" + std::to_string(t) + ": " + chk.detail);
                    mw.S += update_matrix(c, si.ctx, rho);
                }
                ++out.runs_checked;
                if (certified) {
                    const int T_run = run.at("T_run").get<int>();
                    if (t != T_run || run.at("T_theory").get<std::int64_t>() != T_run)
                        return fail(out, "transcript", "certified run " + std::to_string(id) + " is incomplete");
                    const Mat zk = (rho / T_run) * mw.S + (alpha / 2) * si.ctx.K;
                    const double lm = min_eigenvalue(zk);
                    if (lm < -safety_tol)
                        return fail(out, "monotone-safety",
                                    "run " + std::to_string(id) + ": lambda_min = " + std::to_string(lm));
                }
            }
            if (probe.at("outcome").get<std::string>() == outcome_name(RunOutcome::LowerBoundCertified)) {
                if (!all_cert) return fail(out, "conjunction", "probe certified without every side certifying");
                best_bound = std::max(best_bound.value_or(0.0), probe.at("alpha").get<double>() / 2);
            }
        }

        const auto& lb = report.at("lower_bound");
        if (!lb.is_null() && (!best_bound || lb.get<double>() > *best_bound * (1 + 1e-12)))
            return fail(out, "lower-bound", "claimed lower bound is not backed by a certified probe");

        Subset cut(h.n(), false);
        for (const auto& name : report.at("cut")) {
            const int i = h.index_of(name.get<std::string>());
            if (i < 0) return fail(out, "cut-sparsity", "cut names an unknown vertex");
            cut[i] = true;
        }
        const double sp = sparsity_weighted(h, cut, omega);
        const double claimed = report.at("sparsity").get<double>();
        if (std::abs(sp - claimed) > 1e-9 * std::max(1.0, std::abs(sp)))
            return fail(out, "cut-sparsity", "reported sparsity " + std::to_string(claimed) + " but cut has " +
                                                 std::to_string(sp));
    } catch (const json::exception& ex) {
        return fail(out, "format", ex.what());
    } catch (const std::exception& ex) {
        return fail(out, "format", ex.what());
    }
    return out;
}

}  // namespace hyperspars
