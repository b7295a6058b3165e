#include "hyperspars/hyperspars.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hyperspars/reference.hpp"
#include "hyperspars/report.hpp"

struct hs_hypergraph {
    hyperspars::DirectedHypergraph h;
};

namespace {

using namespace hyperspars;

thread_local std::string g_error;

hs_status set_error(hs_status s, const std::string& msg) {
    g_error = msg;
    return s;
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p) std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

// Maps exceptions onto status codes.
template <class F>
hs_status guarded(F&& f) {
    try {
        g_error.clear();
        return f();
    } catch (const ParseError& e) {
        return set_error(HS_ERR_PARSE, e.what());
    } catch (const json::parse_error& e) {
        return set_error(HS_ERR_PARSE, e.what());
    } catch (const TooLarge& e) {
        return set_error(HS_ERR_SIZE, e.what());
    } catch (const json::exception& e) {
        return set_error(HS_ERR_INPUT, e.what());
    } catch (const std::invalid_argument& e) {
        return set_error(HS_ERR_INPUT, e.what());
    } catch (const std::domain_error& e) {
        return set_error(HS_ERR_INPUT, e.what());
    } catch (const std::exception& e) {
        return set_error(HS_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(HS_ERR_INTERNAL, "unknown error");
    }
}

}  // namespace

extern "C" {

const char* hs_version(void) { return "0.1.0"; }

const char* hs_last_error(void) { return g_error.c_str(); }

void hs_string_free(char* s) { std::free(s); }

hs_status hs_parse_dhg(const char* text, hs_hypergraph** out) {
    return guarded([&] {
        if (!text || !out) return set_error(HS_ERR_INPUT, "null argument");
        *out = new hs_hypergraph{parse_dhg(text)};
        return HS_OK;
    });
}

hs_status hs_load_dhg_file(const char* path, hs_hypergraph** out) {
    return guarded([&] {
        if (!path || !out) return set_error(HS_ERR_INPUT, "null argument");
        std::ifstream in(path, std::ios::binary);
        if (!in) return set_error(HS_ERR_INPUT, std::string("cannot open ") + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        *out = new hs_hypergraph{parse_dhg(ss.str())};
        return HS_OK;
    });
}

void hs_hypergraph_free(hs_hypergraph* h) { delete h; }

hs_status hs_hypergraph_size(const hs_hypergraph* h, int* n, int* m) {
    if (!h) return set_error(HS_ERR_INPUT, "null hypergraph");
    if (n) *n = h->h.n();
    if (m) *m = h->h.m();
    return HS_OK;
}

hs_status hs_serialize_dhg(const hs_hypergraph* h, char** out) {
    return guarded([&] {
        if (!h || !out) return set_error(HS_ERR_INPUT, "null argument");
        *out = dup(serialize_dhg(h->h));
        return HS_OK;
    });
}

hs_status hs_sparsity(const hs_hypergraph* h, const char* const* names, size_t count, double* value, char** exact) {
    return guarded([&] {
        if (!h || (!names && count)) return set_error(HS_ERR_INPUT, "null argument");
        std::vector<int> idx;
        for (size_t k = 0; k < count; ++k) {
            const int i = h->h.index_of(names[k]);
            if (i < 0) return set_error(HS_ERR_INPUT, std::string("unknown vertex ") + names[k]);
            idx.push_back(i);
        }
        const Rational r = sparsity(h->h, subset_from_indices(h->h.n(), idx));
        if (value) *value = to_double(r);
        if (exact) *exact = dup(to_string(r));
        return HS_OK;
    });
}

hs_status hs_solve_json(const hs_hypergraph* h, const char* options_json, char** report_json, int* cut_found) {
    return guarded([&] {
        if (!h || !report_json) return set_error(HS_ERR_INPUT, "null argument");
        const json opts = options_json && *options_json ? json::parse(options_json) : json(nullptr);
        const auto res = solve(h->h, request_from_json(opts));
        *report_json = dup(res.report.dump(2));
        if (cut_found) *cut_found = res.cut_found ? 1 : 0;
        return HS_OK;
    });
}

hs_status hs_exact_json(const hs_hypergraph* h, char** report_json) {
    return guarded([&] {
        if (!h || !report_json) return set_error(HS_ERR_INPUT, "null argument");
        *report_json = dup(exact_report(h->h).dump(2));
        return HS_OK;
    });
}

hs_status hs_generate(const char* spec_json, hs_hypergraph** out) {
    return guarded([&] {
        if (!spec_json || !out) return set_error(HS_ERR_INPUT, "null argument");
        const json j = json::parse(spec_json);
        GeneratorSpec s;
        s.n = j.value("n", s.n);
        s.m = j.value("m", s.m);
        s.r_max = j.value("r_max", s.r_max);
        s.kappa = j.value("kappa", s.kappa);
        s.w_lo = j.value("w_lo", s.w_lo);
        s.w_hi = j.value("w_hi", s.w_hi);
        if (j.contains("model")) s.model = parse_model(j["model"].get<std::string>());
        s.balance = j.value("balance", s.balance);
        s.inside_w = j.value("inside_w", s.inside_w);
        s.crossing_w = j.value("crossing_w", s.crossing_w);
        if (!j.contains("seed")) return set_error(HS_ERR_INPUT, "generator spec needs a seed");
        s.seed = j["seed"].get<std::uint64_t>();
        *out = new hs_hypergraph{generate(s)};
        return HS_OK;
    });
}

hs_status hs_reduce_json(const hs_hypergraph* h, char** out_json) {
    return guarded([&] {
        if (!h || !out_json) return set_error(HS_ERR_INPUT, "null argument");
        const ReducedDigraph g = reduce_to_digraph(h->h);
        json arcs = json::array();
        for (const auto& a : g.arcs) arcs.push_back({g.names[a.from], g.names[a.to], to_string(a.weight)});
        const json j = {{"vertices", g.names}, {"big_weight", to_string(g.big_weight)}, {"arcs", arcs}};
        *out_json = dup(j.dump(2));
        return HS_OK;
    });
}

hs_status hs_check_cert(const char* report_json, const hs_hypergraph* h, char** detail_json) {
    return guarded([&] {
        if (!report_json) return set_error(HS_ERR_INPUT, "null argument");
        const json rep = json::parse(report_json);
        const ReportCheck r = check_report(rep, h ? &h->h : nullptr);
        const json d = {{"ok", r.ok},
                        {"bullet", r.bullet},
                        {"detail", r.detail},
                        {"runs_checked", r.runs_checked},
                        {"certificates_checked", r.certificates_checked}};
        if (detail_json) *detail_json = dup(d.dump(2));
        if (!r.ok) return set_error(HS_ERR_CERT_REJECTED, r.bullet + ": " + r.detail);
        return HS_OK;
    });
}

}  // extern "C"
