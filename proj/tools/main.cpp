// hyperspars command-line front end. Talks to the solver only through the C API.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperspars/hyperspars.h"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoCut = 2;
constexpr int kExitCert = 3;

struct HgDeleter {
    void operator()(hs_hypergraph* h) const { hs_hypergraph_free(h); }
};
using Hg = std::unique_ptr<hs_hypergraph, HgDeleter>;

struct CString {
    char* p = nullptr;
    ~CString() { hs_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

std::string slurp(const std::string& path) {
    std::ostringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + path);
        ss << in.rdbuf();
    }
    return ss.str();
}

Hg load(const std::string& path) {
    hs_hypergraph* h = nullptr;
    const std::string text = slurp(path);
    if (hs_parse_dhg(text.c_str(), &h) != HS_OK) throw std::runtime_error(path + ": " + hs_last_error());
    return Hg(h);
}

std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return flag;
    if (const char* env = std::getenv("HYPERSPARS_SEED")) return std::stoull(env);
    return std::nullopt;
}

void print_text_report(const json& r) {
    std::cout << "outcome: " << r["outcome"].get<std::string>() << "\n";
    std::cout << "cut:";
    for (const auto& v : r["cut"]) std::cout << " " << v.get<std::string>();
    std::cout << "\nsparsity: " << r["sparsity"].get<double>();
    if (r.contains("sparsity_exact")) std::cout << " (" << r["sparsity_exact"].get<std::string>() << ")";
    std::cout << "\nlower bound: ";
    if (r["lower_bound"].is_null())
        std::cout << "none";
    else
        std::cout << r["lower_bound"].get<double>();
    std::cout << "\napproximation ratio: ";
    if (r["approximation_ratio"].is_null())
        std::cout << "n/a";
    else
        std::cout << r["approximation_ratio"].get<double>();
    std::cout << "\n";
    if (r.contains("expansion")) {
        const auto& e = r["expansion"];
        std::cout << "expansion phi: " << (e["phi"].is_null() ? std::string("undefined") : e["phi"].dump())
                  << ", lower bound: " << (e["lower_bound"].is_null() ? std::string("none") : e["lower_bound"].dump())
                  << "\n";
    }
    for (const auto& p : r["transcript"]) {
        std::cout << "  alpha " << p["alpha"].get<double>() << ": " << p["outcome"].get<std::string>();
        for (const auto& run : p["runs"])
            std::cout << " [" << run["side"].get<std::string>() << " " << run["outcome"].get<std::string>() << " after "
                      << run["iterations"].get<int>() << "]";
        std::cout << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Approximate directed sparsest cuts on directed hypergraphs"};
    app.require_subcommand(1);

    std::string input = "-";
    std::string mode = "sparsity", side = "both", constants_path;
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;
    std::optional<int> t_cap, record_limit;
    bool no_search = false, as_json = false;
    auto* solve = app.add_subcommand("solve", "approximate sparsest cut with a certified lower bound");
    solve->add_option("input", input, "DHG file or '-' for stdin");
    solve->add_option("--mode", mode, "sparsity or expansion")->check(CLI::IsMember({"sparsity", "expansion"}));
    solve->add_option("--alpha", alpha, "probe value (upper end of the search without --no-search)");
    solve->add_flag("--no-search", no_search, "single run at --alpha");
    solve->add_option("--seed", seed, "RNG seed (falls back to HYPERSPARS_SEED)");
    solve->add_option("--t-cap", t_cap, "iteration cap per run");
    solve->add_option("--side", side, "both, in or out")->check(CLI::IsMember({"both", "in", "out"}));
    solve->add_option("--record-limit", record_limit, "keep certificates of runs up to this length");
    solve->add_option("--constants", constants_path, "JSON file overriding oracle constants");
    solve->add_flag("--json", as_json, "print the full JSON report");

    std::string compare;
    auto* exact = app.add_subcommand("exact", "exhaustive sparsest cut and expansion (n <= 24)");
    exact->add_option("input", input, "DHG file or '-'");
    exact->add_option("--compare", compare, "solve report to compare against");
    exact->add_flag("--json", as_json, "print JSON");

    json gen_spec = json::object();
    int g_n = 8, g_m = 10, g_r = 3, g_kappa = 1;
    double g_wlo = 1, g_whi = 4, g_balance = 0.5, g_inside = 4, g_cross = 0;
    std::string g_model = "uniform-random", out_path;
    auto* gen = app.add_subcommand("gen", "generate a random instance");
    gen->add_option("--n", g_n);
    gen->add_option("--m", g_m);
    gen->add_option("--r-max", g_r);
    gen->add_option("--kappa", g_kappa);
    gen->add_option("--w-lo", g_wlo);
    gen->add_option("--w-hi", g_whi);
    gen->add_option("--model", g_model)->check(CLI::IsMember({"uniform-random", "planted-cut", "expander-like"}));
    gen->add_option("--balance", g_balance);
    gen->add_option("--inside-w", g_inside);
    gen->add_option("--crossing-w", g_cross);
    gen->add_option("--seed", seed, "RNG seed (falls back to HYPERSPARS_SEED)");
    gen->add_option("-o,--output", out_path, "write here instead of stdout");

    std::string report_path, cert_input;
    auto* check = app.add_subcommand("check-cert", "replay and verify the certificates in a solve report");
    check->add_option("report", report_path, "report JSON")->required();
    check->add_option("input", cert_input, "DHG file (defaults to the instance in the report)");

    auto* reduce = app.add_subcommand("reduce", "print the reduced digraph");
    reduce->add_option("input", input, "DHG file or '-'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*solve) {
            const auto s = resolve_seed(seed);
            if (!s) {
                std::cerr << "error: solve needs --seed or HYPERSPARS_SEED\n";
                return kExitInput;
            }
            if (no_search && !alpha) {
                std::cerr << "error: --no-search needs --alpha\n";
                return kExitInput;
            }
            json opts = {{"mode", mode}, {"seed", *s}, {"side", side}, {"no_search", no_search}};
            if (alpha) opts["alpha"] = *alpha;
            if (t_cap) opts["t_cap"] = *t_cap;
            if (record_limit) opts["record_limit"] = *record_limit;
            if (!constants_path.empty()) opts["constants"] = json::parse(slurp(constants_path));
            Hg h = load(input);
            CString rep;
            int found = 0;
            if (hs_solve_json(h.get(), opts.dump().c_str(), &rep.p, &found) != HS_OK) {
                std::cerr << "error: " << hs_last_error() << "\n";
                return kExitInput;
            }
            if (as_json)
                std::cout << rep.str() << "\n";
            else
                print_text_report(json::parse(rep.str()));
            return found ? kExitOk : kExitNoCut;
        }
        if (*exact) {
            Hg h = load(input);
            CString rep;
            if (hs_exact_json(h.get(), &rep.p) != HS_OK) {
                std::cerr << "error: " << hs_last_error() << "\n";
                return kExitInput;
            }
            json r = json::parse(rep.str());
            if (!compare.empty()) {
                const json solved = json::parse(slurp(compare));
                const double got = solved.at("sparsity").get<double>();
                const double best = r["sparsest"]["value"].get<double>();
                r["compare"] = {{"solver_sparsity", got},
                                {"ratio", best > 0 ? json(got / best) : (got == 0 ? json(1.0) : json(nullptr))}};
            }
            if (as_json) {
                std::cout << r.dump(2) << "\n";
            } else {
                std::cout << "sparsest cut:";
                for (const auto& v : r["sparsest"]["cut"]) std::cout << " " << v.get<std::string>();
                std::cout << "\nsparsity: " << r["sparsest"]["exact"].get<std::string>() << "\n";
                if (r["expansion"].is_null()) {
                    std::cout << "expansion: undefined\n";
                } else {
                    std::cout << "expansion cut:";
                    for (const auto& v : r["expansion"]["cut"]) std::cout << " " << v.get<std::string>();
                    std::cout << "\nexpansion: " << r["expansion"]["exact"].get<std::string>() << "\n";
                }
                if (r.contains("compare")) std::cout << "ratio: " << r["compare"]["ratio"].dump() << "\n";
            }
            return kExitOk;
        }
        if (*gen) {
            const auto s = resolve_seed(seed);
            if (!s) {
                std::cerr << "error: gen needs --seed or HYPERSPARS_SEED\n";
                return kExitInput;
            }
            gen_spec = {{"n", g_n},         {"m", g_m},           {"r_max", g_r},          {"kappa", g_kappa},
                        {"w_lo", g_wlo},    {"w_hi", g_whi},      {"model", g_model},      {"balance", g_balance},
                        {"inside_w", g_inside}, {"crossing_w", g_cross}, {"seed", *s}};
            hs_hypergraph* raw = nullptr;
            if (hs_generate(gen_spec.dump().c_str(), &raw) != HS_OK) {
                std::cerr << "error: " << hs_last_error() << "\n";
                return kExitInput;
            }
            Hg h(raw);
            CString text;
            hs_serialize_dhg(h.get(), &text.p);
            if (out_path.empty()) {
                std::cout << text.str();
            } else {
                std::ofstream(out_path, std::ios::binary) << text.str();
            }
            return kExitOk;
        }
        if (*check) {
            const std::string rep = slurp(report_path);
            Hg h;
            if (!cert_input.empty()) h = load(cert_input);
            CString detail;
            const hs_status st = hs_check_cert(rep.c_str(), h.get(), &detail.p);
            if (st == HS_OK) {
                const json d = json::parse(detail.str());
                std::cout << "ok: " << d["runs_checked"] << " runs, " << d["certificates_checked"]
                          << " certificates verified\n";
                return kExitOk;
            }
            if (st == HS_ERR_CERT_REJECTED) {
                const json d = json::parse(detail.str());
                std::cout << "rejected: " << d["bullet"].get<std::string>() << ": " << d["detail"].get<std::string>()
                          << "\n";
                return kExitCert;
            }
            std::cerr << "error: " << hs_last_error() << "\n";
            return kExitInput;
        }
        if (*reduce) {
            Hg h = load(input);
            CString out;
            if (hs_reduce_json(h.get(), &out.p) != HS_OK) {
                std::cerr << "error: " << hs_last_error() << "\n";
                return kExitInput;
            }
            std::cout << out.str() << "\n";
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
