#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperspars/driver.hpp"
#include "hyperspars/hypergraph.hpp"
#include "hyperspars/reference.hpp"

namespace hyperspars {

using json = nlohmann::json;

enum class Mode { Sparsity, Expansion };

struct SolveRequest {
    Mode mode = Mode::Sparsity;
    std::optional<double> alpha;
    bool no_search = false;  // requires alpha
    SolverConfig cfg;
};

// Overrides OracleConfig fields by name; unknown keys throw std::invalid_argument.
void apply_constants(OracleConfig& cfg, const json& j);
json constants_json(const OracleConfig& cfg);

// Applies the keys a caller may set: mode, alpha, no_search, seed, t_cap,
// side, eta, alpha_lo, alpha_hi, search_ratio, record_limit, constants.
SolveRequest request_from_json(const json& j);

// Vertex weights the solver uses: the file weights, or weighted degree over the
// smallest positive degree in expansion mode (isolated vertices get 1).
std::vector<double> solver_weights(const DirectedHypergraph& h, Mode mode);

struct SolveOutput {
    json report;
    bool cut_found = false;
};

SolveOutput solve(const DirectedHypergraph& h, const SolveRequest& req);

json exact_report(const DirectedHypergraph& h);

// Same hypergraph with vertices renumbered to follow `order` (a permutation of
// its names). Throws std::invalid_argument otherwise.
DirectedHypergraph reorder(const DirectedHypergraph& h, const std::vector<std::string>& order);

struct ReportCheck {
    bool ok = true;
    std::string bullet;
    std::string detail;
    int runs_checked = 0;
    int certificates_checked = 0;
};

// Replays every recorded run: rebuilds each X^(t) from the stored certificates,
// re-runs certificate_check, and recomputes the monotone-safety eigenvalue for
// certified runs. `h` overrides the instance embedded in the report.
ReportCheck check_report(const json& report, const DirectedHypergraph* h = nullptr);

}  // namespace hyperspars
