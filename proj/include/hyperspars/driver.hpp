#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperspars/hypergraph.hpp"
#include "hyperspars/oracle.hpp"
#include "hyperspars/sdpcore.hpp"

namespace hyperspars {

enum class SidePolicy { Both, ZeroIn, ZeroOut };

struct SolverConfig {
    int T_cap = 5000;
    std::optional<double> eta_override;
    std::optional<double> alpha_lo, alpha_hi;
    double search_ratio = 2;
    SidePolicy side_policy = SidePolicy::Both;
    OracleConfig oracle;
    Tolerances tol;
    std::uint64_t seed = 0;
    int record_limit = 50;    // keep certificates of runs with at most this many iterations
    double safety_tol = 1e-6;  // lambda_min(Zbar + alpha/2 K) >= -safety_tol
};

struct IterationRecord {
    int t = 0;
    std::string branch;
    bool fallback = false;
    double width = 0;
    double m_norm = 0;
    double kw = 0;  // K . W before normalisation
};

enum class RunOutcome { CutFound, LowerBoundCertified, Aborted, Exhausted };
const char* outcome_name(RunOutcome o);

struct RunReport {
    double alpha = 0;
    Side side = Side::ZeroIn;  // side of vertex 0 with respect to the reported cut
    std::int64_t T_theory = 0;  // saturates at INT64_MAX
    int T_run = 0;
    double eta = 0, rho = 0;
    RunOutcome outcome = RunOutcome::Exhausted;
    std::string reason;
    int iterations = 0;
    Subset cut;  // original vertex indices
    double cut_sparsity = 0;
    double ratio_bound = 0;
    Subset best_cut;  // cheapest cut seen anywhere in the run
    double best_sparsity = -1;
    double lambda_min = 0;  // monotone-safety value when a bound was certified
    std::vector<IterationRecord> log;
    bool recorded = false;  // certificates kept
    std::vector<DualCertificate> certificates;
};

// Instance data for one side. The zero-out side runs as the zero-in side of
// the reversed hypergraph, since sparsity(S) there equals sparsity(V \ S) here.
struct SideInstance {
    Side side;
    DirectedHypergraph h;  // as the solver sees it (reversed for zero-out)
    OracleContext ctx;

    SideInstance(const DirectedHypergraph& orig, const std::vector<double>& omega, Side s);
    Subset to_original(const Subset& t) const;
};

std::int64_t theoretical_T(double alpha, double rho, const OracleContext& ctx);

// Iterate X^(t) from the running sum of M^(t): W = exp(-eta S) restricted to
// the complement of span{1}, scaled so K . X = 1.
struct MwState {
    int n;
    Mat S;      // sum of M so far
    Mat basis;  // n x (n-1), orthonormal, spans the complement of 1
    explicit MwState(int n);
    GramState gram(const Mat& K, double eta, double* kw = nullptr) const;
};

// M^(t) = -(1/rho)(sum f T + z K - F).
Mat update_matrix(const DualCertificate& c, const OracleContext& ctx, double rho);

RunReport run_algorithm1(const DirectedHypergraph& h, const std::vector<double>& omega, double alpha, Side side,
                         const SolverConfig& cfg, std::uint64_t run_seed);

struct SidesReport {
    double alpha = 0;
    RunOutcome outcome = RunOutcome::Exhausted;
    std::vector<RunReport> runs;
    Subset cut;
    double cut_sparsity = 0;
    double lower_bound = 0;  // alpha / 2 when certified
};

// Conjunction rule: a bound needs every requested side to certify.
SidesReport run_both_sides(const DirectedHypergraph& h, const std::vector<double>& omega, double alpha,
                           const SolverConfig& cfg, std::uint64_t probe_seed);

struct SearchResult {
    Subset cut;
    double sparsity = 0;
    std::optional<double> lower_bound;
    double alpha_lo = 0, alpha_hi = 0;
    std::vector<SidesReport> probes;
};

// Default bracket: hi = 4 x cheapest singleton-side cut, lo = w_min / (omega_hat^2 / 4).
// Both searches start from the singleton cuts, their complements, and any
// proper reachability closure (sparsity zero).
std::pair<double, double> default_bracket(const DirectedHypergraph& h, const std::vector<double>& omega);

SearchResult binary_search(const DirectedHypergraph& h, const std::vector<double>& omega, const SolverConfig& cfg);
// One probe at a fixed alpha, packaged like a search.
SearchResult single_alpha(const DirectedHypergraph& h, const std::vector<double>& omega, double alpha,
                          const SolverConfig& cfg);

}  // namespace hyperspars
