#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hyperspars/flownet.hpp"
#include "hyperspars/hypergraph.hpp"
#include "hyperspars/sdpcore.hpp"

namespace hyperspars {

struct OracleConfig {
    double c_ball = 0.25;   // concentration threshold, as a fraction of omega_hat
    double cap_c1 = 8;      // case 1 terminal capacity coefficient
    double c_A = 64;        // case 1 cut ratio bound
    double c_A2 = 64;       // case 2 cut ratio bound, times sqrt(log kappa n)
    double c_rho = 16;      // width: rho = c_rho alpha omega_hat^2 sqrt(log kappa n)
    double c_D = 8;         // demand-norm constant
    double sigma = 1.0 / 48;
    double c = 1.0 / 128;
    double s = 0.25;
    double C_path = 4;
    double mu = 1;
    int n_dirs = 0;  // 0 means 8 ceil(log2 n)

    double beta() const { return 32 * C_path / (9 * mu * s * c); }
    double eta_stretch() const { return 8 / (9 * c * beta()); }
    int directions(int n) const;
    int path_cap(double omega_hat) const;
};

// Per-instance data shared by every oracle call on it.
struct OracleContext {
    const DirectedHypergraph* h = nullptr;
    std::vector<double> omega;
    ReducedDigraph g;
    Mat K;
    double omega_hat = 0;
    double kappa = 0;

    OracleContext(const DirectedHypergraph& hg, std::vector<double> weights);
    int n() const { return h->n(); }
    double log_kn() const;
    double rho(double alpha, const OracleConfig& cfg) const;
    double ratio_bound_case1(double alpha, const OracleConfig& cfg) const { return cfg.c_A * alpha; }
    double ratio_bound_case2(double alpha, const OracleConfig& cfg) const;
};

struct DualCertificate {
    double z = 0;
    std::vector<std::pair<Triangle, double>> f;
    FlowAssignment flow;  // F is the flow matrix of this assignment
};

Mat dual_residual(const DualCertificate& c, const OracleContext& ctx, Side side);  // sum f T + z K - F

struct CheckResult {
    bool ok = true;
    std::string bullet;  // first failing bullet
    std::string detail;
    double width = 0;
};

CheckResult certificate_check(const DualCertificate& c, double alpha, const GramState& g, const OracleContext& ctx,
                              double rho);

struct OracleOutcome {
    enum class Kind { Cut, Dual, Failure };
    Kind kind = Kind::Failure;
    std::string branch;     // "case1.A", "case1.B", "case2.A", "case2.B", "case2.C"
    bool fallback = false;  // accepted outside the branch's primary trigger
    Subset cut;
    double cut_sparsity = 0;
    double ratio_bound = 0;
    DualCertificate dual;
    double width = 0;
    std::string reason;  // failure diagnostics
    double flow_value = 0;
    int directions_tried = 0;
    bool reversed = false;
    // Cheapest proper cut seen while working, whether or not it met the bound.
    Subset best_candidate;
    double best_candidate_sparsity = -1;
};

class NotNormalized : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

Subset ball(const GramState& g, int i, double radius);
double subset_weight(const Subset& s, const std::vector<double>& omega);

struct Preprocessed {
    Subset S;
    int i0 = -1;
};
// Heaviest ball B(i0, 3 / omega_hat); nullopt when none reaches omega_hat / 2.
std::optional<Preprocessed> preprocess_wellspread(const GramState& g, const OracleContext& ctx);

struct DirectionSplit {
    Vec u;
    Subset L, R;
    double stretch = 0;
};
// vhat rows are the rescaled vectors, anchor the rescaled reference point.
std::optional<DirectionSplit> direction_split(const Mat& vhat, const Vec& anchor, const Subset& S,
                                              const std::vector<double>& omega, double omega_hat,
                                              const OracleConfig& cfg, std::mt19937_64& rng);

struct ViolatedPath {
    std::vector<int> vertices;
    double violation = 0;  // sum of hop lengths minus endpoint distance
};
// Most violated l2^2 path inequality with at most max_hops hops, returned only
// when its violation is at or below -threshold.
std::optional<ViolatedPath> find_violated_path(const GramState& g, int max_hops, double threshold);

OracleOutcome case1(double alpha, const GramState& g, const OracleContext& ctx, const OracleConfig& cfg, int i0);
OracleOutcome case2(double alpha, const GramState& g, const OracleContext& ctx, const OracleConfig& cfg,
                    std::mt19937_64& rng);
OracleOutcome run_oracle(double alpha, const GramState& g, const OracleContext& ctx, const OracleConfig& cfg,
                         std::mt19937_64& rng, const Tolerances& tol = {});

}  // namespace hyperspars
