#pragma once

#include <string>
#include <vector>

#include "hyperspars/hypergraph.hpp"
#include "hyperspars/sdpcore.hpp"

namespace hyperspars {

// Dinic's algorithm with capacity scaling over real capacities.
class FlowNetwork {
public:
    explicit FlowNetwork(int nodes);
    int add_arc(int from, int to, double cap);
    // eps: residuals at or below it count as saturated.
    double max_flow(int s, int t, double eps);
    double flow(int arc) const { return cap0_[2 * arc] - cap_[2 * arc]; }
    std::vector<bool> residual_reachable(int s, double eps) const;
    int node_count() const { return static_cast<int>(head_.size()); }

private:
    bool bfs(int s, int t, double thr);
    double dfs(int u, int t, double pushed, double thr);

    std::vector<int> head_, next_, to_;
    std::vector<double> cap_, cap0_;
    std::vector<int> level_, iter_;
};

struct Terminal {
    int vertex;
    double capacity;
};

// Reduced digraph with gadget arcs at capacity big_weight and edge arcs at
// c_e = w_e / 2, plus source arcs s -> i and sink arcs j -> t.
struct FlowInstance {
    const ReducedDigraph* base = nullptr;
    std::vector<double> arc_capacity;  // per base arc
    std::vector<Terminal> sources, sinks;
};

FlowInstance make_flow_instance(const ReducedDigraph& g, std::vector<Terminal> sources,
                                std::vector<Terminal> sinks);

struct MaxFlowResult {
    double value = 0;
    std::vector<double> arc_flow;     // per base arc
    std::vector<double> source_flow;  // per source terminal
    std::vector<double> sink_flow;    // per sink terminal
    Subset reachable;                 // reduced-digraph vertices reachable from s in the residual graph
};

MaxFlowResult max_flow(const FlowInstance& inst);

struct FlowEntry {
    int e, i, j;  // i in T(e), j in H(e)
    double value;
};

struct FlowAssignment {
    std::vector<FlowEntry> entries;
    double total() const;
    void scale(double lambda);
};

class FlowInconsistency : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Pairs inflow at each tail gadget with outflow at its head gadget
// proportionally. Throws FlowInconsistency if a gadget leaks more than 1e-9.
FlowAssignment lift_flow(const ReducedDigraph& g, const DirectedHypergraph& h,
                         const std::vector<double>& arc_flow);

Mat flow_matrix(const FlowAssignment& f, int n, Side side);

// Empty string when every entry is non-negative, has i in T(e), j in H(e), and
// each edge carries at most (1 + rel_tol) w_e / 2; otherwise the first problem.
std::string capacity_violation(const FlowAssignment& f, const DirectedHypergraph& h, double rel_tol = 1e-9);

struct DemandEntry {
    int i, j;
    double value;
};

struct FlowPath {
    std::vector<int> vertices;
    double amount;
};

struct FlowDecomposition {
    std::vector<std::pair<Triangle, double>> triangles;  // sorted by triangle
    std::vector<DemandEntry> demand;                      // sorted by (i, j)
    FlowAssignment kept;                                  // input minus dropped cycles
    std::vector<FlowPath> paths;
    double dropped_cycle_mass = 0;
};

// Path/cycle decomposition of the pairwise flow graph. Paths start where net
// flow leaves and end where it arrives; cycles are dropped.
FlowDecomposition decompose(const FlowAssignment& f, int n);

Mat demand_matrix(const std::vector<DemandEntry>& d, int n, Side side);
double demand_total(const std::vector<DemandEntry>& d);
double demand_norm_bound(const std::vector<DemandEntry>& d, double c_D);
double demand_dot(const std::vector<DemandEntry>& d, const GramState& g);

// F . X <= sum_e c_e d_e with d_e = max(0, max over T(e) x H(e) of A_ij . X).
bool capacity_duality_check(const FlowAssignment& f, const DirectedHypergraph& h, const GramState& g);

}  // namespace hyperspars
