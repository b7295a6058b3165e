#include "hyperspars/flownet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

namespace hyperspars {

FlowNetwork::FlowNetwork(int nodes) : head_(nodes, -1) {}

int FlowNetwork::add_arc(int from, int to, double cap) {
    const int id = static_cast<int>(to_.size()) / 2;
    to_.push_back(to);
    cap_.push_back(cap);
    cap0_.push_back(cap);
    next_.push_back(head_[from]);
    head_[from] = 2 * id;
    to_.push_back(from);
    cap_.push_back(0.0);
    cap0_.push_back(0.0);
    next_.push_back(head_[to]);
    head_[to] = 2 * id + 1;
    return id;
}

bool FlowNetwork::bfs(int s, int t, double thr) {
    level_.assign(head_.size(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int a = head_[u]; a != -1; a = next_[a]) {
            if (cap_[a] > thr && level_[to_[a]] < 0) {
                level_[to_[a]] = level_[u] + 1;
                q.push(to_[a]);
            }
        }
    }
    return level_[t] >= 0;
}

double FlowNetwork::dfs(int u, int t, double pushed, double thr) {
    if (u == t) return pushed;
    for (int& a = iter_[u]; a != -1; a = next_[a]) {
        int v = to_[a];
        if (cap_[a] > thr && level_[v] == level_[u] + 1) {
            double d = dfs(v, t, std::min(pushed, cap_[a]), thr);
            if (d > 0) {
                cap_[a] -= d;
                cap_[a ^ 1] += d;
                return d;
            }
        }
    }
    return 0.0;
}

double FlowNetwork::max_flow(int s, int t, double eps) {
    double maxcap = 0;
    for (std::size_t a = 0; a < cap_.size(); a += 2) maxcap = std::max(maxcap, cap_[a]);
    double total = 0;
    auto phase = [&](double thr) {
        while (bfs(s, t, thr)) {
            iter_ = head_;
            while (double f = dfs(s, t, std::numeric_limits<double>::infinity(), thr)) total += f;
        }
    };
    if (maxcap > 0) {
        double delta = std::exp2(std::floor(std::log2(maxcap)));
        for (; delta > eps && delta > maxcap * 1e-15; delta /= 2) phase(delta);
    }
    phase(eps);
    return total;
}

std::vector<bool> FlowNetwork::residual_reachable(int s, double eps) const {
    std::vector<bool> seen(head_.size(), false);
    std::queue<int> q;
    seen[s] = true;
    q.push(s);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int a = head_[u]; a != -1; a = next_[a]) {
            if (cap_[a] > eps && !seen[to_[a]]) {
                seen[to_[a]] = true;
                q.push(to_[a]);
            }
        }
    }
    return seen;
}

FlowInstance make_flow_instance(const ReducedDigraph& g, std::vector<Terminal> sources,
                                std::vector<Terminal> sinks) {
    FlowInstance inst;
    inst.base = &g;
    inst.arc_capacity.resize(g.arcs.size());
    const double big = to_double(g.big_weight);
    for (std::size_t a = 0; a < g.arcs.size(); ++a) inst.arc_capacity[a] = big;
    for (int e = 0; e < g.m; ++e) inst.arc_capacity[g.edge_arc[e]] = to_double(g.arcs[g.edge_arc[e]].weight) / 2;
    inst.sources = std::move(sources);
    inst.sinks = std::move(sinks);
    return inst;
}

MaxFlowResult max_flow(const FlowInstance& inst) {
    const auto& g = *inst.base;
    const int nv = g.vertex_count();
    const int s = nv, t = nv + 1;
    FlowNetwork net(nv + 2);
    double scale = 0;
    for (std::size_t a = 0; a < g.arcs.size(); ++a) {
        net.add_arc(g.arcs[a].from, g.arcs[a].to, inst.arc_capacity[a]);
    }
    for (int e = 0; e < g.m; ++e) scale = std::max(scale, inst.arc_capacity[g.edge_arc[e]]);
    std::vector<int> src_arc, snk_arc;
    for (const auto& term : inst.sources) {
        src_arc.push_back(net.add_arc(s, term.vertex, term.capacity));
        scale = std::max(scale, term.capacity);
    }
    for (const auto& term : inst.sinks) {
        snk_arc.push_back(net.add_arc(term.vertex, t, term.capacity));
        scale = std::max(scale, term.capacity);
    }
    const double eps = 1e-12 * scale;
    MaxFlowResult res;
    res.value = net.max_flow(s, t, eps);
    res.arc_flow.resize(g.arcs.size());
    for (std::size_t a = 0; a < g.arcs.size(); ++a) res.arc_flow[a] = net.flow(static_cast<int>(a));
    for (int a : src_arc) res.source_flow.push_back(net.flow(a));
    for (int a : snk_arc) res.sink_flow.push_back(net.flow(a));
    auto reach = net.residual_reachable(s, eps);
    res.reachable.assign(reach.begin(), reach.begin() + nv);
    return res;
}

double FlowAssignment::total() const {
    double s = 0;
    for (const auto& x : entries) s += x.value;
    return s;
}

void FlowAssignment::scale(double lambda) {
    for (auto& x : entries) x.value *= lambda;
}

FlowAssignment lift_flow(const ReducedDigraph& g, const DirectedHypergraph& h, const std::vector<double>& arc_flow) {
    FlowAssignment out;
    for (int e = 0; e < h.m(); ++e) {
        const auto& he = h.edge(e);
        const int k0 = g.edge_arc[e];
        const double fe = arc_flow[k0];
        const int nt = static_cast<int>(he.tail.size());
        double in = 0, outsum = 0;
        for (int a = 0; a < nt; ++a) in += arc_flow[k0 + 1 + a];
        for (std::size_t b = 0; b < he.head.size(); ++b) outsum += arc_flow[k0 + 1 + nt + b];
        const double tol = 1e-9 * std::max(1.0, fe);
        if (std::abs(in - fe) > tol || std::abs(outsum - fe) > tol)
            throw FlowInconsistency("flow not conserved at gadget of edge " + std::to_string(e));
        if (outsum <= 0 || in <= 0) continue;
        for (int a = 0; a < nt; ++a) {
            const double fin = arc_flow[k0 + 1 + a];
            if (fin <= 0) continue;
            for (std::size_t b = 0; b < he.head.size(); ++b) {
                const double fout = arc_flow[k0 + 1 + nt + b];
                if (fout <= 0) continue;
                out.entries.push_back({e, he.tail[a], he.head[b], fin * fout / outsum});
            }
        }
    }
    return out;
}

Mat flow_matrix(const FlowAssignment& f, int n, Side side) {
    Mat m = Mat::Zero(n, n);
    for (const auto& x : f.entries) add_A(m, x.i, x.j, side, x.value);
    return m;
}

std::string capacity_violation(const FlowAssignment& f, const DirectedHypergraph& h, double rel_tol) {
    std::vector<double> load(h.m(), 0.0);
    for (const auto& x : f.entries) {
        if (x.e < 0 || x.e >= h.m()) return "flow entry names edge " + std::to_string(x.e) + " which does not exist";
        if (!std::isfinite(x.value) || x.value < 0) return "negative or non-finite flow on edge " + std::to_string(x.e);
        const auto& he = h.edge(x.e);
        if (!std::binary_search(he.tail.begin(), he.tail.end(), x.i) ||
            !std::binary_search(he.head.begin(), he.head.end(), x.j))
            return "flow pair outside T(e) x H(e) on edge " + std::to_string(x.e);
        load[x.e] += x.value;
    }
    for (int e = 0; e < h.m(); ++e) {
        const double cap = to_double(h.edge(e).weight) / 2;
        if (load[e] > cap * (1 + rel_tol))
            return "edge " + std::to_string(e) + " carries " + std::to_string(load[e]) + " above capacity " +
                   std::to_string(cap);
    }
    return {};
}

FlowDecomposition decompose(const FlowAssignment& f, int n) {
    FlowDecomposition out;
    const auto& ents = f.entries;
    const int k = static_cast<int>(ents.size());
    std::vector<double> rem(k), kept(k, 0.0);
    std::vector<double> outrem(n, 0.0), inrem(n, 0.0);
    std::vector<std::vector<int>> adj(n);
    double maxval = 0;
    for (int a = 0; a < k; ++a) {
        rem[a] = ents[a].value;
        outrem[ents[a].i] += rem[a];
        inrem[ents[a].j] += rem[a];
        adj[ents[a].i].push_back(a);
        maxval = std::max(maxval, rem[a]);
    }
    const double eps = 1e-12 * maxval;
    auto take = [&](int a, double amt) {
        rem[a] -= amt;
        outrem[ents[a].i] -= amt;
        inrem[ents[a].j] -= amt;
    };
    std::vector<std::size_t> ptr(n, 0);
    std::vector<int> pos(n, -1);
    std::map<Triangle, double> tri;
    std::map<std::pair<int, int>, double> dem;

    for (int s = 0; s < n; ++s) {
        while (outrem[s] - inrem[s] > eps) {
            std::vector<int> verts{s}, arcs;
            pos[s] = 0;
            int u = s;
            bool sink_end = false;
            while (true) {
                if (u != s && inrem[u] - outrem[u] > eps) {
                    sink_end = true;
                    break;
                }
                while (ptr[u] < adj[u].size() && rem[adj[u][ptr[u]]] <= eps) ++ptr[u];
                if (ptr[u] == adj[u].size()) break;  // numerical dead end
                const int a = adj[u][ptr[u]];
                const int v = ents[a].j;
                if (v == u) {
                    out.dropped_cycle_mass += rem[a];
                    take(a, rem[a]);
                    continue;
                }
                if (pos[v] >= 0) {
                    double c = rem[a];
                    for (std::size_t q = pos[v]; q < arcs.size(); ++q) c = std::min(c, rem[arcs[q]]);
                    const std::size_t len = arcs.size() - pos[v] + 1;
                    take(a, c);
                    for (std::size_t q = pos[v]; q < arcs.size(); ++q) take(arcs[q], c);
                    out.dropped_cycle_mass += c * static_cast<double>(len);
                    for (std::size_t q = pos[v] + 1; q < verts.size(); ++q) pos[verts[q]] = -1;
                    verts.resize(pos[v] + 1);
                    arcs.resize(pos[v]);
                    u = v;
                    continue;
                }
                arcs.push_back(a);
                pos[v] = static_cast<int>(verts.size());
                verts.push_back(v);
                u = v;
            }
            for (int v : verts) pos[v] = -1;
            if (arcs.empty()) {
                // Excess left with nowhere to go is rounding residue.
                outrem[s] = inrem[s];
                break;
            }
            double amt = outrem[s] - inrem[s];
            for (int a : arcs) amt = std::min(amt, rem[a]);
            if (sink_end) amt = std::min(amt, inrem[u] - outrem[u]);
            for (int a : arcs) {
                take(a, amt);
                kept[a] += amt;
            }
            const int i0 = verts.front(), ik = verts.back();
            dem[{i0, ik}] += amt;
            for (std::size_t j = 1; j + 1 < verts.size(); ++j) tri[{i0, verts[j], verts[j + 1]}] += amt;
            out.paths.push_back({verts, amt});
        }
    }
    for (int a = 0; a < k; ++a) out.dropped_cycle_mass += std::max(0.0, rem[a]);
    for (int a = 0; a < k; ++a)
        if (kept[a] > 0) out.kept.entries.push_back({ents[a].e, ents[a].i, ents[a].j, kept[a]});
    for (const auto& [p, v] : tri) out.triangles.emplace_back(p, v);
    for (const auto& [ij, v] : dem) out.demand.push_back({ij.first, ij.second, v});
    return out;
}

Mat demand_matrix(const std::vector<DemandEntry>& d, int n, Side side) {
    Mat m = Mat::Zero(n, n);
    for (const auto& x : d) add_A(m, x.i, x.j, side, x.value);
    return m;
}

double demand_total(const std::vector<DemandEntry>& d) {
    double s = 0;
    for (const auto& x : d) s += x.value;
    return s;
}

double demand_norm_bound(const std::vector<DemandEntry>& d, double c_D) { return c_D * demand_total(d); }

double demand_dot(const std::vector<DemandEntry>& d, const GramState& g) {
    double s = 0;
    for (const auto& x : d) s += x.value * g.directed_distance(x.i, x.j);
    return s;
}

bool capacity_duality_check(const FlowAssignment& f, const DirectedHypergraph& h, const GramState& g) {
    double lhs = 0;
    for (const auto& x : f.entries) lhs += x.value * g.directed_distance(x.i, x.j);
    double rhs = 0;
    for (const auto& e : h.edges()) {
        double de = 0;
        for (int i : e.tail)
            for (int j : e.head) de = std::max(de, g.directed_distance(i, j));
        rhs += to_double(e.weight) / 2 * de;
    }
    return lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs));
}

}  // namespace hyperspars
