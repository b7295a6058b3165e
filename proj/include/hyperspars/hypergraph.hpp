#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hyperspars/rational.hpp"

namespace hyperspars {

// Membership mask over vertex indices.
using Subset = std::vector<bool>;

struct Hyperedge {
    std::vector<int> tail;  // sorted, distinct
    std::vector<int> head;  // sorted, distinct
    Rational weight;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class DirectedHypergraph {
public:
    DirectedHypergraph() = default;
    // Validates non-empty tails/heads, 1 <= omega_i <= n, w_e >= 0 and unique names.
    DirectedHypergraph(std::vector<std::string> names, std::vector<std::int64_t> omega,
                       std::vector<Hyperedge> edges);

    int n() const { return static_cast<int>(names_.size()); }
    int m() const { return static_cast<int>(edges_.size()); }
    int r() const { return r_; }
    std::int64_t kappa() const { return kappa_; }
    std::int64_t omega_hat() const { return omega_hat_; }

    const std::vector<std::string>& names() const { return names_; }
    const std::vector<std::int64_t>& omega() const { return omega_; }
    const std::vector<Hyperedge>& edges() const { return edges_; }
    const Hyperedge& edge(int e) const { return edges_[e]; }

    int index_of(std::string_view name) const;  // -1 if absent
    std::vector<double> omega_double() const;
    Rational total_weight() const;

    // Same vertices, every edge with tail and head swapped.
    DirectedHypergraph reversed() const;
    // Every edge weight multiplied by lambda.
    DirectedHypergraph scaled(const Rational& lambda) const;

private:
    std::vector<std::string> names_;
    std::vector<std::int64_t> omega_;
    std::vector<Hyperedge> edges_;
    std::unordered_map<std::string, int> index_;
    int r_ = 0;
    std::int64_t kappa_ = 0;
    std::int64_t omega_hat_ = 0;
};

DirectedHypergraph parse_dhg(std::string_view text);
// Canonical form: vertices sorted by name, edges in stored order, names inside
// each tail and head sorted, weights as p/q in lowest terms.
std::string serialize_dhg(const DirectedHypergraph& h);

Subset subset_from_indices(int n, const std::vector<int>& idx);
std::vector<int> subset_indices(const Subset& s);

bool crosses_out(const Hyperedge& e, const Subset& s);  // e in the out-going cut of s
Rational out_weight(const DirectedHypergraph& h, const Subset& s);
Rational in_weight(const DirectedHypergraph& h, const Subset& s);
std::int64_t subset_omega(const DirectedHypergraph& h, const Subset& s);

// w(out(S)) / (omega(S) omega(V\S)); throws std::invalid_argument unless S is proper.
Rational sparsity(const DirectedHypergraph& h, const Subset& s);
// Same objective with caller-supplied real vertex weights.
double sparsity_weighted(const DirectedHypergraph& h, const Subset& s,
                         const std::vector<double>& omega);

// Weighted degree of every vertex: sum of w_e over edges touching it.
std::vector<Rational> weighted_degrees(const DirectedHypergraph& h);

struct Expansion {
    Rational phi_plus, phi_minus, phi;
};

class UndefinedExpansion : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Uses weighted degrees in place of the file weights.
Expansion expansion(const DirectedHypergraph& h, const Subset& s);

struct Arc {
    int from, to;
    Rational weight;
};

struct ReducedDigraph {
    int n = 0;  // original vertices keep indices 0..n-1
    int m = 0;
    std::vector<Arc> arcs;
    Rational big_weight;
    std::vector<std::string> names;  // one per vertex, gadgets named "e<k>^tail"/"e<k>^head"
    // Arcs of edge e are contiguous from edge_arc[e]: the gadget arc, then one
    // arc per tail vertex, then one arc per head vertex.
    std::vector<int> edge_arc;

    int vertex_count() const { return n + 2 * m; }
    int tail_gadget(int e) const { return n + 2 * e; }
    int head_gadget(int e) const { return n + 2 * e + 1; }
};

ReducedDigraph reduce_to_digraph(const DirectedHypergraph& h);
Subset transform_subset(const DirectedHypergraph& h, const Subset& s);
Rational reduced_out_weight(const ReducedDigraph& g, const Subset& t);

struct Restriction {
    Subset subset;    // T restricted to the original vertices
    bool preserved;   // reduced cut weight was below the big weight
    Rational reduced_cut;
};

Restriction restrict_subset(const ReducedDigraph& g, const Subset& t);

}  // namespace hyperspars
