#include "hyperspars/hypergraph.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace hyperspars {

namespace {

void normalize_set(std::vector<int>& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

long long parse_count(std::string_view tok, int line, const char* what) {
    if (tok.empty() || tok.size() > 12 ||
        !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParseError(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
    return std::stoll(std::string(tok));
}

}  // namespace

DirectedHypergraph::DirectedHypergraph(std::vector<std::string> names, std::vector<std::int64_t> omega,
                                       std::vector<Hyperedge> edges)
    : names_(std::move(names)), omega_(std::move(omega)), edges_(std::move(edges)) {
    if (names_.size() != omega_.size()) throw std::invalid_argument("names/omega size mismatch");
    const auto n = static_cast<std::int64_t>(names_.size());
    for (int i = 0; i < static_cast<int>(names_.size()); ++i) {
        if (!index_.emplace(names_[i], i).second)
            throw std::invalid_argument("duplicate vertex name '" + names_[i] + "'");
        if (omega_[i] < 1) throw std::invalid_argument("vertex weight below 1 for '" + names_[i] + "'");
        if (omega_[i] > n) throw std::invalid_argument("vertex weight exceeds n for '" + names_[i] + "'");
        kappa_ = std::max(kappa_, omega_[i]);
        omega_hat_ += omega_[i];
    }
    for (auto& e : edges_) {
        normalize_set(e.tail);
        normalize_set(e.head);
        if (e.tail.empty() || e.head.empty()) throw std::invalid_argument("hyperedge with empty tail or head");
        for (int v : e.tail)
            if (v < 0 || v >= n) throw std::invalid_argument("tail vertex out of range");
        for (int v : e.head)
            if (v < 0 || v >= n) throw std::invalid_argument("head vertex out of range");
        if (e.weight < 0) throw std::invalid_argument("negative edge weight");
        r_ = std::max(r_, static_cast<int>(e.tail.size() + e.head.size()));
    }
}

int DirectedHypergraph::index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? -1 : it->second;
}

std::vector<double> DirectedHypergraph::omega_double() const {
    return std::vector<double>(omega_.begin(), omega_.end());
}

Rational DirectedHypergraph::total_weight() const {
    Rational s = 0;
    for (const auto& e : edges_) s += e.weight;
    return s;
}

DirectedHypergraph DirectedHypergraph::reversed() const {
    auto edges = edges_;
    for (auto& e : edges) std::swap(e.tail, e.head);
    return DirectedHypergraph(names_, omega_, std::move(edges));
}

DirectedHypergraph DirectedHypergraph::scaled(const Rational& lambda) const {
    auto edges = edges_;
    for (auto& e : edges) e.weight *= lambda;
    return DirectedHypergraph(names_, omega_, std::move(edges));
}

DirectedHypergraph parse_dhg(std::string_view text) {
    std::vector<std::pair<int, std::vector<std::string_view>>> lines;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        ++lineno;
        auto line = text.substr(pos, nl - pos);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto toks = tokenize(line);
        if (!toks.empty()) lines.emplace_back(lineno, std::move(toks));
        pos = nl + 1;
    }
    if (lines.empty()) throw ParseError(lineno, "missing 'dhg <n> <m>' header");

    const auto& [hline, header] = lines[0];
    if (header.size() != 3 || header[0] != "dhg") throw ParseError(hline, "expected 'dhg <n> <m>'");
    const long long n = parse_count(header[1], hline, "vertex count");
    const long long m = parse_count(header[2], hline, "edge count");
    if (static_cast<long long>(lines.size()) - 1 < n + m)
        throw ParseError(lineno, "expected " + std::to_string(n) + " vertex and " + std::to_string(m) +
                                     " edge lines, file ended early");
    if (static_cast<long long>(lines.size()) - 1 > n + m)
        throw ParseError(lines[n + m + 1].first, "unexpected extra line");

    std::vector<std::string> names;
    std::vector<std::int64_t> omega;
    std::unordered_map<std::string, int> index;
    for (long long k = 0; k < n; ++k) {
        const auto& [ln, toks] = lines[1 + k];
        if (toks.size() != 3 || toks[0] != "v") throw ParseError(ln, "expected 'v <name> <omega>'");
        std::string name(toks[1]);
        long long w = parse_count(toks[2], ln, "vertex weight");
        if (w < 1) throw ParseError(ln, "vertex weight must be at least 1");
        if (w > n) throw ParseError(ln, "vertex weight " + std::to_string(w) + " exceeds n = " + std::to_string(n));
        if (!index.emplace(name, static_cast<int>(k)).second) throw ParseError(ln, "duplicate vertex '" + name + "'");
        names.push_back(std::move(name));
        omega.push_back(w);
    }

    std::vector<Hyperedge> edges;
    for (long long k = 0; k < m; ++k) {
        const auto& [ln, toks] = lines[1 + n + k];
        if (toks.size() < 2 || toks[0] != "e") throw ParseError(ln, "expected 'e <weight> T ... H ...'");
        Hyperedge e;
        try {
            e.weight = parse_rational(toks[1]);
        } catch (const std::invalid_argument& ex) {
            throw ParseError(ln, ex.what());
        }
        if (toks.size() < 3 || toks[2] != "T") throw ParseError(ln, "expected 'T' after edge weight");
        std::size_t i = 3;
        std::vector<int>* target = &e.tail;
        bool seen_head = false;
        for (; i < toks.size(); ++i) {
            if (toks[i] == "H" && !seen_head) {
                seen_head = true;
                target = &e.head;
                continue;
            }
            auto it = index.find(std::string(toks[i]));
            if (it == index.end()) throw ParseError(ln, "unknown vertex '" + std::string(toks[i]) + "'");
            if (std::find(target->begin(), target->end(), it->second) != target->end())
                throw ParseError(ln, "vertex '" + std::string(toks[i]) + "' repeated");
            target->push_back(it->second);
        }
        if (!seen_head) throw ParseError(ln, "missing 'H' section");
        if (e.tail.empty()) throw ParseError(ln, "empty tail");
        if (e.head.empty()) throw ParseError(ln, "empty head");
        edges.push_back(std::move(e));
    }
    return DirectedHypergraph(std::move(names), std::move(omega), std::move(edges));
}

std::string serialize_dhg(const DirectedHypergraph& h) {
    std::ostringstream out;
    out << "dhg " << h.n() << ' ' << h.m() << '\n';
    std::vector<int> order(h.n());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return h.names()[a] < h.names()[b]; });
    for (int v : order) out << "v " << h.names()[v] << ' ' << h.omega()[v] << '\n';
    auto sorted_names = [&](const std::vector<int>& s) {
        std::vector<std::string> ns;
        for (int v : s) ns.push_back(h.names()[v]);
        std::sort(ns.begin(), ns.end());
        return ns;
    };
    for (const auto& e : h.edges()) {
        out << "e " << to_string(e.weight) << " T";
        for (const auto& s : sorted_names(e.tail)) out << ' ' << s;
        out << " H";
        for (const auto& s : sorted_names(e.head)) out << ' ' << s;
        out << '\n';
    }
    return out.str();
}

Subset subset_from_indices(int n, const std::vector<int>& idx) {
    Subset s(n, false);
    for (int i : idx) {
        if (i < 0 || i >= n) throw std::invalid_argument("vertex index out of range");
        s[i] = true;
    }
    return s;
}

std::vector<int> subset_indices(const Subset& s) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(s.size()); ++i)
        if (s[i]) out.push_back(i);
    return out;
}

bool crosses_out(const Hyperedge& e, const Subset& s) {
    bool tail_in = std::any_of(e.tail.begin(), e.tail.end(), [&](int v) { return s[v]; });
    if (!tail_in) return false;
    return std::any_of(e.head.begin(), e.head.end(), [&](int v) { return !s[v]; });
}

Rational out_weight(const DirectedHypergraph& h, const Subset& s) {
    Rational w = 0;
    for (const auto& e : h.edges())
        if (crosses_out(e, s)) w += e.weight;
    return w;
}

Rational in_weight(const DirectedHypergraph& h, const Subset& s) {
    Subset comp(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) comp[i] = !s[i];
    return out_weight(h, comp);
}

std::int64_t subset_omega(const DirectedHypergraph& h, const Subset& s) {
    std::int64_t w = 0;
    for (int i = 0; i < h.n(); ++i)
        if (s[i]) w += h.omega()[i];
    return w;
}

namespace {

void require_proper(const DirectedHypergraph& h, const Subset& s) {
    if (static_cast<int>(s.size()) != h.n()) throw std::invalid_argument("subset size does not match n");
    int k = static_cast<int>(std::count(s.begin(), s.end(), true));
    if (k == 0 || k == h.n()) throw std::invalid_argument("subset must be non-empty and proper");
}

}  // namespace

Rational sparsity(const DirectedHypergraph& h, const Subset& s) {
    require_proper(h, s);
    const auto ws = subset_omega(h, s);
    return out_weight(h, s) / Rational(ws * (h.omega_hat() - ws));
}

double sparsity_weighted(const DirectedHypergraph& h, const Subset& s, const std::vector<double>& omega) {
    require_proper(h, s);
    double ws = 0, total = 0;
    for (int i = 0; i < h.n(); ++i) {
        total += omega[i];
        if (s[i]) ws += omega[i];
    }
    double w = 0;
    for (const auto& e : h.edges())
        if (crosses_out(e, s)) w += to_double(e.weight);
    return w / (ws * (total - ws));
}

std::vector<Rational> weighted_degrees(const DirectedHypergraph& h) {
    std::vector<Rational> deg(h.n(), Rational(0));
    std::vector<int> touched;
    for (const auto& e : h.edges()) {
        touched = e.tail;
        touched.insert(touched.end(), e.head.begin(), e.head.end());
        normalize_set(touched);
        for (int v : touched) deg[v] += e.weight;
    }
    return deg;
}

Expansion expansion(const DirectedHypergraph& h, const Subset& s) {
    require_proper(h, s);
    const auto deg = weighted_degrees(h);
    Rational ws = 0;
    for (int i = 0; i < h.n(); ++i)
        if (s[i]) ws += deg[i];
    if (ws == 0) throw UndefinedExpansion("subset has zero weighted degree");
    Expansion x;
    x.phi_plus = out_weight(h, s) / ws;
    x.phi_minus = in_weight(h, s) / ws;
    x.phi = std::min(x.phi_plus, x.phi_minus);
    return x;
}

ReducedDigraph reduce_to_digraph(const DirectedHypergraph& h) {
    ReducedDigraph g;
    g.n = h.n();
    g.m = h.m();
    g.big_weight = Rational(h.n()) * h.total_weight();
    g.names = h.names();
    for (int e = 0; e < h.m(); ++e) {
        g.names.push_back("e" + std::to_string(e) + "^tail");
        g.names.push_back("e" + std::to_string(e) + "^head");
    }
    for (int e = 0; e < h.m(); ++e) {
        const auto& he = h.edge(e);
        g.edge_arc.push_back(static_cast<int>(g.arcs.size()));
        g.arcs.push_back({g.tail_gadget(e), g.head_gadget(e), he.weight});
        for (int u : he.tail) g.arcs.push_back({u, g.tail_gadget(e), g.big_weight});
        for (int v : he.head) g.arcs.push_back({g.head_gadget(e), v, g.big_weight});
    }
    return g;
}

Subset transform_subset(const DirectedHypergraph& h, const Subset& s) {
    Subset t(h.n() + 2 * h.m(), false);
    for (int i = 0; i < h.n(); ++i) t[i] = s[i];
    for (int e = 0; e < h.m(); ++e) {
        const auto& he = h.edge(e);
        t[h.n() + 2 * e] = std::any_of(he.tail.begin(), he.tail.end(), [&](int v) { return s[v]; });
        t[h.n() + 2 * e + 1] = std::all_of(he.head.begin(), he.head.end(), [&](int v) { return s[v]; });
    }
    return t;
}

Rational reduced_out_weight(const ReducedDigraph& g, const Subset& t) {
    Rational w = 0;
    for (const auto& a : g.arcs)
        if (t[a.from] && !t[a.to]) w += a.weight;
    return w;
}

Restriction restrict_subset(const ReducedDigraph& g, const Subset& t) {
    Restriction r;
    r.subset.assign(t.begin(), t.begin() + g.n);
    r.reduced_cut = reduced_out_weight(g, t);
    r.preserved = r.reduced_cut < g.big_weight;
    return r;
}

}  // namespace hyperspars
