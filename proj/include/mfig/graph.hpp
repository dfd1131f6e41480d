#pragma once

#include "mfig/core.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace mfig {

// Dense storage is deliberate: every consumer (Gamma calculus, curvature
// eigenproblems) is dense, and n is capped well below anything sparse would
// help with.
constexpr int max_vertices = 64;

// Simple undirected weighted graph. Edges are stored once with i < j
// (0-based internally); weights are strictly positive and default to 1.
struct Graph {
    int n = 0;
    std::vector<std::array<int, 2>> edges;
    std::vector<double> weights;

    int edge_count() const { return static_cast<int>(edges.size()); }

    bool adjacent(int i, int j) const {
        if (i == j) return false;
        if (i > j) std::swap(i, j);
        for (const auto& e : edges)
            if (e[0] == i && e[1] == j) return true;
        return false;
    }

    // Symmetric weight matrix with zero diagonal; the Theta and A matrices in
    // the curvature pipeline share this layout.
    Matrix weight_matrix() const {
        Matrix w = Matrix::Zero(n, n);
        for (std::size_t k = 0; k < edges.size(); ++k) {
            w(edges[k][0], edges[k][1]) = weights[k];
            w(edges[k][1], edges[k][0]) = weights[k];
        }
        return w;
    }

    std::vector<std::vector<int>> adjacency_lists() const {
        std::vector<std::vector<int>> adj(n);
        for (const auto& e : edges) {
            adj[e[0]].push_back(e[1]);
            adj[e[1]].push_back(e[0]);
        }
        return adj;
    }

    bool connected() const {
        if (n == 0) return false;
        auto adj = adjacency_lists();
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int u : adj[v])
                if (!seen[u]) {
                    seen[u] = 1;
                    ++count;
                    stack.push_back(u);
                }
        }
        return count == n;
    }
};

namespace detail {

inline void check_vertex_count(int n, const char* who) {
    if (n < 1) throw config_error(std::string(who) + ": vertex count must be >= 1");
    if (n > max_vertices)
        throw config_error(std::string(who) + ": vertex count exceeds dense-storage cap of " +
                           std::to_string(max_vertices));
}

} // namespace detail

// Adds edge with normalization to i < j; rejects loops, duplicates, bad
// weights, out-of-range endpoints. Indices are 0-based here; the text format
// below is 1-based.
inline void add_edge(Graph& g, int i, int j, double w = 1.0) {
    if (i == j) throw config_error("edge: loops are not allowed");
    if (i < 0 || j < 0 || i >= g.n || j >= g.n) throw config_error("edge: vertex index out of range");
    if (!(w > 0.0)) throw config_error("edge: weight must be > 0");
    if (i > j) std::swap(i, j);
    if (g.adjacent(i, j)) throw config_error("edge: duplicate edge");
    g.edges.push_back({i, j});
    g.weights.push_back(w);
}

inline void sort_edges(Graph& g) {
    std::vector<std::size_t> order(g.edges.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g.edges[a] < g.edges[b]; });
    std::vector<std::array<int, 2>> e;
    std::vector<double> w;
    e.reserve(order.size());
    w.reserve(order.size());
    for (std::size_t k : order) {
        e.push_back(g.edges[k]);
        w.push_back(g.weights[k]);
    }
    g.edges = std::move(e);
    g.weights = std::move(w);
}

// ===== Standard families =====

inline Graph complete_graph(int n) {
    detail::check_vertex_count(n, "complete_graph");
    Graph g;
    g.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) add_edge(g, i, j);
    return g;
}

inline Graph path_graph(int n) {
    detail::check_vertex_count(n, "path_graph");
    Graph g;
    g.n = n;
    for (int i = 0; i + 1 < n; ++i) add_edge(g, i, i + 1);
    return g;
}

inline Graph cycle_graph(int n) {
    detail::check_vertex_count(n, "cycle_graph");
    if (n < 3) throw config_error("cycle_graph: need at least 3 vertices");
    Graph g;
    g.n = n;
    for (int i = 0; i < n; ++i) add_edge(g, i, (i + 1) % n);
    sort_edges(g);
    return g;
}

// Vertices are the d-bit strings; label = binary value, edges flip one bit.
inline Graph hypercube_graph(int d) {
    if (d < 0) throw config_error("hypercube_graph: dimension must be >= 0");
    int n = 1 << d;
    detail::check_vertex_count(n, "hypercube_graph");
    Graph g;
    g.n = n;
    for (int v = 0; v < n; ++v)
        for (int b = 0; b < d; ++b) {
            int u = v ^ (1 << b);
            if (v < u) add_edge(g, v, u);
        }
    sort_edges(g);
    return g;
}

// Grammar: k<n> | path<n> | cycle<n> | q<d> | file:<path>
inline Graph read_edge_list(std::istream& in);

inline Graph build_standard(const std::string& spec) {
    auto starts_with = [&](const char* pre) { return spec.rfind(pre, 0) == 0; };
    auto num_after = [&](std::size_t k) -> int {
        try {
            std::size_t used = 0;
            int v = std::stoi(spec.substr(k), &used);
            if (used != spec.size() - k) throw std::invalid_argument(spec);
            return v;
        } catch (const std::exception&) {
            throw config_error("graph: malformed spec '" + spec + "'");
        }
    };
    if (starts_with("file:")) {
        std::ifstream f(spec.substr(5));
        if (!f) throw config_error("graph: cannot open file '" + spec.substr(5) + "'");
        return read_edge_list(f);
    }
    if (starts_with("path")) return path_graph(num_after(4));
    if (starts_with("cycle")) return cycle_graph(num_after(5));
    if (starts_with("k")) return complete_graph(num_after(1));
    if (starts_with("q")) return hypercube_graph(num_after(1));
    throw config_error("graph: unknown spec '" + spec + "' (want k<n>|path<n>|cycle<n>|q<d>|file:<path>)");
}

// ===== Cartesian product =====

// Label (u, v) -> u * h.n + v (row-major). Edge weights are inherited from
// the factor supplying the edge.
inline Graph cartesian_product(const Graph& g, const Graph& h) {
    long long nn = static_cast<long long>(g.n) * h.n;
    if (nn > max_vertices) throw config_error("cartesian_product: product exceeds vertex cap");
    Graph out;
    out.n = static_cast<int>(nn);
    for (std::size_t k = 0; k < g.edges.size(); ++k)
        for (int v = 0; v < h.n; ++v)
            add_edge(out, g.edges[k][0] * h.n + v, g.edges[k][1] * h.n + v, g.weights[k]);
    for (std::size_t k = 0; k < h.edges.size(); ++k)
        for (int u = 0; u < g.n; ++u)
            add_edge(out, u * h.n + h.edges[k][0], u * h.n + h.edges[k][1], h.weights[k]);
    sort_edges(out);
    return out;
}

inline Graph relabel(const Graph& g, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != g.n) throw config_error("relabel: permutation size mismatch");
    Graph out;
    out.n = g.n;
    for (std::size_t k = 0; k < g.edges.size(); ++k)
        add_edge(out, perm[g.edges[k][0]], perm[g.edges[k][1]], g.weights[k]);
    sort_edges(out);
    return out;
}

inline bool same_graph(const Graph& a, const Graph& b, double weight_tol = 0.0) {
    if (a.n != b.n || a.edges.size() != b.edges.size()) return false;
    Graph as = a, bs = b;
    sort_edges(as);
    sort_edges(bs);
    for (std::size_t k = 0; k < as.edges.size(); ++k) {
        if (as.edges[k] != bs.edges[k]) return false;
        if (std::abs(as.weights[k] - bs.weights[k]) > weight_tol) return false;
    }
    return true;
}

// ===== Edge-list text format =====
//
//   # comment
//   n <count>
//   i j [weight]        (1-based endpoints)

inline Graph read_edge_list(std::istream& in) {
    std::string line;
    auto next_content_line = [&](std::string& out) -> bool {
        while (std::getline(in, line)) {
            std::size_t h = line.find('#');
            if (h != std::string::npos) line.erase(h);
            std::size_t a = line.find_first_not_of(" \t\r");
            if (a == std::string::npos) continue;
            out = line;
            return true;
        }
        return false;
    };

    std::string header;
    if (!next_content_line(header)) throw config_error("edge list: missing header line 'n <count>'");
    std::istringstream hs(header);
    std::string tag;
    int n = 0;
    if (!(hs >> tag >> n) || tag != "n") throw config_error("edge list: header must be 'n <count>'");
    std::string extra;
    if (hs >> extra) throw config_error("edge list: trailing tokens after header");
    detail::check_vertex_count(n, "edge list");

    Graph g;
    g.n = n;
    std::string row;
    while (next_content_line(row)) {
        std::istringstream rs(row);
        long long i = 0, j = 0;
        double w = 1.0;
        if (!(rs >> i >> j)) throw config_error("edge list: malformed edge line '" + row + "'");
        if (!(rs >> w)) w = 1.0;
        if (rs >> extra) throw config_error("edge list: trailing tokens on edge line '" + row + "'");
        if (i < 1 || j < 1 || i > n || j > n)
            throw config_error("edge list: endpoint out of range on line '" + row + "'");
        add_edge(g, static_cast<int>(i - 1), static_cast<int>(j - 1), w);
    }
    sort_edges(g);
    return g;
}

inline void write_edge_list(const Graph& g, std::ostream& out) {
    out << "n " << g.n << "\n";
    Graph s = g;
    sort_edges(s);
    out.precision(17);
    for (std::size_t k = 0; k < s.edges.size(); ++k) {
        out << (s.edges[k][0] + 1) << " " << (s.edges[k][1] + 1);
        if (s.weights[k] != 1.0) out << " " << s.weights[k];
        out << "\n";
    }
}

// ===== Laplacian assembly =====

// L(m) = diag(m 1) - m for a symmetric nonnegative coupling matrix; row sums
// vanish by construction. The checked variant is the public entry point for
// weight matrices.
inline Matrix laplacian_unchecked(const Matrix& m) {
    Matrix l = -m;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        l(i, i) = 0.0;
        double s = 0.0;
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (j != i) s += m(i, j);
        l(i, i) = s;
    }
    return l;
}

inline Matrix laplacian(const Matrix& m) {
    if (m.rows() != m.cols()) throw config_error("laplacian: matrix must be square");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j && m(i, j) < 0.0)
                throw config_error("laplacian: negative off-diagonal entry");
    return laplacian_unchecked(m);
}

} // namespace mfig
