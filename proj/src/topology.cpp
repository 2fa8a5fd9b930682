#include "stringstab/topology.hpp"

#include <stdexcept>
#include <string>

namespace stringstab {

void DirectedGraph::validate() const {
    if (n_nodes < 0) {
        throw std::invalid_argument("DirectedGraph: negative node count");
    }
    for (const auto& [from, to] : edges) {
        if (from < 0 || from >= n_nodes || to < 0 || to >= n_nodes) {
            throw std::invalid_argument("DirectedGraph: edge (" + std::to_string(from) + ", " +
                                        std::to_string(to) + ") out of range");
        }
        if (from == to) {
            throw std::invalid_argument("DirectedGraph: self-loop at node " + std::to_string(from));
        }
    }
}

bool has_spanning_tree(const DirectedGraph& g) {
    g.validate();
    if (g.n_nodes == 0) return false;
    if (g.n_nodes == 1) return true;

    std::vector<std::vector<int>> out(static_cast<std::size_t>(g.n_nodes));
    for (const auto& [from, to] : g.edges) {
        out[static_cast<std::size_t>(from)].push_back(to);
    }

    std::vector<int> stack;
    std::vector<char> seen(static_cast<std::size_t>(g.n_nodes));
    for (int root = 0; root < g.n_nodes; ++root) {
        seen.assign(seen.size(), 0);
        stack.assign(1, root);
        seen[static_cast<std::size_t>(root)] = 1;
        int reached = 1;
        while (!stack.empty()) {
            const int node = stack.back();
            stack.pop_back();
            for (int next : out[static_cast<std::size_t>(node)]) {
                if (!seen[static_cast<std::size_t>(next)]) {
                    seen[static_cast<std::size_t>(next)] = 1;
                    ++reached;
                    stack.push_back(next);
                }
            }
        }
        if (reached == g.n_nodes) return true;
    }
    return false;
}

Topology::Topology(int n, int r, BoundaryConvention convention)
    : n_(n),
      r_(r),
      convention_(convention),
      laplacian_(static_cast<std::size_t>(n) * n, 0.0),
      degrees_(static_cast<std::size_t>(n), 0) {}

Topology Topology::r_predecessor(int n, int r, BoundaryConvention convention) {
    if (n < 1) throw std::invalid_argument("Topology: follower count must be >= 1");
    if (r < 1) throw std::invalid_argument("Topology: richness must be >= 1");

    Topology t(n, r, convention);
    for (int i = 1; i <= n; ++i) {
        // Predecessor indices i-1..i-r; index 0 is the leader, negative
        // indices exist only under LeaderPadded (identified with the leader).
        const int degree = convention == BoundaryConvention::LeaderPadded ? r : std::min(i, r);
        t.degrees_[static_cast<std::size_t>(i - 1)] = degree;
        t.laplacian_[static_cast<std::size_t>(i - 1) * n + (i - 1)] = degree;
        for (int j = 1; j <= r; ++j) {
            const int pred = i - j;
            if (pred >= 1) {
                t.laplacian_[static_cast<std::size_t>(i - 1) * n + (pred - 1)] = -1.0;
            }
        }
    }
    return t;
}

int Topology::leader_links(int follower) const {
    double sum = 0.0;
    for (int j = 0; j < n_; ++j) {
        sum += laplacian_[static_cast<std::size_t>(follower - 1) * n_ + j];
    }
    return static_cast<int>(sum + 0.5);
}

DirectedGraph Topology::with_leader_graph() const {
    DirectedGraph g;
    g.n_nodes = n_ + 1;
    for (int i = 1; i <= n_; ++i) {
        if (leader_links(i) > 0) {
            g.edges.emplace_back(0, i);
        }
        for (int j = 1; j < i; ++j) {
            if (laplacian(i - 1, j - 1) != 0.0) {
                g.edges.emplace_back(j, i);
            }
        }
    }
    return g;
}

std::vector<double> laplacian_eigenvalues_triangular(const Topology& t) {
    std::vector<double> eigs(static_cast<std::size_t>(t.n()));
    for (int i = 0; i < t.n(); ++i) {
        eigs[static_cast<std::size_t>(i)] = t.laplacian(i, i);
    }
    return eigs;
}

}  // namespace stringstab
