#pragma once

#include <utility>
#include <vector>

namespace stringstab {

/// How followers within the first r slots treat predecessors that would sit
/// beyond the leader. LeaderPadded identifies them with the leader (every
/// in-degree equals r, the interior Toeplitz structure holds for all rows);
/// Truncated keeps only the min(i, r) predecessors that actually exist.
enum class BoundaryConvention { LeaderPadded, Truncated };

/// Directed information-flow graph. An edge (from, to) means `to` receives
/// information from `from`.
struct DirectedGraph {
    int n_nodes = 0;
    std::vector<std::pair<int, int>> edges;

    /// Throws std::invalid_argument on self-loops or out-of-range indices.
    void validate() const;
};

/// Returns true iff some node reaches every node along directed edges.
/// Implemented by reachability search, not eigenvalues.
bool has_spanning_tree(const DirectedGraph& g);

/// r-predecessor communication topology over n followers (leader excluded).
/// The Laplacian is follower-only with leader links folded into the diagonal,
/// hence lower-triangular with nonnegative diagonal and -1 off-diagonals.
/// Immutable after construction.
class Topology {
public:
    /// Builds the r-predecessor topology. Follower i (1-based) listens to
    /// indices i-1, ..., i-r, where index 0 is the leader. Rejects n < 1 or
    /// r < 1 with std::invalid_argument.
    static Topology r_predecessor(int n, int r, BoundaryConvention convention);

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] int richness() const noexcept { return r_; }
    [[nodiscard]] BoundaryConvention boundary() const noexcept { return convention_; }

    /// Laplacian entry, 0-based row/column.
    [[nodiscard]] double laplacian(int i, int j) const {
        return laplacian_[static_cast<std::size_t>(i) * n_ + j];
    }
    [[nodiscard]] const std::vector<double>& laplacian_data() const noexcept { return laplacian_; }

    /// In-degree of each follower; equals the Laplacian diagonal.
    [[nodiscard]] const std::vector<int>& degrees() const noexcept { return degrees_; }

    /// Number of leader links of follower i (1-based) = row sum of row i-1.
    [[nodiscard]] int leader_links(int follower) const;

    /// Full communication graph with the leader as node 0 and followers as
    /// nodes 1..n.
    [[nodiscard]] DirectedGraph with_leader_graph() const;

private:
    Topology(int n, int r, BoundaryConvention convention);

    int n_;
    int r_;
    BoundaryConvention convention_;
    std::vector<double> laplacian_;  // row-major n x n
    std::vector<int> degrees_;
};

/// Exact eigenvalue multiset of a triangular Laplacian: its diagonal.
/// The eigenvalues of -L are the negations.
std::vector<double> laplacian_eigenvalues_triangular(const Topology& t);

}  // namespace stringstab
