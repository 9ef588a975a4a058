#pragma once

#include <set>
#include <utility>
#include <vector>

namespace camboost {

// Directed acyclic graph over nodes 0..p-1 with a maintained transitive
// closure (closure(j,k) == true iff a directed path of length >= 1 leads
// from j to k).  add_edge refuses cycle-creating insertions.
class Dag {
public:
    using Edge = std::pair<int, int>;  // (source, target)

    Dag() = default;
    explicit Dag(int p);
    static Dag from_edges(int p, const std::vector<Edge>& edges);

    int node_count() const { return p_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::set<Edge>& edges() const { return edges_; }

    bool has_edge(int j, int k) const;
    bool has_path(int j, int k) const;  // path of length >= 1

    // Returns false if the edge is already present (no-op).  Throws
    // std::logic_error if inserting j->k would create a cycle.
    bool add_edge(int j, int k);
    void remove_edge(int j, int k);

    std::vector<int> parents(int k) const;
    std::vector<int> children(int j) const;

    // Kahn's algorithm; also serves as an acyclicity check.
    std::vector<int> topological_sort() const;

    bool operator==(const Dag& other) const {
        return p_ == other.p_ && edges_ == other.edges_;
    }

private:
    void check_node(int v) const;
    void rebuild_closure();

    int p_ = 0;
    std::set<Edge> edges_;
    std::vector<std::vector<char>> closure_;
};

}  // namespace camboost
