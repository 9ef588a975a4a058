#include "camboost/dag.hpp"

#include <deque>
#include <stdexcept>
#include <string>

namespace camboost {

Dag::Dag(int p) : p_(p) {
    if (p < 0) throw std::invalid_argument("Dag: negative node count");
    closure_.assign(static_cast<std::size_t>(p), std::vector<char>(static_cast<std::size_t>(p), 0));
}

Dag Dag::from_edges(int p, const std::vector<Edge>& edges) {
    Dag g(p);
    for (const auto& [j, k] : edges) g.add_edge(j, k);
    return g;
}

void Dag::check_node(int v) const {
    if (v < 0 || v >= p_) {
        throw std::invalid_argument("Dag: node index " + std::to_string(v) + " out of range [0, " +
                                    std::to_string(p_) + ")");
    }
}

bool Dag::has_edge(int j, int k) const {
    check_node(j);
    check_node(k);
    return edges_.count({j, k}) > 0;
}

bool Dag::has_path(int j, int k) const {
    check_node(j);
    check_node(k);
    return closure_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] != 0;
}

bool Dag::add_edge(int j, int k) {
    check_node(j);
    check_node(k);
    if (j == k) throw std::logic_error("Dag: self-loop " + std::to_string(j) + " rejected");
    if (edges_.count({j, k})) return false;
    if (has_path(k, j)) {
        throw std::logic_error("Dag: edge " + std::to_string(j + 1) + "->" + std::to_string(k + 1) +
                               " would create a cycle");
    }
    edges_.insert({j, k});
    rebuild_closure();
    return true;
}

void Dag::remove_edge(int j, int k) {
    check_node(j);
    check_node(k);
    edges_.erase({j, k});
    rebuild_closure();
}

void Dag::rebuild_closure() {
    // BFS from every node: O(p * (p + E)), plenty at desk scale.
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(p_));
    for (const auto& [j, k] : edges_) adj[static_cast<std::size_t>(j)].push_back(k);
    for (int s = 0; s < p_; ++s) {
        auto& row = closure_[static_cast<std::size_t>(s)];
        row.assign(static_cast<std::size_t>(p_), 0);
        std::deque<int> queue(adj[static_cast<std::size_t>(s)].begin(),
                              adj[static_cast<std::size_t>(s)].end());
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            if (row[static_cast<std::size_t>(v)]) continue;
            row[static_cast<std::size_t>(v)] = 1;
            for (int w : adj[static_cast<std::size_t>(v)]) {
                if (!row[static_cast<std::size_t>(w)]) queue.push_back(w);
            }
        }
    }
}

std::vector<int> Dag::parents(int k) const {
    check_node(k);
    std::vector<int> out;
    for (const auto& [a, b] : edges_) {
        if (b == k) out.push_back(a);
    }
    return out;
}

std::vector<int> Dag::children(int j) const {
    check_node(j);
    std::vector<int> out;
    for (const auto& [a, b] : edges_) {
        if (a == j) out.push_back(b);
    }
    return out;
}

std::vector<int> Dag::topological_sort() const {
    std::vector<int> indegree(static_cast<std::size_t>(p_), 0);
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(p_));
    for (const auto& [j, k] : edges_) {
        adj[static_cast<std::size_t>(j)].push_back(k);
        ++indegree[static_cast<std::size_t>(k)];
    }
    std::deque<int> ready;
    for (int v = 0; v < p_; ++v) {
        if (indegree[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
    }
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(p_));
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop_front();
        order.push_back(v);
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (--indegree[static_cast<std::size_t>(w)] == 0) ready.push_back(w);
        }
    }
    if (static_cast<int>(order.size()) != p_) {
        throw std::logic_error("Dag: topological sort failed, graph contains a cycle");
    }
    return order;
}

}  // namespace camboost
