#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <vector>

#include "railcg/types.hpp"

namespace railcg::cliques {

/// Undirected conflict graph over generated train paths. Nodes are path ids;
/// an edge means the two paths conflict. Edges never join paths of the same
/// service.
class ConflictGraph {
public:
    int add_node(int path_id, int service);
    void add_edge(int a, int b);
    bool has_node(int path_id) const;
    bool adjacent(int a, int b) const;
    const std::vector<int>& neighbors(int path_id) const;
    int service_of(int path_id) const;
    std::vector<int> nodes() const;
    std::size_t edge_count() const { return edge_count_; }

private:
    std::map<int, std::vector<int>> adj_;
    std::map<int, int> service_;
    std::size_t edge_count_ = 0;
};

using Clique = std::vector<int>;  // sorted path ids

/// Exactly the maximal cliques of the graph restricted to `nodes`
/// (pivoting Bron-Kerbosch). Output is sorted for determinism.
std::vector<Clique> enumerate_maximal_cliques(const ConflictGraph& g,
                                              const std::vector<int>& nodes);
std::vector<Clique> enumerate_maximal_cliques(const ConflictGraph& g);

/// Set of stored maximal cliques, each tied to a master row. Dominated
/// cliques are retired: their rows stay valid but are never extended again.
class CliqueStore {
public:
    struct Entry {
        int id = -1;
        Clique members;
        bool live = true;
    };

    struct UpdateResult {
        std::vector<int> extended;  // clique ids that gained the new path
        std::vector<int> created;   // new clique ids
        std::vector<int> retired;   // ids dominated during this update
    };

    /// Inserts a_new into the graph (edges from `conflicts_with`) and updates
    /// the stored cliques: a maximal clique C' of the subgraph induced by
    /// a_new extends the stored C = C' minus {a_new} when that exact set is
    /// stored, and is created otherwise. Throws DuplicatePathError when the
    /// path is already a node.
    UpdateResult update_with_path(ConflictGraph& g, int a_new, int service,
                                  const std::vector<int>& conflicts_with);

    /// Re-enumerates every node neighborhood and stores any maximal clique
    /// that drifted out of the incremental view; dominated entries retire.
    UpdateResult reconcile(const ConflictGraph& g);

    const Entry& entry(int id) const { return entries_.at(id); }
    const std::vector<Entry>& entries() const { return entries_; }
    std::vector<int> live_ids() const;
    std::vector<int> cliques_containing(int path_id) const;  // live only
    std::size_t live_count() const;

    void dump(std::ostream& os, const ConflictGraph& g) const;

private:
    int store(Clique c);
    void retire_dominated(const Clique& by, UpdateResult& result);

    std::vector<Entry> entries_;
    std::map<Clique, int> index_;  // live member sets
};

}  // namespace railcg::cliques
