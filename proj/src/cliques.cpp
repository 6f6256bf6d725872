#include "railcg/cliques.hpp"

#include <algorithm>
#include <ostream>
#include <set>

namespace railcg::cliques {

int ConflictGraph::add_node(int path_id, int service) {
    if (adj_.count(path_id)) throw DuplicatePathError("path already in conflict graph");
    adj_[path_id] = {};
    service_[path_id] = service;
    return path_id;
}

void ConflictGraph::add_edge(int a, int b) {
    if (a == b) throw std::logic_error("self loop in conflict graph");
    if (service_.at(a) == service_.at(b))
        throw std::logic_error("conflict edge within one service");
    auto& na = adj_.at(a);
    if (std::find(na.begin(), na.end(), b) != na.end()) return;
    na.push_back(b);
    adj_.at(b).push_back(a);
    std::sort(na.begin(), na.end());
    auto& nb = adj_.at(b);
    std::sort(nb.begin(), nb.end());
    ++edge_count_;
}

bool ConflictGraph::has_node(int path_id) const { return adj_.count(path_id) > 0; }

bool ConflictGraph::adjacent(int a, int b) const {
    const auto& na = adj_.at(a);
    return std::binary_search(na.begin(), na.end(), b);
}

const std::vector<int>& ConflictGraph::neighbors(int path_id) const {
    return adj_.at(path_id);
}

int ConflictGraph::service_of(int path_id) const { return service_.at(path_id); }

std::vector<int> ConflictGraph::nodes() const {
    std::vector<int> out;
    out.reserve(adj_.size());
    for (const auto& [id, _] : adj_) out.push_back(id);
    return out;
}

namespace {

// Pivoting Bron-Kerbosch; the pivot maximizes |P intersect N(u)|.
void expand(const ConflictGraph& g, std::vector<int>& R, std::vector<int> P,
            std::vector<int> X, std::vector<Clique>& out) {
    if (P.empty() && X.empty()) {
        out.push_back(R);
        return;
    }
    int pivot = -1;
    std::size_t best = 0;
    bool first = true;
    for (const auto& cand_set : {P, X}) {
        for (int u : cand_set) {
            std::size_t cnt = 0;
            for (int p : P)
                if (g.adjacent(u, p)) ++cnt;
            if (first || cnt > best) {
                best = cnt;
                pivot = u;
                first = false;
            }
        }
    }
    std::vector<int> branch;
    for (int v : P)
        if (pivot < 0 || !g.adjacent(pivot, v)) branch.push_back(v);
    for (int v : branch) {
        std::vector<int> P2, X2;
        for (int p : P)
            if (g.adjacent(v, p)) P2.push_back(p);
        for (int x : X)
            if (g.adjacent(v, x)) X2.push_back(x);
        R.push_back(v);
        expand(g, R, std::move(P2), std::move(X2), out);
        R.pop_back();
        P.erase(std::find(P.begin(), P.end(), v));
        X.insert(std::lower_bound(X.begin(), X.end(), v), v);
    }
}

}  // namespace

std::vector<Clique> enumerate_maximal_cliques(const ConflictGraph& g,
                                              const std::vector<int>& nodes) {
    std::vector<int> P = nodes;
    std::sort(P.begin(), P.end());
    std::vector<int> R, X;
    std::vector<Clique> out;
    expand(g, R, std::move(P), std::move(X), out);
    for (auto& c : out) std::sort(c.begin(), c.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Clique> enumerate_maximal_cliques(const ConflictGraph& g) {
    return enumerate_maximal_cliques(g, g.nodes());
}

int CliqueStore::store(Clique c) {
    std::sort(c.begin(), c.end());
    Entry e;
    e.id = static_cast<int>(entries_.size());
    e.members = c;
    index_[c] = e.id;
    entries_.push_back(std::move(e));
    return entries_.back().id;
}

void CliqueStore::retire_dominated(const Clique& by, UpdateResult& result) {
    for (auto& e : entries_) {
        if (!e.live || e.members.size() >= by.size()) continue;
        if (std::includes(by.begin(), by.end(), e.members.begin(), e.members.end())) {
            e.live = false;
            index_.erase(e.members);
            result.retired.push_back(e.id);
        }
    }
}

CliqueStore::UpdateResult CliqueStore::update_with_path(ConflictGraph& g, int a_new,
                                                        int service,
                                                        const std::vector<int>& conflicts_with) {
    UpdateResult result;
    g.add_node(a_new, service);
    for (int a : conflicts_with) g.add_edge(a_new, a);
    if (conflicts_with.empty()) return result;

    // Search only the subgraph induced by a_new and its neighbors; every
    // maximal clique there contains a_new.
    std::vector<int> nodes = g.neighbors(a_new);
    nodes.push_back(a_new);
    std::vector<Clique> found = enumerate_maximal_cliques(g, nodes);
    for (const Clique& cp : found) {
        Clique base;
        for (int a : cp)
            if (a != a_new) base.push_back(a);
        if (base.empty()) continue;  // isolated case cannot occur past this point
        auto it = index_.find(base);
        if (it != index_.end()) {
            Entry& e = entries_[it->second];
            index_.erase(it);
            e.members = cp;
            index_[e.members] = e.id;
            result.extended.push_back(e.id);
            retire_dominated(e.members, result);
        } else {
            int id = store(cp);
            result.created.push_back(id);
            retire_dominated(entries_[id].members, result);
        }
    }
    return result;
}

CliqueStore::UpdateResult CliqueStore::reconcile(const ConflictGraph& g) {
    UpdateResult result;
    for (int a : g.nodes()) {
        if (g.neighbors(a).empty()) continue;
        std::vector<int> nodes = g.neighbors(a);
        nodes.push_back(a);
        for (const Clique& cp : enumerate_maximal_cliques(g, nodes)) {
            if (!std::binary_search(cp.begin(), cp.end(), a)) continue;
            if (cp.size() < 2 || index_.count(cp)) continue;
            // Skip cliques already dominated by a stored superset.
            bool dominated = false;
            for (const auto& [members, id] : index_) {
                if (members.size() >= cp.size() &&
                    std::includes(members.begin(), members.end(), cp.begin(), cp.end())) {
                    dominated = true;
                    break;
                }
            }
            if (dominated) continue;
            int id = store(cp);
            result.created.push_back(id);
            retire_dominated(entries_[id].members, result);
        }
    }
    return result;
}

std::vector<int> CliqueStore::live_ids() const {
    std::vector<int> out;
    for (const auto& e : entries_)
        if (e.live) out.push_back(e.id);
    return out;
}

std::vector<int> CliqueStore::cliques_containing(int path_id) const {
    std::vector<int> out;
    for (const auto& e : entries_)
        if (e.live && std::binary_search(e.members.begin(), e.members.end(), path_id))
            out.push_back(e.id);
    return out;
}

std::size_t CliqueStore::live_count() const {
    std::size_t n = 0;
    for (const auto& e : entries_)
        if (e.live) ++n;
    return n;
}

void CliqueStore::dump(std::ostream& os, const ConflictGraph& g) const {
    os << "# edges\n";
    for (int a : g.nodes())
        for (int b : g.neighbors(a))
            if (a < b) os << a << ' ' << b << '\n';
    os << "# cliques (id live members...)\n";
    for (const auto& e : entries_) {
        os << e.id << ' ' << (e.live ? 1 : 0);
        for (int a : e.members) os << ' ' << a;
        os << '\n';
    }
}

}  // namespace railcg::cliques
