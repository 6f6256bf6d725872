#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "railcg/cliques.hpp"
#include "railcg/rng.hpp"
#include "support/oracles.hpp"

using namespace railcg;
using namespace railcg::cliques;
using railcg::testsupport::brute_force_maximal_cliques;

namespace {

ConflictGraph graph_from_matrix(const std::vector<std::vector<char>>& adj) {
    ConflictGraph g;
    const int n = static_cast<int>(adj.size());
    for (int i = 0; i < n; ++i) g.add_node(i, i);  // one service per node
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (adj[i][j]) g.add_edge(i, j);
    return g;
}

std::vector<std::vector<char>> random_matrix(Rng& rng, int n, double p) {
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.next_double() < p) adj[i][j] = adj[j][i] = 1;
    return adj;
}

std::set<Clique> live_set(const CliqueStore& store) {
    std::set<Clique> out;
    for (const auto& e : store.entries())
        if (e.live) out.insert(e.members);
    return out;
}

}  // namespace

TEST_CASE("maximal cliques of a triangle and of a path") {
    auto tri = graph_from_matrix({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    auto got = enumerate_maximal_cliques(tri);
    REQUIRE(got.size() == 1);
    CHECK(got[0] == Clique{0, 1, 2});

    auto path = graph_from_matrix({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}});
    auto got2 = enumerate_maximal_cliques(path);
    REQUIRE(got2.size() == 2);
    CHECK(got2[0] == Clique{0, 1});
    CHECK(got2[1] == Clique{1, 2});
}

TEST_CASE("enumeration equals brute force on random graphs") {
    Rng rng(123);
    for (int it = 0; it < 100; ++it) {
        int n = 2 + static_cast<int>(rng.next_below(11));
        auto adj = random_matrix(rng, n, 0.4);
        auto g = graph_from_matrix(adj);
        auto got = enumerate_maximal_cliques(g);
        auto want = brute_force_maximal_cliques(adj);
        CHECK(got == want);
    }
}

TEST_CASE("incremental update: worked four-node example") {
    ConflictGraph g;
    CliqueStore store;
    // Build up to cliques {a1,a2,a3} and {a2,a4}: nodes 1..4.
    store.update_with_path(g, 1, 1, {});
    store.update_with_path(g, 2, 2, {1});
    store.update_with_path(g, 3, 3, {1, 2});
    store.update_with_path(g, 4, 4, {2});
    REQUIRE(live_set(store) == std::set<Clique>{{1, 2, 3}, {2, 4}});

    auto res = store.update_with_path(g, 5, 5, {1, 2, 4});
    REQUIRE(res.extended.size() == 1);
    CHECK(store.entry(res.extended[0]).members == Clique{2, 4, 5});
    REQUIRE(res.created.size() == 1);
    CHECK(store.entry(res.created[0]).members == Clique{1, 2, 5});
    CHECK(res.retired.empty());
    CHECK(live_set(store) == std::set<Clique>{{1, 2, 3}, {2, 4, 5}, {1, 2, 5}});
}

TEST_CASE("insertion without conflicts changes nothing") {
    ConflictGraph g;
    CliqueStore store;
    store.update_with_path(g, 1, 1, {});
    auto res = store.update_with_path(g, 2, 2, {});
    CHECK(res.extended.empty());
    CHECK(res.created.empty());
    CHECK(store.live_count() == 0);
}

TEST_CASE("duplicate insertion is rejected") {
    ConflictGraph g;
    CliqueStore store;
    store.update_with_path(g, 1, 1, {});
    CHECK_THROWS_AS(store.update_with_path(g, 1, 2, {}), DuplicatePathError);
}

TEST_CASE("extension requires the exact base clique") {
    ConflictGraph g;
    CliqueStore store;
    store.update_with_path(g, 1, 1, {});
    store.update_with_path(g, 2, 2, {1});
    store.update_with_path(g, 3, 3, {1, 2});
    // New path adjacent to a1, a2 only: base {1,2} is not stored (only
    // {1,2,3} is), so a new clique is created rather than extending it.
    auto res = store.update_with_path(g, 4, 4, {1, 2});
    CHECK(res.extended.empty());
    REQUIRE(res.created.size() == 1);
    CHECK(store.entry(res.created[0]).members == Clique{1, 2, 4});
    CHECK(live_set(store) == std::set<Clique>{{1, 2, 3}, {1, 2, 4}});
}

TEST_CASE("random insertion sequences stay consistent and reconcile exactly") {
    Rng rng(2024);
    for (int it = 0; it < 100; ++it) {
        int n = 4 + static_cast<int>(rng.next_below(9));
        auto adj = random_matrix(rng, n, 0.45);
        ConflictGraph g;
        CliqueStore store;
        for (int v = 0; v < n; ++v) {
            std::vector<int> conf;
            for (int u = 0; u < v; ++u)
                if (adj[u][v]) conf.push_back(u);
            store.update_with_path(g, v, v, conf);

            // Store invariants after every insertion.
            auto live = live_set(store);
            for (const auto& c : live) {
                for (std::size_t i = 0; i < c.size(); ++i)
                    for (std::size_t j = i + 1; j < c.size(); ++j)
                        CHECK(g.adjacent(c[i], c[j]));
                for (const auto& d : live)
                    if (c != d)
                        CHECK(!std::includes(d.begin(), d.end(), c.begin(), c.end()));
            }
            // Every edge is covered by some live clique.
            for (int a = 0; a <= v; ++a)
                for (int b = a + 1; b <= v; ++b) {
                    if (!adj[a][b]) continue;
                    bool covered = false;
                    for (const auto& c : live)
                        if (std::binary_search(c.begin(), c.end(), a) &&
                            std::binary_search(c.begin(), c.end(), b))
                            covered = true;
                    CHECK(covered);
                }
        }
        store.reconcile(g);
        auto want_raw = brute_force_maximal_cliques(adj);
        std::set<Clique> want;
        for (const auto& c : want_raw)
            if (c.size() >= 2) want.insert(c);
        CHECK(live_set(store) == want);
    }
}
