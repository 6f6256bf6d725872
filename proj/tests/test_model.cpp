#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "railcg/model.hpp"
#include "support/fixtures.hpp"

using namespace railcg;
using namespace railcg::testsupport;

namespace {

// Every loop-free route between two points, by depth-first search.
void enumerate_routes(const model::Network& net, int block, int target_point,
                      std::vector<int>& cur, std::vector<char>& used,
                      std::vector<std::vector<int>>& out) {
    cur.push_back(block);
    used[block] = 1;
    const auto& anchors = net.points[target_point].blocks;
    if (std::find(anchors.begin(), anchors.end(), block) != anchors.end())
        out.push_back(cur);
    for (int nb : net.next[block])
        if (!used[nb]) enumerate_routes(net, nb, target_point, cur, used, out);
    used[block] = 0;
    cur.pop_back();
}

std::vector<std::vector<int>> all_routes(const model::Network& net, int from, int to) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::vector<char> used(net.blocks.size(), 0);
    const auto& p = net.points[from];
    std::vector<int> starts;
    if (p.kind == model::PointKind::entry) {
        starts = p.blocks;
    } else {
        for (int b : p.blocks)
            for (int nb : net.next[b]) starts.push_back(nb);
    }
    for (int s : starts) enumerate_routes(net, s, to, cur, used, out);
    return out;
}

}  // namespace

TEST_CASE("validate_network flags degenerate and broken inputs") {
    model::Network net;
    add_block(net, "b1", 500, 30);
    auto report = model::validate_network(net);
    REQUIRE(!report.empty());
    CHECK(std::find(report.begin(), report.end(), "no dispatching points") != report.end());

    LineFixture fx = three_station_line();
    CHECK(model::validate_network(fx.net).empty());

    model::Network broken = fx.net;
    broken.next[0].push_back(999);
    auto bad = model::validate_network(broken);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].find("dangling edge") != std::string::npos);
}

TEST_CASE("k_shortest_routes on a line returns the unique path") {
    model::Network net;
    int a = add_block(net, "a", 100, 20);
    int b = add_block(net, "b", 100, 20);
    int c = add_block(net, "c", 100, 20);
    link(net, a, b);
    link(net, b, c);
    int from = add_point(net, "F", model::PointKind::entry, {a});
    int to = add_point(net, "T", model::PointKind::exit, {c});
    auto routes = model::k_shortest_routes(net, from, to, 5, 2.5);
    REQUIRE(routes.size() == 1);
    CHECK(routes[0] == std::vector<int>{a, b, c});
}

TEST_CASE("k_shortest_routes on the diamond obeys order and detour factor") {
    model::Network net = diamond_network();
    int from = net.point_index("A"), to = net.point_index("Z");

    auto routes = model::k_shortest_routes(net, from, to, 2, 2.5);
    REQUIRE(routes.size() == 2);
    CHECK(model::route_length(net, routes[0]) < model::route_length(net, routes[1]));
    CHECK(routes[0][1] == net.block_index("top"));
    CHECK(routes[1][1] == net.block_index("bot"));

    auto tight = model::k_shortest_routes(net, from, to, 2, 1.2);
    REQUIRE(tight.size() == 1);
    CHECK(tight[0][1] == net.block_index("top"));
}

TEST_CASE("k_shortest_routes throws NoRoute when unreachable") {
    model::Network net;
    int a = add_block(net, "a", 100, 20);
    int b = add_block(net, "b", 100, 20);
    (void)b;
    int from = add_point(net, "F", model::PointKind::entry, {a});
    int to = add_point(net, "T", model::PointKind::exit, {b});
    CHECK_THROWS_AS(model::k_shortest_routes(net, from, to, 3, 2.5), NoRouteError);
}

TEST_CASE("k_shortest_routes matches exhaustive enumeration on small graphs") {
    // Three-station line has parallel platform tracks at S2; enumerate all
    // loop-free routes and compare the k-shortest prefix.
    LineFixture fx = three_station_line();
    int from = fx.w, to = fx.e;
    auto exhaustive = all_routes(fx.net, from, to);
    std::sort(exhaustive.begin(), exhaustive.end(),
              [&](const auto& r1, const auto& r2) {
                  return model::route_length(fx.net, r1) < model::route_length(fx.net, r2);
              });
    for (int k = 1; k <= static_cast<int>(exhaustive.size()) + 2; ++k) {
        auto got = model::k_shortest_routes(fx.net, from, to, k, 10.0);
        CHECK(got.size() == std::min<std::size_t>(k, exhaustive.size()));
        // Set equality on the common prefix by length; the order within equal
        // lengths may differ, so compare as sets.
        std::set<std::vector<int>> gs(got.begin(), got.end());
        CHECK(gs.size() == got.size());  // duplicate-free
        for (const auto& r : got) {
            CHECK(std::find(exhaustive.begin(), exhaustive.end(), r) != exhaustive.end());
        }
        for (std::size_t i = 1; i < got.size(); ++i)
            CHECK(model::route_length(fx.net, got[i - 1]) <=
                  model::route_length(fx.net, got[i]) + 1e-9);
    }
}

TEST_CASE("route count is monotone in k and detour factor") {
    LineFixture fx = three_station_line();
    std::size_t prev = 0;
    for (int k = 1; k <= 6; ++k) {
        auto got = model::k_shortest_routes(fx.net, fx.w, fx.e, k, 2.5);
        CHECK(got.size() >= prev);
        prev = got.size();
    }
    std::size_t prev_rho = 0;
    for (double rho : {1.0, 1.5, 2.5, 4.0}) {
        auto got = model::k_shortest_routes(fx.net, fx.w, fx.e, 8, rho);
        CHECK(got.size() >= prev_rho);
        prev_rho = got.size();
    }
}

TEST_CASE("network file round trip and validation") {
    std::string text = R"({
      "format_version": 1,
      "blocks": [
        {"id": "b1", "length": 500, "speed_limit": 30},
        {"id": "b2", "length": 700, "speed_limit": 30}
      ],
      "adjacency": [["b1", "b2"]],
      "crossing_pairs": [],
      "points": [
        {"id": "P1", "kind": "entry", "blocks": ["b1"]},
        {"id": "P2", "kind": "exit", "blocks": ["b2"]}
      ],
      "services": [
        {"id": "R1", "entry": "P1", "exit": "P2", "entry_time": 0,
         "scheduled_exit": 300, "max_speed": 30, "accel": 0.8, "decel": 0.9}
      ]
    })";
    std::istringstream in(text);
    auto file = model::parse_network_file(in, "inline");
    CHECK(file.network.blocks.size() == 2);
    CHECK(file.services.size() == 1);
    CHECK(file.services[0].scheduled_exit == 300);
    CHECK(model::validate_network(file.network).empty());

    std::istringstream bad("{\"format_version\": 2}");
    CHECK_THROWS_AS(model::parse_network_file(bad, "inline"), FormatError);
}
