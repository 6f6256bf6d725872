#include "railcg/model.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace railcg::model {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DijkstraResult {
    std::vector<double> dist;
    std::vector<int> pred;
};

// Shortest distances from every block in `sources` (distance includes the
// source block's own length; a route's length is the sum of its blocks).
DijkstraResult dijkstra(const Network& net, const std::vector<int>& sources,
                        const std::vector<char>* blocked = nullptr) {
    const int n = static_cast<int>(net.blocks.size());
    DijkstraResult r{std::vector<double>(n, kInf), std::vector<int>(n, -1)};
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (int s : sources) {
        if (blocked && (*blocked)[s]) continue;
        double d = net.blocks[s].length_m;
        if (d < r.dist[s]) {
            r.dist[s] = d;
            pq.push({d, s});
        }
    }
    while (!pq.empty()) {
        auto [d, b] = pq.top();
        pq.pop();
        if (d > r.dist[b]) continue;
        for (int nb : net.next[b]) {
            if (blocked && (*blocked)[nb]) continue;
            double nd = d + net.blocks[nb].length_m;
            if (nd < r.dist[nb] - 1e-12) {
                r.dist[nb] = nd;
                r.pred[nb] = b;
                pq.push({nd, nb});
            }
        }
    }
    return r;
}

// Blocks a journey from this point may start on.
std::vector<int> departure_blocks(const Network& net, int point) {
    const DispatchingPoint& p = net.points[point];
    if (p.kind == PointKind::entry) return p.blocks;
    std::vector<int> out;
    for (int b : p.blocks)
        for (int nb : net.next[b])
            if (std::find(out.begin(), out.end(), nb) == out.end()) out.push_back(nb);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> arrival_blocks(const Network& net, int point) {
    std::vector<int> out = net.points[point].blocks;
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::vector<int>> shortest_path_blocks(
    const Network& net, const std::vector<int>& sources, const std::vector<int>& targets,
    const std::vector<char>* blocked = nullptr, double* length_out = nullptr) {
    DijkstraResult r = dijkstra(net, sources, blocked);
    int best = -1;
    double best_d = kInf;
    for (int t : targets) {
        if (r.dist[t] < best_d - 1e-12 || (std::abs(r.dist[t] - best_d) <= 1e-12 && (best < 0 || t < best))) {
            best_d = r.dist[t];
            best = t;
        }
    }
    if (best < 0 || best_d == kInf) return std::nullopt;
    std::vector<int> route;
    for (int b = best; b >= 0; b = r.pred[b]) route.push_back(b);
    std::reverse(route.begin(), route.end());
    if (length_out) *length_out = best_d;
    return route;
}

}  // namespace

int Network::block_index(const std::string& id) const {
    for (std::size_t i = 0; i < blocks.size(); ++i)
        if (blocks[i].id == id) return static_cast<int>(i);
    return -1;
}

int Network::point_index(const std::string& id) const {
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i].id == id) return static_cast<int>(i);
    return -1;
}

bool Network::crosses(int b1, int b2) const {
    for (auto [x, y] : crossing_pairs)
        if ((x == b1 && y == b2) || (x == b2 && y == b1)) return true;
    return false;
}

std::vector<std::string> validate_network(const Network& net) {
    std::vector<std::string> bad;
    if (net.points.empty()) bad.push_back("no dispatching points");
    std::set<std::string> ids;
    const int n = static_cast<int>(net.blocks.size());
    for (const auto& b : net.blocks) {
        if (!ids.insert(b.id).second) bad.push_back("duplicate block id: " + b.id);
        if (b.length_m <= 0) bad.push_back("non-positive length: " + b.id);
        if (b.speed_limit_mps <= 0) bad.push_back("non-positive speed limit: " + b.id);
    }
    if (net.next.size() != net.blocks.size()) bad.push_back("adjacency size mismatch");
    for (std::size_t i = 0; i < net.next.size(); ++i)
        for (int t : net.next[i])
            if (t < 0 || t >= n)
                bad.push_back("dangling edge from " + net.blocks[i].id);
    for (auto [a, b] : net.crossing_pairs) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            bad.push_back("crossing pair references missing block");
        else if (a == b)
            bad.push_back("crossing pair is reflexive: " + net.blocks[a].id);
    }
    std::set<std::string> point_ids;
    for (const auto& p : net.points) {
        if (!point_ids.insert(p.id).second) bad.push_back("duplicate point id: " + p.id);
        if (p.kind == PointKind::halt && p.platform_group.empty())
            bad.push_back("halt point without platform group: " + p.id);
        if (p.kind != PointKind::entry && p.blocks.empty())
            bad.push_back("point without anchor blocks: " + p.id);
        for (int b : p.blocks)
            if (b < 0 || b >= n) bad.push_back("point references missing block: " + p.id);
    }
    // Reachability only makes sense on a structurally sound graph.
    if (!bad.empty()) return bad;
    std::vector<int> entry_blocks;
    for (std::size_t i = 0; i < net.points.size(); ++i)
        if (net.points[i].kind == PointKind::entry)
            for (int b : departure_blocks(net, static_cast<int>(i))) entry_blocks.push_back(b);
    if (!entry_blocks.empty()) {
        DijkstraResult r = dijkstra(net, entry_blocks);
        for (const auto& p : net.points) {
            if (p.kind != PointKind::exit) continue;
            bool ok = false;
            for (int b : p.blocks)
                if (b >= 0 && b < n && r.dist[b] < kInf) ok = true;
            if (!ok) bad.push_back("unreachable exit point: " + p.id);
        }
    }
    return bad;
}

double route_length(const Network& net, const std::vector<int>& route) {
    double len = 0.0;
    for (int b : route) len += net.blocks[b].length_m;
    return len;
}

std::optional<double> shortest_route_length(const Network& net, int from_point, int to_point) {
    double len = 0.0;
    auto route = shortest_path_blocks(net, departure_blocks(net, from_point),
                                      arrival_blocks(net, to_point), nullptr, &len);
    if (!route) return std::nullopt;
    return len;
}

// Yen-style enumeration of loop-free routes. Deviations are explored from
// shortest to longest, so the output is sorted by length.
std::vector<std::vector<int>> k_shortest_routes(const Network& net, int from_point,
                                                int to_point, int k, double detour_factor) {
    if (from_point == to_point) throw NoRouteError("route endpoints coincide");
    const std::vector<int> sources = departure_blocks(net, from_point);
    const std::vector<int> targets = arrival_blocks(net, to_point);

    double best_len = 0.0;
    auto first = shortest_path_blocks(net, sources, targets, nullptr, &best_len);
    if (!first)
        throw NoRouteError("no route from " + net.points[from_point].id + " to " +
                           net.points[to_point].id);
    const double cap = detour_factor * best_len;

    std::vector<std::vector<int>> accepted{*first};
    std::vector<double> accepted_len{best_len};
    // Candidate pool keyed by (length, blocks) for deterministic order.
    std::map<std::pair<double, std::vector<int>>, bool> pool;

    const int n = static_cast<int>(net.blocks.size());
    while (static_cast<int>(accepted.size()) < k) {
        const std::vector<int>& last = accepted.back();
        for (std::size_t spur = 0; spur < last.size(); ++spur) {
            std::vector<int> prefix(last.begin(), last.begin() + spur);
            std::vector<char> blocked(n, 0);
            for (int b : prefix) blocked[b] = 1;  // keep routes loop-free
            // Ban the next hop of every accepted route sharing this prefix.
            std::vector<std::pair<int, int>> banned_edges;
            for (const auto& r : accepted) {
                if (r.size() > spur &&
                    std::equal(prefix.begin(), prefix.end(), r.begin()))
                    banned_edges.emplace_back(spur == 0 ? -1 : r[spur - 1], r[spur]);
            }
            // Spur sources: successors allowed after the prefix.
            std::vector<int> spur_sources;
            if (prefix.empty()) {
                for (int s : sources) {
                    bool banned = false;
                    for (auto [pb, nb] : banned_edges)
                        if (pb == -1 && nb == s) banned = true;
                    if (!banned) spur_sources.push_back(s);
                }
            } else {
                int tail = prefix.back();
                for (int s : net.next[tail]) {
                    if (blocked[s]) continue;
                    bool banned = false;
                    for (auto [pb, nb] : banned_edges)
                        if (pb == tail && nb == s) banned = true;
                    if (!banned) spur_sources.push_back(s);
                }
            }
            if (spur_sources.empty()) continue;
            double tail_len = 0.0;
            auto tail_route = shortest_path_blocks(net, spur_sources, targets, &blocked, &tail_len);
            if (!tail_route) continue;
            std::vector<int> full = prefix;
            full.insert(full.end(), tail_route->begin(), tail_route->end());
            double full_len = route_length(net, full);
            if (full_len > cap + 1e-9) continue;
            if (std::find(accepted.begin(), accepted.end(), full) != accepted.end()) continue;
            pool[{full_len, full}] = true;
        }
        if (pool.empty()) break;
        auto it = pool.begin();
        accepted.push_back(it->first.second);
        accepted_len.push_back(it->first.first);
        pool.erase(it);
    }
    return accepted;
}

// ---------------------------------------------------------------------------
// File format

namespace {

using nlohmann::json;

PointKind parse_kind(const std::string& s, const std::string& origin) {
    if (s == "entry") return PointKind::entry;
    if (s == "exit") return PointKind::exit;
    if (s == "halt") return PointKind::halt;
    if (s == "junction") return PointKind::junction;
    throw FormatError(origin + ": unknown point kind '" + s + "'");
}

}  // namespace

NetworkFile parse_network_file(std::istream& in, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(origin + ": " + e.what());
    }
    if (!doc.contains("format_version") || doc["format_version"].get<int>() != 1)
        throw FormatError(origin + ": missing or unsupported format_version");

    NetworkFile out;
    Network& net = out.network;
    std::map<std::string, int> block_of;
    for (const auto& jb : doc.at("blocks")) {
        BlockSection b;
        b.id = jb.at("id").get<std::string>();
        b.length_m = jb.at("length").get<double>();
        b.speed_limit_mps = jb.at("speed_limit").get<double>();
        if (block_of.count(b.id)) throw FormatError(origin + ": duplicate block " + b.id);
        block_of[b.id] = static_cast<int>(net.blocks.size());
        net.blocks.push_back(b);
    }
    net.next.assign(net.blocks.size(), {});
    auto want_block = [&](const std::string& id) {
        auto it = block_of.find(id);
        if (it == block_of.end()) throw FormatError(origin + ": unknown block " + id);
        return it->second;
    };
    for (const auto& je : doc.at("adjacency")) {
        int a = want_block(je.at(0).get<std::string>());
        int b = want_block(je.at(1).get<std::string>());
        net.next[a].push_back(b);
    }
    for (auto& succ : net.next) std::sort(succ.begin(), succ.end());
    if (doc.contains("crossing_pairs"))
        for (const auto& je : doc["crossing_pairs"])
            net.crossing_pairs.emplace_back(want_block(je.at(0).get<std::string>()),
                                            want_block(je.at(1).get<std::string>()));
    for (const auto& jp : doc.at("points")) {
        DispatchingPoint p;
        p.id = jp.at("id").get<std::string>();
        p.kind = parse_kind(jp.at("kind").get<std::string>(), origin);
        if (jp.contains("platform_group")) p.platform_group = jp["platform_group"].get<std::string>();
        for (const auto& jb : jp.at("blocks")) p.blocks.push_back(want_block(jb.get<std::string>()));
        net.points.push_back(p);
    }
    if (doc.contains("services")) {
        for (const auto& js : doc["services"]) {
            TrainService s;
            s.id = js.at("id").get<std::string>();
            s.entry_point = js.at("entry").get<std::string>();
            s.exit_point = js.at("exit").get<std::string>();
            s.entry_time = js.at("entry_time").get<Seconds>();
            s.scheduled_exit = js.at("scheduled_exit").get<Seconds>();
            if (js.contains("halts"))
                for (const auto& jh : js["halts"])
                    s.halts.push_back({jh.at("group").get<std::string>(),
                                       jh.value("min_dwell", Seconds{0})});
            s.max_speed = js.at("max_speed").get<double>();
            s.accel = js.at("accel").get<double>();
            s.decel = js.at("decel").get<double>();
            if (s.scheduled_exit <= s.entry_time)
                throw FormatError(origin + ": service " + s.id + " has scheduled_exit <= entry_time");
            if (s.accel <= 0 || s.decel <= 0 || s.max_speed <= 0)
                throw FormatError(origin + ": service " + s.id + " has non-positive kinematics");
            out.services.push_back(s);
        }
    }
    return out;
}

NetworkFile load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return parse_network_file(in, path);
}

}  // namespace railcg::model
