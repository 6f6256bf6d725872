#include "railcg/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace railcg::profiles {

namespace {

double min_speed_limit(const model::Network& net, const std::vector<int>& route) {
    double lim = net.blocks[route.front()].speed_limit_mps;
    for (int b : route) lim = std::min(lim, net.blocks[b].speed_limit_mps);
    return lim;
}

}  // namespace

RunResult trapezoidal_run(const model::Network& net, const std::vector<int>& route,
                          double v_max, double accel, double decel, Seconds dwell,
                          const BlockingConfig& blocking) {
    if (v_max <= 0.0 || accel <= 0.0 || decel <= 0.0)
        throw InvalidKinematicsError("speed and rates must be positive");
    if (route.empty()) throw InvalidKinematicsError("empty route");

    const double total = model::route_length(net, route);
    double v = std::min(v_max, min_speed_limit(net, route));
    double d_acc = v * v / (2.0 * accel);
    double d_dec = v * v / (2.0 * decel);
    if (d_acc + d_dec > total) {
        v = std::sqrt(2.0 * total * accel * decel / (accel + decel));
        d_acc = v * v / (2.0 * accel);
        d_dec = v * v / (2.0 * decel);
    }
    const double cruise_len = std::max(0.0, total - d_acc - d_dec);
    const double t_acc = v / accel;
    const double t_cruise = cruise_len / v;

    auto time_at = [&](double x) {
        if (x <= d_acc) return std::sqrt(2.0 * x / accel);
        if (x <= d_acc + cruise_len) return t_acc + (x - d_acc) / v;
        double rem = x - d_acc - cruise_len;
        double vv = std::max(0.0, v * v - 2.0 * decel * rem);
        return t_acc + t_cruise + (v - std::sqrt(vv)) / decel;
    };

    RunResult out;
    out.peak_speed = v;
    double cum = 0.0;
    for (int b : route) {
        double entry = time_at(cum);
        cum += net.blocks[b].length_m;
        double exit = time_at(cum);
        Occupation o;
        o.block = b;
        o.begin = std::max<Seconds>(0, static_cast<Seconds>(std::floor(entry + 1e-9)) -
                                           blocking.setup_margin);
        o.end = static_cast<Seconds>(std::ceil(exit - 1e-9)) + blocking.clear_time +
                blocking.release_margin;
        out.occupations.push_back(o);
    }
    out.arrival = static_cast<Seconds>(std::ceil(time_at(total) - 1e-9));
    // A successor may not depart before the final block's protected end.
    out.run_time = std::max<Seconds>(out.arrival + dwell,
                                     out.occupations.back().end - blocking.setup_margin);
    return out;
}

const SpeedProfile* ProfileSet::find(int profile_id) const {
    for (const auto& p : profiles)
        if (p.id == profile_id) return &p;
    return nullptr;
}

const std::vector<int>& ProfileSet::successors(int profile_id) const {
    for (std::size_t i = 0; i < profiles.size(); ++i)
        if (profiles[i].id == profile_id) return successor_of[i];
    static const std::vector<int> empty;
    return empty;
}

namespace {

struct StopNode {
    int order = 0;        // topological order key
    int point = -1;
    Seconds dwell = 0;
    bool is_entry = false;
    bool is_exit = false;
};

struct StopEdge {
    int from = -1, to = -1;  // StopNode indices
};

std::vector<int> points_of_group(const model::Network& net, const std::string& group) {
    std::vector<int> out;
    for (std::size_t i = 0; i < net.points.size(); ++i)
        if (net.points[i].kind == model::PointKind::halt &&
            net.points[i].platform_group == group)
            out.push_back(static_cast<int>(i));
    return out;
}

}  // namespace

ProfileSet generate_profiles(const model::TrainService& service, int service_index,
                             const model::Network& net, const GenerationOptions& opt,
                             int first_id) {
    const int entry = net.point_index(service.entry_point);
    const int exit = net.point_index(service.exit_point);
    if (entry < 0 || exit < 0)
        throw NoProfileError("service " + service.id + ": unknown entry or exit point");

    // Journey stages: entry, scheduled halts (any platform of the group), exit.
    struct Stage {
        std::vector<int> points;
        Seconds dwell = 0;
        std::string group;
    };
    std::vector<Stage> stages;
    stages.push_back({{entry}, 0, ""});
    for (const auto& h : service.halts) {
        Stage st;
        st.points = points_of_group(net, h.platform_group);
        st.dwell = h.min_dwell;
        st.group = h.platform_group;
        if (st.points.empty())
            throw NoProfileError("service " + service.id + ": no platforms in group " +
                                 h.platform_group);
        stages.push_back(st);
    }
    stages.push_back({{exit}, 0, ""});

    std::set<std::string> journey_groups;
    for (const auto& st : stages)
        if (!st.group.empty()) journey_groups.insert(st.group);

    // Stop graph: scheduled stage nodes plus at most one inserted halt per
    // segment, admitted only within the detour budget.
    std::vector<StopNode> nodes;
    std::vector<StopEdge> edges;
    std::vector<std::vector<int>> stage_nodes(stages.size());
    for (std::size_t i = 0; i < stages.size(); ++i) {
        for (int p : stages[i].points) {
            StopNode n;
            n.order = static_cast<int>(2 * i);
            n.point = p;
            n.dwell = stages[i].dwell;
            n.is_entry = (i == 0);
            n.is_exit = (i + 1 == stages.size());
            stage_nodes[i].push_back(static_cast<int>(nodes.size()));
            nodes.push_back(n);
        }
    }
    auto shortest = [&](int a, int b) { return model::shortest_route_length(net, a, b); };
    for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
        for (int u : stage_nodes[i])
            for (int v : stage_nodes[i + 1]) edges.push_back({u, v});
        if (!opt.allow_inserted_halts) continue;
        std::set<std::string> groups;
        for (const auto& p : net.points)
            if (p.kind == model::PointKind::halt && !journey_groups.count(p.platform_group))
                groups.insert(p.platform_group);
        for (const auto& g : groups) {
            for (int x : points_of_group(net, g)) {
                // One inserted node per admissible (segment, platform).
                int node_idx = -1;
                for (int u : stage_nodes[i]) {
                    for (int v : stage_nodes[i + 1]) {
                        auto direct = shortest(nodes[u].point, nodes[v].point);
                        auto leg1 = shortest(nodes[u].point, x);
                        auto leg2 = shortest(x, nodes[v].point);
                        if (!direct || !leg1 || !leg2) continue;
                        if (*leg1 + *leg2 > opt.detour_factor * *direct + 1e-9) continue;
                        if (node_idx < 0) {
                            StopNode n;
                            n.order = static_cast<int>(2 * i + 1);
                            n.point = x;
                            n.dwell = 0;
                            node_idx = static_cast<int>(nodes.size());
                            nodes.push_back(n);
                        }
                        edges.push_back({u, node_idx});
                        edges.push_back({node_idx, v});
                    }
                }
            }
        }
    }
    // Deduplicate edges (several (u,v) checks may admit the same leg).
    std::sort(edges.begin(), edges.end(), [](const StopEdge& a, const StopEdge& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const StopEdge& a, const StopEdge& b) {
                                return a.from == b.from && a.to == b.to;
                            }),
                edges.end());

    // Profiles per stop edge: route choice times speed level.
    struct Raw {
        SpeedProfile profile;
        int edge = -1;
    };
    std::vector<Raw> raw;
    std::vector<std::vector<int>> edge_profiles(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const StopNode& nu = nodes[edges[e].from];
        const StopNode& nv = nodes[edges[e].to];
        std::vector<std::vector<int>> routes;
        try {
            routes = model::k_shortest_routes(net, nu.point, nv.point, opt.k,
                                              opt.detour_factor);
        } catch (const NoRouteError&) {
            continue;
        }
        for (const auto& route : routes) {
            const double base = std::min(service.max_speed, min_speed_limit(net, route));
            for (double level : opt.speed_levels) {
                Raw r;
                r.edge = static_cast<int>(e);
                SpeedProfile& p = r.profile;
                p.service = service_index;
                p.from_point = nu.point;
                p.to_point = nv.point;
                p.route = route;
                p.v_max_used = level * base;
                p.dwell = nv.dwell;
                RunResult run = trapezoidal_run(net, route, p.v_max_used, service.accel,
                                                service.decel, nv.dwell, opt.blocking);
                p.run_time = run.run_time;
                p.arrival = run.arrival;
                p.occupations = run.occupations;
                p.stage = nu.order;
                p.is_start = nu.is_entry;
                p.is_end = nv.is_exit;
                edge_profiles[e].push_back(static_cast<int>(raw.size()));
                raw.push_back(std::move(r));
            }
        }
    }

    // Successors: next leg out of the arrival node, with a continuously
    // passable junction (last block feeds the successor's first block).
    std::vector<std::vector<int>> suc(raw.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        for (std::size_t f = 0; f < edges.size(); ++f) {
            if (edges[f].from != edges[e].to) continue;
            for (int a : edge_profiles[e]) {
                for (int b : edge_profiles[f]) {
                    const auto& nxt = net.next[raw[a].profile.route.back()];
                    if (std::find(nxt.begin(), nxt.end(), raw[b].profile.route.front()) !=
                        nxt.end())
                        suc[a].push_back(b);
                }
            }
        }
    }

    // Keep only profiles on some start-to-end chain.
    const int n = static_cast<int>(raw.size());
    std::vector<char> fwd(n, 0), bwd(n, 0);
    std::vector<int> stack;
    for (int i = 0; i < n; ++i)
        if (raw[i].profile.is_start) {
            fwd[i] = 1;
            stack.push_back(i);
        }
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (int j : suc[i])
            if (!fwd[j]) {
                fwd[j] = 1;
                stack.push_back(j);
            }
    }
    std::vector<std::vector<int>> pred(n);
    for (int i = 0; i < n; ++i)
        for (int j : suc[i]) pred[j].push_back(i);
    for (int i = 0; i < n; ++i)
        if (raw[i].profile.is_end) {
            bwd[i] = 1;
            stack.push_back(i);
        }
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (int j : pred[i])
            if (!bwd[j]) {
                bwd[j] = 1;
                stack.push_back(j);
            }
    }

    ProfileSet out;
    out.service = service_index;
    std::vector<int> new_index(n, -1);
    for (int i = 0; i < n; ++i) {
        if (!(fwd[i] && bwd[i])) continue;
        new_index[i] = static_cast<int>(out.profiles.size());
        SpeedProfile p = raw[i].profile;
        p.id = first_id + new_index[i];
        out.profiles.push_back(std::move(p));
    }
    if (out.profiles.empty())
        throw NoProfileError("service " + service.id + ": no feasible profile chain");
    out.successor_of.resize(out.profiles.size());
    for (int i = 0; i < n; ++i) {
        if (new_index[i] < 0) continue;
        for (int j : suc[i])
            if (new_index[j] >= 0)
                out.successor_of[new_index[i]].push_back(out.profiles[new_index[j]].id);
    }
    for (auto& s : out.successor_of) std::sort(s.begin(), s.end());
    for (const auto& p : out.profiles) {
        if (p.is_start) out.start_set.push_back(p.id);
        if (p.is_end) out.end_set.push_back(p.id);
    }
    return out;
}

Seconds fastest_chain_seconds(const ProfileSet& set) {
    constexpr Seconds kUnreachable = std::numeric_limits<Seconds>::max() / 4;
    const int n = static_cast<int>(set.profiles.size());
    std::vector<Seconds> best(n, -1);  // -1: not evaluated yet
    std::map<int, int> local;
    for (int i = 0; i < n; ++i) local[set.profiles[i].id] = i;
    std::function<Seconds(int)> eval = [&](int i) -> Seconds {
        if (best[i] >= 0) return best[i];
        const auto& p = set.profiles[i];
        Seconds tail = p.is_end ? 0 : kUnreachable;
        for (int sid : set.successor_of[i]) tail = std::min(tail, eval(local.at(sid)));
        best[i] = tail >= kUnreachable ? kUnreachable : p.run_time + tail;
        return best[i];
    };
    Seconds out = kUnreachable;
    for (int sid : set.start_set) out = std::min(out, eval(local.at(sid)));
    return out;
}

void Instance::rebuild_index() {
    int max_id = -1;
    for (const auto& set : profile_sets)
        for (const auto& p : set.profiles) max_id = std::max(max_id, p.id);
    profile_by_id.assign(max_id + 1, nullptr);
    for (const auto& set : profile_sets)
        for (const auto& p : set.profiles) profile_by_id[p.id] = &p;
}

Instance build_instance(const model::Network& net,
                        const std::vector<model::TrainService>& services,
                        const GenerationOptions& opt) {
    Instance inst;
    inst.network = net;
    inst.services = services;
    int next_id = 0;
    for (std::size_t i = 0; i < services.size(); ++i) {
        ProfileSet set = generate_profiles(services[i], static_cast<int>(i), inst.network,
                                           opt, next_id);
        next_id += static_cast<int>(set.profiles.size());
        inst.profile_sets.push_back(std::move(set));
    }
    inst.rebuild_index();
    return inst;
}

// ---------------------------------------------------------------------------
// Profile cache

std::uint64_t network_fingerprint(const model::Network& net) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& b : net.blocks) {
        mix(b.id);
        mix(std::to_string(b.length_m));
        mix(std::to_string(b.speed_limit_mps));
    }
    for (std::size_t i = 0; i < net.next.size(); ++i)
        for (int t : net.next[i]) mix(std::to_string(i) + ">" + std::to_string(t));
    for (const auto& p : net.points) {
        mix(p.id);
        mix(p.platform_group);
        for (int b : p.blocks) mix("@" + std::to_string(b));
    }
    for (auto [a, b] : net.crossing_pairs) mix("x" + std::to_string(a) + "," + std::to_string(b));
    return h;
}

std::string cache_key(const model::Network& net, const model::TrainService& service,
                      const GenerationOptions& opt) {
    std::ostringstream os;
    os << std::hex << network_fingerprint(net) << std::dec << "/" << service.id << "/k"
       << opt.k << "/l";
    for (double l : opt.speed_levels) os << l << ",";
    return os.str();
}

namespace {

using nlohmann::json;

json profile_to_json(const SpeedProfile& p) {
    json j;
    j["id"] = p.id;
    j["service"] = p.service;
    j["from"] = p.from_point;
    j["to"] = p.to_point;
    j["route"] = p.route;
    j["v"] = p.v_max_used;
    j["run_time"] = p.run_time;
    j["arrival"] = p.arrival;
    j["dwell"] = p.dwell;
    j["stage"] = p.stage;
    j["start"] = p.is_start;
    j["end"] = p.is_end;
    json occ = json::array();
    for (const auto& o : p.occupations) occ.push_back({o.block, o.begin, o.end});
    j["occ"] = occ;
    return j;
}

SpeedProfile profile_from_json(const json& j) {
    SpeedProfile p;
    p.id = j.at("id").get<int>();
    p.service = j.at("service").get<int>();
    p.from_point = j.at("from").get<int>();
    p.to_point = j.at("to").get<int>();
    p.route = j.at("route").get<std::vector<int>>();
    p.v_max_used = j.at("v").get<double>();
    p.run_time = j.at("run_time").get<Seconds>();
    p.arrival = j.at("arrival").get<Seconds>();
    p.dwell = j.at("dwell").get<Seconds>();
    p.stage = j.at("stage").get<int>();
    p.is_start = j.at("start").get<bool>();
    p.is_end = j.at("end").get<bool>();
    for (const auto& o : j.at("occ"))
        p.occupations.push_back({o.at(0).get<int>(), o.at(1).get<Seconds>(), o.at(2).get<Seconds>()});
    return p;
}

}  // namespace

void save_profile_cache(const std::string& path, const std::string& key,
                        const ProfileSet& set) {
    json doc;
    {
        std::ifstream in(path);
        if (in) {
            try {
                doc = json::parse(in);
            } catch (const json::exception&) {
                doc = json::object();
            }
        }
    }
    if (!doc.contains("entries")) doc["entries"] = json::object();
    json entry;
    entry["service"] = set.service;
    entry["profiles"] = json::array();
    for (const auto& p : set.profiles) entry["profiles"].push_back(profile_to_json(p));
    entry["start_set"] = set.start_set;
    entry["end_set"] = set.end_set;
    entry["successors"] = set.successor_of;
    doc["entries"][key] = entry;
    std::ofstream out(path);
    out << doc.dump();
}

bool load_profile_cache(const std::string& path, const std::string& key, ProfileSet& out) {
    std::ifstream in(path);
    if (!in) return false;
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception&) {
        return false;
    }
    if (!doc.contains("entries") || !doc["entries"].contains(key)) return false;
    const json& entry = doc["entries"][key];
    out = ProfileSet{};
    out.service = entry.at("service").get<int>();
    for (const auto& jp : entry.at("profiles")) out.profiles.push_back(profile_from_json(jp));
    out.start_set = entry.at("start_set").get<std::vector<int>>();
    out.end_set = entry.at("end_set").get<std::vector<int>>();
    out.successor_of = entry.at("successors").get<std::vector<std::vector<int>>>();
    return true;
}

}  // namespace railcg::profiles
