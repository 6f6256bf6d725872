#pragma once

#include <string>
#include <vector>

#include "railcg/model.hpp"
#include "railcg/profiles.hpp"

namespace railcg::testsupport {

using model::BlockSection;
using model::DispatchingPoint;
using model::Network;
using model::PointKind;
using model::TrainService;

inline int add_block(Network& net, const std::string& id, double len, double lim) {
    net.blocks.push_back({id, len, lim});
    net.next.emplace_back();
    return static_cast<int>(net.blocks.size()) - 1;
}

inline void link(Network& net, int a, int b) { net.next[a].push_back(b); }

inline int add_point(Network& net, const std::string& id, PointKind kind,
                     std::vector<int> blocks, const std::string& group = "") {
    DispatchingPoint p;
    p.id = id;
    p.kind = kind;
    p.platform_group = group;
    p.blocks = std::move(blocks);
    net.points.push_back(p);
    return static_cast<int>(net.points.size()) - 1;
}

/// Diamond: two alternative arms of 1000 m and 1400 m between 1 m connectors.
inline Network diamond_network() {
    Network net;
    int a = add_block(net, "a", 1.0, 40);
    int top = add_block(net, "top", 1000.0, 40);
    int bot = add_block(net, "bot", 1400.0, 40);
    int z = add_block(net, "z", 1.0, 40);
    link(net, a, top);
    link(net, a, bot);
    link(net, top, z);
    link(net, bot, z);
    add_point(net, "A", PointKind::entry, {a});
    add_point(net, "Z", PointKind::exit, {z});
    return net;
}

/// Three-station line: entry station, a two-platform island station, exit
/// station, plus a crossing line that traverses platform track s2a. This is
/// the canonical microscopic/macroscopic rerouting fixture.
struct LineFixture {
    Network net;
    int w, p2a, p2b, e, xn, xs;   // point indices
    int s2a, s2b;                 // platform block indices
};

inline LineFixture three_station_line() {
    LineFixture f;
    Network& net = f.net;
    int s1dep = add_block(net, "s1dep", 600, 40);
    int j1 = add_block(net, "j1", 200, 40);
    int m1 = add_block(net, "m1", 1500, 50);
    int m2 = add_block(net, "m2", 1500, 50);
    int j2 = add_block(net, "j2", 200, 40);
    f.s2a = add_block(net, "s2a", 400, 30);
    f.s2b = add_block(net, "s2b", 400, 30);
    int j3 = add_block(net, "j3", 200, 40);
    int m3 = add_block(net, "m3", 1500, 50);
    int m4 = add_block(net, "m4", 1500, 50);
    int j4 = add_block(net, "j4", 200, 40);
    int s3arr = add_block(net, "s3arr", 600, 40);
    int x1 = add_block(net, "x1", 800, 30);
    int x2 = add_block(net, "x2", 800, 30);
    link(net, s1dep, j1);
    link(net, j1, m1);
    link(net, m1, m2);
    link(net, m2, j2);
    link(net, j2, f.s2a);
    link(net, j2, f.s2b);
    link(net, f.s2a, j3);
    link(net, f.s2b, j3);
    link(net, j3, m3);
    link(net, m3, m4);
    link(net, m4, j4);
    link(net, j4, s3arr);
    link(net, x1, f.s2a);
    link(net, f.s2a, x2);
    f.w = add_point(net, "S1", PointKind::entry, {s1dep});
    f.p2a = add_point(net, "S2a", PointKind::halt, {f.s2a}, "S2");
    f.p2b = add_point(net, "S2b", PointKind::halt, {f.s2b}, "S2");
    f.e = add_point(net, "S3", PointKind::exit, {s3arr});
    f.xn = add_point(net, "XN", PointKind::entry, {x1});
    f.xs = add_point(net, "XS", PointKind::exit, {x2});
    return f;
}

inline TrainService line_service(const std::string& id, Seconds entry_time,
                                 Seconds scheduled_exit, Seconds dwell = 30,
                                 double vmax = 40, double accel = 0.8,
                                 double decel = 0.9) {
    TrainService s;
    s.id = id;
    s.entry_point = "S1";
    s.exit_point = "S3";
    s.entry_time = entry_time;
    s.scheduled_exit = scheduled_exit;
    s.halts = {{"S2", dwell}};
    s.max_speed = vmax;
    s.accel = accel;
    s.decel = decel;
    return s;
}

inline TrainService crossing_service(const std::string& id, Seconds entry_time,
                                     Seconds scheduled_exit, double vmax = 25,
                                     double accel = 0.7, double decel = 0.8) {
    TrainService s;
    s.id = id;
    s.entry_point = "XN";
    s.exit_point = "XS";
    s.entry_time = entry_time;
    s.scheduled_exit = scheduled_exit;
    s.max_speed = vmax;
    s.accel = accel;
    s.decel = decel;
    return s;
}

/// Single-track corridor shared by every service: entry block, three line
/// blocks, a two-platform station, two line blocks, exit block. Services
/// either call at the station or run through it. Congestion comes from the
/// shared line blocks, platform choice from the station.
struct CorridorFixture {
    Network net;
    std::vector<TrainService> services;
};

/// Deterministic pseudo-random corridor scenario; `n_services` in
/// [2, 12]. Entries are spread so that each service interacts with its
/// temporal neighbors only.
CorridorFixture make_corridor_fixture(std::uint64_t seed, int n_services,
                                      Seconds spacing_mean = 150);

inline profiles::GenerationOptions small_options() {
    profiles::GenerationOptions opt;
    opt.k = 2;
    opt.speed_levels = {1.0, 0.8};
    opt.allow_inserted_halts = false;
    return opt;
}

}  // namespace railcg::testsupport
