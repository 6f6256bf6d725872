#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "railcg/types.hpp"

namespace railcg::model {

/// Atomic infrastructure resource; two trains may not occupy one at a time.
struct BlockSection {
    std::string id;
    double length_m = 0.0;
    double speed_limit_mps = 0.0;
};

enum class PointKind { entry, exit, halt, junction };

/// A location where routing or timing decisions may change. Halt points carry
/// the platform group they belong to; a scheduled halt is satisfied by any
/// point of the group.
struct DispatchingPoint {
    std::string id;
    PointKind kind = PointKind::junction;
    std::string platform_group;  // required for halts
    // Anchor blocks. For entry points: blocks a journey may start on.
    // For every other kind: blocks whose exit boundary lies at this point
    // (a train calling here comes to rest at the end of one of them).
    std::vector<int> blocks;
};

struct Network {
    std::vector<BlockSection> blocks;
    std::vector<DispatchingPoint> points;
    std::vector<std::vector<int>> next;  // directed block adjacency
    std::vector<std::pair<int, int>> crossing_pairs;  // unordered, irreflexive

    int block_index(const std::string& id) const;
    int point_index(const std::string& id) const;
    bool crosses(int b1, int b2) const;
};

struct ScheduledHalt {
    std::string platform_group;
    Seconds min_dwell = 0;
};

struct TrainService {
    std::string id;
    std::string entry_point;
    std::string exit_point;
    Seconds entry_time = 0;       // earliest entry per timetable
    Seconds scheduled_exit = 0;   // timetable exit time
    std::vector<ScheduledHalt> halts;
    double max_speed = 0.0;  // m/s
    double accel = 0.0;      // m/s^2
    double decel = 0.0;      // m/s^2
    Seconds disturbance = 0;  // added to the entry time for a scenario run

    Seconds disturbed_entry() const { return entry_time + disturbance; }
};

/// Report-style structural check; an empty result means the network is
/// well formed.
std::vector<std::string> validate_network(const Network& net);

/// At most k loop-free block sequences from `from` to `to`, ordered by
/// length, each no longer than detour_factor times the shortest. Throws
/// NoRouteError when `to` is unreachable.
std::vector<std::vector<int>> k_shortest_routes(const Network& net, int from_point,
                                                int to_point, int k,
                                                double detour_factor);

double route_length(const Network& net, const std::vector<int>& route);

/// Shortest route length between two points, or nullopt when unreachable.
std::optional<double> shortest_route_length(const Network& net, int from_point,
                                            int to_point);

// Structured-text loading (schema documented in the README; carries a
// format_version field).
struct NetworkFile {
    Network network;
    std::vector<TrainService> services;
};

NetworkFile load_network_file(const std::string& path);
NetworkFile parse_network_file(std::istream& in, const std::string& origin);

}  // namespace railcg::model
