#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "railcg/model.hpp"
#include "railcg/types.hpp"

namespace railcg::profiles {

/// Blocking-time components. A block is claimed setup_margin before the head
/// enters and released clear_time + release_margin after the tail leaves.
struct BlockingConfig {
    Seconds setup_margin = 15;
    Seconds release_margin = 15;
    Seconds clear_time = 10;
};

struct GenerationOptions {
    int k = 3;                                   // routing reduction index
    double detour_factor = 2.5;                  // route-length inflation cap
    std::vector<double> speed_levels = {1.0, 0.85, 0.7};
    bool allow_inserted_halts = true;            // one extra halt per segment
    BlockingConfig blocking;
};

/// Occupation window of one block, in seconds relative to departure.
struct Occupation {
    int block = -1;
    Seconds begin = 0;
    Seconds end = 0;
};

struct RunResult {
    Seconds run_time = 0;  // f_v: standstill-to-standstill plus dwell
    Seconds arrival = 0;   // standstill at the end of the route
    double peak_speed = 0.0;
    std::vector<Occupation> occupations;
};

/// Standstill-to-standstill run over a block sequence: accelerate to the
/// realized peak, cruise, decelerate; triangular when the route is too short.
/// Block entries round down and exits round up, run time rounds up.
RunResult trapezoidal_run(const model::Network& net, const std::vector<int>& route,
                          double v_max, double accel, double decel, Seconds dwell,
                          const BlockingConfig& blocking);

struct SpeedProfile {
    int id = -1;  // unique across the whole instance
    int service = -1;
    int from_point = -1;
    int to_point = -1;
    std::vector<int> route;   // block indices; ends with the anchor block of to_point
    double v_max_used = 0.0;
    Seconds run_time = 0;     // f_v, includes scheduled dwell at to_point
    Seconds arrival = 0;
    Seconds dwell = 0;
    std::vector<Occupation> occupations;
    int stage = 0;            // position along the journey, for diagnostics
    bool is_start = false;
    bool is_end = false;

    int halt_block() const { return route.back(); }
};

struct ProfileSet {
    int service = -1;
    std::vector<SpeedProfile> profiles;           // ids are global
    std::vector<int> start_set, end_set;          // profile ids
    std::vector<std::vector<int>> successor_of;   // local index -> profile ids

    const SpeedProfile* find(int profile_id) const;
    const std::vector<int>& successors(int profile_id) const;
};

/// Generates the profile set of one service: per consecutive journey stop
/// pair (including bounded extra-halt insertions), per route from
/// k_shortest_routes, per speed level. `first_id` numbers profiles so ids are
/// unique across services. Throws NoProfileError when a scheduled halt is
/// unreachable.
ProfileSet generate_profiles(const model::TrainService& service, int service_index,
                             const model::Network& net, const GenerationOptions& opt,
                             int first_id);

/// All preprocessing data of one dispatching area + service set.
struct Instance {
    model::Network network;
    std::vector<model::TrainService> services;
    std::vector<ProfileSet> profile_sets;
    std::vector<const SpeedProfile*> profile_by_id;

    const SpeedProfile& profile(int id) const { return *profile_by_id.at(id); }
    void rebuild_index();
};

Instance build_instance(const model::Network& net,
                        const std::vector<model::TrainService>& services,
                        const GenerationOptions& opt);

/// Duration of the fastest start-to-end chain (sum of run times).
Seconds fastest_chain_seconds(const ProfileSet& set);

// Profile cache: a flat serialized profile set keyed by
// (network hash, service id, k, speed levels).
std::uint64_t network_fingerprint(const model::Network& net);
std::string cache_key(const model::Network& net, const model::TrainService& service,
                      const GenerationOptions& opt);
void save_profile_cache(const std::string& path, const std::string& key,
                        const ProfileSet& set);
bool load_profile_cache(const std::string& path, const std::string& key,
                        ProfileSet& out);

}  // namespace railcg::profiles
