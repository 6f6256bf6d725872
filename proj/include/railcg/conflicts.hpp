#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "railcg/profiles.hpp"
#include "railcg/types.hpp"

namespace railcg::conflicts {

/// Closed integer conflict interval for a profile pair (v, w): the two runs
/// conflict iff lo <= t_w - t_v <= hi. lo is -l(v,w) and hi is u(v,w), the
/// minimum headways when w precedes or follows v.
struct HeadwayInterval {
    Seconds lo = 0;
    Seconds hi = -1;

    Seconds l() const { return -lo; }
    Seconds u() const { return hi; }
    bool contains(Seconds delta) const { return lo <= delta && delta <= hi; }
    HeadwayInterval swapped() const { return {-hi, -lo}; }
};

/// Halting condition: the pair (w, w_suc) dwells at w's final block; the
/// dwell h = t_wsuc - t_w - f_w enlarges the upper headway bound against an
/// observing profile v. For the two-halting kind, v itself halts on the same
/// block and the successor pair (v_suc, w_suc) must also conflict.
struct HaltingCondition {
    int v = -1;
    int v_suc = -1;  // -1 for the crossing kind
    int w = -1;
    int w_suc = -1;
    Seconds base_lo = 0, base_hi = -1;  // K(w, v) on delta = t_v - t_w
    Seconds w_run = 0;                  // f_w
    Seconds suc_lo = 0, suc_hi = -1;    // K(w_suc, v_suc) on delta = t_vs - t_ws
    int halt_block = -1;

    bool two_halting() const { return v_suc >= 0; }

    // Enlarged-interval test: t_v - t_w in [-l(w,v), u(w,v) + h_w], written
    // with the successor departure so the dwell never needs to be formed.
    bool base_holds(Seconds t_v, Seconds t_w, Seconds t_wsuc) const {
        return t_v - t_w >= base_lo && t_v - t_wsuc <= base_hi - w_run;
    }
    bool successor_holds(Seconds t_vsuc, Seconds t_wsuc) const {
        Seconds d = t_vsuc - t_wsuc;
        return suc_lo <= d && d <= suc_hi;
    }
};

/// One timed train movement: a successor-respecting chain of speed profiles
/// with departure times. This is the master-problem column.
struct TrainPath {
    int id = -1;
    int service = -1;
    std::vector<std::pair<int, Seconds>> parts;  // (profile id, departure)
    Seconds exit_time = 0;
    Seconds cost = 0;

    bool same_parts(const TrainPath& other) const { return parts == other.parts; }
};

class ConflictCatalog {
public:
    /// Headway interval of a profile pair, or nullopt when the pair shares no
    /// block and no crossing pair. Works for both argument orders.
    std::optional<HeadwayInterval> interval(int v, int w) const;

    const std::vector<HaltingCondition>& halting_conditions() const { return halting_; }

    /// Halting conditions whose observing profile is v against pair (w, wsuc).
    std::vector<const HaltingCondition*> conditions_for(int v, int w, int wsuc) const;

    std::size_t pair_count() const { return pairs_.size(); }
    std::size_t halting_count() const { return halting_.size(); }

    void add_pair(int v, int w, HeadwayInterval k);
    void add_halting(HaltingCondition h);

    void dump(std::ostream& os, const profiles::Instance& inst) const;

    /// Largest |l|, |u| or f over the catalog; used for big-M sizing.
    Seconds max_magnitude() const { return max_magnitude_; }
    void note_run_time(Seconds f);

private:
    static std::uint64_t key(int a, int b) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint32_t>(b);
    }
    std::unordered_map<std::uint64_t, HeadwayInterval> pairs_;  // canonical v < w
    std::vector<HaltingCondition> halting_;
    std::unordered_map<std::uint64_t, std::vector<int>> halting_by_vw_;
    Seconds max_magnitude_ = 0;
};

/// Headway interval between two profiles from their occupation windows: the
/// convex hull, over every shared or crossing block, of the offsets at which
/// the windows overlap. nullopt when no block is shared or crossing.
std::optional<HeadwayInterval> headway_interval(const profiles::SpeedProfile& v,
                                                const profiles::SpeedProfile& w,
                                                const model::Network& net);

/// Complete catalog over cross-service profile pairs and halting tuples.
ConflictCatalog build_catalog(const profiles::Instance& inst);

/// Authoritative pairwise test: some part pair sits inside its headway
/// interval, or a halting condition holds. Paths must belong to different
/// services.
bool paths_conflict(const TrainPath& a1, const TrainPath& a2, const ConflictCatalog& cat);

}  // namespace railcg::conflicts
