#include "railcg/conflicts.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>

namespace railcg::conflicts {

void ConflictCatalog::add_pair(int v, int w, HeadwayInterval k) {
    if (v > w) {
        std::swap(v, w);
        k = k.swapped();
    }
    pairs_[key(v, w)] = k;
    max_magnitude_ = std::max({max_magnitude_, std::abs(k.lo), std::abs(k.hi)});
}

void ConflictCatalog::add_halting(HaltingCondition h) {
    int idx = static_cast<int>(halting_.size());
    halting_by_vw_[key(h.v, h.w)].push_back(idx);
    max_magnitude_ = std::max({max_magnitude_, std::abs(h.base_lo), std::abs(h.base_hi), h.w_run});
    halting_.push_back(std::move(h));
}

void ConflictCatalog::note_run_time(Seconds f) {
    max_magnitude_ = std::max(max_magnitude_, f);
}

std::optional<HeadwayInterval> ConflictCatalog::interval(int v, int w) const {
    bool flip = v > w;
    auto it = pairs_.find(flip ? key(w, v) : key(v, w));
    if (it == pairs_.end()) return std::nullopt;
    return flip ? it->second.swapped() : it->second;
}

std::vector<const HaltingCondition*> ConflictCatalog::conditions_for(int v, int w,
                                                                     int wsuc) const {
    std::vector<const HaltingCondition*> out;
    auto it = halting_by_vw_.find(key(v, w));
    if (it == halting_by_vw_.end()) return out;
    for (int idx : it->second)
        if (halting_[idx].w_suc == wsuc) out.push_back(&halting_[idx]);
    return out;
}

std::optional<HeadwayInterval> headway_interval(const profiles::SpeedProfile& v,
                                                const profiles::SpeedProfile& w,
                                                const model::Network& net) {
    bool any = false;
    Seconds lo = 0, hi = 0;
    auto consider = [&](const profiles::Occupation& ov, const profiles::Occupation& ow) {
        // Offsets delta = t_w - t_v with overlapping windows form the open
        // interval (ov.begin - ow.end, ov.end - ow.begin); closed at integer
        // granularity by shrinking one second on each side.
        Seconds a = ov.begin - ow.end + 1;
        Seconds b = ov.end - ow.begin - 1;
        if (!any) {
            lo = a;
            hi = b;
            any = true;
        } else {
            lo = std::min(lo, a);
            hi = std::max(hi, b);
        }
    };
    for (const auto& ov : v.occupations)
        for (const auto& ow : w.occupations)
            if (ov.block == ow.block || net.crosses(ov.block, ow.block)) consider(ov, ow);
    if (!any) return std::nullopt;
    return HeadwayInterval{lo, hi};
}

ConflictCatalog build_catalog(const profiles::Instance& inst) {
    ConflictCatalog cat;
    const auto& sets = inst.profile_sets;
    for (std::size_t r1 = 0; r1 < sets.size(); ++r1) {
        for (const auto& p : sets[r1].profiles) cat.note_run_time(p.run_time);
        for (std::size_t r2 = r1 + 1; r2 < sets.size(); ++r2) {
            for (const auto& v : sets[r1].profiles)
                for (const auto& w : sets[r2].profiles)
                    if (auto k = headway_interval(v, w, inst.network))
                        cat.add_pair(v.id, w.id, *k);
        }
    }
    // Halting tuples: for every successor pair (w, w') dwelling at a halt,
    // every other-service profile v touching the halt block observes it.
    for (const auto& set_w : sets) {
        for (std::size_t wi = 0; wi < set_w.profiles.size(); ++wi) {
            const auto& w = set_w.profiles[wi];
            if (set_w.successor_of[wi].empty()) continue;
            if (inst.network.points[w.to_point].kind != model::PointKind::halt) continue;
            const int halt_block = w.halt_block();
            for (int wsuc : set_w.successor_of[wi]) {
                for (const auto& set_v : sets) {
                    if (set_v.service == set_w.service) continue;
                    for (std::size_t vi = 0; vi < set_v.profiles.size(); ++vi) {
                        const auto& v = set_v.profiles[vi];
                        bool uses = std::find(v.route.begin(), v.route.end(), halt_block) !=
                                    v.route.end();
                        if (!uses) continue;
                        auto base = cat.interval(w.id, v.id);
                        if (!base) continue;
                        if (v.halt_block() == halt_block && !set_v.successor_of[vi].empty()) {
                            // Both dwell on the same block: pair the successors.
                            for (int vsuc : set_v.successor_of[vi]) {
                                auto ks = cat.interval(wsuc, vsuc);
                                if (!ks) continue;  // diverging exits cannot meet
                                HaltingCondition h;
                                h.v = v.id;
                                h.v_suc = vsuc;
                                h.w = w.id;
                                h.w_suc = wsuc;
                                h.base_lo = base->lo;
                                h.base_hi = base->hi;
                                h.w_run = w.run_time;
                                h.suc_lo = ks->lo;
                                h.suc_hi = ks->hi;
                                h.halt_block = halt_block;
                                cat.add_halting(h);
                            }
                        } else if (v.halt_block() != halt_block) {
                            HaltingCondition h;
                            h.v = v.id;
                            h.w = w.id;
                            h.w_suc = wsuc;
                            h.base_lo = base->lo;
                            h.base_hi = base->hi;
                            h.w_run = w.run_time;
                            h.halt_block = halt_block;
                            cat.add_halting(h);
                        }
                    }
                }
            }
        }
    }
    return cat;
}

bool paths_conflict(const TrainPath& a1, const TrainPath& a2, const ConflictCatalog& cat) {
    assert(a1.service != a2.service);
    for (const auto& [v, tv] : a1.parts)
        for (const auto& [w, tw] : a2.parts)
            if (auto k = cat.interval(v, w); k && k->contains(tw - tv)) return true;

    auto halting_hit = [&cat](const TrainPath& x, const TrainPath& y) {
        for (std::size_t j = 0; j + 1 < y.parts.size(); ++j) {
            const auto& [w, tw] = y.parts[j];
            const auto& [wsuc, twsuc] = y.parts[j + 1];
            for (std::size_t i = 0; i < x.parts.size(); ++i) {
                const auto& [v, tv] = x.parts[i];
                for (const HaltingCondition* h : cat.conditions_for(v, w, wsuc)) {
                    if (!h->two_halting()) {
                        if (h->base_holds(tv, tw, twsuc)) return true;
                    } else if (i + 1 < x.parts.size() && x.parts[i + 1].first == h->v_suc) {
                        if (h->base_holds(tv, tw, twsuc) &&
                            h->successor_holds(x.parts[i + 1].second, twsuc))
                            return true;
                    }
                }
            }
        }
        return false;
    };
    return halting_hit(a1, a2) || halting_hit(a2, a1);
}

void ConflictCatalog::dump(std::ostream& os, const profiles::Instance& inst) const {
    std::vector<std::pair<std::uint64_t, HeadwayInterval>> rows(pairs_.begin(), pairs_.end());
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    os << "# pairs: v w -l u\n";
    for (const auto& [k, iv] : rows) {
        int v = static_cast<int>(k >> 32);
        int w = static_cast<int>(k & 0xffffffffu);
        os << v << ' ' << w << ' ' << iv.lo << ' ' << iv.hi << '\n';
    }
    os << "# halting: v [v'] w w' -l u f_w block\n";
    for (const auto& h : halting_) {
        os << h.v;
        if (h.two_halting()) os << ' ' << h.v_suc;
        os << ' ' << h.w << ' ' << h.w_suc << ' ' << h.base_lo << ' ' << h.base_hi << ' '
           << h.w_run << ' ' << inst.network.blocks[h.halt_block].id << '\n';
    }
}

}  // namespace railcg::conflicts
