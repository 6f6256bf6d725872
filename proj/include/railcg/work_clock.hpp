#pragma once

#include <cstdint>

namespace railcg {

// Deterministic cost clock. All reported "cpu" figures and all time-limit
// checks are based on counted work units by default, so a run is a pure
// function of its inputs and reports compare byte for byte across machines.
// One unit is roughly a row-vector operation inside the simplex; the
// calibration constant maps units to second-ish magnitudes on desk-scale
// instances.
class WorkClock {
public:
    static constexpr double kUnitsPerSecond = 2.0e6;

    void charge(std::uint64_t units) { units_ += units; }
    std::uint64_t units() const { return units_; }
    void add(const WorkClock& other) { units_ += other.units_; }

    double seconds() const { return static_cast<double>(units_) / kUnitsPerSecond; }
    std::uint64_t milliseconds() const {
        return static_cast<std::uint64_t>(static_cast<double>(units_) * 1000.0 / kUnitsPerSecond);
    }

private:
    std::uint64_t units_ = 0;
};

}  // namespace railcg
