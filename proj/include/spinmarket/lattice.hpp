#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "spinmarket/rng.hpp"

namespace spinmarket {

/// How the |M| entering the minority term is refreshed inside a sweep.
enum class MagnetizationRefresh {
    PerAttempt,  // instantaneous magnetization, updated after every change
    PerSweep,    // frozen at the value seen when the sweep started
};

enum class InitState { Random, AllUp, AllDown, Checkerboard };

InitState parse_init_state(std::string_view name);
std::string_view to_string(InitState init) noexcept;

struct ModelParams {
    int side = 100;
    double coupling = 1.0;           // J
    double minority_coupling = 4.0;  // alpha
    double temperature = 2.2;        // T = 1/beta
    std::uint64_t seed = 1;
    MagnetizationRefresh refresh = MagnetizationRefresh::PerAttempt;

    std::size_t sites() const noexcept {
        return static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
    }
    double beta() const noexcept { return 1.0 / temperature; }

    /// Throws Error(InvalidParams) naming the offending field.
    void validate() const;
};

/// N x N torus of +/-1 spins, row-major, with a cached magnetization sum.
class SpinLattice {
public:
    SpinLattice() = default;
    SpinLattice(int side, std::vector<std::int8_t> spins, std::int64_t step = 0);

    int side() const noexcept { return side_; }
    std::size_t sites() const noexcept { return spins_.size(); }
    std::span<const std::int8_t> spins() const noexcept { return spins_; }

    std::int8_t spin(std::size_t site) const noexcept { return spins_[site]; }
    std::int8_t spin(int row, int col) const noexcept {
        return spins_[static_cast<std::size_t>(row) * side_ + col];
    }

    std::int64_t magnetization_sum() const noexcept { return magnetization_sum_; }
    double magnetization() const noexcept {
        return static_cast<double>(magnetization_sum_) / static_cast<double>(spins_.size());
    }

    std::int64_t step_count() const noexcept { return step_count_; }
    void set_step_count(std::int64_t step) noexcept { step_count_ = step; }
    void advance_step() noexcept { ++step_count_; }

    /// Sum of the four periodic nearest neighbours of `site`.
    int neighbor_sum(std::size_t site) const noexcept;

    /// Writes one spin and keeps the magnetization sum in step.
    void set_spin(std::size_t site, std::int8_t value) noexcept {
        magnetization_sum_ += value - spins_[site];
        spins_[site] = value;
    }

    /// True when every entry is +/-1 and the cached sum matches a recount.
    bool consistent() const noexcept;

    SpinLattice negated() const;

    friend bool operator==(const SpinLattice& a, const SpinLattice& b) noexcept {
        return a.side_ == b.side_ && a.spins_ == b.spins_;
    }

private:
    int side_ = 0;
    std::vector<std::int8_t> spins_;
    std::int64_t magnetization_sum_ = 0;
    std::int64_t step_count_ = 0;
};

/// Builds the initial lattice. Random draws each spin from `rng`.
SpinLattice new_lattice(const ModelParams& params, InitState init, Rng& rng);

/// Same, using a generator seeded from params.seed.
SpinLattice new_lattice(const ModelParams& params, InitState init);

}  // namespace spinmarket
