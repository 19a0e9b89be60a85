#include "spinmarket/lattice.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "spinmarket/error.hpp"

namespace spinmarket {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::SizeMismatch: return "SizeMismatch";
        case ErrorCode::InsufficientTail: return "InsufficientTail";
        case ErrorCode::DegenerateTail: return "DegenerateTail";
        case ErrorCode::DegenerateSeries: return "DegenerateSeries";
        case ErrorCode::MissingSnapshots: return "MissingSnapshots";
        case ErrorCode::Format: return "Format";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

InitState parse_init_state(std::string_view name) {
    if (name == "random") return InitState::Random;
    if (name == "up") return InitState::AllUp;
    if (name == "down") return InitState::AllDown;
    if (name == "checkerboard") return InitState::Checkerboard;
    throw Error(ErrorCode::InvalidParams, "unknown init state '" + std::string(name) + "'");
}

std::string_view to_string(InitState init) noexcept {
    switch (init) {
        case InitState::Random: return "random";
        case InitState::AllUp: return "up";
        case InitState::AllDown: return "down";
        case InitState::Checkerboard: return "checkerboard";
    }
    return "random";
}

void ModelParams::validate() const {
    if (side < 2) throw Error(ErrorCode::InvalidParams, "side must be >= 2");
    if (!(temperature > 0.0) || !std::isfinite(temperature))
        throw Error(ErrorCode::InvalidParams, "temperature must be a finite value > 0");
    if (!std::isfinite(coupling)) throw Error(ErrorCode::InvalidParams, "coupling must be finite");
    if (!std::isfinite(minority_coupling) || minority_coupling < 0.0)
        throw Error(ErrorCode::InvalidParams, "minority coupling must be finite and >= 0");
    // Site indices are drawn as 32-bit values.
    if (sites() > 0xFFFFFFFFULL) throw Error(ErrorCode::InvalidParams, "side too large");
}

SpinLattice::SpinLattice(int side, std::vector<std::int8_t> spins, std::int64_t step)
    : side_(side), spins_(std::move(spins)), step_count_(step) {
    if (side < 2 || spins_.size() != static_cast<std::size_t>(side) * side)
        throw Error(ErrorCode::SizeMismatch, "spin array does not match side*side");
    for (auto s : spins_) {
        if (s != 1 && s != -1) throw Error(ErrorCode::Format, "spin values must be +1 or -1");
    }
    magnetization_sum_ = std::accumulate(spins_.begin(), spins_.end(), std::int64_t{0});
}

int SpinLattice::neighbor_sum(std::size_t site) const noexcept {
    const auto n = static_cast<std::size_t>(side_);
    const std::size_t row = site / n;
    const std::size_t col = site - row * n;
    const std::size_t up = (row == 0 ? site + (n - 1) * n : site - n);
    const std::size_t down = (row == n - 1 ? col : site + n);
    const std::size_t left = (col == 0 ? site + n - 1 : site - 1);
    const std::size_t right = (col == n - 1 ? site + 1 - n : site + 1);
    return spins_[up] + spins_[down] + spins_[left] + spins_[right];
}

bool SpinLattice::consistent() const noexcept {
    std::int64_t sum = 0;
    for (auto s : spins_) {
        if (s != 1 && s != -1) return false;
        sum += s;
    }
    return sum == magnetization_sum_;
}

SpinLattice SpinLattice::negated() const {
    SpinLattice out = *this;
    for (auto& s : out.spins_) s = static_cast<std::int8_t>(-s);
    out.magnetization_sum_ = -magnetization_sum_;
    return out;
}

SpinLattice new_lattice(const ModelParams& params, InitState init, Rng& rng) {
    params.validate();
    const int n = params.side;
    std::vector<std::int8_t> spins(params.sites());
    switch (init) {
        case InitState::Random:
            for (auto& s : spins) s = (rng.next() >> 63) ? 1 : -1;
            break;
        case InitState::AllUp:
            std::fill(spins.begin(), spins.end(), std::int8_t{1});
            break;
        case InitState::AllDown:
            std::fill(spins.begin(), spins.end(), std::int8_t{-1});
            break;
        case InitState::Checkerboard:
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    spins[static_cast<std::size_t>(r) * n + c] = ((r + c) % 2 == 0) ? 1 : -1;
            break;
    }
    return SpinLattice(n, std::move(spins));
}

SpinLattice new_lattice(const ModelParams& params, InitState init) {
    Rng rng(params.seed);
    return new_lattice(params, init, rng);
}

}  // namespace spinmarket
