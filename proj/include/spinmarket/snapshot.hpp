#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "spinmarket/lattice.hpp"

namespace spinmarket {

/**
 * Plain-text lattice snapshot:
 *
 *     ising-snapshot v1 N=<side> step=<t> T=<temp> alpha=<a> seed=<s>
 *     +-+-...   (N lines of N characters)
 *
 * Reals are written in shortest round-trip form, so read -> write is
 * byte-identical.
 */
struct SnapshotHeader {
    int side = 0;
    std::int64_t step = 0;
    double temperature = 0.0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
};

struct Snapshot {
    SnapshotHeader header;
    SpinLattice lattice;
};

std::string format_header(const SnapshotHeader& header);
SnapshotHeader parse_header(const std::string& line);

void write_snapshot(std::ostream& out, const SpinLattice& lattice, const SnapshotHeader& header);
Snapshot read_snapshot(std::istream& in);

void save_snapshot(const std::filesystem::path& path, const SpinLattice& lattice, const SnapshotHeader& header);
Snapshot load_snapshot(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `value`.
std::string shortest_repr(double value);

}  // namespace spinmarket
