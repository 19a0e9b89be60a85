#include "spinmarket/snapshot.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "spinmarket/error.hpp"

namespace spinmarket {

namespace {

constexpr std::string_view kMagic = "ising-snapshot";
constexpr std::string_view kVersion = "v1";

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(ErrorCode::Format, "snapshot header: bad value for " + std::string(key) + ": '" +
                                           std::string(text) + "'");
    return value;
}

std::string_view expect_field(std::istringstream& tokens, std::string_view key) {
    static thread_local std::string token;
    if (!(tokens >> token)) throw Error(ErrorCode::Format, "snapshot header: missing " + std::string(key));
    std::string_view view = token;
    if (view.substr(0, key.size()) != key || view.size() <= key.size() || view[key.size()] != '=')
        throw Error(ErrorCode::Format, "snapshot header: expected " + std::string(key) + "=..., got '" + token + "'");
    return view.substr(key.size() + 1);
}

}  // namespace

std::string shortest_repr(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ec == std::errc{} ? ptr : buf);
}

std::string format_header(const SnapshotHeader& h) {
    std::string line;
    line += kMagic;
    line += ' ';
    line += kVersion;
    line += " N=" + std::to_string(h.side);
    line += " step=" + std::to_string(h.step);
    line += " T=" + shortest_repr(h.temperature);
    line += " alpha=" + shortest_repr(h.alpha);
    line += " seed=" + std::to_string(h.seed);
    return line;
}

SnapshotHeader parse_header(const std::string& line) {
    std::istringstream tokens(line);
    std::string magic, version;
    tokens >> magic >> version;
    if (magic != kMagic) throw Error(ErrorCode::Format, "not an ising-snapshot file");
    if (version != kVersion) throw Error(ErrorCode::Format, "unsupported snapshot version '" + version + "'");

    SnapshotHeader h;
    h.side = parse_number<int>(expect_field(tokens, "N"), "N");
    h.step = parse_number<std::int64_t>(expect_field(tokens, "step"), "step");
    h.temperature = parse_number<double>(expect_field(tokens, "T"), "T");
    h.alpha = parse_number<double>(expect_field(tokens, "alpha"), "alpha");
    h.seed = parse_number<std::uint64_t>(expect_field(tokens, "seed"), "seed");
    std::string extra;
    if (tokens >> extra) throw Error(ErrorCode::Format, "snapshot header: unexpected token '" + extra + "'");
    if (h.side < 2) throw Error(ErrorCode::Format, "snapshot header: N must be >= 2");
    return h;
}

void write_snapshot(std::ostream& out, const SpinLattice& lattice, const SnapshotHeader& header) {
    if (header.side != lattice.side()) throw Error(ErrorCode::SizeMismatch, "snapshot header side differs from lattice");
    out << format_header(header) << '\n';
    const int n = lattice.side();
    std::string row(static_cast<std::size_t>(n), ' ');
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) row[c] = lattice.spin(r, c) > 0 ? '+' : '-';
        out << row << '\n';
    }
}

Snapshot read_snapshot(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::Format, "empty snapshot");
    Snapshot snap;
    snap.header = parse_header(line);
    const int n = snap.header.side;
    std::vector<std::int8_t> spins;
    spins.reserve(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r) {
        if (!std::getline(in, line)) throw Error(ErrorCode::Format, "snapshot truncated at row " + std::to_string(r));
        if (line.size() != static_cast<std::size_t>(n))
            throw Error(ErrorCode::Format, "snapshot row " + std::to_string(r) + " has wrong length");
        for (char ch : line) {
            if (ch == '+') spins.push_back(1);
            else if (ch == '-') spins.push_back(-1);
            else throw Error(ErrorCode::Format, std::string("snapshot: invalid spin character '") + ch + "'");
        }
    }
    snap.lattice = SpinLattice(n, std::move(spins), snap.header.step);
    return snap;
}

void save_snapshot(const std::filesystem::path& path, const SpinLattice& lattice, const SnapshotHeader& header) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    write_snapshot(out, lattice, header);
    if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return read_snapshot(in);
}

}  // namespace spinmarket
