#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace spinmarket::csv {

/// Reals in CSV output: 9 significant digits.
std::string real(double value);

/// Streaming CSV writer; header row is written on construction.
class Writer {
public:
    Writer(const std::filesystem::path& path, std::initializer_list<std::string_view> header,
           bool append = false);

    Writer& cell(std::string_view text);
    Writer& cell(double value);
    Writer& cell(std::int64_t value);
    Writer& cell(std::uint64_t value);
    Writer& cell(int value) { return cell(static_cast<std::int64_t>(value)); }
    Writer& cell(unsigned value) { return cell(static_cast<std::uint64_t>(value)); }
    Writer& empty();
    void end_row();
    void flush();

private:
    std::ofstream out_;
    std::filesystem::path path_;
    bool row_started_ = false;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index; throws Format if absent.
    std::size_t column(std::string_view name) const;
};

/// Reads a comma-separated file (no quoting). Throws Io / Format.
Table read(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view line, char sep = ',');

/// Flat `key=value` files (run.meta, checkpoint state). Order is preserved on write.
using KeyValues = std::vector<std::pair<std::string, std::string>>;
void write_key_values(const std::filesystem::path& path, const KeyValues& entries);
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

}  // namespace spinmarket::csv
