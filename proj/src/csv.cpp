#include "spinmarket/csv.hpp"

#include <cstdio>

#include "spinmarket/error.hpp"

namespace spinmarket::csv {

std::string real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

Writer::Writer(const std::filesystem::path& path, std::initializer_list<std::string_view> header, bool append)
    : path_(path) {
    const bool write_header = !append || !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    out_.open(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
    if (!out_) throw Error(ErrorCode::Io, "cannot write " + path.string());
    if (write_header) {
        for (auto h : header) cell(h);
        end_row();
    }
}

Writer& Writer::cell(std::string_view text) {
    if (row_started_) out_ << ',';
    out_ << text;
    row_started_ = true;
    return *this;
}

Writer& Writer::cell(double value) { return cell(real(value)); }
Writer& Writer::cell(std::int64_t value) { return cell(std::to_string(value)); }
Writer& Writer::cell(std::uint64_t value) { return cell(std::to_string(value)); }
Writer& Writer::empty() { return cell(std::string_view{}); }

void Writer::end_row() {
    out_ << '\n';
    row_started_ = false;
    if (!out_) throw Error(ErrorCode::Io, "write failed: " + path_.string());
}

void Writer::flush() {
    out_.flush();
    if (!out_) throw Error(ErrorCode::Io, "write failed: " + path_.string());
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw Error(ErrorCode::Format, "missing column '" + std::string(name) + "'");
}

Table read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "missing file: " + path.string());
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::Format, "empty CSV: " + path.string());
    t.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = split(line);
        if (row.size() != t.header.size())
            throw Error(ErrorCode::Format, path.string() + ": row has " + std::to_string(row.size()) +
                                               " fields, header has " + std::to_string(t.header.size()));
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_key_values(const std::filesystem::path& path, const KeyValues& entries) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
    if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "missing file: " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error(ErrorCode::Format, path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        if (!kv.emplace(line.substr(0, eq), line.substr(eq + 1)).second)
            throw Error(ErrorCode::Format, path.string() + ": duplicate key '" + line.substr(0, eq) + "'");
    }
    return kv;
}

}  // namespace spinmarket::csv
