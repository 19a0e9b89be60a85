#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace spinmarket::svg {

/// Series longer than this are reduced with min-max decimation before drawing.
inline constexpr std::size_t kDecimateAbove = 100'000;

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool markers = false;  // scatter instead of polyline
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<Series> series;
};

/**
 * Keeps the min and max y of every one of `columns` equal-width x bins, in
 * x order, so isolated spikes survive downsampling.
 */
void decimate_minmax(std::span<const double> x, std::span<const double> y, std::size_t columns,
                     std::vector<double>& x_out, std::vector<double>& y_out);

std::string render(const Plot& plot, int width = 900, int height = 500);
void write(const std::filesystem::path& path, const Plot& plot);

}  // namespace spinmarket::svg
