#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tripod {

struct PlotSeries
{
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

struct PlotSpec
{
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    std::optional<double> marker_x; // vertical guide line
    double width = 720.0;
    double height = 440.0;
};

// Static SVG line plot with axes, ticks and a legend. Non-finite points are skipped.
std::string render_svg(const PlotSpec& spec);

struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns; // one vector per header entry

    const std::vector<double>* column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

// Renders the tripodsim output at `input` (summary.csv, boundary.csv,
// snapshots.ndjson, metrics.json or a run directory) into SVG files placed in
// `out_dir` (default: next to the input). Returns the files written.
std::vector<std::filesystem::path> plot_outputs(const std::filesystem::path& input,
                                                const std::optional<std::filesystem::path>& out_dir);

} // namespace tripod
