#include "tripod/plot.hpp"

#include "tripod/errors.hpp"
#include "tripod/output.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace tripod {

namespace fs = std::filesystem;

namespace {

const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v, double step)
{
    char buf[32];
    if (std::abs(v) < 1e-12 * step)
        v = 0.0;
    const double mag = std::max(std::abs(v), step);
    if (mag >= 1e5 || mag < 1e-3)
        std::snprintf(buf, sizeof buf, "%.3g", v);
    else {
        const int decimals = std::max(0, static_cast<int>(std::ceil(-std::log10(step) - 1e-9)));
        std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    }
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

double nice_step(double range)
{
    const double raw = range / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

} // namespace

std::string render_svg(const PlotSpec& spec)
{
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : spec.series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!std::isfinite(xmin)) {
        xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    }
    if (xmax <= xmin)
        xmax = xmin + 1.0;
    if (ymax <= ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    ymin = std::min(ymin, 0.0);
    const double pad = 0.05 * (ymax - ymin);
    ymax += pad;

    const double left = 80, right = 20, top = 40, bottom = 55;
    const double w = spec.width, h = spec.height;
    const double pw = w - left - right, ph = h - top - bottom;
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream s;
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << fmt(w) << "' height='" << fmt(h)
      << "' viewBox='0 0 " << fmt(w) << ' ' << fmt(h) << "' font-family='sans-serif' font-size='12'>\n";
    s << "<rect x='0' y='0' width='" << fmt(w) << "' height='" << fmt(h) << "' fill='white'/>\n";
    s << "<text x='" << fmt(w / 2) << "' y='22' text-anchor='middle' font-size='15'>"
      << escape(spec.title) << "</text>\n";

    const double xs = nice_step(xmax - xmin);
    for (double t = std::ceil(xmin / xs) * xs; t <= xmax + 1e-9 * xs; t += xs) {
        s << "<line x1='" << fmt(sx(t)) << "' y1='" << fmt(top) << "' x2='" << fmt(sx(t))
          << "' y2='" << fmt(top + ph) << "' stroke='#e0e0e0'/>\n";
        s << "<text x='" << fmt(sx(t)) << "' y='" << fmt(top + ph + 16)
          << "' text-anchor='middle'>" << tick_label(t, xs) << "</text>\n";
    }
    const double ys = nice_step(ymax - ymin);
    for (double t = std::ceil(ymin / ys) * ys; t <= ymax + 1e-9 * ys; t += ys) {
        s << "<line x1='" << fmt(left) << "' y1='" << fmt(sy(t)) << "' x2='" << fmt(left + pw)
          << "' y2='" << fmt(sy(t)) << "' stroke='#e0e0e0'/>\n";
        s << "<text x='" << fmt(left - 6) << "' y='" << fmt(sy(t) + 4)
          << "' text-anchor='end'>" << tick_label(t, ys) << "</text>\n";
    }
    s << "<rect x='" << fmt(left) << "' y='" << fmt(top) << "' width='" << fmt(pw)
      << "' height='" << fmt(ph) << "' fill='none' stroke='black'/>\n";
    s << "<text x='" << fmt(left + pw / 2) << "' y='" << fmt(h - 12)
      << "' text-anchor='middle'>" << escape(spec.x_label) << "</text>\n";
    s << "<text transform='translate(18 " << fmt(top + ph / 2)
      << ") rotate(-90)' text-anchor='middle'>" << escape(spec.y_label) << "</text>\n";

    if (spec.marker_x && *spec.marker_x >= xmin && *spec.marker_x <= xmax)
        s << "<line x1='" << fmt(sx(*spec.marker_x)) << "' y1='" << fmt(top) << "' x2='"
          << fmt(sx(*spec.marker_x)) << "' y2='" << fmt(top + ph)
          << "' stroke='#888' stroke-dasharray='2 3'/>\n";

    for (std::size_t k = 0; k < spec.series.size(); ++k) {
        const PlotSeries& ser = spec.series[k];
        const char* color = palette[k % std::size(palette)];
        s << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5'"
          << (ser.dashed ? " stroke-dasharray='6 4'" : "") << " points='";
        const std::size_t n = std::min(ser.x.size(), ser.y.size());
        const std::size_t stride = std::max<std::size_t>(1, n / 4000);
        for (std::size_t i = 0; i < n; i += stride) {
            if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i]))
                continue;
            s << fmt(sx(ser.x[i])) << ',' << fmt(sy(ser.y[i])) << ' ';
        }
        s << "'/>\n";
        const double ly = top + 14 + 16 * static_cast<double>(k);
        s << "<line x1='" << fmt(left + pw - 170) << "' y1='" << fmt(ly) << "' x2='"
          << fmt(left + pw - 145) << "' y2='" << fmt(ly) << "' stroke='" << color
          << "' stroke-width='2'" << (ser.dashed ? " stroke-dasharray='6 4'" : "") << "/>\n";
        s << "<text x='" << fmt(left + pw - 140) << "' y='" << fmt(ly + 4) << "'>"
          << escape(ser.name) << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

const std::vector<double>* CsvTable::column(const std::string& name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? nullptr : &columns[static_cast<std::size_t>(it - header.begin())];
}

CsvTable read_csv(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path.string() + "'");
    CsvTable t;
    std::string line;
    if (!std::getline(in, line))
        throw Error("'" + path.string() + "' is empty");
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');)
        t.header.push_back(cell);
    t.columns.resize(t.header.size());
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty())
            continue;
        std::stringstream ls(line);
        std::size_t c = 0;
        for (std::string cell; std::getline(ls, cell, ','); ++c) {
            if (c >= t.header.size())
                throw Error(path.string() + ":" + std::to_string(row) + ": too many cells");
            double v = std::numeric_limits<double>::quiet_NaN();
            if (cell != "nan") {
                const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                if (ec != std::errc{} || ptr != cell.data() + cell.size())
                    throw Error(path.string() + ":" + std::to_string(row) + ": bad number '" +
                                cell + "'");
            }
            t.columns[c].push_back(v);
        }
        if (c != t.header.size())
            throw Error(path.string() + ":" + std::to_string(row) + ": expected " +
                        std::to_string(t.header.size()) + " cells");
    }
    return t;
}

namespace {

fs::path target(const fs::path& input, const std::optional<fs::path>& out_dir,
                const std::string& name)
{
    fs::path dir = out_dir ? *out_dir : input.parent_path();
    if (dir.empty())
        dir = ".";
    std::error_code ec;
    fs::create_directories(dir, ec);
    return dir / name;
}

std::optional<double> release_time_from(const fs::path& metrics)
{
    std::ifstream in(metrics);
    if (!in)
        return std::nullopt;
    const nlohmann::json j = nlohmann::json::parse(in);
    return j.at("metrics").at("release_time").get<double>();
}

fs::path plot_summary(const CsvTable& t, const fs::path& input, const std::optional<fs::path>& out)
{
    PlotSpec spec;
    const std::string param = t.header.front();
    spec.title = "Sweep over " + param;
    spec.x_label = param == "delta"           ? "magnetic pulse area delta [rad]"
                   : param == "b_field"       ? "magnetic induction [T]"
                   : param == "control3_lead" ? "control 3 lead [us]"
                                              : param;
    spec.y_label = "ratio";
    const auto& x = t.columns.front();
    for (const char* name : {"released_peak_ratio", "predicted_ratio", "z_peak_ratio"})
        if (const auto* col = t.column(name))
            spec.series.push_back({name, x, *col, std::string(name) == "predicted_ratio"});
    const fs::path path = target(input, out, "summary.svg");
    write_text_file(path, render_svg(spec));
    return path;
}

fs::path plot_boundary(const CsvTable& t, const fs::path& input, const std::optional<fs::path>& out)
{
    const auto* tau = t.column("tau_invGamma");
    const auto* amp = t.column("abs_omega1");
    if (!tau || !amp)
        throw Error("'" + input.string() + "' is not a boundary.csv file");
    PlotSpec spec;
    spec.title = "Field at the sample exit";
    spec.x_label = "tau [1/Gamma]";
    spec.y_label = "|Omega_1(L)| [Gamma]";
    spec.series.push_back({"|Omega_1|", *tau, *amp});
    spec.marker_x = release_time_from(input.parent_path() / "metrics.json");
    const fs::path path = target(input, out, "boundary.svg");
    write_text_file(path, render_svg(spec));
    return path;
}

fs::path plot_snapshots(const fs::path& input, const std::optional<fs::path>& out)
{
    std::ifstream in(input);
    if (!in)
        throw Error("cannot open '" + input.string() + "'");
    std::vector<nlohmann::json> frames;
    for (std::string line; std::getline(in, line);)
        if (!line.empty())
            frames.push_back(nlohmann::json::parse(line));
    PlotSpec spec;
    spec.title = "Dark-state polariton |Psi| along the sample";
    spec.x_label = "xi [L]";
    spec.y_label = "|Psi| [Gamma]";
    const std::size_t shown = std::min<std::size_t>(frames.size(), 8);
    for (std::size_t k = 0; k < shown; ++k) {
        const std::size_t i = shown == 1 ? 0 : k * (frames.size() - 1) / (shown - 1);
        const auto& f = frames[i];
        PlotSeries s;
        char name[48];
        std::snprintf(name, sizeof name, "tau = %g", f.at("tau").get<double>());
        s.name = name;
        s.x = f.at("xi").get<std::vector<double>>();
        const auto re = f.at("re_psi").get<std::vector<double>>();
        const auto im = f.at("im_psi").get<std::vector<double>>();
        for (std::size_t j = 0; j < re.size(); ++j)
            s.y.push_back(std::hypot(re[j], im[j]));
        spec.series.push_back(std::move(s));
    }
    const fs::path path = target(input, out, "snapshots.svg");
    write_text_file(path, render_svg(spec));
    return path;
}

} // namespace

std::vector<fs::path> plot_outputs(const fs::path& input, const std::optional<fs::path>& out_dir)
{
    std::vector<fs::path> written;
    if (fs::is_directory(input)) {
        if (fs::exists(input / "summary.csv"))
            written.push_back(plot_summary(read_csv(input / "summary.csv"), input / "summary.csv", out_dir));
        if (fs::exists(input / "boundary.csv"))
            written.push_back(plot_boundary(read_csv(input / "boundary.csv"), input / "boundary.csv", out_dir));
        if (fs::exists(input / "snapshots.ndjson"))
            written.push_back(plot_snapshots(input / "snapshots.ndjson", out_dir));
        if (written.empty())
            throw Error("no tripodsim outputs found in '" + input.string() + "'");
        return written;
    }
    if (!fs::exists(input))
        throw Error("'" + input.string() + "' does not exist");
    const std::string ext = input.extension().string();
    if (ext == ".ndjson")
        return {plot_snapshots(input, out_dir)};
    if (ext == ".json") {
        const fs::path dir = input.parent_path().empty() ? fs::path(".") : input.parent_path();
        const fs::path boundary = dir / "boundary.csv";
        if (!fs::exists(boundary))
            throw Error("metrics file '" + input.string() + "' has no boundary.csv beside it");
        return {plot_boundary(read_csv(boundary), boundary, out_dir)};
    }
    const CsvTable t = read_csv(input);
    if (t.column("released_peak_ratio"))
        return {plot_summary(t, input, out_dir)};
    return {plot_boundary(t, input, out_dir)};
}

} // namespace tripod
