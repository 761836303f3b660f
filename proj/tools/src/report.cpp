#include "report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace mzlaw::cli {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_value(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return fmt(v);
}

}  // namespace

json number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

json summary_json(const SummaryStats& s) {
    return json{{"median", number(s.median)},
                {"mean", number(s.mean)},
                {"q10", number(s.q10)},
                {"q90", number(s.q90)}};
}

json rate_json(const RateReport& rep) {
    json per_n = json::array();
    for (const auto& p : rep.per_n) {
        per_n.push_back(json{{"n", p.n}, {"raw", summary_json(p.raw)}, {"scaled", summary_json(p.scaled)}});
    }
    json verdicts = json::object();
    for (const auto& [name, ok] : rep.verdicts) {
        verdicts[name] = ok;
    }
    return json{{"per_n", per_n},
                {"slope", number(rep.fitted_slope)},
                {"slope_stderr", number(rep.slope_stderr)},
                {"r", number(rep.r_exponent)},
                {"verdicts", verdicts},
                {"warnings", rep.warnings}};
}

std::string csv_header() { return "n,metric,value,replication_stat\n"; }

void append_rate_csv(std::string& csv, const RateReport& rep, const std::string& prefix) {
    for (const auto& p : rep.per_n) {
        const std::pair<const char*, const SummaryStats*> metrics[] = {{"D_n", &p.raw},
                                                                       {"n^r*D_n", &p.scaled}};
        for (const auto& [metric, s] : metrics) {
            const std::pair<const char*, double> stats[] = {
                {"median", s->median}, {"mean", s->mean}, {"q10", s->q10}, {"q90", s->q90}};
            for (const auto& [stat, value] : stats) {
                csv += std::to_string(p.n) + "," + prefix + metric + "," + csv_value(value) + "," + stat + "\n";
            }
        }
    }
}

std::string rate_svg(const std::vector<std::pair<std::string, const RateReport*>>& series) {
    constexpr double W = 640;
    constexpr double H = 420;
    constexpr double M = 60;
    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
    for (const auto& [_, rep] : series) {
        for (const auto& p : rep->per_n) {
            if (p.raw.median > 0 && std::isfinite(p.raw.median)) {
                const double x = std::log(static_cast<double>(p.n));
                const double y = std::log(p.raw.median);
                x_lo = std::min(x_lo, x);
                x_hi = std::max(x_hi, x);
                y_lo = std::min(y_lo, y);
                y_hi = std::max(y_hi, y);
            }
        }
    }
    if (!(x_hi > x_lo)) {
        x_hi = x_lo + 1;
    }
    if (!(y_hi > y_lo)) {
        y_hi = y_lo + 1;
    }
    auto sx = [&](double x) { return M + (x - x_lo) / (x_hi - x_lo) * (W - 2 * M); };
    auto sy = [&](double y) { return H - M - (y - y_lo) / (y_hi - y_lo) * (H - 2 * M); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<line x1=\"" + fmt(M) + "\" y1=\"" + fmt(H - M) + "\" x2=\"" + fmt(W - M) + "\" y2=\"" +
           fmt(H - M) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(M) + "\" y1=\"" + fmt(M) + "\" x2=\"" + fmt(M) + "\" y2=\"" + fmt(H - M) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(W / 2) + "\" y=\"" + fmt(H - 15) + "\" text-anchor=\"middle\">log n</text>\n";
    svg += "<text x=\"15\" y=\"" + fmt(H / 2) + "\" transform=\"rotate(-90 15 " + fmt(H / 2) +
           ")\" text-anchor=\"middle\">log median D_n</text>\n";
    std::size_t idx = 0;
    for (const auto& [label, rep] : series) {
        const char* color = colors[idx % 4];
        std::string pts;
        for (const auto& p : rep->per_n) {
            if (p.raw.median > 0 && std::isfinite(p.raw.median)) {
                pts += fmt(sx(std::log(static_cast<double>(p.n)))) + "," + fmt(sy(std::log(p.raw.median))) + " ";
            }
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" +
               pts + "\"/>\n";
        svg += "<text x=\"" + fmt(W - M) + "\" y=\"" + fmt(M + 18.0 * static_cast<double>(idx)) +
               "\" text-anchor=\"end\" fill=\"" + color + "\">" + label + " (slope " + fmt(rep->fitted_slope) +
               ")</text>\n";
        ++idx;
    }
    svg += "</svg>\n";
    return svg;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

json metadata_json(const std::string& subcommand, const std::string& config_path,
                   const std::vector<std::string>& overrides) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return json{{"subcommand", subcommand},
                {"config", config_path},
                {"overrides", overrides},
                {"timestamp", stamp},
                {"threads", resolve_thread_count()},
                {"version", "0.1.0"}};
}

}  // namespace mzlaw::cli
