#include "advens/report.hpp"

#include <cstdio>
#include <filesystem>

#include "advens/common.hpp"

namespace advens {
namespace {

constexpr const char* kTreatmentFormat = "advens.treatments/1";
constexpr const char* kSweepFormat = "advens.sweep/1";

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                          "#59a14f", "#edc948", "#b07aa1"};
constexpr int kPaletteSize = 7;

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

json optional_to_json(const std::optional<double>& v) {
    if (!v.has_value()) return nullptr;
    return *v;
}

std::optional<double> optional_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

std::string csv_value(const std::optional<double>& v) {
    if (!v.has_value()) return "";
    return double_to_string(*v);
}

void require_format(const json& j, const char* expected) {
    if (!j.contains("format") || j.at("format").get<std::string>() != expected)
        throw DataError("report: expected format " + std::string(expected));
}

std::vector<std::string> strings_from_json(const json& j) {
    std::vector<std::string> out;
    for (const auto& item : j) out.push_back(item.get<std::string>());
    return out;
}

}  // namespace

std::optional<double> StatSeries::median() const {
    std::vector<double> present;
    for (const auto& v : per_seed)
        if (v.has_value()) present.push_back(*v);
    if (present.empty()) return std::nullopt;
    return advens::median(present);
}

json StatSeries::to_json() const {
    json per = json::array();
    for (const auto& v : per_seed) per.push_back(optional_to_json(v));
    return json{{"median", optional_to_json(median())}, {"per_seed", per}};
}

StatSeries StatSeries::from_json(const json& j) {
    StatSeries out;
    for (const auto& item : j.at("per_seed")) out.per_seed.push_back(optional_from_json(item));
    return out;
}

json AttackOutcome::to_json() const {
    return json{{"a1", a1.to_json()},
                {"a2", a2.to_json()},
                {"a3", a3.to_json()},
                {"a4", a4.to_json()},
                {"a5", a5.to_json()},
                {"success_rate", success_rate.to_json()}};
}

AttackOutcome AttackOutcome::from_json(const json& j) {
    AttackOutcome out;
    out.a1 = StatSeries::from_json(j.at("a1"));
    out.a2 = StatSeries::from_json(j.at("a2"));
    out.a3 = StatSeries::from_json(j.at("a3"));
    out.a4 = StatSeries::from_json(j.at("a4"));
    out.a5 = StatSeries::from_json(j.at("a5"));
    out.success_rate = StatSeries::from_json(j.at("success_rate"));
    return out;
}

json TreatmentReport::to_json() const {
    json att = json::object();
    for (const auto& [name, outcome] : attacks) att[name] = outcome.to_json();
    return json{{"format", kTreatmentFormat},
                {"dataset", dataset},
                {"seeds", seeds},
                {"config", config},
                {"a0", a0.to_json()},
                {"pac_bound", pac_bound.to_json()},
                {"attacks", att},
                {"notes", notes},
                {"errors", errors}};
}

TreatmentReport TreatmentReport::from_json(const json& j) {
    require_format(j, kTreatmentFormat);
    TreatmentReport out;
    out.dataset = j.at("dataset").get<std::string>();
    out.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    out.config = j.at("config");
    out.a0 = StatSeries::from_json(j.at("a0"));
    out.pac_bound = StatSeries::from_json(j.at("pac_bound"));
    for (const auto& [name, outcome] : j.at("attacks").items())
        out.attacks[name] = AttackOutcome::from_json(outcome);
    out.notes = strings_from_json(j.at("notes"));
    out.errors = strings_from_json(j.at("errors"));
    return out;
}

std::string TreatmentReport::to_csv() const {
    std::string out = "dataset,attack,treatment,seed,value\n";
    auto row = [&](const std::string& attack, const std::string& treatment, std::size_t i,
                   const StatSeries& series) {
        out += csv_field(dataset) + ',' + csv_field(attack) + ',' + csv_field(treatment) + ',' +
               std::to_string(seeds.at(i)) + ',' + csv_value(series.per_seed.at(i)) + '\n';
    };
    for (std::size_t i = 0; i < seeds.size(); ++i) row("clean", "a0", i, a0);
    for (const auto& [name, outcome] : attacks) {
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            row(name, "a1", i, outcome.a1);
            row(name, "a2", i, outcome.a2);
            row(name, "a3", i, outcome.a3);
            row(name, "a4", i, outcome.a4);
            row(name, "a5", i, outcome.a5);
        }
    }
    return out;
}

json SweepReport::to_json() const {
    json grid = json::object();
    for (const auto& [attack, per_distance] : t5) {
        json inner = json::object();
        for (const auto& [key, series] : per_distance) inner[key] = series.to_json();
        grid[attack] = inner;
    }
    return json{{"format", kSweepFormat}, {"dataset", dataset},     {"seeds", seeds},
                {"distances", distances}, {"config", config},       {"t5", grid},
                {"notes", notes},         {"errors", errors}};
}

SweepReport SweepReport::from_json(const json& j) {
    require_format(j, kSweepFormat);
    SweepReport out;
    out.dataset = j.at("dataset").get<std::string>();
    out.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    out.distances = j.at("distances").get<std::vector<double>>();
    out.config = j.at("config");
    for (const auto& [attack, per_distance] : j.at("t5").items())
        for (const auto& [key, series] : per_distance.items())
            out.t5[attack][key] = StatSeries::from_json(series);
    out.notes = strings_from_json(j.at("notes"));
    out.errors = strings_from_json(j.at("errors"));
    return out;
}

std::string SweepReport::to_csv() const {
    std::string out = "dataset,attack,distance,seed,value\n";
    for (const auto& [attack, per_distance] : t5) {
        for (double d : distances) {
            auto found = per_distance.find(distance_key(d));
            if (found == per_distance.end()) continue;
            for (std::size_t i = 0; i < seeds.size(); ++i)
                out += csv_field(dataset) + ',' + csv_field(attack) + ',' + distance_key(d) + ',' +
                       std::to_string(seeds.at(i)) + ',' + csv_value(found->second.per_seed.at(i)) +
                       '\n';
        }
    }
    return out;
}

std::string distance_key(double d) { return double_to_string(d); }

std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& groups,
                          const std::vector<std::string>& series,
                          const std::vector<std::vector<std::optional<double>>>& values) {
    const double bar_w = 16.0, bar_gap = 2.0, group_gap = 28.0;
    const double left = 50.0, top = 40.0, plot_h = 260.0;
    const double group_w =
        series.empty() ? bar_w : series.size() * bar_w + (series.size() - 1) * bar_gap;
    const double plot_w = groups.size() * group_w + (groups.size() + 1) * group_gap;
    const double legend_w = 150.0;
    const double width = left + plot_w + legend_w;
    const double height = top + plot_h + 60.0;
    auto y_of = [&](double v) { return top + (1.0 - v) * plot_h; };

    std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(width) + "\" height=\"" +
           fmt2(height) + "\" viewBox=\"0 0 " + fmt2(width) + " " + fmt2(height) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt2(width) + "\" height=\"" + fmt2(height) +
           "\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt2(left + plot_w / 2) +
           "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" +
           escape_xml(title) + "</text>\n";
    for (int tick = 0; tick <= 5; ++tick) {
        double v = tick / 5.0;
        svg += "<line x1=\"" + fmt2(left) + "\" y1=\"" + fmt2(y_of(v)) + "\" x2=\"" +
               fmt2(left + plot_w) + "\" y2=\"" + fmt2(y_of(v)) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + fmt2(left - 6) + "\" y=\"" + fmt2(y_of(v) + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + fmt2(v) +
               "</text>\n";
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        double gx = left + group_gap + g * (group_w + group_gap);
        for (std::size_t s = 0; s < series.size(); ++s) {
            const auto& v = values.at(s).at(g);
            if (!v.has_value()) continue;
            double clamped = std::min(std::max(*v, 0.0), 1.0);
            double bx = gx + s * (bar_w + bar_gap);
            svg += "<rect x=\"" + fmt2(bx) + "\" y=\"" + fmt2(y_of(clamped)) + "\" width=\"" +
                   fmt2(bar_w) + "\" height=\"" + fmt2(plot_h - (y_of(clamped) - top)) +
                   "\" fill=\"" + kPalette[s % kPaletteSize] + "\"/>\n";
        }
        svg += "<text x=\"" + fmt2(gx + group_w / 2) + "\" y=\"" + fmt2(top + plot_h + 18) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
               escape_xml(groups[g]) + "</text>\n";
    }
    svg += "<line x1=\"" + fmt2(left) + "\" y1=\"" + fmt2(top) + "\" x2=\"" + fmt2(left) +
           "\" y2=\"" + fmt2(top + plot_h) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + fmt2(left) + "\" y1=\"" + fmt2(top + plot_h) + "\" x2=\"" +
           fmt2(left + plot_w) + "\" y2=\"" + fmt2(top + plot_h) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        double lx = left + plot_w + 16;
        double ly = top + s * 18.0;
        svg += "<rect x=\"" + fmt2(lx) + "\" y=\"" + fmt2(ly) +
               "\" width=\"12\" height=\"12\" fill=\"" + kPalette[s % kPaletteSize] + "\"/>\n";
        svg += "<text x=\"" + fmt2(lx + 16) + "\" y=\"" + fmt2(ly + 10) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + escape_xml(series[s]) +
               "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

namespace {

void write_common_outputs(const std::string& dir, const json& report_json, const std::string& csv,
                          const std::string& svg, const json& timings) {
    std::filesystem::create_directories(dir);
    write_text_file(dir + "/report.json", report_json.dump(2) + "\n");
    write_text_file(dir + "/report.csv", csv);
    write_text_file(dir + "/report.svg", svg);
    write_text_file(dir + "/timings.json", timings.dump(2) + "\n");
}

}  // namespace

void write_treatment_outputs(const TreatmentReport& report, const std::string& dir,
                             const json& timings) {
    std::vector<std::string> groups;
    for (const auto& [name, outcome] : report.attacks) groups.push_back(name);
    std::vector<std::string> series = {"a0", "a1", "a2", "a3", "a4", "a5"};
    std::vector<std::vector<std::optional<double>>> values(series.size());
    for (const auto& [name, outcome] : report.attacks) {
        values[0].push_back(report.a0.median());
        values[1].push_back(outcome.a1.median());
        values[2].push_back(outcome.a2.median());
        values[3].push_back(outcome.a3.median());
        values[4].push_back(outcome.a4.median());
        values[5].push_back(outcome.a5.median());
    }
    std::string svg =
        bar_chart_svg("Median accuracy by attack and treatment: " + report.dataset, groups, series,
                      values);
    write_common_outputs(dir, report.to_json(), report.to_csv(), svg, timings);
}

void write_sweep_outputs(const SweepReport& report, const std::string& dir, const json& timings) {
    std::vector<std::string> groups;
    for (const auto& [name, per_distance] : report.t5) groups.push_back(name);
    std::vector<std::string> series;
    for (double d : report.distances) series.push_back("d=" + distance_key(d));
    std::vector<std::vector<std::optional<double>>> values(series.size());
    for (std::size_t s = 0; s < report.distances.size(); ++s) {
        const std::string key = distance_key(report.distances[s]);
        for (const auto& [name, per_distance] : report.t5) {
            auto found = per_distance.find(key);
            values[s].push_back(found == per_distance.end() ? std::nullopt
                                                            : found->second.median());
        }
    }
    std::string svg = bar_chart_svg(
        "Median defended accuracy by attack and distance threshold: " + report.dataset, groups,
        series, values);
    write_common_outputs(dir, report.to_json(), report.to_csv(), svg, timings);
}

}  // namespace advens
