#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "advens/nn.hpp"

namespace advens {

// One value per seed; nulls mark seeds where the stage failed or was skipped.
struct StatSeries {
    std::vector<std::optional<double>> per_seed;

    std::optional<double> median() const;  // over the non-null entries
    json to_json() const;
    static StatSeries from_json(const json& j);
    bool operator==(const StatSeries&) const = default;
};

struct AttackOutcome {
    StatSeries a1, a2, a3, a4, a5;
    StatSeries success_rate;

    json to_json() const;
    static AttackOutcome from_json(const json& j);
    bool operator==(const AttackOutcome&) const = default;
};

struct TreatmentReport {
    std::string dataset;
    std::vector<std::uint64_t> seeds;
    json config;
    StatSeries a0;
    StatSeries pac_bound;
    std::map<std::string, AttackOutcome> attacks;
    std::vector<std::string> notes;   // expected per-seed conditions (empty selections...)
    std::vector<std::string> errors;  // per-seed stage failures

    json to_json() const;
    static TreatmentReport from_json(const json& j);
    std::string to_csv() const;  // dataset,attack,treatment,seed,value
    bool operator==(const TreatmentReport&) const = default;
};

struct SweepReport {
    std::string dataset;
    std::vector<std::uint64_t> seeds;
    std::vector<double> distances;
    json config;
    // attack name -> distance key -> Treatment-5 accuracy series
    std::map<std::string, std::map<std::string, StatSeries>> t5;
    std::vector<std::string> notes;
    std::vector<std::string> errors;

    json to_json() const;
    static SweepReport from_json(const json& j);
    std::string to_csv() const;  // dataset,attack,distance,seed,value
    bool operator==(const SweepReport&) const = default;
};

std::string distance_key(double d);

// Static grouped bar chart; values[series][group] in [0,1], nulls skipped.
std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& groups,
                          const std::vector<std::string>& series,
                          const std::vector<std::vector<std::optional<double>>>& values);

// report.json (canonical), report.csv, report.svg plus a timings.json sidecar
// holding the volatile wall-clock entries.
void write_treatment_outputs(const TreatmentReport& report, const std::string& dir,
                             const json& timings);
void write_sweep_outputs(const SweepReport& report, const std::string& dir, const json& timings);

}  // namespace advens
