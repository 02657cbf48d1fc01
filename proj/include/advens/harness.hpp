#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "advens/attacks.hpp"
#include "advens/data.hpp"
#include "advens/ensemble.hpp"
#include "advens/hpo.hpp"
#include "advens/report.hpp"

namespace advens {

// Where a run's rows come from: a synthetic draw by default, a CSV + schema when
// csv_path is set. sample_rate < 1 keeps a stratified subsample.
struct DatasetSource {
    std::string id = "synth";
    SynthSpec synth;
    std::string csv_path;
    std::string schema_path;
    double sample_rate = 1.0;

    void validate() const;
    RawTable load(std::uint64_t seed) const;
    json to_json() const;
    static DatasetSource from_json(const json& j);
};

// knobs for one experiment run; attack_specs are the evaluation (S2) parameters
struct HarnessConfig {
    int budget = 100;
    TpeConfig tpe;
    SelectionCriteria criteria;
    DEParams de;
    std::vector<AttackSpec> attack_specs;
    std::vector<AttackSpec> s1_specs;  // augmentation overrides, matched by kind
    double adv_fraction = 0.5;
    bool paper_faithful = false;   // augmentation examples crafted from the test partition
    bool direct_attacks = false;   // craft against each defense instead of transferring
    bool de_adversarial = false;   // DE fitness on victim-crafted adversarial validation sets
    int repeats = 20;
    int jobs = 1;  // worker threads over seeds; results merge in seed order
    std::function<void(const std::string&)> log;  // progress hook, not serialized

    HarnessConfig();  // all six attacks at their published defaults
    void validate() const;
    AttackSpec s1_for(const AttackSpec& s2) const;
    json to_json() const;
    static HarnessConfig from_json(const json& j);
};

// S1 default: the S2 spec with its primary strength parameter halved (eps for
// the gradient attacks, theta for JSMA, c for CW).
AttackSpec halve_strength(const AttackSpec& spec);

struct AdvTrainingSpec {
    AttackSpec s1;  // crafts the augmentation examples
    AttackSpec s2;  // evaluation attack; must differ from s1
    double fraction = 0.5;  // ceil(fraction * |train|) crafted rows appended
    bool from_test = false;

    void validate() const;
};

// Retrains the victim architecture from scratch on train rows plus adversarial
// examples crafted against the trained victim with s1. fraction 0 reduces to a
// plain retrain.
TrainedModel adversarial_train(const TrainedModel& victim, const DataSplit& split,
                               const AdvTrainingSpec& spec, std::uint64_t seed);

// everything derived from one seed: data draw, partition/encoding, tuned pool
struct SeedArtifacts {
    std::uint64_t seed = 0;
    DataSplit split;
    ModelPool pool;
    double hpo_wall_s = 0.0;
};

SeedArtifacts build_seed_artifacts(const DatasetSource& source, const HarnessConfig& config,
                                   std::uint64_t seed);

std::vector<std::uint64_t> expand_seeds(std::uint64_t base, int repeats);

// Treatments per seed and attack: 0 clean victim, 1 attacked victim,
// 2 adversarially retrained victim, 3 random ensemble, 4 unexpected ensemble,
// 5 DE-weighted unexpected ensemble. Per-seed failures become nulls plus a
// recorded note or error; timings (when passed) collects wall-clock entries.
TreatmentReport run_treatments(const DatasetSource& source, const HarnessConfig& config,
                               const std::vector<std::uint64_t>& seeds, json* timings = nullptr);

// Treatment-5 accuracy across distance thresholds, one shared pool per seed.
// Thresholds with no eligible models record nulls and a note naming the binding
// constraint.
SweepReport sweep_distance(const DatasetSource& source, const HarnessConfig& config,
                           const std::vector<double>& distances,
                           const std::vector<std::uint64_t>& seeds, json* timings = nullptr);

const std::vector<double>& default_distance_grid();  // {0.1, 0.3, 0.5, 0.7, 0.9}

}  // namespace advens
