#include "advens/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <thread>

#include "advens/common.hpp"

namespace advens {
namespace {

// stage tags feeding seed_mix, so every stage draws from an independent stream
constexpr std::uint64_t kStageData = 101;
constexpr std::uint64_t kStageHpo = 104;
constexpr std::uint64_t kStageRandomMembers = 105;
constexpr std::uint64_t kStageDe = 106;
constexpr std::uint64_t kStageAdvTrain = 107;
constexpr std::uint64_t kStageCraft = 108;
constexpr std::uint64_t kStagePartition = 103;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// wall times are kept out of the reports; callers route them to a sidecar
void add_timing(json* timings, std::uint64_t seed, const std::string& stage, double seconds) {
    if (timings == nullptr) return;
    if (!timings->is_array()) *timings = json::array();
    timings->push_back(json{{"seed", seed}, {"stage", stage}, {"seconds", seconds}});
}

json tpe_to_json(const TpeConfig& cfg) {
    return json{{"gamma", cfg.gamma},
                {"n_startup", cfg.n_startup},
                {"n_candidates", cfg.n_candidates}};
}

TpeConfig tpe_from_json(const json& j) {
    TpeConfig cfg;
    if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<double>();
    if (j.contains("n_startup")) cfg.n_startup = j.at("n_startup").get<int>();
    if (j.contains("n_candidates")) cfg.n_candidates = j.at("n_candidates").get<int>();
    cfg.validate();
    return cfg;
}

std::vector<AttackSpec> specs_from_json(const json& j) {
    std::vector<AttackSpec> specs;
    for (const auto& item : j) specs.push_back(AttackSpec::from_json(item));
    return specs;
}

json specs_to_json(const std::vector<AttackSpec>& specs) {
    json out = json::array();
    for (const auto& spec : specs) out.push_back(spec.to_json());
    return out;
}

}  // namespace

void DatasetSource::validate() const {
    if (id.empty()) throw ConfigError("dataset: id must be nonempty");
    if (sample_rate <= 0.0 || sample_rate > 1.0)
        throw ConfigError("dataset: sample_rate must be in (0, 1]");
    if (!csv_path.empty()) {
        if (schema_path.empty()) throw ConfigError("dataset: csv_path needs a schema_path");
    } else {
        synth.validate();
    }
}

RawTable DatasetSource::load(std::uint64_t seed) const {
    validate();
    if (csv_path.empty()) return gen_synth(synth, seed);
    FeatureSchema schema = FeatureSchema::load(schema_path);
    RawTable table = load_csv(csv_path, schema);
    if (sample_rate < 1.0) table = stratified_sample(table, sample_rate, seed);
    return table;
}

json DatasetSource::to_json() const {
    return json{{"id", id},
                {"synth", synth.to_json()},
                {"csv_path", csv_path},
                {"schema_path", schema_path},
                {"sample_rate", sample_rate}};
}

DatasetSource DatasetSource::from_json(const json& j) {
    DatasetSource out;
    if (j.contains("id")) out.id = j.at("id").get<std::string>();
    if (j.contains("synth")) out.synth = SynthSpec::from_json(j.at("synth"));
    if (j.contains("csv_path")) out.csv_path = j.at("csv_path").get<std::string>();
    if (j.contains("schema_path")) out.schema_path = j.at("schema_path").get<std::string>();
    if (j.contains("sample_rate")) out.sample_rate = j.at("sample_rate").get<double>();
    out.validate();
    return out;
}

HarnessConfig::HarnessConfig() {
    for (AttackKind kind : all_attacks()) attack_specs.push_back(AttackSpec::defaults(kind));
}

void HarnessConfig::validate() const {
    if (budget < 1) throw ConfigError("harness: budget must be positive");
    tpe.validate();
    criteria.validate();
    de.validate();
    if (attack_specs.empty()) throw ConfigError("harness: at least one attack");
    for (std::size_t i = 0; i < attack_specs.size(); ++i) {
        attack_specs[i].validate();
        for (std::size_t k = i + 1; k < attack_specs.size(); ++k)
            if (attack_specs[k].kind == attack_specs[i].kind)
                throw ConfigError("harness: duplicate attack " + to_string(attack_specs[i].kind));
    }
    for (const auto& spec : s1_specs) spec.validate();
    if (adv_fraction < 0.0 || adv_fraction > 1.0)
        throw ConfigError("harness: adv_fraction must be in [0, 1]");
    if (repeats < 1) throw ConfigError("harness: repeats must be positive");
    if (jobs < 1) throw ConfigError("harness: jobs must be positive");
}

AttackSpec halve_strength(const AttackSpec& spec) {
    AttackSpec out = spec;
    switch (spec.kind) {
        case AttackKind::Fgsm:
        case AttackKind::BimA:
        case AttackKind::BimB:
        case AttackKind::DeepFool:
            out.epsilon /= 2.0;
            break;
        case AttackKind::Jsma:
            out.theta /= 2.0;
            break;
        case AttackKind::Cw:
            out.cw_c /= 2.0;
            break;
    }
    return out;
}

AttackSpec HarnessConfig::s1_for(const AttackSpec& s2) const {
    for (const auto& spec : s1_specs)
        if (spec.kind == s2.kind) return spec;
    return halve_strength(s2);
}

json HarnessConfig::to_json() const {
    return json{{"budget", budget},
                {"tpe", tpe_to_json(tpe)},
                {"criteria", criteria.to_json()},
                {"de", de.to_json()},
                {"attacks", specs_to_json(attack_specs)},
                {"s1", specs_to_json(s1_specs)},
                {"adv_fraction", adv_fraction},
                {"paper_faithful", paper_faithful},
                {"direct_attacks", direct_attacks},
                {"de_adversarial", de_adversarial},
                {"repeats", repeats}};
    // jobs and log are execution hints with no effect on results, so they stay
    // out of the echoed config and reports match across worker counts
}

HarnessConfig HarnessConfig::from_json(const json& j) {
    HarnessConfig out;
    if (j.contains("budget")) out.budget = j.at("budget").get<int>();
    if (j.contains("tpe")) out.tpe = tpe_from_json(j.at("tpe"));
    if (j.contains("criteria")) out.criteria = SelectionCriteria::from_json(j.at("criteria"));
    if (j.contains("de")) out.de = DEParams::from_json(j.at("de"));
    if (j.contains("attacks")) out.attack_specs = specs_from_json(j.at("attacks"));
    if (j.contains("s1")) out.s1_specs = specs_from_json(j.at("s1"));
    if (j.contains("adv_fraction")) out.adv_fraction = j.at("adv_fraction").get<double>();
    if (j.contains("paper_faithful")) out.paper_faithful = j.at("paper_faithful").get<bool>();
    if (j.contains("direct_attacks")) out.direct_attacks = j.at("direct_attacks").get<bool>();
    if (j.contains("de_adversarial")) out.de_adversarial = j.at("de_adversarial").get<bool>();
    if (j.contains("repeats")) out.repeats = j.at("repeats").get<int>();
    if (j.contains("jobs")) out.jobs = j.at("jobs").get<int>();
    out.validate();
    return out;
}

void AdvTrainingSpec::validate() const {
    s1.validate();
    s2.validate();
    if (s1.kind != s2.kind)
        throw ConfigError("adversarial training: S1 and S2 must share the attack kind");
    if (s1 == s2)
        throw ConfigError("adversarial training: S1 must differ from S2");
    if (fraction < 0.0 || fraction > 1.0)
        throw ConfigError("adversarial training: fraction must be in [0, 1]");
}

TrainedModel adversarial_train(const TrainedModel& victim, const DataSplit& split,
                               const AdvTrainingSpec& spec, std::uint64_t seed) {
    spec.validate();
    const Matrix& src_x = spec.from_test ? split.test_x : split.train_x;
    const IntVector& src_y = spec.from_test ? split.test_y : split.train_y;
    const auto n_train = static_cast<std::size_t>(split.train_x.rows());
    auto n_aug = static_cast<std::size_t>(std::ceil(spec.fraction * static_cast<double>(n_train)));
    n_aug = std::min(n_aug, static_cast<std::size_t>(src_x.rows()));

    Matrix aug_x;
    IntVector aug_y;
    if (n_aug == 0) {
        aug_x = split.train_x;
        aug_y = split.train_y;
    } else {
        std::vector<std::size_t> idx(static_cast<std::size_t>(src_x.rows()));
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        Rng rng(seed_mix(seed, 1));
        rng.shuffle(idx);
        idx.resize(n_aug);
        std::sort(idx.begin(), idx.end());
        Matrix sel_x(static_cast<Eigen::Index>(n_aug), src_x.cols());
        IntVector sel_y(static_cast<Eigen::Index>(n_aug));
        for (std::size_t i = 0; i < n_aug; ++i) {
            sel_x.row(static_cast<Eigen::Index>(i)) = src_x.row(static_cast<Eigen::Index>(idx[i]));
            sel_y[static_cast<Eigen::Index>(i)] = src_y[static_cast<Eigen::Index>(idx[i])];
        }
        AdversarialSet crafted = craft_attack(victim.net, sel_x, sel_y, spec.s1,
                                              split.transform.onehot_groups(), seed_mix(seed, 2),
                                              "victim");
        aug_x.resize(split.train_x.rows() + crafted.x_adv.rows(), split.train_x.cols());
        aug_x.topRows(split.train_x.rows()) = split.train_x;
        aug_x.bottomRows(crafted.x_adv.rows()) = crafted.x_adv;
        aug_y.resize(split.train_y.size() + crafted.y.size());
        aug_y.head(split.train_y.size()) = split.train_y;
        aug_y.tail(crafted.y.size()) = crafted.y;
    }

    TrainedModel model =
        build_model(victim.params, static_cast<int>(split.train_x.cols()), seed_mix(seed, 3));
    train_model(model, aug_x, aug_y, seed_mix(seed, 4));
    model.val_accuracy = model.net.accuracy(split.val_x, split.val_y);
    return model;
}

SeedArtifacts build_seed_artifacts(const DatasetSource& source, const HarnessConfig& config,
                                   std::uint64_t seed) {
    SeedArtifacts artifacts;
    artifacts.seed = seed;
    RawTable table = source.load(seed_mix(seed, kStageData));
    artifacts.split = prepare_split(table, seed_mix(seed, kStagePartition));
    auto t0 = Clock::now();
    artifacts.pool = run_hpo(table1_space(), artifacts.split, config.budget,
                             seed_mix(seed, kStageHpo), config.tpe);
    artifacts.hpo_wall_s = seconds_since(t0);
    return artifacts;
}

std::vector<std::uint64_t> expand_seeds(std::uint64_t base, int repeats) {
    if (repeats < 1) throw ConfigError("repeats must be positive");
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(repeats));
    std::iota(seeds.begin(), seeds.end(), base);
    return seeds;
}

namespace {

StatSeries blank_series(std::size_t n) {
    StatSeries s;
    s.per_seed.assign(n, std::nullopt);
    return s;
}

AttackOutcome blank_outcome(std::size_t n) {
    AttackOutcome out;
    out.a1 = out.a2 = out.a3 = out.a4 = out.a5 = out.success_rate = blank_series(n);
    return out;
}

std::string seed_tag(std::uint64_t seed) { return "seed " + std::to_string(seed); }

void log_line(const HarnessConfig& config, const std::string& line) {
    if (config.log) config.log(line);
}

// Seeds run independently (optionally on worker threads) and merge in order, so
// reports are identical for any jobs value.
template <typename Outcome, typename Fn>
std::vector<Outcome> run_seeds(const std::vector<std::uint64_t>& seeds, int jobs, Fn&& fn) {
    std::vector<Outcome> outcomes(seeds.size());
    const int workers = std::min<int>(jobs, static_cast<int>(seeds.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < seeds.size(); ++i) fn(i, outcomes[i]);
        return outcomes;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < seeds.size(); i = next.fetch_add(1))
            fn(i, outcomes[i]);
    };
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    return outcomes;
}

struct TreatmentSeedOutcome {
    std::optional<double> a0, pac;
    struct PerAttack {
        std::optional<double> a1, a2, a3, a4, a5, success_rate;
    };
    std::vector<PerAttack> attacks;  // aligned with config.attack_specs
    std::vector<std::string> notes, errors;
    json timings = json::array();
};

// One seed of the treatment protocol; partial results survive later failures.
void run_treatment_seed(const DatasetSource& source, const HarnessConfig& config,
                        std::uint64_t seed, TreatmentSeedOutcome& out) {
    out.attacks.resize(config.attack_specs.size());
    json* timings = &out.timings;

    SeedArtifacts artifacts = build_seed_artifacts(source, config, seed);
    add_timing(timings, seed, "hpo", artifacts.hpo_wall_s);
    log_line(config, seed_tag(seed) + ": pool ready (" +
                         std::to_string(artifacts.pool.trials.size()) + " trials)");
    const DataSplit& split = artifacts.split;
    const ModelPool& pool = artifacts.pool;
    const Trial& victim = pool.victim();
    const std::string victim_id = "trial-" + std::to_string(victim.index);
    const std::vector<int> groups = split.transform.onehot_groups();

    out.a0 = victim.model.net.accuracy(split.test_x, split.test_y);

    WeightedEnsemble random_ensemble =
        make_ensemble(random_members(pool, config.criteria.k, seed_mix(seed, kStageRandomMembers)));

    std::optional<WeightedEnsemble> unexpected;  // Treatment 4, equal weights
    try {
        std::vector<const Trial*> selected = select_unexpected(pool, config.criteria);
        std::vector<double> member_accs;
        for (const Trial* trial : selected) member_accs.push_back(trial->val_accuracy);
        out.pac = reverse_engineering_bound(member_accs);
        unexpected = make_ensemble(selected);
    } catch (const ExperimentError& e) {
        out.notes.push_back(seed_tag(seed) + ": " + e.what());
    }

    std::optional<WeightedEnsemble> defended;  // Treatment 5, clean-validation DE
    if (unexpected.has_value() && !config.de_adversarial) {
        defended = *unexpected;
        auto t0 = Clock::now();
        de_optimize(*defended, split.val_x, split.val_y, config.de, seed_mix(seed, kStageDe));
        add_timing(timings, seed, "de", seconds_since(t0));
    }

    for (std::size_t ai = 0; ai < config.attack_specs.size(); ++ai) {
        const AttackSpec& spec = config.attack_specs[ai];
        const std::string name = to_string(spec.kind);
        TreatmentSeedOutcome::PerAttack& slot = out.attacks[ai];
        try {
            auto t0 = Clock::now();
            AdversarialSet eval_set =
                craft_attack(victim.model.net, split.test_x, split.test_y, spec, groups,
                             seed_mix(seed, kStageCraft, ai), victim_id);
            add_timing(timings, seed, "craft:" + name, seconds_since(t0));

            slot.a1 = victim.model.net.accuracy(eval_set.x_adv, eval_set.y);
            slot.success_rate =
                attack_success_rate(victim.model.net, split.test_x, eval_set.x_adv, split.test_y)
                    .success_rate;

            // transfer evaluation reuses the victim-crafted set; direct mode
            // re-crafts against the defense under evaluation
            auto defended_accuracy = [&](const DifferentiableClassifier& model,
                                         std::uint64_t craft_seed) {
                if (!config.direct_attacks) return model.accuracy(eval_set.x_adv, eval_set.y);
                AdversarialSet direct = craft_attack(model, split.test_x, split.test_y, spec,
                                                     groups, craft_seed, "direct");
                return model.accuracy(direct.x_adv, direct.y);
            };

            try {
                AdvTrainingSpec adv;
                adv.s1 = config.s1_for(spec);
                adv.s2 = spec;
                adv.fraction = config.adv_fraction;
                adv.from_test = config.paper_faithful;
                auto t1 = Clock::now();
                TrainedModel hardened =
                    adversarial_train(victim.model, split, adv, seed_mix(seed, kStageAdvTrain, ai));
                add_timing(timings, seed, "adv_train:" + name, seconds_since(t1));
                slot.a2 = defended_accuracy(hardened.net, seed_mix(seed, kStageCraft, 500 + ai));
            } catch (const ExperimentError& e) {
                out.errors.push_back(seed_tag(seed) + " " + name + " retrain: " + e.what());
            }

            slot.a3 = defended_accuracy(random_ensemble, seed_mix(seed, kStageCraft, 100 + ai));
            if (unexpected.has_value()) {
                slot.a4 = defended_accuracy(*unexpected, seed_mix(seed, kStageCraft, 200 + ai));
                if (config.de_adversarial) {
                    WeightedEnsemble tuned = *unexpected;
                    AdversarialSet val_adv =
                        craft_attack(victim.model.net, split.val_x, split.val_y, spec, groups,
                                     seed_mix(seed, kStageCraft, 300 + ai), victim_id);
                    auto t2 = Clock::now();
                    de_optimize(tuned, val_adv.x_adv, val_adv.y, config.de,
                                seed_mix(seed, kStageDe, ai));
                    add_timing(timings, seed, "de:" + name, seconds_since(t2));
                    slot.a5 = defended_accuracy(tuned, seed_mix(seed, kStageCraft, 400 + ai));
                } else {
                    slot.a5 = defended_accuracy(*defended, seed_mix(seed, kStageCraft, 400 + ai));
                }
            }
        } catch (const std::exception& e) {
            out.errors.push_back(seed_tag(seed) + " " + name + ": " + e.what());
        }
    }
    log_line(config, seed_tag(seed) + ": done");
}

void merge_timings(json* timings, const json& per_seed) {
    if (timings == nullptr) return;
    if (!timings->is_array()) *timings = json::array();
    for (const auto& entry : per_seed) timings->push_back(entry);
}

}  // namespace

TreatmentReport run_treatments(const DatasetSource& source, const HarnessConfig& config,
                               const std::vector<std::uint64_t>& seeds, json* timings) {
    source.validate();
    config.validate();
    if (seeds.empty()) throw ConfigError("run_treatments: no seeds");

    TreatmentReport report;
    report.dataset = source.id;
    report.seeds = seeds;
    report.config = json{{"source", source.to_json()}, {"harness", config.to_json()}};
    report.a0 = blank_series(seeds.size());
    report.pac_bound = blank_series(seeds.size());
    for (const auto& spec : config.attack_specs)
        report.attacks[to_string(spec.kind)] = blank_outcome(seeds.size());

    auto outcomes = run_seeds<TreatmentSeedOutcome>(
        seeds, config.jobs, [&](std::size_t i, TreatmentSeedOutcome& out) {
            try {
                run_treatment_seed(source, config, seeds[i], out);
            } catch (const std::exception& e) {
                out.errors.push_back(seed_tag(seeds[i]) + ": " + e.what());
            }
        });

    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const TreatmentSeedOutcome& out = outcomes[i];
        report.a0.per_seed[i] = out.a0;
        report.pac_bound.per_seed[i] = out.pac;
        for (std::size_t ai = 0; ai < config.attack_specs.size(); ++ai) {
            if (ai >= out.attacks.size()) break;  // seed failed before the attack loop
            AttackOutcome& dst = report.attacks.at(to_string(config.attack_specs[ai].kind));
            dst.a1.per_seed[i] = out.attacks[ai].a1;
            dst.a2.per_seed[i] = out.attacks[ai].a2;
            dst.a3.per_seed[i] = out.attacks[ai].a3;
            dst.a4.per_seed[i] = out.attacks[ai].a4;
            dst.a5.per_seed[i] = out.attacks[ai].a5;
            dst.success_rate.per_seed[i] = out.attacks[ai].success_rate;
        }
        report.notes.insert(report.notes.end(), out.notes.begin(), out.notes.end());
        report.errors.insert(report.errors.end(), out.errors.begin(), out.errors.end());
        merge_timings(timings, out.timings);
    }
    return report;
}

namespace {

struct SweepSeedOutcome {
    // values[attack][distance]
    std::vector<std::vector<std::optional<double>>> values;
    std::vector<std::string> notes, errors;
    json timings = json::array();
};

void run_sweep_seed(const DatasetSource& source, const HarnessConfig& config,
                    const std::vector<double>& distances, std::uint64_t seed,
                    SweepSeedOutcome& out) {
    out.values.assign(config.attack_specs.size(),
                      std::vector<std::optional<double>>(distances.size()));
    json* timings = &out.timings;

    SeedArtifacts artifacts = build_seed_artifacts(source, config, seed);
    add_timing(timings, seed, "hpo", artifacts.hpo_wall_s);
    log_line(config, seed_tag(seed) + ": pool ready (" +
                         std::to_string(artifacts.pool.trials.size()) + " trials)");
    const DataSplit& split = artifacts.split;
    const Trial& victim = artifacts.pool.victim();
    const std::string victim_id = "trial-" + std::to_string(victim.index);
    const std::vector<int> groups = split.transform.onehot_groups();

    std::vector<AdversarialSet> eval_sets;
    std::vector<AdversarialSet> val_sets;  // adversarial DE fitness sets
    for (std::size_t ai = 0; ai < config.attack_specs.size(); ++ai) {
        const AttackSpec& spec = config.attack_specs[ai];
        auto t0 = Clock::now();
        eval_sets.push_back(craft_attack(victim.model.net, split.test_x, split.test_y, spec,
                                         groups, seed_mix(seed, kStageCraft, ai), victim_id));
        add_timing(timings, seed, "craft:" + to_string(spec.kind), seconds_since(t0));
        if (config.de_adversarial)
            val_sets.push_back(craft_attack(victim.model.net, split.val_x, split.val_y, spec,
                                            groups, seed_mix(seed, kStageCraft, 300 + ai),
                                            victim_id));
    }

    for (std::size_t di = 0; di < distances.size(); ++di) {
        SelectionCriteria criteria = config.criteria;
        criteria.distance_t = distances[di];
        const std::string key = distance_key(distances[di]);
        std::vector<const Trial*> selected;
        try {
            selected = select_unexpected(artifacts.pool, criteria);
        } catch (const ExperimentError& e) {
            out.notes.push_back(seed_tag(seed) + " d=" + key + ": " + e.what());
            continue;
        }
        WeightedEnsemble base = make_ensemble(selected);
        if (!config.de_adversarial)
            de_optimize(base, split.val_x, split.val_y, config.de, seed_mix(seed, kStageDe, di));
        for (std::size_t ai = 0; ai < config.attack_specs.size(); ++ai) {
            const AttackSpec& spec = config.attack_specs[ai];
            WeightedEnsemble tuned = base;
            if (config.de_adversarial)
                de_optimize(tuned, val_sets[ai].x_adv, val_sets[ai].y, config.de,
                            seed_mix(seed, kStageDe, di * 1000 + ai));
            if (config.direct_attacks) {
                AdversarialSet direct =
                    craft_attack(tuned, split.test_x, split.test_y, spec, groups,
                                 seed_mix(seed, kStageCraft, (di + 1) * 10000 + ai), "direct");
                out.values[ai][di] = tuned.accuracy(direct.x_adv, direct.y);
            } else {
                out.values[ai][di] = tuned.accuracy(eval_sets[ai].x_adv, eval_sets[ai].y);
            }
        }
    }
    log_line(config, seed_tag(seed) + ": done");
}

}  // namespace

SweepReport sweep_distance(const DatasetSource& source, const HarnessConfig& config,
                           const std::vector<double>& distances,
                           const std::vector<std::uint64_t>& seeds, json* timings) {
    source.validate();
    config.validate();
    if (seeds.empty()) throw ConfigError("sweep_distance: no seeds");
    if (distances.empty()) throw ConfigError("sweep_distance: no distances");
    for (double d : distances)
        if (d < 0.0 || d > 1.0) throw ConfigError("sweep_distance: thresholds live in [0, 1]");

    SweepReport report;
    report.dataset = source.id;
    report.seeds = seeds;
    report.distances = distances;
    report.config = json{{"source", source.to_json()}, {"harness", config.to_json()}};
    for (const auto& spec : config.attack_specs)
        for (double d : distances)
            report.t5[to_string(spec.kind)][distance_key(d)] = blank_series(seeds.size());

    auto outcomes = run_seeds<SweepSeedOutcome>(
        seeds, config.jobs, [&](std::size_t i, SweepSeedOutcome& out) {
            try {
                run_sweep_seed(source, config, distances, seeds[i], out);
            } catch (const std::exception& e) {
                out.errors.push_back(seed_tag(seeds[i]) + ": " + e.what());
            }
        });

    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const SweepSeedOutcome& out = outcomes[i];
        for (std::size_t ai = 0; ai < config.attack_specs.size(); ++ai) {
            if (ai >= out.values.size()) break;
            auto& per_distance = report.t5.at(to_string(config.attack_specs[ai].kind));
            for (std::size_t di = 0; di < distances.size(); ++di)
                per_distance.at(distance_key(distances[di])).per_seed[i] = out.values[ai][di];
        }
        report.notes.insert(report.notes.end(), out.notes.begin(), out.notes.end());
        report.errors.insert(report.errors.end(), out.errors.begin(), out.errors.end());
        merge_timings(timings, out.timings);
    }
    return report;
}

const std::vector<double>& default_distance_grid() {
    static const std::vector<double> grid = {0.1, 0.3, 0.5, 0.7, 0.9};
    return grid;
}

}  // namespace advens
