#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "advens/attacks.hpp"
#include "advens/common.hpp"
#include "advens/data.hpp"
#include "advens/ensemble.hpp"
#include "advens/harness.hpp"
#include "advens/hpo.hpp"
#include "advens/report.hpp"

namespace {

using advens::json;

// --- minimal TOML subset: [dotted.sections], key = scalar | [scalars], # comments

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

double to_double(const std::string& text) {
    double out;
    if (!advens::parse_double(text, &out))
        throw advens::ConfigError("expected a number, got \"" + text + "\"");
    return out;
}

json parse_toml_scalar(const std::string& raw) {
    std::string v = trim(raw);
    if (v.empty()) throw advens::ConfigError("toml: empty value");
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"') throw advens::ConfigError("toml: unterminated string");
        std::string out;
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            if (v[i] == '\\' && i + 2 < v.size()) ++i;
            out += v[i];
        }
        return out;
    }
    if (v == "true") return true;
    if (v == "false") return false;
    bool integral = !v.empty() && v.find_first_not_of("+-0123456789") == std::string::npos;
    if (integral) return static_cast<std::int64_t>(std::stoll(v));
    return to_double(v);
}

json parse_toml_value(const std::string& raw) {
    std::string v = trim(raw);
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']') throw advens::ConfigError("toml: unterminated array");
        json arr = json::array();
        std::string inner = v.substr(1, v.size() - 2);
        std::string item;
        bool quoted = false;
        for (char c : inner) {
            if (c == '"') quoted = !quoted;
            if (c == ',' && !quoted) {
                if (!trim(item).empty()) arr.push_back(parse_toml_scalar(item));
                item.clear();
            } else {
                item += c;
            }
        }
        if (!trim(item).empty()) arr.push_back(parse_toml_scalar(item));
        return arr;
    }
    return parse_toml_scalar(v);
}

json toml_to_json(const std::string& text) {
    json root = json::object();
    json* current = &root;
    std::size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = trim(strip_comment(text.substr(pos, end - pos)));
        pos = end + 1;
        ++lineno;
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw advens::ConfigError("toml line " + std::to_string(lineno) + ": bad section");
            std::string path = trim(line.substr(1, line.size() - 2));
            current = &root;
            std::size_t start = 0;
            while (start <= path.size()) {
                std::size_t dot = path.find('.', start);
                if (dot == std::string::npos) dot = path.size();
                std::string key = trim(path.substr(start, dot - start));
                if (key.empty())
                    throw advens::ConfigError("toml line " + std::to_string(lineno) +
                                              ": empty section key");
                current = &(*current)[key];
                if (current->is_null()) *current = json::object();
                start = dot + 1;
            }
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw advens::ConfigError("toml line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw advens::ConfigError("toml line " + std::to_string(lineno) + ": empty key");
        (*current)[key] = parse_toml_value(line.substr(eq + 1));
    }
    return root;
}

json load_config(const std::string& path) {
    std::string text = advens::read_text_file(path);
    std::size_t first = text.find_first_not_of(" \t\r\n");
    try {
        if (first != std::string::npos && text[first] == '{') return json::parse(text);
        return toml_to_json(text);
    } catch (const json::exception& e) {
        throw advens::ConfigError("config " + path + ": " + e.what());
    }
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t comma = csv.find(',', start);
        if (comma == std::string::npos) comma = csv.size();
        std::string item = trim(csv.substr(start, comma - start));
        if (!item.empty()) out.push_back(to_double(item));
        start = comma + 1;
    }
    return out;
}

std::vector<std::string> parse_name_list(const std::string& csv) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t comma = csv.find(',', start);
        if (comma == std::string::npos) comma = csv.size();
        std::string item = trim(csv.substr(start, comma - start));
        if (!item.empty()) out.push_back(item);
        start = comma + 1;
    }
    return out;
}

void print_json(const json& j) { std::printf("%s\n", j.dump(2).c_str()); }

double median_of(const advens::Vector& v) {
    std::vector<double> vals(v.data(), v.data() + v.size());
    return advens::median(vals);
}

double median_of(const advens::IntVector& v) {
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) vals.push_back(v[i]);
    return advens::median(vals);
}

json describe_set(const advens::AdversarialSet& set) {
    std::size_t unsuccessful = 0, degenerate = 0, no_saliency = 0, aborted = 0;
    for (unsigned f : set.flags) {
        if (f & advens::kAttackUnsuccessful) ++unsuccessful;
        if (f & advens::kAttackDegenerate) ++degenerate;
        if (f & advens::kAttackNoSaliency) ++no_saliency;
        if (f & advens::kAttackAborted) ++aborted;
    }
    return json{{"n", set.flags.size()},
                {"median_linf", median_of(set.linf)},
                {"median_l2", median_of(set.l2)},
                {"median_l0", median_of(set.l0)},
                {"flags",
                 json{{"unsuccessful", unsuccessful},
                      {"degenerate", degenerate},
                      {"no_saliency", no_saliency},
                      {"aborted", aborted}}}};
}

json diagnostics_json(const advens::SelectionDiagnostics& diag) {
    return json{{"pool_size", diag.pool_size},
                {"in_band", diag.in_band},
                {"far_enough", diag.far_enough},
                {"eligible", diag.eligible},
                {"max_in_band_distance", diag.max_in_band_distance}};
}

// shared option block for the treatments and sweep-distance subcommands
struct ExperimentCli {
    CLI::App* sub = nullptr;
    bool has_distances = false;
    std::string config_path, out_dir, data_csv, schema_path, dataset_id, attacks_csv,
        distances_csv;
    double sample_rate = 1.0;
    std::uint64_t seed = 7;
    int repeats = 20, budget = 100, k = 10, jobs = 1;
    double distance_t = 0.9, perf_epsilon = 0.05, adv_fraction = 0.5;
    bool paper_faithful = false, direct_attacks = false, de_adversarial = false;
    std::size_t synth_n = 5000;
    int synth_numeric = 8, synth_categorical = 3, synth_vocab = 3, synth_xor_pairs = 0;
    double synth_imbalance = 0.5, synth_noise = 0.0, synth_separation = 1.7;

    void attach(CLI::App* s, bool with_distances) {
        sub = s;
        s->add_option("--config", config_path, "JSON or TOML config file");
        s->add_option("--out", out_dir, "output directory")->required();
        s->add_option("--seed", seed, "base seed; run i uses seed + i");
        s->add_option("--repeats", repeats, "independent seeded runs");
        s->add_option("--budget", budget, "pool size per run");
        s->add_option("--data", data_csv, "CSV dataset instead of the synthetic draw");
        s->add_option("--schema", schema_path, "feature schema for --data");
        s->add_option("--sample-rate", sample_rate, "stratified subsample rate for --data");
        s->add_option("--id", dataset_id, "dataset id used in reports");
        s->add_option("--attacks", attacks_csv, "comma list restricting the attack suite");
        s->add_option("--distance-t", distance_t, "gower distance threshold");
        s->add_option("--perf-epsilon", perf_epsilon, "accuracy band below the victim");
        s->add_option("--k", k, "ensemble size");
        s->add_option("--adv-fraction", adv_fraction, "augmentation fraction for retraining");
        s->add_flag("--paper-faithful", paper_faithful,
                    "craft augmentation examples from the test partition");
        s->add_flag("--direct", direct_attacks, "craft against each defense, no transfer");
        s->add_flag("--de-adversarial", de_adversarial,
                    "DE fitness on adversarial validation sets");
        s->add_option("--jobs", jobs, "worker threads over seeds");
        s->add_option("--n", synth_n, "synthetic rows");
        s->add_option("--numeric", synth_numeric, "synthetic numeric columns");
        s->add_option("--categorical", synth_categorical, "synthetic categorical columns");
        s->add_option("--imbalance", synth_imbalance, "synthetic malicious fraction");
        s->add_option("--noise", synth_noise, "synthetic label noise fraction");
        s->add_option("--separation", synth_separation, "synthetic class separation");
        s->add_option("--vocab", synth_vocab, "synthetic categorical vocabulary size");
        s->add_option("--xor-pairs", synth_xor_pairs, "sign-product numeric pairs");
        has_distances = with_distances;
        if (with_distances)
            s->add_option("--distances", distances_csv, "comma list of distance thresholds");
    }

    bool given(const std::string& name) const { return sub->count(name) > 0; }

    struct Resolved {
        advens::DatasetSource source;
        advens::HarnessConfig harness;
        std::uint64_t seed = 7;
        std::vector<double> distances;
    };

    Resolved resolve() const {
        json cfg = json::object();
        if (!config_path.empty()) cfg = load_config(config_path);
        Resolved r;
        if (cfg.contains("source")) r.source = advens::DatasetSource::from_json(cfg.at("source"));
        if (cfg.contains("harness"))
            r.harness = advens::HarnessConfig::from_json(cfg.at("harness"));
        r.seed = seed;
        if (cfg.contains("seed") && !given("--seed")) r.seed = cfg.at("seed").get<std::uint64_t>();
        if (cfg.contains("repeats") && !given("--repeats"))
            r.harness.repeats = cfg.at("repeats").get<int>();
        if (cfg.contains("distances"))
            r.distances = cfg.at("distances").get<std::vector<double>>();

        if (given("--repeats")) r.harness.repeats = repeats;
        if (given("--budget")) r.harness.budget = budget;
        if (given("--distance-t")) r.harness.criteria.distance_t = distance_t;
        if (given("--perf-epsilon")) r.harness.criteria.perf_epsilon = perf_epsilon;
        if (given("--k")) r.harness.criteria.k = k;
        if (given("--adv-fraction")) r.harness.adv_fraction = adv_fraction;
        if (given("--paper-faithful")) r.harness.paper_faithful = paper_faithful;
        if (given("--direct")) r.harness.direct_attacks = direct_attacks;
        if (given("--de-adversarial")) r.harness.de_adversarial = de_adversarial;
        if (given("--jobs")) r.harness.jobs = jobs;
        if (given("--attacks")) {
            std::vector<advens::AttackSpec> subset;
            for (const std::string& name : parse_name_list(attacks_csv)) {
                advens::AttackKind kind = advens::attack_from_string(name);
                bool found = false;
                for (const auto& spec : r.harness.attack_specs)
                    if (spec.kind == kind) {
                        subset.push_back(spec);
                        found = true;
                        break;
                    }
                if (!found) subset.push_back(advens::AttackSpec::defaults(kind));
            }
            r.harness.attack_specs = subset;
        }

        if (given("--data")) r.source.csv_path = data_csv;
        if (given("--schema")) r.source.schema_path = schema_path;
        if (given("--sample-rate")) r.source.sample_rate = sample_rate;
        if (given("--id"))
            r.source.id = dataset_id;
        else if (!r.source.csv_path.empty() && r.source.id == "synth" && !cfg.contains("source"))
            r.source.id = std::filesystem::path(r.source.csv_path).stem().string();
        if (given("--n")) r.source.synth.n = synth_n;
        if (given("--numeric")) r.source.synth.n_numeric = synth_numeric;
        if (given("--categorical")) r.source.synth.n_categorical = synth_categorical;
        if (given("--imbalance")) r.source.synth.imbalance = synth_imbalance;
        if (given("--noise")) r.source.synth.noise = synth_noise;
        if (given("--separation")) r.source.synth.separation = synth_separation;
        if (given("--vocab")) r.source.synth.vocab = synth_vocab;
        if (given("--xor-pairs")) r.source.synth.xor_pairs = synth_xor_pairs;

        if (has_distances && given("--distances")) r.distances = parse_double_list(distances_csv);
        if (r.distances.empty()) r.distances = advens::default_distance_grid();

        r.source.validate();
        r.harness.validate();
        return r;
    }
};

json treatment_summary(const advens::TreatmentReport& report) {
    json attacks = json::object();
    for (const auto& [name, outcome] : report.attacks) {
        json medians = json::object();
        auto put = [&](const char* key, const advens::StatSeries& s) {
            auto m = s.median();
            medians[key] = m.has_value() ? json(*m) : json(nullptr);
        };
        put("a1", outcome.a1);
        put("a2", outcome.a2);
        put("a3", outcome.a3);
        put("a4", outcome.a4);
        put("a5", outcome.a5);
        put("success_rate", outcome.success_rate);
        attacks[name] = medians;
    }
    auto a0 = report.a0.median();
    auto pac = report.pac_bound.median();
    return json{{"dataset", report.dataset},
                {"a0", a0.has_value() ? json(*a0) : json(nullptr)},
                {"pac_bound", pac.has_value() ? json(*pac) : json(nullptr)},
                {"attacks", attacks},
                {"notes", report.notes.size()},
                {"errors", report.errors.size()}};
}

json sweep_summary(const advens::SweepReport& report) {
    json attacks = json::object();
    for (const auto& [name, per_distance] : report.t5) {
        json medians = json::object();
        for (const auto& [key, series] : per_distance) {
            auto m = series.median();
            medians[key] = m.has_value() ? json(*m) : json(nullptr);
        }
        attacks[name] = medians;
    }
    return json{{"dataset", report.dataset},
                {"t5_median", attacks},
                {"notes", report.notes.size()},
                {"errors", report.errors.size()}};
}

void attach_stderr_log(advens::HarnessConfig& config) {
    config.log = [](const std::string& line) { std::fprintf(stderr, "%s\n", line.c_str()); };
}

int run_cli(int argc, char** argv) {
    CLI::App app{"unexpected-ensemble adversarial defense toolkit"};
    app.require_subcommand(1);

    // gen-synth
    auto* gen = app.add_subcommand("gen-synth", "generate a labeled synthetic CSV dataset");
    advens::SynthSpec synth;
    std::string gen_out, gen_schema_out;
    std::uint64_t gen_seed = 7;
    gen->add_option("--out", gen_out, "CSV output path")->required();
    gen->add_option("--schema-out", gen_schema_out, "also write the matching schema");
    gen->add_option("--n", synth.n, "rows");
    gen->add_option("--numeric", synth.n_numeric, "numeric columns");
    gen->add_option("--categorical", synth.n_categorical, "categorical columns");
    gen->add_option("--imbalance", synth.imbalance, "malicious fraction");
    gen->add_option("--noise", synth.noise, "label noise fraction");
    gen->add_option("--separation", synth.separation, "class separation in sigmas");
    gen->add_option("--vocab", synth.vocab, "categorical vocabulary size");
    gen->add_option("--xor-pairs", synth.xor_pairs, "sign-product numeric pairs");
    gen->add_option("--seed", gen_seed, "generator seed");

    // prepare
    auto* prep = app.add_subcommand("prepare", "split + encode a CSV into train/val/test");
    std::string prep_data, prep_schema, prep_out;
    double prep_rate = 1.0;
    std::uint64_t prep_seed = 7;
    prep->add_option("--data", prep_data, "CSV dataset")->required();
    prep->add_option("--schema", prep_schema, "feature schema JSON")->required();
    prep->add_option("--sample-rate", prep_rate, "stratified subsample rate");
    prep->add_option("--out", prep_out, "split directory")->required();
    prep->add_option("--seed", prep_seed, "partition seed");

    // hpo
    auto* hpo = app.add_subcommand("hpo", "TPE-tune a pool of classifiers on a split");
    std::string hpo_split, hpo_out;
    int hpo_budget = 100;
    std::uint64_t hpo_seed = 7;
    advens::TpeConfig tpe;
    hpo->add_option("--split", hpo_split, "prepared split directory")->required();
    hpo->add_option("--budget", hpo_budget, "number of trials");
    hpo->add_option("--out", hpo_out, "pool directory")->required();
    hpo->add_option("--seed", hpo_seed, "run seed");
    hpo->add_option("--gamma", tpe.gamma, "good-set quantile");
    hpo->add_option("--startup", tpe.n_startup, "prior trials before the surrogate");
    hpo->add_option("--candidates", tpe.n_candidates, "candidate draws per step");

    // select
    auto* sel = app.add_subcommand("select", "pick unexpected models and build the ensemble");
    std::string sel_pool, sel_split, sel_out;
    advens::SelectionCriteria criteria;
    advens::DEParams de;
    std::uint64_t sel_seed = 7;
    sel->add_option("--pool", sel_pool, "pool directory")->required();
    sel->add_option("--perf-epsilon", criteria.perf_epsilon, "accuracy band below the victim");
    sel->add_option("--distance-t", criteria.distance_t, "gower distance threshold");
    sel->add_option("--k", criteria.k, "ensemble size");
    sel->add_option("--split", sel_split, "split directory; enables DE weighting");
    sel->add_option("--np", de.np, "DE population");
    sel->add_option("--cf", de.cf, "DE crossover factor");
    sel->add_option("--f", de.f, "DE differential weight");
    sel->add_option("--lives", de.lives, "DE stagnation budget");
    sel->add_option("--seed", sel_seed, "DE seed");
    sel->add_option("--out", sel_out, "ensemble JSON output path");

    // attack
    auto* atk = app.add_subcommand("attack", "craft adversarial examples against a model");
    std::string atk_model, atk_pool, atk_split, atk_name, atk_out, atk_partition = "test";
    std::uint64_t atk_seed = 7;
    advens::AttackSpec base_spec;
    atk->add_option("--model", atk_model, "victim model JSON");
    atk->add_option("--pool", atk_pool, "pool directory; the victim is its best trial");
    atk->add_option("--split", atk_split, "prepared split directory")->required();
    atk->add_option("--attack", atk_name, "fgsm|bim_a|bim_b|jsma|deepfool|cw")->required();
    atk->add_option("--partition", atk_partition, "train|val|test rows to perturb")
        ->check(CLI::IsMember({"train", "val", "test"}));
    atk->add_option("--epsilon", base_spec.epsilon, "max-norm budget");
    atk->add_option("--clip-min", base_spec.clip_min, "feature floor");
    atk->add_option("--clip-max", base_spec.clip_max, "feature ceiling");
    atk->add_option("--iterations", base_spec.iterations, "iteration count");
    atk->add_option("--theta", base_spec.theta, "JSMA step");
    atk->add_option("--gamma", base_spec.gamma, "JSMA feature budget fraction");
    atk->add_option("--cw-c", base_spec.cw_c, "CW objective constant");
    atk->add_option("--cw-lr", base_spec.cw_lr, "CW step size");
    atk->add_option("--kappa", base_spec.cw_kappa, "CW confidence margin");
    atk->add_option("--overshoot", base_spec.overshoot, "DeepFool overshoot");
    atk->add_option("--seed", atk_seed, "metadata seed");
    atk->add_option("--out", atk_out, "adversarial set directory");

    // treatments
    auto* treat = app.add_subcommand("treatments", "run the six-treatment defense protocol");
    ExperimentCli treat_cli;
    treat_cli.attach(treat, false);

    // sweep-distance
    auto* sweep = app.add_subcommand("sweep-distance",
                                     "defended accuracy across distance thresholds");
    ExperimentCli sweep_cli;
    sweep_cli.attach(sweep, true);

    // report
    auto* rep = app.add_subcommand("report", "regenerate CSV/SVG outputs from a report.json");
    std::string rep_in, rep_out;
    rep->add_option("--in", rep_in, "report.json or its directory")->required();
    rep->add_option("--out", rep_out, "output directory; defaults to the input directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (gen->parsed()) {
        synth.validate();
        advens::RawTable table = advens::gen_synth(synth, gen_seed);
        advens::save_csv(table, gen_out);
        if (!gen_schema_out.empty()) table.schema.save(gen_schema_out);
        std::size_t malicious = 0;
        for (int label : table.labels) malicious += static_cast<std::size_t>(label);
        print_json(json{{"csv", gen_out},
                        {"rows", table.rows()},
                        {"malicious", malicious},
                        {"benign", table.rows() - malicious}});
        return 0;
    }

    if (prep->parsed()) {
        advens::FeatureSchema schema = advens::FeatureSchema::load(prep_schema);
        advens::RawTable table = advens::load_csv(prep_data, schema);
        std::size_t loaded = table.rows();
        if (prep_rate < 1.0) table = advens::stratified_sample(table, prep_rate, prep_seed);
        advens::DataSplit split = advens::prepare_split(table, prep_seed);
        split.save(prep_out);
        print_json(json{{"out", prep_out},
                        {"loaded", loaded},
                        {"rejected", table.rejected_rows.size()},
                        {"kept", table.rows()},
                        {"train", split.train_x.rows()},
                        {"val", split.val_x.rows()},
                        {"test", split.test_x.rows()},
                        {"columns", split.train_x.cols()}});
        return 0;
    }

    if (hpo->parsed()) {
        advens::DataSplit split = advens::DataSplit::load(hpo_split);
        advens::ModelPool pool =
            advens::run_hpo(advens::table1_space(), split, hpo_budget, hpo_seed, tpe);
        pool.save(hpo_out);
        std::vector<double> accs;
        for (const auto& trial : pool.trials) accs.push_back(trial.val_accuracy);
        const advens::Trial& victim = pool.victim();
        print_json(json{{"out", hpo_out},
                        {"trials", pool.trials.size()},
                        {"reverse_engineering_bound", advens::reverse_engineering_bound(accs)},
                        {"victim",
                         json{{"index", victim.index},
                              {"val_accuracy", victim.val_accuracy},
                              {"params", victim.params.to_json()}}}});
        return 0;
    }

    if (sel->parsed()) {
        criteria.validate();
        de.validate();
        advens::ModelPool pool = advens::ModelPool::load(sel_pool);
        advens::SelectionDiagnostics diag;
        std::vector<const advens::Trial*> selected;
        try {
            selected = advens::select_unexpected(pool, criteria, &diag);
        } catch (const advens::ExperimentError&) {
            std::fprintf(stderr, "%s\n", diagnostics_json(diag).dump(2).c_str());
            throw;
        }
        advens::WeightedEnsemble ensemble = advens::make_ensemble(selected);
        if (!sel_split.empty()) {
            advens::DataSplit split = advens::DataSplit::load(sel_split);
            advens::de_optimize(ensemble, split.val_x, split.val_y, de, sel_seed);
        }
        if (!sel_out.empty()) ensemble.save(sel_out);
        json members = json::array();
        for (const auto& member : ensemble.members)
            members.push_back(json{{"trial", member.pool_index},
                                   {"weight", member.weight},
                                   {"val_accuracy", member.model.val_accuracy}});
        print_json(json{{"victim", pool.victim().index},
                        {"members", members},
                        {"weighted", !sel_split.empty()},
                        {"diagnostics", diagnostics_json(diag)}});
        return 0;
    }

    if (atk->parsed()) {
        if (atk_model.empty() == atk_pool.empty())
            throw advens::ConfigError("attack: pass exactly one of --model or --pool");
        advens::AttackSpec spec = advens::AttackSpec::defaults(advens::attack_from_string(atk_name));
        auto touch = [&](const char* flag, auto member) {
            if (atk->count(flag)) spec.*member = base_spec.*member;
        };
        touch("--epsilon", &advens::AttackSpec::epsilon);
        touch("--clip-min", &advens::AttackSpec::clip_min);
        touch("--clip-max", &advens::AttackSpec::clip_max);
        touch("--iterations", &advens::AttackSpec::iterations);
        touch("--theta", &advens::AttackSpec::theta);
        touch("--gamma", &advens::AttackSpec::gamma);
        touch("--cw-c", &advens::AttackSpec::cw_c);
        touch("--cw-lr", &advens::AttackSpec::cw_lr);
        touch("--kappa", &advens::AttackSpec::cw_kappa);
        touch("--overshoot", &advens::AttackSpec::overshoot);
        spec.validate();

        advens::DataSplit split = advens::DataSplit::load(atk_split);
        advens::TrainedModel victim;
        std::string victim_id;
        if (!atk_model.empty()) {
            victim = advens::TrainedModel::load(atk_model);
            victim_id = std::filesystem::path(atk_model).stem().string();
        } else {
            advens::ModelPool pool = advens::ModelPool::load(atk_pool);
            victim = pool.victim().model;
            victim_id = "trial-" + std::to_string(pool.victim().index);
        }
        const advens::Matrix& x = atk_partition == "train"  ? split.train_x
                                  : atk_partition == "val" ? split.val_x
                                                           : split.test_x;
        const advens::IntVector& y = atk_partition == "train"  ? split.train_y
                                     : atk_partition == "val" ? split.val_y
                                                              : split.test_y;
        advens::AdversarialSet set = advens::craft_attack(
            victim.net, x, y, spec, split.transform.onehot_groups(), atk_seed, victim_id);
        if (!atk_out.empty()) set.save(atk_out);
        advens::AttackReport report = advens::attack_success_rate(victim.net, x, set.x_adv, y);
        json out = describe_set(set);
        out["attack"] = advens::to_string(spec.kind);
        out["partition"] = atk_partition;
        out["clean_accuracy"] = report.clean_accuracy;
        out["adv_accuracy"] = report.adv_accuracy;
        out["success_rate"] = report.success_rate;
        if (!atk_out.empty()) out["out"] = atk_out;
        print_json(out);
        return 0;
    }

    if (treat->parsed()) {
        ExperimentCli::Resolved r = treat_cli.resolve();
        attach_stderr_log(r.harness);
        std::vector<std::uint64_t> seeds = advens::expand_seeds(r.seed, r.harness.repeats);
        json timings = json::array();
        advens::TreatmentReport report =
            advens::run_treatments(r.source, r.harness, seeds, &timings);
        advens::write_treatment_outputs(report, treat_cli.out_dir, json{{"entries", timings}});
        json summary = treatment_summary(report);
        summary["out"] = treat_cli.out_dir;
        print_json(summary);
        return 0;
    }

    if (sweep->parsed()) {
        ExperimentCli::Resolved r = sweep_cli.resolve();
        attach_stderr_log(r.harness);
        std::vector<std::uint64_t> seeds = advens::expand_seeds(r.seed, r.harness.repeats);
        json timings = json::array();
        advens::SweepReport report =
            advens::sweep_distance(r.source, r.harness, r.distances, seeds, &timings);
        advens::write_sweep_outputs(report, sweep_cli.out_dir, json{{"entries", timings}});
        json summary = sweep_summary(report);
        summary["out"] = sweep_cli.out_dir;
        print_json(summary);
        return 0;
    }

    if (rep->parsed()) {
        std::filesystem::path in_path(rep_in);
        if (std::filesystem::is_directory(in_path)) in_path /= "report.json";
        std::string out_dir = rep_out.empty() ? in_path.parent_path().string() : rep_out;
        if (out_dir.empty()) out_dir = ".";
        json j;
        try {
            j = json::parse(advens::read_text_file(in_path.string()));
        } catch (const json::exception& e) {
            throw advens::DataError("report " + in_path.string() + ": " + e.what());
        }
        json timings = json{{"entries", json::array()}};
        std::filesystem::path sidecar = in_path.parent_path() / "timings.json";
        if (std::filesystem::exists(sidecar)) {
            try {
                timings = json::parse(advens::read_text_file(sidecar.string()));
            } catch (const json::exception&) {
            }
        }
        const std::string format = j.value("format", "");
        if (format == "advens.treatments/1") {
            advens::write_treatment_outputs(advens::TreatmentReport::from_json(j), out_dir,
                                            timings);
        } else if (format == "advens.sweep/1") {
            advens::write_sweep_outputs(advens::SweepReport::from_json(j), out_dir, timings);
        } else {
            throw advens::DataError("report: unknown format \"" + format + "\"");
        }
        print_json(json{{"out", out_dir}, {"format", format}});
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const advens::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const advens::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const advens::ExperimentError& e) {
        std::fprintf(stderr, "experiment error: %s\n", e.what());
        return 4;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
