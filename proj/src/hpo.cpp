#include "advens/hpo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>
#include <numeric>
#include <set>

namespace advens {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730950488016887242097); }

double quantize(double v, const ParamDomain& d) {
    return std::clamp(std::round(v / d.q) * d.q, d.low, d.high);
}

// Parzen window over one numeric dimension: a gaussian per observation truncated
// to [low, high], bandwidth = distance to the farthest adjacent neighbor with a
// floor of range/100.
class Kde1D {
  public:
    Kde1D(std::vector<double> points, double low, double high)
        : low_(low), high_(high), points_(std::move(points)) {
        std::sort(points_.begin(), points_.end());
        const double floor_bw = (high_ - low_) / 100.0;
        bandwidth_.resize(points_.size());
        for (std::size_t i = 0; i < points_.size(); ++i) {
            double d = 0.0;
            if (i > 0) d = std::max(d, points_[i] - points_[i - 1]);
            if (i + 1 < points_.size()) d = std::max(d, points_[i + 1] - points_[i]);
            bandwidth_[i] = std::max(d, floor_bw);
        }
    }

    double sample(Rng& rng) const {
        const auto i = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(points_.size()) - 1));
        double v = rng.normal(points_[i], bandwidth_[i]);
        while (v < low_ || v > high_) v = rng.normal(points_[i], bandwidth_[i]);
        return v;
    }

    double pdf(double x) const {
        double total = 0.0;
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const double bw = bandwidth_[i];
            const double z = (x - points_[i]) / bw;
            const double mass =
                normal_cdf((high_ - points_[i]) / bw) - normal_cdf((low_ - points_[i]) / bw);
            total += std::exp(-0.5 * z * z) / (bw * kSqrt2Pi * mass);
        }
        return total / static_cast<double>(points_.size());
    }

  private:
    double low_, high_;
    std::vector<double> points_;
    std::vector<double> bandwidth_;
};

// counts-plus-one smoothed categorical distribution
struct CatDist {
    std::vector<double> weight;
    double total = 0.0;

    CatDist(std::size_t n_options, const std::vector<std::size_t>& observed)
        : weight(n_options, 1.0) {
        for (std::size_t idx : observed) weight[idx] += 1.0;
        total = std::accumulate(weight.begin(), weight.end(), 0.0);
    }

    std::size_t sample(Rng& rng) const {
        double u = rng.uniform() * total;
        for (std::size_t i = 0; i < weight.size(); ++i) {
            if (u < weight[i]) return i;
            u -= weight[i];
        }
        return weight.size() - 1;
    }

    double pmf(std::size_t idx) const { return weight[idx] / total; }
};

std::size_t option_index(const ParamDomain& d, const std::string& value) {
    const auto it = std::find(d.options.begin(), d.options.end(), value);
    if (it == d.options.end())
        throw ConfigError("value '" + value + "' is not an option of '" + d.name + "'");
    return static_cast<std::size_t>(it - d.options.begin());
}

std::string domain_kind_name(DomainKind k) {
    switch (k) {
        case DomainKind::Categorical: return "categorical";
        case DomainKind::Uniform: return "uniform";
        case DomainKind::QUniform: return "quniform";
    }
    throw ConfigError("unknown domain kind");
}

DomainKind domain_kind_from(const std::string& name) {
    if (name == "categorical") return DomainKind::Categorical;
    if (name == "uniform") return DomainKind::Uniform;
    if (name == "quniform") return DomainKind::QUniform;
    throw ConfigError("unknown domain kind '" + name + "'");
}

std::string model_file_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "model_%03d.json", index);
    return buf;
}

}  // namespace

void ParamDomain::validate() const {
    if (name.empty()) throw ConfigError("search dimension with empty name");
    if (kind == DomainKind::Categorical) {
        if (options.empty()) throw ConfigError("categorical dimension '" + name + "' has no options");
        std::set<std::string> seen(options.begin(), options.end());
        if (seen.size() != options.size())
            throw ConfigError("categorical dimension '" + name + "' has duplicate options");
    } else {
        if (!(high > low))
            throw ConfigError("dimension '" + name + "' needs high > low");
        if (kind == DomainKind::QUniform && !(q > 0.0))
            throw ConfigError("dimension '" + name + "' needs a positive quantum");
    }
}

json ParamDomain::to_json() const {
    json j{{"name", name}, {"kind", domain_kind_name(kind)}};
    if (kind == DomainKind::Categorical) {
        j["options"] = options;
    } else {
        j["low"] = low;
        j["high"] = high;
        if (kind == DomainKind::QUniform) j["q"] = q;
    }
    return j;
}

ParamDomain ParamDomain::from_json(const json& j) {
    ParamDomain d;
    d.name = j.at("name").get<std::string>();
    d.kind = domain_kind_from(j.at("kind").get<std::string>());
    if (d.kind == DomainKind::Categorical) {
        d.options = j.at("options").get<std::vector<std::string>>();
    } else {
        d.low = j.at("low").get<double>();
        d.high = j.at("high").get<double>();
        if (d.kind == DomainKind::QUniform) d.q = j.at("q").get<double>();
    }
    d.validate();
    return d;
}

void SearchSpace::validate() const {
    if (dims.empty()) throw ConfigError("search space has no dimensions");
    std::set<std::string> seen;
    for (const auto& d : dims) {
        d.validate();
        if (!seen.insert(d.name).second)
            throw ConfigError("duplicate search dimension '" + d.name + "'");
    }
}

int SearchSpace::dim_index(const std::string& name) const {
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (dims[i].name == name) return static_cast<int>(i);
    throw ConfigError("search space has no dimension '" + name + "'");
}

json SearchSpace::to_json() const {
    json arr = json::array();
    for (const auto& d : dims) arr.push_back(d.to_json());
    return json{{"dims", std::move(arr)}};
}

SearchSpace SearchSpace::from_json(const json& j) {
    SearchSpace s;
    for (const auto& d : j.at("dims")) s.dims.push_back(ParamDomain::from_json(d));
    s.validate();
    return s;
}

SearchSpace table1_space() {
    std::vector<std::string> activations;
    for (Activation a : all_activations()) activations.push_back(to_string(a));
    std::vector<std::string> optimizers;
    for (OptimizerKind o : all_optimizers()) optimizers.push_back(to_string(o));

    SearchSpace s;
    s.dims.push_back({"hidden_activation", DomainKind::Categorical, activations, 0, 0, 1});
    s.dims.push_back({"output_activation", DomainKind::Categorical, activations, 0, 0, 1});
    s.dims.push_back({"dense1", DomainKind::QUniform, {}, 30, 150, 1});
    s.dims.push_back({"dense2", DomainKind::QUniform, {}, 30, 50, 1});
    s.dims.push_back({"dense3", DomainKind::QUniform, {}, 10, 32, 1});
    s.dims.push_back({"dropout_rate", DomainKind::Uniform, {}, 0.0, 0.5, 1});
    s.dims.push_back({"optimizer", DomainKind::Categorical, optimizers, 0, 0, 1});
    s.dims.push_back({"batch_size", DomainKind::Categorical, {"16", "32", "64", "128"}, 0, 0, 1});
    s.dims.push_back({"epochs", DomainKind::QUniform, {}, 5, 20, 1});
    s.dims.push_back(
        {"learning_rate", DomainKind::Categorical, {"0.001", "0.01", "0.1"}, 0, 0, 1});
    return s;
}

HyperParams to_hyperparams(const SearchSpace& space, const ParamConfig& config) {
    if (config.size() != space.dims.size())
        throw ConfigError("configuration width does not match the search space");
    HyperParams p;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < space.dims.size(); ++i) {
        const auto& d = space.dims[i];
        seen.insert(d.name);
        if (d.kind == DomainKind::Categorical) {
            const auto& v = std::get<std::string>(config[i]);
            if (d.name == "hidden_activation") {
                p.hidden_activation = activation_from_string(v);
            } else if (d.name == "output_activation") {
                p.output_activation = activation_from_string(v);
            } else if (d.name == "optimizer") {
                p.optimizer = optimizer_from_string(v);
            } else if (d.name == "batch_size") {
                p.batch_size = std::stoi(v);
            } else if (d.name == "learning_rate") {
                double lr = 0.0;
                if (!parse_double(v, &lr)) throw ConfigError("bad learning_rate option '" + v + "'");
                p.learning_rate = lr;
            } else {
                throw ConfigError("unknown categorical dimension '" + d.name + "'");
            }
        } else {
            const double v = std::get<double>(config[i]);
            if (d.name == "dense1")
                p.dense1 = static_cast<int>(std::llround(v));
            else if (d.name == "dense2")
                p.dense2 = static_cast<int>(std::llround(v));
            else if (d.name == "dense3")
                p.dense3 = static_cast<int>(std::llround(v));
            else if (d.name == "dropout_rate")
                p.dropout_rate = v;
            else if (d.name == "epochs")
                p.epochs = static_cast<int>(std::llround(v));
            else
                throw ConfigError("unknown numeric dimension '" + d.name + "'");
        }
    }
    for (const char* required : {"hidden_activation", "output_activation", "dense1", "dense2",
                                 "dense3", "dropout_rate", "optimizer", "batch_size", "epochs",
                                 "learning_rate"})
        if (!seen.count(required))
            throw ConfigError(std::string("search space is missing dimension '") + required + "'");
    p.validate();
    return p;
}

ParamConfig from_hyperparams(const SearchSpace& space, const HyperParams& params) {
    ParamConfig config(space.dims.size());
    for (std::size_t i = 0; i < space.dims.size(); ++i) {
        const auto& d = space.dims[i];
        if (d.name == "hidden_activation")
            config[i] = to_string(params.hidden_activation);
        else if (d.name == "output_activation")
            config[i] = to_string(params.output_activation);
        else if (d.name == "optimizer")
            config[i] = to_string(params.optimizer);
        else if (d.name == "batch_size")
            config[i] = std::to_string(params.batch_size);
        else if (d.name == "learning_rate")
            config[i] = double_to_string(params.learning_rate);
        else if (d.name == "dense1")
            config[i] = static_cast<double>(params.dense1);
        else if (d.name == "dense2")
            config[i] = static_cast<double>(params.dense2);
        else if (d.name == "dense3")
            config[i] = static_cast<double>(params.dense3);
        else if (d.name == "dropout_rate")
            config[i] = params.dropout_rate;
        else if (d.name == "epochs")
            config[i] = static_cast<double>(params.epochs);
        else
            throw ConfigError("unknown dimension '" + d.name + "'");
    }
    return config;
}

void TpeConfig::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("tpe gamma must be in (0, 1)");
    if (n_startup < 1) throw ConfigError("tpe n_startup must be positive");
    if (n_candidates < 1) throw ConfigError("tpe n_candidates must be positive");
}

ParamConfig sample_prior(const SearchSpace& space, Rng& rng) {
    ParamConfig config;
    config.reserve(space.dims.size());
    for (const auto& d : space.dims) {
        switch (d.kind) {
            case DomainKind::Categorical:
                config.emplace_back(d.options[static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<std::int64_t>(d.options.size()) - 1))]);
                break;
            case DomainKind::Uniform:
                config.emplace_back(rng.uniform(d.low, d.high));
                break;
            case DomainKind::QUniform:
                config.emplace_back(quantize(rng.uniform(d.low, d.high), d));
                break;
        }
    }
    return config;
}

ParamConfig tpe_suggest(const SearchSpace& space, const std::vector<SpaceSample>& history,
                        const TpeConfig& cfg, Rng& rng) {
    space.validate();
    cfg.validate();
    if (history.size() < static_cast<std::size_t>(cfg.n_startup) || history.size() < 2)
        return sample_prior(space, rng);

    for (const auto& h : history)
        if (h.config.size() != space.dims.size())
            throw ConfigError("history configuration width does not match the search space");

    // good group = top gamma quantile by score, ties broken by history order
    std::vector<std::size_t> order(history.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return history[a].score > history[b].score;
    });
    const auto n_good = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(cfg.gamma * static_cast<double>(history.size()))), 1,
        history.size() - 1);

    struct DimModel {
        std::unique_ptr<Kde1D> l_kde, g_kde;
        std::unique_ptr<CatDist> l_cat, g_cat;
    };
    std::vector<DimModel> models(space.dims.size());
    for (std::size_t i = 0; i < space.dims.size(); ++i) {
        const auto& d = space.dims[i];
        if (d.kind == DomainKind::Categorical) {
            std::vector<std::size_t> l_obs, g_obs;
            for (std::size_t r = 0; r < order.size(); ++r) {
                const auto idx = option_index(d, std::get<std::string>(history[order[r]].config[i]));
                (r < n_good ? l_obs : g_obs).push_back(idx);
            }
            models[i].l_cat = std::make_unique<CatDist>(d.options.size(), l_obs);
            models[i].g_cat = std::make_unique<CatDist>(d.options.size(), g_obs);
        } else {
            std::vector<double> l_pts, g_pts;
            for (std::size_t r = 0; r < order.size(); ++r)
                (r < n_good ? l_pts : g_pts).push_back(std::get<double>(history[order[r]].config[i]));
            models[i].l_kde = std::make_unique<Kde1D>(std::move(l_pts), d.low, d.high);
            models[i].g_kde = std::make_unique<Kde1D>(std::move(g_pts), d.low, d.high);
        }
    }

    ParamConfig best_config;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < cfg.n_candidates; ++c) {
        ParamConfig candidate(space.dims.size());
        double score = 0.0;
        for (std::size_t i = 0; i < space.dims.size(); ++i) {
            const auto& d = space.dims[i];
            if (d.kind == DomainKind::Categorical) {
                const auto idx = models[i].l_cat->sample(rng);
                score += std::log(models[i].l_cat->pmf(idx)) - std::log(models[i].g_cat->pmf(idx));
                candidate[i] = d.options[idx];
            } else {
                double v = models[i].l_kde->sample(rng);
                if (d.kind == DomainKind::QUniform) v = quantize(v, d);
                score += std::log(models[i].l_kde->pdf(v)) - std::log(models[i].g_kde->pdf(v));
                candidate[i] = v;
            }
        }
        if (score > best_score) {
            best_score = score;
            best_config = std::move(candidate);
        }
    }
    return best_config;
}

const Trial& ModelPool::victim() const {
    if (trials.empty()) throw ConfigError("empty pool has no victim");
    return trials.front();
}

const Trial& ModelPool::by_index(int index) const {
    for (const auto& t : trials)
        if (t.index == index) return t;
    throw ConfigError("pool has no trial with index " + std::to_string(index));
}

void ModelPool::sort_trials() {
    std::stable_sort(trials.begin(), trials.end(), [](const Trial& a, const Trial& b) {
        if (a.val_accuracy != b.val_accuracy) return a.val_accuracy > b.val_accuracy;
        return a.index < b.index;
    });
}

void ModelPool::save(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    json index = json::array();
    json timings = json::array();
    for (const auto& t : trials) {
        const std::string file = model_file_name(t.index);
        t.model.save(dir + "/" + file);
        index.push_back(json{{"index", t.index},
                             {"params", t.params.to_json()},
                             {"val_accuracy", t.val_accuracy},
                             {"diverged", t.diverged},
                             {"model_file", file}});
        timings.push_back(json{{"index", t.index}, {"wall_time_s", t.wall_time_s}});
    }
    json pool{{"format", "advens.pool/1"},
              {"trials", std::move(index)},
              {"victim_index", victim().index}};
    write_text_file(dir + "/pool.json", pool.dump(2) + "\n");
    write_text_file(dir + "/timings.json", json{{"trials", std::move(timings)}}.dump(2) + "\n");
}

ModelPool ModelPool::load(const std::string& dir) {
    const json pool = json::parse(read_text_file(dir + "/pool.json"));
    if (pool.at("format").get<std::string>() != "advens.pool/1")
        throw DataError("unsupported pool format in " + dir);
    ModelPool out;
    for (const auto& e : pool.at("trials")) {
        Trial t;
        t.index = e.at("index").get<int>();
        t.params = HyperParams::from_json(e.at("params"));
        t.val_accuracy = e.at("val_accuracy").get<double>();
        t.diverged = e.at("diverged").get<bool>();
        t.model = TrainedModel::load(dir + "/" + e.at("model_file").get<std::string>());
        out.trials.push_back(std::move(t));
    }
    if (std::filesystem::exists(dir + "/timings.json")) {
        const json timings = json::parse(read_text_file(dir + "/timings.json"));
        for (const auto& e : timings.at("trials")) {
            const int idx = e.at("index").get<int>();
            for (auto& t : out.trials)
                if (t.index == idx) t.wall_time_s = e.at("wall_time_s").get<double>();
        }
    }
    out.sort_trials();
    return out;
}

ModelPool run_hpo(const SearchSpace& space, const DataSplit& split, int budget, std::uint64_t seed,
                  const TpeConfig& cfg) {
    space.validate();
    cfg.validate();
    if (budget < cfg.n_startup)
        throw ConfigError("hpo budget must cover the " + std::to_string(cfg.n_startup) +
                          " startup trials");
    const int input_dim = static_cast<int>(split.train_x.cols());
    Rng suggest_rng(seed_mix(seed, 1));
    std::vector<SpaceSample> history;
    ModelPool pool;
    for (int t = 0; t < budget; ++t) {
        ParamConfig config = tpe_suggest(space, history, cfg, suggest_rng);
        Trial trial;
        trial.index = t;
        trial.params = to_hyperparams(space, config);
        const auto t0 = std::chrono::steady_clock::now();
        trial.model = build_model(trial.params, input_dim, seed_mix(seed, 2, static_cast<std::uint64_t>(t)));
        try {
            train_model(trial.model, split.train_x, split.train_y,
                        seed_mix(seed, 3, static_cast<std::uint64_t>(t)));
            trial.val_accuracy = trial.model.net.accuracy(split.val_x, split.val_y);
        } catch (const TrainingDivergence&) {
            // keep the finite initial weights, score the trial at the floor
            trial.diverged = true;
            trial.model = build_model(trial.params, input_dim,
                                      seed_mix(seed, 2, static_cast<std::uint64_t>(t)));
            trial.val_accuracy = 0.0;
        }
        trial.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        trial.model.val_accuracy = trial.val_accuracy;
        history.push_back({std::move(config), trial.val_accuracy});
        pool.trials.push_back(std::move(trial));
    }
    pool.sort_trials();
    return pool;
}

double reverse_engineering_bound(const std::vector<double>& val_accuracies) {
    if (val_accuracies.empty())
        throw ConfigError("reverse-engineering bound needs at least one model");
    double worst = 0.0;
    for (double acc : val_accuracies) worst = std::max(worst, 1.0 - acc);
    return 2.0 * worst;
}

}  // namespace advens
