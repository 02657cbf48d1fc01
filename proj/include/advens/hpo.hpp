#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "advens/data.hpp"
#include "advens/nn.hpp"

namespace advens {

enum class DomainKind { Categorical, Uniform, QUniform };

// One tunable dimension. Categorical options are strings; quniform values are
// round(u/q)*q clamped into [low, high].
struct ParamDomain {
    std::string name;
    DomainKind kind = DomainKind::Uniform;
    std::vector<std::string> options;
    double low = 0.0;
    double high = 0.0;
    double q = 1.0;

    void validate() const;
    json to_json() const;
    static ParamDomain from_json(const json& j);
};

// numeric dims carry double, categorical dims carry the option string
using ParamValue = std::variant<double, std::string>;
using ParamConfig = std::vector<ParamValue>;

struct SearchSpace {
    std::vector<ParamDomain> dims;

    void validate() const;
    int dim_index(const std::string& name) const;
    json to_json() const;
    static SearchSpace from_json(const json& j);
};

// The ten tuned dimensions with their published domains.
SearchSpace table1_space();

// Conversion between a generic configuration over table1_space and HyperParams.
HyperParams to_hyperparams(const SearchSpace& space, const ParamConfig& config);
ParamConfig from_hyperparams(const SearchSpace& space, const HyperParams& params);

struct TpeConfig {
    double gamma = 0.15;     // good-set quantile; paper cites a 10-25% band
    int n_startup = 20;      // prior samples before the surrogate kicks in
    int n_candidates = 24;   // draws from l(x) ranked by l/g

    void validate() const;
};

struct SpaceSample {
    ParamConfig config;
    double score = 0.0;  // maximized
};

ParamConfig sample_prior(const SearchSpace& space, Rng& rng);

// Classic TPE step: split history at the gamma quantile (ties broken by history
// order), fit per-dimension Parzen/categorical estimators over the good and rest
// groups, draw candidates from the good model and return the best l/g ratio.
// Falls back to the prior while history is shorter than n_startup.
ParamConfig tpe_suggest(const SearchSpace& space, const std::vector<SpaceSample>& history,
                        const TpeConfig& cfg, Rng& rng);

struct Trial {
    HyperParams params;
    double val_accuracy = 0.0;
    int index = 0;  // suggestion order
    double wall_time_s = 0.0;
    bool diverged = false;
    TrainedModel model;
};

// Trials sorted by val_accuracy descending, ties by suggestion order. The victim
// is the front trial. Persists as an index file plus one model file per trial;
// wall times go to a separate timings file so the index is reproducible.
struct ModelPool {
    std::vector<Trial> trials;

    const Trial& victim() const;
    const Trial& by_index(int index) const;
    void sort_trials();
    void save(const std::string& dir) const;
    static ModelPool load(const std::string& dir);
};

// Sequential TPE over the given space: suggest, train on the train partition,
// score on the validation partition. Diverged trainings score 0 and keep their
// untrained (finite) weights.
ModelPool run_hpo(const SearchSpace& space, const DataSplit& split, int budget,
                  std::uint64_t seed, const TpeConfig& cfg = TpeConfig{});

// 2 * max(1 - val_accuracy): the reverse-engineering error bound reported as a
// pool diagnostic.
double reverse_engineering_bound(const std::vector<double>& val_accuracies);

}  // namespace advens
