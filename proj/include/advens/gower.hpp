#pragma once

#include <string>
#include <variant>
#include <vector>

#include "advens/nn.hpp"

namespace advens {

// Mixed-type record distance: categorical dimensions score 0/1 on equality,
// numeric dimensions score |a-b| normalized by a declared range, and the result
// is the weighted mean, so it always lies in [0, 1].

enum class VarKind { Categorical, Numeric };

struct GowerVariable {
    std::string name;
    VarKind kind = VarKind::Categorical;
    double weight = 1.0;
    double min = 0.0;  // numeric normalization range
    double max = 1.0;
};

struct GowerConfig {
    std::vector<GowerVariable> vars;
    void validate() const;
    // hyperparameter dimensions: dense1/2/3, dropout_rate and epochs numeric with
    // their declared tuning bounds; both activations, optimizer, batch_size and
    // learning_rate categorical; all weights 1
    static const GowerConfig& for_hyperparams();
    json to_json() const;
    static GowerConfig from_json(const json& j);
};

using MixedValue = std::variant<double, std::string>;

double gower_distance(const std::vector<MixedValue>& a, const std::vector<MixedValue>& b,
                      const GowerConfig& cfg);

std::vector<MixedValue> hyperparams_record(const HyperParams& p);

double gower_distance(const HyperParams& a, const HyperParams& b,
                      const GowerConfig& cfg = GowerConfig::for_hyperparams());

}  // namespace advens
