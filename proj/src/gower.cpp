#include "advens/gower.hpp"

#include <cmath>
#include <sstream>

namespace advens {

void GowerConfig::validate() const {
    if (vars.empty()) throw ConfigError("gower config needs at least one variable");
    for (const auto& v : vars) {
        if (!(v.weight > 0.0)) throw ConfigError("gower weight must be positive: " + v.name);
        if (v.kind == VarKind::Numeric && !(v.max > v.min))
            throw ConfigError("gower numeric range must have max > min: " + v.name);
    }
}

const GowerConfig& GowerConfig::for_hyperparams() {
    static const GowerConfig cfg = [] {
        GowerConfig c;
        c.vars = {
            {"hidden_activation", VarKind::Categorical, 1.0, 0.0, 1.0},
            {"output_activation", VarKind::Categorical, 1.0, 0.0, 1.0},
            {"dense1", VarKind::Numeric, 1.0, 30.0, 150.0},
            {"dense2", VarKind::Numeric, 1.0, 30.0, 50.0},
            {"dense3", VarKind::Numeric, 1.0, 10.0, 32.0},
            {"dropout_rate", VarKind::Numeric, 1.0, 0.0, 0.5},
            {"optimizer", VarKind::Categorical, 1.0, 0.0, 1.0},
            {"batch_size", VarKind::Categorical, 1.0, 0.0, 1.0},
            {"epochs", VarKind::Numeric, 1.0, 5.0, 20.0},
            {"learning_rate", VarKind::Categorical, 1.0, 0.0, 1.0},
        };
        return c;
    }();
    return cfg;
}

json GowerConfig::to_json() const {
    json arr = json::array();
    for (const auto& v : vars) {
        json item{{"name", v.name},
                  {"kind", v.kind == VarKind::Numeric ? "numeric" : "categorical"},
                  {"weight", v.weight}};
        if (v.kind == VarKind::Numeric) {
            item["min"] = v.min;
            item["max"] = v.max;
        }
        arr.push_back(item);
    }
    return json{{"variables", arr}};
}

GowerConfig GowerConfig::from_json(const json& j) {
    GowerConfig c;
    for (const auto& item : j.at("variables")) {
        GowerVariable v;
        v.name = item.at("name").get<std::string>();
        const auto kind = item.at("kind").get<std::string>();
        if (kind == "numeric")
            v.kind = VarKind::Numeric;
        else if (kind == "categorical")
            v.kind = VarKind::Categorical;
        else
            throw ConfigError("unknown gower variable kind: " + kind);
        v.weight = item.value("weight", 1.0);
        if (v.kind == VarKind::Numeric) {
            v.min = item.at("min").get<double>();
            v.max = item.at("max").get<double>();
        }
        c.vars.push_back(std::move(v));
    }
    c.validate();
    return c;
}

double gower_distance(const std::vector<MixedValue>& a, const std::vector<MixedValue>& b,
                      const GowerConfig& cfg) {
    cfg.validate();
    if (a.size() != cfg.vars.size() || b.size() != cfg.vars.size())
        throw ConfigError("gower records must match the configured variable count");
    double total = 0.0;
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < cfg.vars.size(); ++i) {
        const auto& var = cfg.vars[i];
        double d;
        if (var.kind == VarKind::Categorical) {
            const auto* sa = std::get_if<std::string>(&a[i]);
            const auto* sb = std::get_if<std::string>(&b[i]);
            if (sa == nullptr || sb == nullptr)
                throw ConfigError("categorical gower variable needs string values: " + var.name);
            d = (*sa == *sb) ? 0.0 : 1.0;
        } else {
            const auto* na = std::get_if<double>(&a[i]);
            const auto* nb = std::get_if<double>(&b[i]);
            if (na == nullptr || nb == nullptr)
                throw ConfigError("numeric gower variable needs numeric values: " + var.name);
            if (*na < var.min || *na > var.max || *nb < var.min || *nb > var.max) {
                std::ostringstream msg;
                msg << "value outside declared range for " << var.name << " [" << var.min << ", "
                    << var.max << "]";
                throw ConfigError(msg.str());
            }
            d = std::abs(*na - *nb) / (var.max - var.min);
        }
        total += var.weight * d;
        weight_sum += var.weight;
    }
    return total / weight_sum;
}

std::vector<MixedValue> hyperparams_record(const HyperParams& p) {
    std::ostringstream lr;
    lr << p.learning_rate;
    return {to_string(p.hidden_activation),
            to_string(p.output_activation),
            static_cast<double>(p.dense1),
            static_cast<double>(p.dense2),
            static_cast<double>(p.dense3),
            p.dropout_rate,
            to_string(p.optimizer),
            std::to_string(p.batch_size),
            static_cast<double>(p.epochs),
            lr.str()};
}

double gower_distance(const HyperParams& a, const HyperParams& b, const GowerConfig& cfg) {
    return gower_distance(hyperparams_record(a), hyperparams_record(b), cfg);
}

}  // namespace advens
