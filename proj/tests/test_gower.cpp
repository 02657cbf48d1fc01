#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "advens/common.hpp"
#include "advens/gower.hpp"
#include "advens/hpo.hpp"

using namespace advens;

namespace {

// independent re-derivation: per-dimension scores averaged by weight
double oracle_distance(const std::vector<MixedValue>& a, const std::vector<MixedValue>& b,
                       const GowerConfig& cfg) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < cfg.vars.size(); ++i) {
        const GowerVariable& var = cfg.vars[i];
        double score;
        if (var.kind == VarKind::Categorical) {
            score = std::get<std::string>(a[i]) == std::get<std::string>(b[i]) ? 0.0 : 1.0;
        } else {
            double range = var.max - var.min;
            score = std::abs(std::get<double>(a[i]) - std::get<double>(b[i])) / range;
        }
        num += var.weight * score;
        den += var.weight;
    }
    return num / den;
}

HyperParams random_params(Rng& rng) {
    SearchSpace space = table1_space();
    return to_hyperparams(space, sample_prior(space, rng));
}

}  // namespace

TEST_CASE("hand case: optimizer mismatch plus 0.2 dropout gap scores 0.7") {
    GowerConfig cfg;
    cfg.vars.push_back({"optimizer", VarKind::Categorical, 1.0, 0.0, 1.0});
    cfg.vars.push_back({"dropout_rate", VarKind::Numeric, 1.0, 0.0, 0.5});
    std::vector<MixedValue> a{std::string("Adam"), 0.2};
    std::vector<MixedValue> b{std::string("SGD"), 0.4};
    CHECK(gower_distance(a, b, cfg) == 0.7);
    CHECK(gower_distance(a, a, cfg) == 0.0);
}

TEST_CASE("1000 random hyperparameter pairs match the per-dimension oracle") {
    const GowerConfig& cfg = GowerConfig::for_hyperparams();
    Rng rng(123);
    for (int i = 0; i < 1000; ++i) {
        HyperParams a = random_params(rng);
        HyperParams b = random_params(rng);
        double got = gower_distance(a, b);
        double want = oracle_distance(hyperparams_record(a), hyperparams_record(b), cfg);
        CHECK(std::abs(got - want) <= 1e-12);
        CHECK(got >= 0.0);
        CHECK(got <= 1.0);
    }
}

TEST_CASE("distance is symmetric and zero on identical records") {
    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        HyperParams a = random_params(rng);
        HyperParams b = random_params(rng);
        CHECK(gower_distance(a, b) == gower_distance(b, a));
        CHECK(gower_distance(a, a) == 0.0);
    }
}

TEST_CASE("hyperparameter config covers all ten tuned dimensions") {
    const GowerConfig& cfg = GowerConfig::for_hyperparams();
    CHECK(cfg.vars.size() == 10);
    int numeric = 0, categorical = 0;
    for (const auto& var : cfg.vars)
        (var.kind == VarKind::Numeric ? numeric : categorical) += 1;
    CHECK(numeric == 5);
    CHECK(categorical == 5);
}

TEST_CASE("gower config round-trips through json") {
    const GowerConfig& cfg = GowerConfig::for_hyperparams();
    GowerConfig back = GowerConfig::from_json(cfg.to_json());
    REQUIRE(back.vars.size() == cfg.vars.size());
    Rng rng(77);
    HyperParams a = random_params(rng), b = random_params(rng);
    CHECK(gower_distance(a, b, back) == gower_distance(a, b, cfg));
}
