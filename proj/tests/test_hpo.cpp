#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "advens/common.hpp"
#include "advens/data.hpp"
#include "advens/hpo.hpp"

using namespace advens;

namespace {

SearchSpace unit_line() {
    SearchSpace s;
    s.dims.push_back({"x", DomainKind::Uniform, {}, 0.0, 1.0, 1});
    return s;
}

double quadratic(const ParamConfig& config) {
    double x = std::get<double>(config[0]);
    return -(x - 0.3) * (x - 0.3);
}

// best x found by a TPE loop (or by the prior alone when startup >= budget)
double optimize_line(const TpeConfig& cfg, int budget, std::uint64_t seed) {
    SearchSpace space = unit_line();
    Rng rng(seed);
    std::vector<SpaceSample> history;
    double best_x = -1.0, best_score = -1e9;
    for (int t = 0; t < budget; ++t) {
        ParamConfig config = tpe_suggest(space, history, cfg, rng);
        double score = quadratic(config);
        history.push_back({config, score});
        if (score > best_score) {
            best_score = score;
            best_x = std::get<double>(config[0]);
        }
    }
    return best_x;
}

}  // namespace

TEST_CASE("tpe localizes a 1-d quadratic optimum on nearly every seed") {
    TpeConfig cfg;  // gamma 0.15, 20 startup, 24 candidates
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        double best_x = optimize_line(cfg, 50, seed);
        if (std::abs(best_x - 0.3) <= 0.05) ++hits;
    }
    CHECK(hits >= 18);
}

TEST_CASE("tpe beats pure random search in the median over paired seeds") {
    TpeConfig cfg;
    TpeConfig prior_only = cfg;
    prior_only.n_startup = 1000;  // never leaves the prior: a random-search baseline
    std::vector<double> tpe_err, random_err;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        tpe_err.push_back(std::abs(optimize_line(cfg, 50, seed) - 0.3));
        random_err.push_back(std::abs(optimize_line(prior_only, 50, seed) - 0.3));
    }
    CHECK(median(tpe_err) <= median(random_err));
}

TEST_CASE("tpe keeps sampling the prior on short or degenerate histories") {
    SearchSpace space = unit_line();
    TpeConfig cfg;
    cfg.n_startup = 3;
    Rng rng(9);
    std::vector<SpaceSample> history;
    for (int t = 0; t < 40; ++t) {
        ParamConfig config = tpe_suggest(space, history, cfg, rng);
        double x = std::get<double>(config[0]);
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
        history.push_back({config, 0.5});  // all scores tie
    }
}

TEST_CASE("the published search space has the ten tuned dimensions") {
    SearchSpace s = table1_space();
    CHECK_NOTHROW(s.validate());
    REQUIRE(s.dims.size() == 10);

    auto dim = [&](const std::string& name) -> const ParamDomain& {
        return s.dims[static_cast<std::size_t>(s.dim_index(name))];
    };
    CHECK(dim("hidden_activation").options.size() == 11);
    CHECK(dim("output_activation").options.size() == 11);
    CHECK(dim("dense1").low == 30);
    CHECK(dim("dense1").high == 150);
    CHECK(dim("dense2").low == 30);
    CHECK(dim("dense2").high == 50);
    CHECK(dim("dense3").low == 10);
    CHECK(dim("dense3").high == 32);
    CHECK(dim("dropout_rate").high == 0.5);
    CHECK(dim("optimizer").options.size() == 7);
    CHECK(dim("batch_size").options == std::vector<std::string>{"16", "32", "64", "128"});
    CHECK(dim("epochs").low == 5);
    CHECK(dim("epochs").high == 20);
    CHECK(dim("learning_rate").options == std::vector<std::string>{"0.001", "0.01", "0.1"});
    CHECK_THROWS_AS(s.dim_index("momentum"), ConfigError);
}

TEST_CASE("prior samples respect quantization and bounds") {
    SearchSpace s = table1_space();
    Rng rng(77);
    for (int i = 0; i < 200; ++i) {
        ParamConfig config = sample_prior(s, rng);
        HyperParams params = to_hyperparams(s, config);
        CHECK_NOTHROW(params.validate());
        CHECK(params.dense1 == std::floor(params.dense1));
        double dense2 = std::get<double>(config[static_cast<std::size_t>(s.dim_index("dense2"))]);
        CHECK(dense2 >= 30);
        CHECK(dense2 <= 50);
        CHECK(dense2 == std::round(dense2));
    }
}

TEST_CASE("configurations round-trip through hyperparameters") {
    SearchSpace s = table1_space();
    Rng rng(123);
    for (int i = 0; i < 50; ++i) {
        ParamConfig config = sample_prior(s, rng);
        HyperParams params = to_hyperparams(s, config);
        ParamConfig back = from_hyperparams(s, params);
        CHECK(to_hyperparams(s, back) == params);
    }
}

TEST_CASE("search spaces round-trip through json") {
    SearchSpace s = table1_space();
    SearchSpace back = SearchSpace::from_json(s.to_json());
    REQUIRE(back.dims.size() == s.dims.size());
    for (std::size_t i = 0; i < s.dims.size(); ++i) {
        CHECK(back.dims[i].name == s.dims[i].name);
        CHECK(back.dims[i].kind == s.dims[i].kind);
        CHECK(back.dims[i].options == s.dims[i].options);
        CHECK(back.dims[i].low == s.dims[i].low);
        CHECK(back.dims[i].high == s.dims[i].high);
        CHECK(back.dims[i].q == s.dims[i].q);
    }
}

TEST_CASE("pools sort by accuracy with suggestion order breaking ties") {
    ModelPool pool;
    auto add = [&](int index, double acc) {
        Trial t;
        t.index = index;
        t.val_accuracy = acc;
        HyperParams p;
        p.dense1 = 30 + index;
        t.params = p;
        t.model = build_model(p, 3, static_cast<std::uint64_t>(index));
        t.model.val_accuracy = acc;
        pool.trials.push_back(std::move(t));
    };
    add(0, 0.7);
    add(1, 0.9);
    add(2, 0.9);
    add(3, 0.85);
    pool.sort_trials();
    CHECK(pool.victim().index == 1);
    CHECK(pool.trials[1].index == 2);
    CHECK(pool.trials[2].index == 3);
    CHECK(pool.trials[3].index == 0);
    CHECK(pool.by_index(3).val_accuracy == 0.85);
    CHECK_THROWS_AS(pool.by_index(9), ConfigError);
    CHECK_THROWS_AS(ModelPool{}.victim(), ConfigError);
}

TEST_CASE("pools round-trip through their directory format") {
    SynthSpec spec;
    spec.n = 200;
    spec.n_numeric = 3;
    spec.n_categorical = 0;
    DataSplit split = prepare_split(gen_synth(spec, 4), 4);

    TpeConfig cfg;
    cfg.n_startup = 2;
    cfg.n_candidates = 6;
    ModelPool pool = run_hpo(table1_space(), split, 4, 33, cfg);
    REQUIRE(pool.trials.size() == 4);

    const std::string dir = "/tmp/advens_hpo_pool";
    pool.save(dir);
    ModelPool back = ModelPool::load(dir);
    REQUIRE(back.trials.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(back.trials[i].index == pool.trials[i].index);
        CHECK(back.trials[i].params == pool.trials[i].params);
        CHECK(back.trials[i].val_accuracy == pool.trials[i].val_accuracy);
        Matrix p0 = pool.trials[i].model.net.predict_probs(split.val_x);
        Matrix p1 = back.trials[i].model.net.predict_probs(split.val_x);
        CHECK((p0 - p1).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("hpo runs deterministically and keeps diverged trials scored at zero") {
    SynthSpec spec;
    spec.n = 200;
    spec.n_numeric = 3;
    spec.n_categorical = 0;
    DataSplit split = prepare_split(gen_synth(spec, 18), 18);
    TpeConfig cfg;
    cfg.n_startup = 2;
    cfg.n_candidates = 6;
    ModelPool a = run_hpo(table1_space(), split, 5, 77, cfg);
    ModelPool b = run_hpo(table1_space(), split, 5, 77, cfg);
    REQUIRE(a.trials.size() == 5);
    std::set<int> indices;
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(a.trials[i].params == b.trials[i].params);
        CHECK(a.trials[i].val_accuracy == b.trials[i].val_accuracy);
        CHECK(a.trials[i].model.net.finite_weights());
        if (a.trials[i].diverged) CHECK(a.trials[i].val_accuracy == 0.0);
        indices.insert(a.trials[i].index);
    }
    CHECK(indices == std::set<int>{0, 1, 2, 3, 4});
    CHECK(a.victim().val_accuracy >= a.trials.back().val_accuracy);
}

TEST_CASE("hpo refuses budgets smaller than the startup phase") {
    SynthSpec spec;
    spec.n = 200;
    spec.n_numeric = 2;
    spec.n_categorical = 0;
    DataSplit split = prepare_split(gen_synth(spec, 1), 1);
    CHECK_THROWS_AS(run_hpo(table1_space(), split, 10, 1), ConfigError);
}

TEST_CASE("the reverse-engineering bound is twice the worst member error") {
    CHECK(reverse_engineering_bound({0.9, 0.8, 0.85}) == 2.0 * (1.0 - 0.8));
    CHECK(reverse_engineering_bound({0.9, 0.8, 0.85}) == doctest::Approx(0.4));
    CHECK(reverse_engineering_bound({1.0}) == 0.0);
    CHECK(reverse_engineering_bound({0.7}) == 2.0 * (1.0 - 0.7));
    CHECK_THROWS_AS(reverse_engineering_bound({}), ConfigError);
}
