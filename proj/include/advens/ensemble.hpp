#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "advens/gower.hpp"
#include "advens/hpo.hpp"
#include "advens/nn.hpp"

namespace advens {

// Unexpected-model filter: keep pool models whose validation accuracy is within
// perf_epsilon of the victim's and whose hyperparameter gower distance from the
// victim is at least distance_t; the ensemble takes the best k of those.
struct SelectionCriteria {
    double perf_epsilon = 0.05;
    double distance_t = 0.9;
    int k = 10;

    void validate() const;
    json to_json() const;
    static SelectionCriteria from_json(const json& j);
};

struct SelectionDiagnostics {
    std::size_t pool_size = 0;    // candidates considered (victim excluded)
    std::size_t in_band = 0;      // within the performance band
    std::size_t far_enough = 0;   // at or beyond the distance threshold
    std::size_t eligible = 0;     // both at once
    double max_in_band_distance = 0.0;
};

// Top-k eligible candidates by val_accuracy, ties by larger distance then lower
// trial index. Empty candidate set throws ExperimentError naming the binding
// constraint; diagnostics (when passed) are filled either way.
std::vector<const Trial*> select_unexpected(const ModelPool& pool,
                                            const SelectionCriteria& criteria,
                                            SelectionDiagnostics* diag = nullptr);

// Soft-voting ensemble: probabilities are the weight-normalized sum of member
// probabilities, so predictions are invariant to rescaling the weight vector.
// Gradients average the members' gradients with the same weights, which makes
// the ensemble directly attackable.
class WeightedEnsemble : public DifferentiableClassifier {
  public:
    struct Member {
        TrainedModel model;
        int pool_index = -1;  // trial index in the source pool, -1 if detached
        double weight = 1.0;
    };
    std::vector<Member> members;

    void validate() const;  // nonempty, weights in [0,1], weight sum >= 1e-6
    std::vector<double> weights() const;
    void set_weights(const std::vector<double>& w);

    int input_dim() const override;
    Matrix predict_probs(const Matrix& x) const override;
    Matrix loss_input_gradient(const Matrix& x, const IntVector& y) const override;
    Matrix prob_class_gradient(const Matrix& x, int c) const override;

    json to_json() const;
    static WeightedEnsemble from_json(const json& j);
    void save(const std::string& path) const;
    static WeightedEnsemble load(const std::string& path);
};

// equal-weight ensemble over the given pool trials
WeightedEnsemble make_ensemble(const std::vector<const Trial*>& members);

// k distinct trials drawn uniformly from the whole pool, victim included; the
// quality-blind baseline ensemble
std::vector<const Trial*> random_members(const ModelPool& pool, int k, std::uint64_t seed);

struct DEParams {
    int np = 20;
    double cf = 0.75;
    double f = 0.3;
    int lives = 10;

    void validate() const;  // np >= 4: mutation draws three distinct others
    json to_json() const;
    static DEParams from_json(const json& j);
};

// Differential evolution over [0,1]^dim, maximizing fitness. The initial
// population holds the equal-weight vector plus np-1 uniform draws. Each member
// mutates from three distinct others (a + f*(c - b)) under crossover cf, clamps
// to [0,1] and replaces its parent only on strict improvement. lives drops by
// one per generation and gains one per new global best; zero ends the run.
std::vector<double> de_optimize_box(int dim,
                                    const std::function<double(const std::vector<double>&)>& fitness,
                                    const DEParams& params, std::uint64_t seed);

// DE weight fitness from precomputed member probabilities: accuracy of the
// reweighted vote, -inf when the weight sum degenerates below 1e-6.
std::vector<double> optimize_weights_on_probs(const std::vector<Matrix>& member_probs,
                                              const IntVector& y, const DEParams& params,
                                              std::uint64_t seed);

// Fits the ensemble's weights to maximize its accuracy on (x, y).
void de_optimize(WeightedEnsemble& ensemble, const Matrix& x, const IntVector& y,
                 const DEParams& params, std::uint64_t seed);

// select_unexpected + de_optimize: the full defense construction.
WeightedEnsemble build_defense(const ModelPool& pool, const SelectionCriteria& criteria,
                               const DEParams& de, const Matrix& x, const IntVector& y,
                               std::uint64_t seed, SelectionDiagnostics* diag = nullptr);

}  // namespace advens
