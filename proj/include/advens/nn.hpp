#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "advens/common.hpp"

namespace advens {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
using json = nlohmann::json;

enum class Activation {
    Elu,
    Relu,
    Selu,
    Sigmoid,
    Softmax,
    Tanh,
    HardSigmoid,
    Softplus,
    Softsign,
    Linear,
    Exponential,
};

enum class OptimizerKind { Adadelta, Adagrad, Adam, Adamax, NAdam, RMSprop, SGD };

const std::vector<Activation>& all_activations();
const std::vector<OptimizerKind>& all_optimizers();
std::string to_string(Activation a);
std::string to_string(OptimizerKind o);
Activation activation_from_string(const std::string& name);
OptimizerKind optimizer_from_string(const std::string& name);

// The tuned dimensions of one classifier. validate() enforces the search-space domains.
struct HyperParams {
    Activation hidden_activation = Activation::Relu;
    Activation output_activation = Activation::Softmax;
    int dense1 = 64;
    int dense2 = 40;
    int dense3 = 20;
    double dropout_rate = 0.0;
    OptimizerKind optimizer = OptimizerKind::Adam;
    int batch_size = 32;
    int epochs = 10;
    double learning_rate = 0.01;

    void validate() const;
    json to_json() const;
    static HyperParams from_json(const json& j);
    bool operator==(const HyperParams&) const = default;
};

// Rows are samples throughout. Binary task: class probabilities are n x 2.
class Classifier {
  public:
    virtual ~Classifier() = default;
    virtual int input_dim() const = 0;
    virtual Matrix predict_probs(const Matrix& x) const = 0;
    IntVector predict_labels(const Matrix& x) const;  // argmax, exact ties resolve to 0
    double accuracy(const Matrix& x, const IntVector& y) const;
};

// Adds exact reverse-mode input gradients. class_scores are the pre-softmax outputs
// (the raw output layer when its activation is already softmax); gradient-based
// attacks that need unsaturated scores use them. The default implementations fall
// back to probabilities for models without a score notion (ensembles).
class DifferentiableClassifier : public Classifier {
  public:
    // d(per-sample cross-entropy)/dx, one row per sample
    virtual Matrix loss_input_gradient(const Matrix& x, const IntVector& y) const = 0;
    // d p_c / dx, one row per sample
    virtual Matrix prob_class_gradient(const Matrix& x, int c) const = 0;
    virtual Matrix class_scores(const Matrix& x) const { return predict_probs(x); }
    virtual Matrix score_class_gradient(const Matrix& x, int c) const {
        return prob_class_gradient(x, c);
    }
};

struct DenseLayer {
    Matrix w;  // in x out
    Vector b;
};

// Dense feed-forward engine: three hidden layers plus a 2-unit output layer.
// Widths are not restricted here so tests can build hand-sized toys; the tuned
// domain is enforced by HyperParams::validate at model-building time.
// Probabilities are softmax over the activated outputs; when the output activation
// is itself softmax its two outputs are used directly.
class Network : public DifferentiableClassifier {
  public:
    std::vector<DenseLayer> layers;
    Activation hidden_act = Activation::Relu;
    Activation output_act = Activation::Softmax;

    Network() = default;
    // Glorot-style uniform init (limit sqrt(6/(fan_in+fan_out))), zero biases,
    // deterministic in seed.
    Network(int input_dim, const std::vector<int>& hidden_widths, Activation hidden,
            Activation output, std::uint64_t seed);

    int input_dim() const override;
    Matrix predict_probs(const Matrix& x) const override;
    Matrix class_scores(const Matrix& x) const override;
    Matrix loss_input_gradient(const Matrix& x, const IntVector& y) const override;
    Matrix prob_class_gradient(const Matrix& x, int c) const override;
    Matrix score_class_gradient(const Matrix& x, int c) const override;

    // mean cross-entropy of the true class under predicted probabilities
    double mean_loss(const Matrix& x, const IntVector& y) const;
    bool finite_weights() const;
};

struct TrainOptions {
    OptimizerKind optimizer = OptimizerKind::Adam;
    double learning_rate = 0.01;
    int batch_size = 32;
    int epochs = 10;
    double dropout_rate = 0.0;  // inverted dropout after each hidden layer, training only
};

// Seeded mini-batch training; throws TrainingDivergence on a non-finite batch loss.
void train(Network& net, const Matrix& x, const IntVector& y, const TrainOptions& opt,
           std::uint64_t seed);

struct TrainedModel {
    HyperParams params;
    Network net;
    std::uint64_t seed = 0;  // weight-init seed
    double val_accuracy = 0.0;

    json to_json() const;
    static TrainedModel from_json(const json& j);
    void save(const std::string& path) const;
    static TrainedModel load(const std::string& path);
};

// Untrained model with seeded initial weights; layer widths come from params.
TrainedModel build_model(const HyperParams& params, int input_dim, std::uint64_t seed);
// Trains in place using the model's own hyperparameters.
void train_model(TrainedModel& model, const Matrix& x, const IntVector& y, std::uint64_t seed);

struct Prediction {
    Vector class_probs;  // 2 entries, sums to 1
    int label;
};
std::vector<Prediction> predict(const Classifier& model, const Matrix& x);

}  // namespace advens
