#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "advens/common.hpp"
#include "advens/nn.hpp"

using namespace advens;

namespace {

// central finite difference of a scalar functional of one input row
template <typename F>
Vector fd_row_gradient(F&& f, const Matrix& x, double h = 1e-4) {
    Vector grad(x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        Matrix plus = x, minus = x;
        plus(0, c) += h;
        minus(0, c) -= h;
        grad[c] = (f(plus) - f(minus)) / (2.0 * h);
    }
    return grad;
}

// relative error with a unit floor so near-zero gradients compare absolutely
double rel_err(const Vector& got, const Vector& want) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < got.size(); ++i) {
        double denom = std::max({1.0, std::abs(got[i]), std::abs(want[i])});
        worst = std::max(worst, std::abs(got[i] - want[i]) / denom);
    }
    return worst;
}

Network toy_network(Activation hidden, Activation output, std::uint64_t seed) {
    return Network(5, {12, 8, 6}, hidden, output, seed);
}

}  // namespace

TEST_CASE("input gradients match central differences across every activation") {
    const auto& acts = all_activations();
    Rng rng(2024);
    int pairs = 0;
    for (int trial = 0; pairs < 100; ++trial) {
        Activation hidden = acts[static_cast<std::size_t>(trial) % acts.size()];
        Activation output = acts[(static_cast<std::size_t>(trial) / acts.size()) % acts.size()];
        Network net = toy_network(hidden, output, seed_mix(99, static_cast<std::uint64_t>(trial)));
        Matrix x(1, 5);
        for (int c = 0; c < 5; ++c) x(0, c) = rng.normal() * 0.8;
        IntVector y(1);
        y[0] = static_cast<int>(rng.uniform_int(0, 1));

        Vector loss_grad = net.loss_input_gradient(x, y).row(0);
        Vector loss_fd = fd_row_gradient(
            [&](const Matrix& p) { return net.mean_loss(p, y); }, x);
        CHECK(rel_err(loss_grad, loss_fd) < 1e-4);

        for (int cls = 0; cls < 2; ++cls) {
            Vector prob_grad = net.prob_class_gradient(x, cls).row(0);
            Vector prob_fd = fd_row_gradient(
                [&](const Matrix& p) { return net.predict_probs(p)(0, cls); }, x);
            CHECK(rel_err(prob_grad, prob_fd) < 1e-4);

            Vector score_grad = net.score_class_gradient(x, cls).row(0);
            Vector score_fd = fd_row_gradient(
                [&](const Matrix& p) { return net.class_scores(p)(0, cls); }, x);
            CHECK(rel_err(score_grad, score_fd) < 1e-4);
        }
        ++pairs;
    }
    CHECK(pairs == 100);
}

TEST_CASE("linear-softmax network matches the affine closed form") {
    Network net = toy_network(Activation::Linear, Activation::Softmax, 4242);
    // affine map: column i of A is f(e_i) - f(0)
    Matrix basis = Matrix::Zero(6, 5);
    for (int i = 0; i < 5; ++i) basis(i + 1, i) = 1.0;
    Matrix scores = net.class_scores(basis);
    Matrix a(2, 5);
    for (int i = 0; i < 5; ++i) a.col(i) = (scores.row(i + 1) - scores.row(0)).transpose();

    Matrix x(1, 5);
    x << 0.3, -0.2, 0.9, 0.1, -0.5;
    Matrix probs = net.predict_probs(x);
    double p1 = probs(0, 1);
    Vector expect = p1 * (1.0 - p1) * (a.row(1) - a.row(0)).transpose();
    Vector got = net.prob_class_gradient(x, 1).row(0);
    CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-10);

    // score gradient of the affine map is the map itself
    Vector score_grad = net.score_class_gradient(x, 0).row(0);
    CHECK((score_grad - a.row(0).transpose()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("probabilities are a softmax: positive rows summing to one") {
    Rng rng(5);
    for (Activation output : all_activations()) {
        Network net = toy_network(Activation::Tanh, output, 17);
        Matrix x(3, 5);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 5; ++c) x(r, c) = rng.normal();
        Matrix probs = net.predict_probs(x);
        for (int r = 0; r < 3; ++r) {
            CHECK(probs.row(r).sum() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(probs.row(r).minCoeff() >= 0.0);
        }
    }
}

TEST_CASE("training reduces loss on a separable blob") {
    Rng rng(31);
    const int n = 200;
    Matrix x(n, 4);
    IntVector y(n);
    for (int r = 0; r < n; ++r) {
        y[r] = r % 2;
        double mu = y[r] == 1 ? 1.2 : -1.2;
        for (int c = 0; c < 4; ++c) x(r, c) = rng.normal(mu, 1.0);
    }
    HyperParams params;
    params.dense1 = 32;
    params.dense2 = 30;
    params.dense3 = 12;
    params.epochs = 8;
    TrainedModel model = build_model(params, 4, 7);
    double before = model.net.mean_loss(x, y);
    train_model(model, x, y, 8);
    double after = model.net.mean_loss(x, y);
    CHECK(after < before);
    CHECK(model.net.accuracy(x, y) > 0.9);
    CHECK(model.net.finite_weights());
}

TEST_CASE("every optimizer makes progress on the blob") {
    Rng rng(77);
    const int n = 120;
    Matrix x(n, 3);
    IntVector y(n);
    for (int r = 0; r < n; ++r) {
        y[r] = r % 2;
        for (int c = 0; c < 3; ++c) x(r, c) = rng.normal(y[r] == 1 ? 1.5 : -1.5, 1.0);
    }
    for (OptimizerKind opt : all_optimizers()) {
        HyperParams params;
        params.dense1 = 30;
        params.dense2 = 30;
        params.dense3 = 10;
        params.optimizer = opt;
        params.epochs = 6;
        params.learning_rate = opt == OptimizerKind::SGD ? 0.1 : 0.01;
        TrainedModel model = build_model(params, 3, 3);
        double before = model.net.mean_loss(x, y);
        train_model(model, x, y, 4);
        CHECK_MESSAGE(model.net.mean_loss(x, y) < before, to_string(opt));
    }
}

TEST_CASE("non-finite batch loss raises a divergence error carrying the epoch") {
    Matrix x(4, 2);
    x << 1e308, 1e308, -1e308, 1e308, 1e308, -1e308, -1e308, -1e308;
    IntVector y(4);
    y << 0, 1, 0, 1;
    HyperParams params;
    params.dense1 = 30;
    params.dense2 = 30;
    params.dense3 = 10;
    params.hidden_activation = Activation::Exponential;
    TrainedModel model = build_model(params, 2, 5);
    CHECK_THROWS_AS(train_model(model, x, y, 5), TrainingDivergence);
    try {
        train_model(model, x, y, 5);
    } catch (const TrainingDivergence& e) {
        CHECK(e.epoch >= 0);
    }
}

TEST_CASE("exact probability ties resolve to class zero") {
    struct Tied : Classifier {
        int input_dim() const override { return 1; }
        Matrix predict_probs(const Matrix& x) const override {
            Matrix p(x.rows(), 2);
            p.setConstant(0.5);
            return p;
        }
    } tied;
    Matrix x(3, 1);
    x << 1, 2, 3;
    IntVector labels = tied.predict_labels(x);
    for (int r = 0; r < 3; ++r) CHECK(labels[r] == 0);
}

TEST_CASE("hyperparameter validation enforces the tuning domains") {
    HyperParams ok;
    CHECK_NOTHROW(ok.validate());
    HyperParams bad = ok;
    bad.dense1 = 29;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ok;
    bad.dense1 = 151;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ok;
    bad.dropout_rate = 0.51;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ok;
    bad.batch_size = 100;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ok;
    bad.learning_rate = 0.05;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ok;
    bad.epochs = 4;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("models round-trip through json with identical predictions") {
    HyperParams params;
    params.dense1 = 40;
    params.dense2 = 31;
    params.dense3 = 11;
    params.hidden_activation = Activation::Selu;
    TrainedModel model = build_model(params, 6, 21);
    Rng rng(4);
    Matrix x(20, 6);
    IntVector y(20);
    for (int r = 0; r < 20; ++r) {
        y[r] = r % 2;
        for (int c = 0; c < 6; ++c) x(r, c) = rng.normal();
    }
    train_model(model, x, y, 22);
    model.val_accuracy = model.net.accuracy(x, y);

    TrainedModel back = TrainedModel::from_json(model.to_json());
    CHECK(back.params == model.params);
    CHECK(back.val_accuracy == model.val_accuracy);
    Matrix p0 = model.net.predict_probs(x), p1 = back.net.predict_probs(x);
    CHECK((p0 - p1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("activation and optimizer names round-trip") {
    for (Activation a : all_activations()) CHECK(activation_from_string(to_string(a)) == a);
    for (OptimizerKind o : all_optimizers()) CHECK(optimizer_from_string(to_string(o)) == o);
    CHECK_THROWS_AS(activation_from_string("swish"), ConfigError);
    CHECK_THROWS_AS(optimizer_from_string("lion"), ConfigError);
}
