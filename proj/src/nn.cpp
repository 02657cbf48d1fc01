#include "advens/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

namespace advens {

namespace {

constexpr double kSeluAlpha = 1.6732632423543772848170429916717;
constexpr double kSeluScale = 1.0507009873554804934193349852946;

double act_scalar(double z, Activation a) {
    switch (a) {
        case Activation::Elu: return z > 0.0 ? z : std::expm1(z);
        case Activation::Relu: return z > 0.0 ? z : 0.0;
        case Activation::Selu:
            return z > 0.0 ? kSeluScale * z : kSeluScale * kSeluAlpha * std::expm1(z);
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
        case Activation::Tanh: return std::tanh(z);
        case Activation::HardSigmoid: return std::clamp(0.2 * z + 0.5, 0.0, 1.0);
        case Activation::Softplus:
            return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        case Activation::Softsign: return z / (1.0 + std::abs(z));
        case Activation::Linear: return z;
        case Activation::Exponential: return std::exp(z);
        case Activation::Softmax: break;
    }
    throw ConfigError("softmax is not an elementwise activation");
}

// derivative at z, reusing y = act(z) where it is cheaper
double act_deriv(double z, double y, Activation a) {
    switch (a) {
        case Activation::Elu: return z > 0.0 ? 1.0 : y + 1.0;
        case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
        case Activation::Selu: return z > 0.0 ? kSeluScale : y + kSeluScale * kSeluAlpha;
        case Activation::Sigmoid: return y * (1.0 - y);
        case Activation::Tanh: return 1.0 - y * y;
        case Activation::HardSigmoid: return (z > -2.5 && z < 2.5) ? 0.2 : 0.0;
        case Activation::Softplus: return 1.0 / (1.0 + std::exp(-z));
        case Activation::Softsign: {
            const double d = 1.0 + std::abs(z);
            return 1.0 / (d * d);
        }
        case Activation::Linear: return 1.0;
        case Activation::Exponential: return y;
        case Activation::Softmax: break;
    }
    throw ConfigError("softmax is not an elementwise activation");
}

Matrix softmax_rows(const Matrix& z) {
    Matrix out(z.rows(), z.cols());
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        const double m = z.row(i).maxCoeff();
        Eigen::RowVectorXd e = (z.row(i).array() - m).exp();
        out.row(i) = e / e.sum();
    }
    return out;
}

Matrix activate(const Matrix& z, Activation a) {
    if (a == Activation::Softmax) return softmax_rows(z);
    return z.unaryExpr([a](double v) { return act_scalar(v, a); });
}

// dL/dz given y = act(z) and upstream g = dL/dy
Matrix act_vjp(const Matrix& z, const Matrix& y, const Matrix& g, Activation a) {
    if (a == Activation::Softmax) {
        Matrix out(y.rows(), y.cols());
        for (Eigen::Index i = 0; i < y.rows(); ++i) {
            const double dot = g.row(i).dot(y.row(i));
            out.row(i) = (y.row(i).array() * (g.row(i).array() - dot)).matrix();
        }
        return out;
    }
    Matrix out(z.rows(), z.cols());
    for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index j = 0; j < z.cols(); ++j)
            out(i, j) = g(i, j) * act_deriv(z(i, j), y(i, j), a);
    return out;
}

struct Cache {
    std::vector<Matrix> inputs;  // actual input of each layer (post-dropout)
    std::vector<Matrix> z;       // pre-activations
    std::vector<Matrix> act;     // activations before dropout
    std::vector<Matrix> masks;   // dropout masks, empty outside training
    Matrix scores;               // pre-softmax class scores
    Matrix probs;
};

void forward(const Network& net, const Matrix& x, Cache& c, double dropout_rate, Rng* rng) {
    if (net.layers.empty()) throw ConfigError("network has no layers");
    if (x.cols() != net.layers.front().w.rows())
        throw ShapeError("input has " + std::to_string(x.cols()) + " columns, model expects " +
                         std::to_string(net.layers.front().w.rows()));
    const std::size_t nl = net.layers.size();
    c.inputs.resize(nl);
    c.z.resize(nl);
    c.act.resize(nl);
    c.masks.assign(nl, Matrix());
    Matrix cur = x;
    for (std::size_t i = 0; i < nl; ++i) {
        const bool output = (i + 1 == nl);
        c.inputs[i] = cur;
        c.z[i] = (cur * net.layers[i].w).rowwise() + net.layers[i].b.transpose();
        c.act[i] = activate(c.z[i], output ? net.output_act : net.hidden_act);
        cur = c.act[i];
        if (!output && dropout_rate > 0.0 && rng != nullptr) {
            const double keep = 1.0 - dropout_rate;
            Matrix m(cur.rows(), cur.cols());
            for (Eigen::Index r = 0; r < m.rows(); ++r)
                for (Eigen::Index col = 0; col < m.cols(); ++col)
                    m(r, col) = rng->uniform() < keep ? 1.0 / keep : 0.0;
            c.masks[i] = m;
            cur = cur.cwiseProduct(m);
        }
    }
    if (net.output_act == Activation::Softmax) {
        c.scores = c.z.back();
        c.probs = c.act.back();
    } else {
        c.scores = c.act.back();
        c.probs = softmax_rows(c.scores);
    }
}

struct Grads {
    std::vector<Matrix> w;
    std::vector<Vector> b;
};

// Reverse pass from a seed at the class-score level. Fills weight grads and/or the
// input gradient, whichever is requested.
void backward_from_scores(const Network& net, const Cache& c, const Matrix& seed_scores,
                          Grads* grads, Matrix* gx) {
    const std::size_t nl = net.layers.size();
    Matrix gz;
    if (net.output_act == Activation::Softmax) {
        gz = seed_scores;  // scores are the raw output-layer values
    } else {
        gz = act_vjp(c.z[nl - 1], c.act[nl - 1], seed_scores, net.output_act);
    }
    for (std::size_t li = nl; li-- > 0;) {
        if (grads != nullptr) {
            grads->w[li] = c.inputs[li].transpose() * gz;
            grads->b[li] = gz.colwise().sum().transpose();
        }
        Matrix ginput = gz * net.layers[li].w.transpose();
        if (li == 0) {
            if (gx != nullptr) *gx = std::move(ginput);
            return;
        }
        if (c.masks[li - 1].size() != 0) ginput = ginput.cwiseProduct(c.masks[li - 1]);
        gz = act_vjp(c.z[li - 1], c.act[li - 1], ginput, net.hidden_act);
    }
}

// seed at the probability level -> seed at the score level (probs = softmax(scores))
Matrix prob_seed_to_scores(const Matrix& probs, const Matrix& seed_probs) {
    Matrix out(probs.rows(), probs.cols());
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        const double dot = seed_probs.row(i).dot(probs.row(i));
        out.row(i) = (probs.row(i).array() * (seed_probs.row(i).array() - dot)).matrix();
    }
    return out;
}

void check_labels(const IntVector& y, Eigen::Index n) {
    if (y.size() != n) throw ShapeError("label count does not match sample count");
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y[i] != 0 && y[i] != 1) throw DataError("labels must be 0 or 1");
}

class OptimizerState {
  public:
    OptimizerState(const Network& net, OptimizerKind kind, double lr) : kind_(kind), lr_(lr) {
        for (const auto& l : net.layers) {
            s1w_.push_back(Matrix::Zero(l.w.rows(), l.w.cols()));
            s2w_.push_back(Matrix::Zero(l.w.rows(), l.w.cols()));
            s1b_.push_back(Vector::Zero(l.b.size()));
            s2b_.push_back(Vector::Zero(l.b.size()));
        }
    }

    void step(Network& net, const Grads& g) {
        ++t_;
        for (std::size_t i = 0; i < net.layers.size(); ++i) {
            update(net.layers[i].w, s1w_[i], s2w_[i], g.w[i]);
            update(net.layers[i].b, s1b_[i], s2b_[i], g.b[i]);
        }
    }

  private:
    template <typename M>
    void update(M& w, M& s1, M& s2, const M& g) {
        constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        constexpr double rms_rho = 0.9, ada_rho = 0.95, ada_eps = 1e-6;
        const double t = static_cast<double>(t_);
        switch (kind_) {
            case OptimizerKind::SGD:
                w.array() -= lr_ * g.array();
                break;
            case OptimizerKind::Adam: {
                s1.array() = b1 * s1.array() + (1.0 - b1) * g.array();
                s2.array() = b2 * s2.array() + (1.0 - b2) * g.array().square();
                const double c1 = 1.0 - std::pow(b1, t), c2 = 1.0 - std::pow(b2, t);
                w.array() -= lr_ * (s1.array() / c1) / ((s2.array() / c2).sqrt() + eps);
                break;
            }
            case OptimizerKind::Adamax: {
                s1.array() = b1 * s1.array() + (1.0 - b1) * g.array();
                s2.array() = (b2 * s2.array()).max(g.array().abs());
                w.array() -= (lr_ / (1.0 - std::pow(b1, t))) * s1.array() / (s2.array() + eps);
                break;
            }
            case OptimizerKind::NAdam: {
                s1.array() = b1 * s1.array() + (1.0 - b1) * g.array();
                s2.array() = b2 * s2.array() + (1.0 - b2) * g.array().square();
                const double c1next = 1.0 - std::pow(b1, t + 1.0);
                const double c1 = 1.0 - std::pow(b1, t), c2 = 1.0 - std::pow(b2, t);
                w.array() -= lr_ *
                             (b1 * s1.array() / c1next + (1.0 - b1) * g.array() / c1) /
                             ((s2.array() / c2).sqrt() + eps);
                break;
            }
            case OptimizerKind::RMSprop:
                s2.array() = rms_rho * s2.array() + (1.0 - rms_rho) * g.array().square();
                w.array() -= lr_ * g.array() / (s2.array().sqrt() + eps);
                break;
            case OptimizerKind::Adagrad:
                s2.array() += g.array().square();
                w.array() -= lr_ * g.array() / (s2.array().sqrt() + eps);
                break;
            case OptimizerKind::Adadelta: {
                s1.array() = ada_rho * s1.array() + (1.0 - ada_rho) * g.array().square();
                const auto delta =
                    -((s2.array() + ada_eps).sqrt() / (s1.array() + ada_eps).sqrt()) * g.array();
                s2.array() = ada_rho * s2.array() + (1.0 - ada_rho) * delta.square();
                w.array() += lr_ * delta;
                break;
            }
        }
    }

    OptimizerKind kind_;
    double lr_;
    long t_ = 0;
    std::vector<Matrix> s1w_, s2w_;
    std::vector<Vector> s1b_, s2b_;
};

std::string b64_matrix(const Matrix& m) {
    std::vector<double> row_major(static_cast<std::size_t>(m.size()));
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) row_major[k++] = m(r, c);
    return base64_encode(reinterpret_cast<const unsigned char*>(row_major.data()),
                         row_major.size() * sizeof(double));
}

Matrix matrix_from_b64(const std::string& text, Eigen::Index rows, Eigen::Index cols) {
    const auto bytes = base64_decode(text);
    if (bytes.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * sizeof(double))
        throw DataError("weight blob size does not match declared shape");
    Matrix m(rows, cols);
    const double* p = reinterpret_cast<const double*>(bytes.data());
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = p[k++];
    return m;
}

}  // namespace

const std::vector<Activation>& all_activations() {
    static const std::vector<Activation> v = {
        Activation::Elu,      Activation::Relu,        Activation::Selu,
        Activation::Sigmoid,  Activation::Softmax,     Activation::Tanh,
        Activation::HardSigmoid, Activation::Softplus, Activation::Softsign,
        Activation::Linear,   Activation::Exponential,
    };
    return v;
}

const std::vector<OptimizerKind>& all_optimizers() {
    static const std::vector<OptimizerKind> v = {
        OptimizerKind::Adadelta, OptimizerKind::Adagrad, OptimizerKind::Adam,
        OptimizerKind::Adamax,   OptimizerKind::NAdam,   OptimizerKind::RMSprop,
        OptimizerKind::SGD,
    };
    return v;
}

std::string to_string(Activation a) {
    switch (a) {
        case Activation::Elu: return "elu";
        case Activation::Relu: return "relu";
        case Activation::Selu: return "selu";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Softmax: return "softmax";
        case Activation::Tanh: return "tanh";
        case Activation::HardSigmoid: return "hard_sigmoid";
        case Activation::Softplus: return "softplus";
        case Activation::Softsign: return "softsign";
        case Activation::Linear: return "linear";
        case Activation::Exponential: return "exponential";
    }
    throw ConfigError("unknown activation");
}

std::string to_string(OptimizerKind o) {
    switch (o) {
        case OptimizerKind::Adadelta: return "Adadelta";
        case OptimizerKind::Adagrad: return "Adagrad";
        case OptimizerKind::Adam: return "Adam";
        case OptimizerKind::Adamax: return "Adamax";
        case OptimizerKind::NAdam: return "NAdam";
        case OptimizerKind::RMSprop: return "RMSprop";
        case OptimizerKind::SGD: return "SGD";
    }
    throw ConfigError("unknown optimizer");
}

Activation activation_from_string(const std::string& name) {
    for (Activation a : all_activations())
        if (to_string(a) == name) return a;
    throw ConfigError("unknown activation: " + name);
}

OptimizerKind optimizer_from_string(const std::string& name) {
    for (OptimizerKind o : all_optimizers())
        if (to_string(o) == name) return o;
    throw ConfigError("unknown optimizer: " + name);
}

void HyperParams::validate() const {
    if (dense1 < 30 || dense1 > 150) throw ConfigError("dense1 must be in [30, 150]");
    if (dense2 < 30 || dense2 > 50) throw ConfigError("dense2 must be in [30, 50]");
    if (dense3 < 10 || dense3 > 32) throw ConfigError("dense3 must be in [10, 32]");
    if (!(dropout_rate >= 0.0 && dropout_rate <= 0.5))
        throw ConfigError("dropout_rate must be in [0, 0.5]");
    if (batch_size != 16 && batch_size != 32 && batch_size != 64 && batch_size != 128)
        throw ConfigError("batch_size must be one of 16, 32, 64, 128");
    if (epochs < 5 || epochs > 20) throw ConfigError("epochs must be in [5, 20]");
    if (learning_rate != 0.001 && learning_rate != 0.01 && learning_rate != 0.1)
        throw ConfigError("learning_rate must be one of 0.001, 0.01, 0.1");
}

json HyperParams::to_json() const {
    return json{{"hidden_activation", to_string(hidden_activation)},
                {"output_activation", to_string(output_activation)},
                {"dense1", dense1},
                {"dense2", dense2},
                {"dense3", dense3},
                {"dropout_rate", dropout_rate},
                {"optimizer", to_string(optimizer)},
                {"batch_size", batch_size},
                {"epochs", epochs},
                {"learning_rate", learning_rate}};
}

HyperParams HyperParams::from_json(const json& j) {
    HyperParams p;
    p.hidden_activation = activation_from_string(j.at("hidden_activation").get<std::string>());
    p.output_activation = activation_from_string(j.at("output_activation").get<std::string>());
    p.dense1 = j.at("dense1").get<int>();
    p.dense2 = j.at("dense2").get<int>();
    p.dense3 = j.at("dense3").get<int>();
    p.dropout_rate = j.at("dropout_rate").get<double>();
    p.optimizer = optimizer_from_string(j.at("optimizer").get<std::string>());
    p.batch_size = j.at("batch_size").get<int>();
    p.epochs = j.at("epochs").get<int>();
    p.learning_rate = j.at("learning_rate").get<double>();
    return p;
}

IntVector Classifier::predict_labels(const Matrix& x) const {
    const Matrix p = predict_probs(x);
    IntVector labels(p.rows());
    for (Eigen::Index i = 0; i < p.rows(); ++i) labels[i] = p(i, 1) > p(i, 0) ? 1 : 0;
    return labels;
}

double Classifier::accuracy(const Matrix& x, const IntVector& y) const {
    check_labels(y, x.rows());
    if (x.rows() == 0) throw DataError("accuracy of empty set");
    const IntVector labels = predict_labels(x);
    Eigen::Index hits = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) hits += labels[i] == y[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(y.size());
}

Network::Network(int input_dim, const std::vector<int>& hidden_widths, Activation hidden,
                 Activation output, std::uint64_t seed)
    : hidden_act(hidden), output_act(output) {
    if (input_dim < 1) throw ConfigError("input_dim must be positive");
    Rng rng(seed);
    int fan_in = input_dim;
    std::vector<int> widths = hidden_widths;
    widths.push_back(2);
    for (int width : widths) {
        if (width < 1) throw ConfigError("layer width must be positive");
        DenseLayer layer;
        layer.w.resize(fan_in, width);
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + width));
        for (Eigen::Index r = 0; r < layer.w.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.w.cols(); ++c)
                layer.w(r, c) = rng.uniform(-limit, limit);
        layer.b = Vector::Zero(width);
        layers.push_back(std::move(layer));
        fan_in = width;
    }
}

int Network::input_dim() const {
    if (layers.empty()) throw ConfigError("network has no layers");
    return static_cast<int>(layers.front().w.rows());
}

Matrix Network::predict_probs(const Matrix& x) const {
    Cache c;
    forward(*this, x, c, 0.0, nullptr);
    return c.probs;
}

Matrix Network::class_scores(const Matrix& x) const {
    Cache c;
    forward(*this, x, c, 0.0, nullptr);
    return c.scores;
}

Matrix Network::loss_input_gradient(const Matrix& x, const IntVector& y) const {
    check_labels(y, x.rows());
    Cache c;
    forward(*this, x, c, 0.0, nullptr);
    // d(-log p_y)/d(scores) = probs - onehot(y), exact for softmax probabilities
    Matrix seed = c.probs;
    for (Eigen::Index i = 0; i < seed.rows(); ++i) seed(i, y[i]) -= 1.0;
    Matrix gx;
    backward_from_scores(*this, c, seed, nullptr, &gx);
    return gx;
}

Matrix Network::prob_class_gradient(const Matrix& x, int c) const {
    if (c != 0 && c != 1) throw ConfigError("class index must be 0 or 1");
    Cache cache;
    forward(*this, x, cache, 0.0, nullptr);
    Matrix seed_probs = Matrix::Zero(x.rows(), 2);
    seed_probs.col(c).setOnes();
    const Matrix seed = prob_seed_to_scores(cache.probs, seed_probs);
    Matrix gx;
    backward_from_scores(*this, cache, seed, nullptr, &gx);
    return gx;
}

Matrix Network::score_class_gradient(const Matrix& x, int c) const {
    if (c != 0 && c != 1) throw ConfigError("class index must be 0 or 1");
    Cache cache;
    forward(*this, x, cache, 0.0, nullptr);
    Matrix seed = Matrix::Zero(x.rows(), 2);
    seed.col(c).setOnes();
    Matrix gx;
    backward_from_scores(*this, cache, seed, nullptr, &gx);
    return gx;
}

double Network::mean_loss(const Matrix& x, const IntVector& y) const {
    check_labels(y, x.rows());
    if (x.rows() == 0) throw DataError("loss of empty set");
    Cache c;
    forward(*this, x, c, 0.0, nullptr);
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double m = c.scores.row(i).maxCoeff();
        const double lse = m + std::log((c.scores.row(i).array() - m).exp().sum());
        total += lse - c.scores(i, y[i]);
    }
    return total / static_cast<double>(x.rows());
}

bool Network::finite_weights() const {
    for (const auto& l : layers)
        if (!l.w.allFinite() || !l.b.allFinite()) return false;
    return true;
}

void train(Network& net, const Matrix& x, const IntVector& y, const TrainOptions& opt,
           std::uint64_t seed) {
    check_labels(y, x.rows());
    if (x.rows() == 0) throw DataError("cannot train on an empty set");
    if (opt.batch_size < 1) throw ConfigError("batch_size must be positive");
    if (opt.epochs < 0) throw ConfigError("epochs must be non-negative");
    if (!(opt.dropout_rate >= 0.0 && opt.dropout_rate < 1.0))
        throw ConfigError("dropout_rate must be in [0, 1)");

    OptimizerState state(net, opt.optimizer, opt.learning_rate);
    Rng rng(seed);
    const Eigen::Index n = x.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    Grads grads;
    grads.w.resize(net.layers.size());
    grads.b.resize(net.layers.size());

    for (int epoch = 0; epoch < opt.epochs; ++epoch) {
        rng.shuffle(order);
        for (Eigen::Index start = 0; start < n; start += opt.batch_size) {
            const Eigen::Index bs = std::min<Eigen::Index>(opt.batch_size, n - start);
            Matrix xb(bs, x.cols());
            IntVector yb(bs);
            for (Eigen::Index i = 0; i < bs; ++i) {
                xb.row(i) = x.row(order[static_cast<std::size_t>(start + i)]);
                yb[i] = y[order[static_cast<std::size_t>(start + i)]];
            }
            Cache cache;
            forward(net, xb, cache, opt.dropout_rate, &rng);
            double loss = 0.0;
            for (Eigen::Index i = 0; i < bs; ++i) {
                const double m = cache.scores.row(i).maxCoeff();
                const double lse = m + std::log((cache.scores.row(i).array() - m).exp().sum());
                loss += lse - cache.scores(i, yb[i]);
            }
            loss /= static_cast<double>(bs);
            if (!std::isfinite(loss)) throw TrainingDivergence(epoch);
            Matrix seed_scores = cache.probs;
            for (Eigen::Index i = 0; i < bs; ++i) seed_scores(i, yb[i]) -= 1.0;
            seed_scores /= static_cast<double>(bs);
            backward_from_scores(net, cache, seed_scores, &grads, nullptr);
            state.step(net, grads);
        }
    }
    if (!net.finite_weights()) throw TrainingDivergence(opt.epochs > 0 ? opt.epochs - 1 : 0);
}

json TrainedModel::to_json() const {
    json layers_json = json::array();
    for (const auto& l : net.layers) {
        layers_json.push_back(json{{"rows", l.w.rows()},
                                   {"cols", l.w.cols()},
                                   {"w", b64_matrix(l.w)},
                                   {"b", b64_matrix(l.b)}});
    }
    return json{{"format", "advens.model/1"},
                {"params", params.to_json()},
                {"input_dim", net.input_dim()},
                {"seed", seed},
                {"val_accuracy", val_accuracy},
                {"layers", layers_json}};
}

TrainedModel TrainedModel::from_json(const json& j) {
    TrainedModel m;
    m.params = HyperParams::from_json(j.at("params"));
    m.seed = j.at("seed").get<std::uint64_t>();
    m.val_accuracy = j.at("val_accuracy").get<double>();
    m.net.hidden_act = m.params.hidden_activation;
    m.net.output_act = m.params.output_activation;
    for (const auto& lj : j.at("layers")) {
        DenseLayer l;
        const auto rows = lj.at("rows").get<Eigen::Index>();
        const auto cols = lj.at("cols").get<Eigen::Index>();
        l.w = matrix_from_b64(lj.at("w").get<std::string>(), rows, cols);
        const Matrix b = matrix_from_b64(lj.at("b").get<std::string>(), cols, 1);
        l.b = b.col(0);
        m.net.layers.push_back(std::move(l));
    }
    if (m.net.layers.empty()) throw DataError("model has no layers");
    const int declared = j.at("input_dim").get<int>();
    if (declared != m.net.input_dim()) throw DataError("model input_dim mismatch");
    return m;
}

void TrainedModel::save(const std::string& path) const { write_text_file(path, to_json().dump(2) + "\n"); }

TrainedModel TrainedModel::load(const std::string& path) {
    return from_json(json::parse(read_text_file(path)));
}

TrainedModel build_model(const HyperParams& params, int input_dim, std::uint64_t seed) {
    params.validate();
    TrainedModel m;
    m.params = params;
    m.seed = seed;
    m.net = Network(input_dim, {params.dense1, params.dense2, params.dense3},
                    params.hidden_activation, params.output_activation, seed);
    return m;
}

void train_model(TrainedModel& model, const Matrix& x, const IntVector& y, std::uint64_t seed) {
    TrainOptions opt;
    opt.optimizer = model.params.optimizer;
    opt.learning_rate = model.params.learning_rate;
    opt.batch_size = model.params.batch_size;
    opt.epochs = model.params.epochs;
    opt.dropout_rate = model.params.dropout_rate;
    train(model.net, x, y, opt, seed);
}

std::vector<Prediction> predict(const Classifier& model, const Matrix& x) {
    const Matrix p = model.predict_probs(x);
    std::vector<Prediction> out;
    out.reserve(static_cast<std::size_t>(p.rows()));
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        Prediction pr;
        pr.class_probs = p.row(i).transpose();
        pr.label = p(i, 1) > p(i, 0) ? 1 : 0;
        out.push_back(std::move(pr));
    }
    return out;
}

}  // namespace advens
