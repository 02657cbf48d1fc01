#include "advens/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace advens {

namespace {

constexpr double kWeightFloor = 1e-6;

int argmax_row(double p0, double p1) { return p1 > p0 ? 1 : 0; }

double accuracy_of_probs(const Matrix& probs, const IntVector& y) {
    std::size_t hits = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (argmax_row(probs(i, 0), probs(i, 1)) == y[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(y.size());
}

}  // namespace

void SelectionCriteria::validate() const {
    if (perf_epsilon < 0.0) throw ConfigError("perf_epsilon cannot be negative");
    if (distance_t < 0.0 || distance_t > 1.0) throw ConfigError("distance_t must be in [0, 1]");
    if (k < 1) throw ConfigError("ensemble size k must be at least 1");
}

json SelectionCriteria::to_json() const {
    return json{{"perf_epsilon", perf_epsilon}, {"distance_t", distance_t}, {"k", k}};
}

SelectionCriteria SelectionCriteria::from_json(const json& j) {
    SelectionCriteria c;
    if (j.contains("perf_epsilon")) c.perf_epsilon = j.at("perf_epsilon").get<double>();
    if (j.contains("distance_t")) c.distance_t = j.at("distance_t").get<double>();
    if (j.contains("k")) c.k = j.at("k").get<int>();
    c.validate();
    return c;
}

std::vector<const Trial*> select_unexpected(const ModelPool& pool,
                                            const SelectionCriteria& criteria,
                                            SelectionDiagnostics* diag) {
    criteria.validate();
    const Trial& victim = pool.victim();

    struct Candidate {
        const Trial* trial;
        double distance;
    };
    std::vector<Candidate> eligible;
    SelectionDiagnostics d;
    for (const Trial& t : pool.trials) {
        if (&t == &victim) continue;
        ++d.pool_size;
        const bool in_band = victim.val_accuracy - t.val_accuracy <= criteria.perf_epsilon;
        const double dist = gower_distance(t.params, victim.params);
        const bool far_enough = dist >= criteria.distance_t;
        if (in_band) {
            ++d.in_band;
            d.max_in_band_distance = std::max(d.max_in_band_distance, dist);
        }
        if (far_enough) ++d.far_enough;
        if (in_band && far_enough) {
            ++d.eligible;
            eligible.push_back({&t, dist});
        }
    }
    if (diag) *diag = d;
    if (eligible.empty()) {
        if (d.in_band == 0)
            throw ExperimentError(
                "no pool model lies within " + double_to_string(criteria.perf_epsilon) +
                " of the victim's validation accuracy; the performance band is the binding "
                "constraint");
        throw ExperimentError(
            "no in-band pool model reaches gower distance " +
            double_to_string(criteria.distance_t) + " from the victim (best in-band distance " +
            double_to_string(d.max_in_band_distance) + "); the distance threshold is the binding "
            "constraint");
    }
    std::stable_sort(eligible.begin(), eligible.end(), [](const Candidate& a, const Candidate& b) {
        if (a.trial->val_accuracy != b.trial->val_accuracy)
            return a.trial->val_accuracy > b.trial->val_accuracy;
        if (a.distance != b.distance) return a.distance > b.distance;
        return a.trial->index < b.trial->index;
    });
    if (eligible.size() > static_cast<std::size_t>(criteria.k))
        eligible.resize(static_cast<std::size_t>(criteria.k));
    std::vector<const Trial*> out;
    out.reserve(eligible.size());
    for (const auto& c : eligible) out.push_back(c.trial);
    return out;
}

void WeightedEnsemble::validate() const {
    if (members.empty()) throw ConfigError("ensemble has no members");
    double sum = 0.0;
    for (const auto& m : members) {
        if (m.weight < 0.0 || m.weight > 1.0)
            throw ConfigError("ensemble weights must lie in [0, 1]");
        sum += m.weight;
    }
    if (sum < kWeightFloor) throw ExperimentError("ensemble weight sum is degenerate");
    const int dim = members.front().model.net.input_dim();
    for (const auto& m : members)
        if (m.model.net.input_dim() != dim)
            throw ShapeError("ensemble members disagree on input width");
}

std::vector<double> WeightedEnsemble::weights() const {
    std::vector<double> w;
    w.reserve(members.size());
    for (const auto& m : members) w.push_back(m.weight);
    return w;
}

void WeightedEnsemble::set_weights(const std::vector<double>& w) {
    if (w.size() != members.size()) throw ConfigError("weight count does not match members");
    for (std::size_t i = 0; i < w.size(); ++i) members[i].weight = w[i];
    validate();
}

int WeightedEnsemble::input_dim() const {
    if (members.empty()) throw ConfigError("ensemble has no members");
    return members.front().model.net.input_dim();
}

Matrix WeightedEnsemble::predict_probs(const Matrix& x) const {
    validate();
    Matrix sum = Matrix::Zero(x.rows(), 2);
    double total = 0.0;
    for (const auto& m : members) {
        if (m.weight == 0.0) continue;
        sum += m.weight * m.model.net.predict_probs(x);
        total += m.weight;
    }
    return sum / total;
}

Matrix WeightedEnsemble::prob_class_gradient(const Matrix& x, int c) const {
    validate();
    Matrix sum = Matrix::Zero(x.rows(), x.cols());
    double total = 0.0;
    for (const auto& m : members) {
        if (m.weight == 0.0) continue;
        sum += m.weight * m.model.net.prob_class_gradient(x, c);
        total += m.weight;
    }
    return sum / total;
}

Matrix WeightedEnsemble::loss_input_gradient(const Matrix& x, const IntVector& y) const {
    if (x.rows() != y.size()) throw ShapeError("feature/label row count mismatch");
    // d(-log p_y)/dx = -(d p_y/dx) / p_y with the ensemble's own probabilities
    const Matrix probs = predict_probs(x);
    const Matrix g0 = prob_class_gradient(x, 0);
    const Matrix g1 = prob_class_gradient(x, 1);
    Matrix g(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double p = std::max(probs(i, y[i]), 1e-300);
        g.row(i) = (y[i] == 1 ? g1.row(i) : g0.row(i)) / -p;
    }
    return g;
}

json WeightedEnsemble::to_json() const {
    json arr = json::array();
    for (const auto& m : members)
        arr.push_back(json{{"pool_index", m.pool_index},
                           {"weight", m.weight},
                           {"model", m.model.to_json()}});
    return json{{"format", "advens.ensemble/1"}, {"members", std::move(arr)}};
}

WeightedEnsemble WeightedEnsemble::from_json(const json& j) {
    if (j.at("format").get<std::string>() != "advens.ensemble/1")
        throw DataError("unsupported ensemble format");
    WeightedEnsemble e;
    for (const auto& m : j.at("members")) {
        Member member;
        member.pool_index = m.at("pool_index").get<int>();
        member.weight = m.at("weight").get<double>();
        member.model = TrainedModel::from_json(m.at("model"));
        e.members.push_back(std::move(member));
    }
    e.validate();
    return e;
}

void WeightedEnsemble::save(const std::string& path) const {
    write_text_file(path, to_json().dump(2) + "\n");
}

WeightedEnsemble WeightedEnsemble::load(const std::string& path) {
    return from_json(json::parse(read_text_file(path)));
}

WeightedEnsemble make_ensemble(const std::vector<const Trial*>& members) {
    if (members.empty()) throw ConfigError("ensemble needs at least one member");
    WeightedEnsemble e;
    for (const Trial* t : members) {
        WeightedEnsemble::Member m;
        m.model = t->model;
        m.pool_index = t->index;
        m.weight = 1.0 / static_cast<double>(members.size());
        e.members.push_back(std::move(m));
    }
    e.validate();
    return e;
}

std::vector<const Trial*> random_members(const ModelPool& pool, int k, std::uint64_t seed) {
    if (k < 1) throw ConfigError("ensemble size k must be at least 1");
    if (pool.trials.size() < static_cast<std::size_t>(k))
        throw ConfigError("pool is smaller than the requested ensemble size");
    std::vector<std::size_t> order(pool.trials.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<const Trial*> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out.push_back(&pool.trials[order[static_cast<std::size_t>(i)]]);
    return out;
}

void DEParams::validate() const {
    if (np < 4) throw ConfigError("differential evolution needs np >= 4");
    if (cf < 0.0 || cf > 1.0) throw ConfigError("crossover probability must be in [0, 1]");
    if (!(f > 0.0)) throw ConfigError("differential weight must be positive");
    if (lives < 1) throw ConfigError("lives must be at least 1");
}

json DEParams::to_json() const {
    return json{{"np", np}, {"cf", cf}, {"f", f}, {"lives", lives}};
}

DEParams DEParams::from_json(const json& j) {
    DEParams p;
    if (j.contains("np")) p.np = j.at("np").get<int>();
    if (j.contains("cf")) p.cf = j.at("cf").get<double>();
    if (j.contains("f")) p.f = j.at("f").get<double>();
    if (j.contains("lives")) p.lives = j.at("lives").get<int>();
    p.validate();
    return p;
}

std::vector<double> de_optimize_box(
    int dim, const std::function<double(const std::vector<double>&)>& fitness,
    const DEParams& params, std::uint64_t seed) {
    params.validate();
    if (dim < 1) throw ConfigError("weight vector needs at least one dimension");
    Rng rng(seed);
    const auto np = static_cast<std::size_t>(params.np);

    std::vector<std::vector<double>> pop(np, std::vector<double>(static_cast<std::size_t>(dim)));
    pop[0].assign(static_cast<std::size_t>(dim), 1.0 / static_cast<double>(dim));
    for (std::size_t i = 1; i < np; ++i)
        for (auto& v : pop[i]) v = rng.uniform();

    std::vector<double> fit(np);
    for (std::size_t i = 0; i < np; ++i) fit[i] = fitness(pop[i]);
    std::size_t best0 = 0;
    for (std::size_t i = 1; i < np; ++i)
        if (fit[i] > fit[best0]) best0 = i;
    std::vector<double> best = pop[best0];
    double best_fit = fit[best0];

    // Generations are synchronous: every mutation in a sweep draws from the
    // frozen previous frontier. Replacing members mid-sweep collapses the
    // population's diversity and stalls the search short of the optimum.
    int lives = params.lives;
    std::vector<std::vector<double>> next = pop;
    std::vector<double> next_fit = fit;
    std::vector<double> trial(static_cast<std::size_t>(dim));
    while (lives > 0) {
        for (std::size_t i = 0; i < np; ++i) {
            // three distinct members other than i
            std::size_t a, b, c;
            do {
                a = static_cast<std::size_t>(rng.uniform_int(0, params.np - 1));
            } while (a == i);
            do {
                b = static_cast<std::size_t>(rng.uniform_int(0, params.np - 1));
            } while (b == i || b == a);
            do {
                c = static_cast<std::size_t>(rng.uniform_int(0, params.np - 1));
            } while (c == i || c == a || c == b);
            for (std::size_t j = 0; j < static_cast<std::size_t>(dim); ++j) {
                trial[j] = rng.uniform() < params.cf
                               ? std::clamp(pop[a][j] + params.f * (pop[c][j] - pop[b][j]), 0.0, 1.0)
                               : pop[i][j];
            }
            const double trial_fit = fitness(trial);
            if (trial_fit > fit[i]) {
                next[i] = trial;
                next_fit[i] = trial_fit;
                if (trial_fit > best_fit) {
                    best = trial;
                    best_fit = trial_fit;
                    ++lives;  // a new global best buys one more generation
                }
            } else {
                next[i] = pop[i];
                next_fit[i] = fit[i];
            }
        }
        pop.swap(next);
        fit.swap(next_fit);
        --lives;
    }
    return best;
}

std::vector<double> optimize_weights_on_probs(const std::vector<Matrix>& member_probs,
                                              const IntVector& y, const DEParams& params,
                                              std::uint64_t seed) {
    if (member_probs.empty()) throw ConfigError("ensemble has no members");
    const auto n = y.size();
    for (const auto& p : member_probs)
        if (p.rows() != n || p.cols() != 2) throw ShapeError("member probability shape mismatch");

    const auto fitness = [&](const std::vector<double>& w) {
        double sum = 0.0;
        for (double v : w) sum += v;
        if (sum < kWeightFloor) return -std::numeric_limits<double>::infinity();
        Matrix probs = Matrix::Zero(n, 2);
        for (std::size_t m = 0; m < member_probs.size(); ++m)
            if (w[m] != 0.0) probs += w[m] * member_probs[m];
        return accuracy_of_probs(probs, y);
    };
    return de_optimize_box(static_cast<int>(member_probs.size()), fitness, params, seed);
}

void de_optimize(WeightedEnsemble& ensemble, const Matrix& x, const IntVector& y,
                 const DEParams& params, std::uint64_t seed) {
    ensemble.validate();
    if (x.rows() != y.size()) throw ShapeError("feature/label row count mismatch");
    std::vector<Matrix> member_probs;
    member_probs.reserve(ensemble.members.size());
    for (const auto& m : ensemble.members) member_probs.push_back(m.model.net.predict_probs(x));
    ensemble.set_weights(optimize_weights_on_probs(member_probs, y, params, seed));
}

WeightedEnsemble build_defense(const ModelPool& pool, const SelectionCriteria& criteria,
                               const DEParams& de, const Matrix& x, const IntVector& y,
                               std::uint64_t seed, SelectionDiagnostics* diag) {
    WeightedEnsemble e = make_ensemble(select_unexpected(pool, criteria, diag));
    de_optimize(e, x, y, de, seed);
    return e;
}

}  // namespace advens
