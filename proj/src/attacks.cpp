#include "advens/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

namespace advens {

namespace {

void require_kind(const AttackSpec& spec, std::initializer_list<AttackKind> allowed,
                  const char* op) {
    for (AttackKind k : allowed)
        if (spec.kind == k) return;
    throw ConfigError(std::string(op) + " cannot run a '" + to_string(spec.kind) + "' spec");
}

void require_rows(const Matrix& x, const IntVector& y) {
    if (x.rows() != y.size()) throw ShapeError("feature/label row count mismatch");
}

void check_labels(const IntVector& y) {
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y[i] != 0 && y[i] != 1) throw DataError("labels must be 0 or 1");
}

AdversarialSet make_set(const AttackSpec& spec, const Matrix& x, Matrix x_adv, const IntVector& y,
                        std::vector<unsigned> flags) {
    AdversarialSet s;
    s.spec = spec;
    s.y = y;
    s.flags = std::move(flags);
    if (s.flags.empty()) s.flags.assign(static_cast<std::size_t>(x.rows()), 0u);
    const auto n = x.rows();
    s.linf = Vector::Zero(n);
    s.l2 = Vector::Zero(n);
    s.l0 = IntVector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double linf = 0.0, l2sq = 0.0;
        int l0 = 0;
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            const double d = x_adv(i, c) - x(i, c);
            linf = std::max(linf, std::abs(d));
            l2sq += d * d;
            if (d != 0.0) ++l0;
        }
        s.linf[i] = linf;
        s.l2[i] = std::sqrt(l2sq);
        s.l0[i] = l0;
    }
    s.x_adv = std::move(x_adv);
    return s;
}

int label_of_row(const Classifier& model, const Matrix& row) {
    return model.predict_labels(row)[0];
}

}  // namespace

const std::vector<AttackKind>& all_attacks() {
    static const std::vector<AttackKind> kinds{AttackKind::Fgsm,     AttackKind::BimA,
                                               AttackKind::BimB,     AttackKind::Jsma,
                                               AttackKind::DeepFool, AttackKind::Cw};
    return kinds;
}

std::string to_string(AttackKind kind) {
    switch (kind) {
        case AttackKind::Fgsm: return "fgsm";
        case AttackKind::BimA: return "bim_a";
        case AttackKind::BimB: return "bim_b";
        case AttackKind::Jsma: return "jsma";
        case AttackKind::DeepFool: return "deepfool";
        case AttackKind::Cw: return "cw";
    }
    throw ConfigError("unknown attack kind");
}

AttackKind attack_from_string(const std::string& name) {
    for (AttackKind k : all_attacks())
        if (to_string(k) == name) return k;
    throw ConfigError("unknown attack '" + name + "'");
}

AttackSpec AttackSpec::defaults(AttackKind kind) {
    AttackSpec s;
    s.kind = kind;
    switch (kind) {
        case AttackKind::Fgsm:
            s.iterations = 1;
            break;
        case AttackKind::BimA:
        case AttackKind::BimB:
            s.iterations = 10;
            break;
        case AttackKind::Jsma:
            s.theta = 1.0;
            s.gamma = 1.0;
            break;
        case AttackKind::DeepFool:
            s.iterations = 50;
            s.overshoot = 0.02;
            break;
        case AttackKind::Cw:
            s.iterations = 100;
            s.cw_c = 1.0;
            s.cw_lr = 0.05;
            s.cw_kappa = 0.0;
            break;
    }
    return s;
}

void AttackSpec::validate() const {
    if (!(clip_min < clip_max)) throw ConfigError("attack clip bounds need min < max");
    switch (kind) {
        case AttackKind::Fgsm:
            if (!(epsilon > 0.0)) throw ConfigError("fgsm needs a positive epsilon");
            break;
        case AttackKind::BimA:
        case AttackKind::BimB:
            if (!(epsilon > 0.0)) throw ConfigError("bim needs a positive epsilon");
            if (iterations < 1) throw ConfigError("bim needs at least one iteration");
            break;
        case AttackKind::Jsma:
            if (!(theta > 0.0)) throw ConfigError("jsma needs a positive theta");
            if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("jsma gamma must be in (0, 1]");
            break;
        case AttackKind::DeepFool:
            if (!(epsilon > 0.0)) throw ConfigError("deepfool needs a positive epsilon cap");
            if (iterations < 1) throw ConfigError("deepfool needs at least one iteration");
            if (overshoot < 0.0) throw ConfigError("deepfool overshoot cannot be negative");
            break;
        case AttackKind::Cw:
            if (iterations < 1) throw ConfigError("cw needs at least one iteration");
            if (cw_c < 0.0) throw ConfigError("cw weight c cannot be negative");
            if (!(cw_lr > 0.0)) throw ConfigError("cw needs a positive step size");
            if (cw_kappa < 0.0) throw ConfigError("cw confidence cannot be negative");
            break;
    }
}

json AttackSpec::to_json() const {
    return json{{"kind", to_string(kind)},
                {"epsilon", epsilon},
                {"clip_min", clip_min},
                {"clip_max", clip_max},
                {"iterations", iterations},
                {"theta", theta},
                {"gamma", gamma},
                {"cw_c", cw_c},
                {"cw_lr", cw_lr},
                {"cw_kappa", cw_kappa},
                {"overshoot", overshoot}};
}

AttackSpec AttackSpec::from_json(const json& j) {
    AttackSpec s = defaults(attack_from_string(j.at("kind").get<std::string>()));
    if (j.contains("epsilon")) s.epsilon = j.at("epsilon").get<double>();
    if (j.contains("clip_min")) s.clip_min = j.at("clip_min").get<double>();
    if (j.contains("clip_max")) s.clip_max = j.at("clip_max").get<double>();
    if (j.contains("iterations")) s.iterations = j.at("iterations").get<int>();
    if (j.contains("theta")) s.theta = j.at("theta").get<double>();
    if (j.contains("gamma")) s.gamma = j.at("gamma").get<double>();
    if (j.contains("cw_c")) s.cw_c = j.at("cw_c").get<double>();
    if (j.contains("cw_lr")) s.cw_lr = j.at("cw_lr").get<double>();
    if (j.contains("cw_kappa")) s.cw_kappa = j.at("cw_kappa").get<double>();
    if (j.contains("overshoot")) s.overshoot = j.at("overshoot").get<double>();
    s.validate();
    return s;
}

double clip(double v, double lo, double hi) {
    if (v < lo) return lo;
    if (v > hi) return hi;
    return v;
}

Matrix clip_matrix(const Matrix& x, double lo, double hi) {
    Matrix out = x;
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out.data()[i] = clip(out.data()[i], lo, hi);
    return out;
}

double sign0(double v) {
    if (v > 0.0) return 1.0;
    if (v < 0.0) return -1.0;
    return 0.0;
}

AdversarialSet fgsm(const DifferentiableClassifier& model, const Matrix& x, const IntVector& y,
                    const AttackSpec& spec) {
    spec.validate();
    require_kind(spec, {AttackKind::Fgsm}, "fgsm");
    require_rows(x, y);
    check_labels(y);
    const Matrix g = model.loss_input_gradient(x, y);
    Matrix x_adv(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index c = 0; c < x.cols(); ++c)
            x_adv(i, c) = clip(x(i, c) + spec.epsilon * sign0(g(i, c)), spec.clip_min, spec.clip_max);
    return make_set(spec, x, std::move(x_adv), y, {});
}

AdversarialSet bim(const DifferentiableClassifier& model, const Matrix& x, const IntVector& y,
                   const AttackSpec& spec) {
    spec.validate();
    require_kind(spec, {AttackKind::BimA, AttackKind::BimB}, "bim");
    require_rows(x, y);
    check_labels(y);
    const bool stop_on_flip = spec.kind == AttackKind::BimA;
    const double alpha = spec.epsilon / spec.iterations;
    const auto n = x.rows();
    Matrix delta = Matrix::Zero(n, x.cols());
    Matrix adv = x;
    std::vector<char> done(static_cast<std::size_t>(n), 0);
    for (int it = 0; it < spec.iterations; ++it) {
        if (stop_on_flip) {
            const IntVector pred = model.predict_labels(adv);
            bool any_active = false;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (!done[static_cast<std::size_t>(i)] && pred[i] != y[i])
                    done[static_cast<std::size_t>(i)] = 1;
                any_active = any_active || !done[static_cast<std::size_t>(i)];
            }
            if (!any_active) break;
        }
        const Matrix g = model.loss_input_gradient(adv, y);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (done[static_cast<std::size_t>(i)]) continue;
            for (Eigen::Index c = 0; c < x.cols(); ++c) {
                delta(i, c) = std::clamp(delta(i, c) + alpha * sign0(g(i, c)), -spec.epsilon,
                                         spec.epsilon);
                adv(i, c) = clip(x(i, c) + delta(i, c), spec.clip_min, spec.clip_max);
            }
        }
    }
    return make_set(spec, x, std::move(adv), y, {});
}

Vector jsma_saliency(const Vector& target_grad, const Vector& other_grad) {
    if (target_grad.size() != other_grad.size())
        throw ShapeError("saliency gradient width mismatch");
    Vector s = Vector::Zero(target_grad.size());
    for (Eigen::Index c = 0; c < s.size(); ++c) {
        // zero unless the coordinate raises the target class and lowers the rest
        if (target_grad[c] < 0.0 || other_grad[c] > 0.0) continue;
        s[c] = target_grad[c] * std::abs(other_grad[c]);
    }
    return s;
}

AdversarialSet jsma(const DifferentiableClassifier& model, const Matrix& x, const IntVector& y,
                    const AttackSpec& spec, const std::vector<int>& groups) {
    spec.validate();
    require_kind(spec, {AttackKind::Jsma}, "jsma");
    require_rows(x, y);
    check_labels(y);
    const auto d = x.cols();
    if (!groups.empty() && groups.size() != static_cast<std::size_t>(d))
        throw ShapeError("one-hot group vector width mismatch");
    const int budget =
        static_cast<int>(std::ceil(spec.gamma * static_cast<double>(d)));

    Matrix adv = x;
    std::vector<unsigned> flags(static_cast<std::size_t>(x.rows()), 0u);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        Matrix row = adv.row(i);
        const int target = 1 - y[i];
        std::vector<char> eligible(static_cast<std::size_t>(d), 1);
        int used = 0;
        bool success = label_of_row(model, row) != y[i];
        bool starved = false;
        while (!success && used < budget) {
            const Vector gt = model.prob_class_gradient(row, target).row(0);
            const Vector go = model.prob_class_gradient(row, 1 - target).row(0);
            const Vector sal = jsma_saliency(gt, go);
            Eigen::Index best = -1;
            double best_s = 0.0;
            for (Eigen::Index c = 0; c < d; ++c) {
                if (!eligible[static_cast<std::size_t>(c)] || !(sal[c] > best_s)) continue;
                const bool in_group = !groups.empty() && groups[static_cast<std::size_t>(c)] >= 0;
                if (!in_group &&
                    clip(row(0, c) + spec.theta, spec.clip_min, spec.clip_max) == row(0, c))
                    continue;  // saturated continuous move would be a no-op
                best = c;
                best_s = sal[c];
            }
            if (best < 0) {
                starved = true;
                break;
            }
            const bool in_group = !groups.empty() && groups[static_cast<std::size_t>(best)] >= 0;
            if (!in_group) {
                row(0, best) = clip(row(0, best) + spec.theta, spec.clip_min, spec.clip_max);
                eligible[static_cast<std::size_t>(best)] = 0;
                ++used;
            } else {
                // flip the group as a unit: raise the chosen indicator (zeroing
                // its siblings) or drop it entirely when it is already set
                const int gid = groups[static_cast<std::size_t>(best)];
                int changed = 0;
                if (row(0, best) > 0.5) {
                    row(0, best) = 0.0;
                    changed = 1;
                } else {
                    changed = 1;
                    for (Eigen::Index c = 0; c < d; ++c) {
                        if (c == best || groups[static_cast<std::size_t>(c)] != gid) continue;
                        if (row(0, c) > 0.5) {
                            row(0, c) = 0.0;
                            ++changed;
                        }
                    }
                    row(0, best) = 1.0;
                }
                if (used + changed > budget) {
                    // can't afford the flip: roll back and stop
                    row = adv.row(i);
                    starved = true;
                    break;
                }
                for (Eigen::Index c = 0; c < d; ++c)
                    if (groups[static_cast<std::size_t>(c)] == gid)
                        eligible[static_cast<std::size_t>(c)] = 0;
                used += changed;
            }
            adv.row(i) = row;
            success = label_of_row(model, row) != y[i];
        }
        adv.row(i) = row;
        if (!success) {
            flags[static_cast<std::size_t>(i)] |= kAttackUnsuccessful;
            if (starved) flags[static_cast<std::size_t>(i)] |= kAttackNoSaliency;
        }
    }
    return make_set(spec, x, std::move(adv), y, std::move(flags));
}

namespace {

// shared DeepFool loop; returns the accumulated pre-overshoot perturbation
Matrix deepfool_accumulate(const DifferentiableClassifier& model, const Matrix& x,
                           const AttackSpec& spec, const IntVector* y,
                           std::vector<unsigned>& flags) {
    Matrix raw = Matrix::Zero(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const Matrix row = x.row(i);
        const int label0 = label_of_row(model, row);
        if (y && (*y)[i] != label0) continue;  // already misclassified; leave it alone
        Matrix r_tot = Matrix::Zero(1, x.cols());
        bool flipped = false;
        bool degenerate = false;
        for (int it = 0; it < spec.iterations; ++it) {
            const Matrix cur = row + r_tot;
            if (label_of_row(model, cur) != label0) {
                flipped = true;
                break;
            }
            const Matrix scores = model.class_scores(cur);
            const double g = scores(0, 1) - scores(0, 0);
            const Matrix w =
                model.score_class_gradient(cur, 1) - model.score_class_gradient(cur, 0);
            const double norm2 = w.squaredNorm();
            if (std::sqrt(norm2) < 1e-12) {
                degenerate = true;
                break;
            }
            r_tot -= (g / norm2) * w;
        }
        if (degenerate) {
            flags[static_cast<std::size_t>(i)] |= kAttackDegenerate | kAttackUnsuccessful;
            continue;  // raw row stays zero: sample goes out unperturbed
        }
        if (!flipped) flipped = label_of_row(model, row + r_tot) != label0;
        if (!flipped) flags[static_cast<std::size_t>(i)] |= kAttackUnsuccessful;
        raw.row(i) = r_tot;
    }
    return raw;
}

}  // namespace

Matrix deepfool_raw(const DifferentiableClassifier& model, const Matrix& x,
                    const AttackSpec& spec, const IntVector* y) {
    spec.validate();
    require_kind(spec, {AttackKind::DeepFool}, "deepfool");
    std::vector<unsigned> flags(static_cast<std::size_t>(x.rows()), 0u);
    return deepfool_accumulate(model, x, spec, y, flags);
}

AdversarialSet deepfool(const DifferentiableClassifier& model, const Matrix& x,
                        const AttackSpec& spec, const IntVector* y) {
    spec.validate();
    require_kind(spec, {AttackKind::DeepFool}, "deepfool");
    if (y) require_rows(x, *y);
    std::vector<unsigned> flags(static_cast<std::size_t>(x.rows()), 0u);
    const Matrix raw = deepfool_accumulate(model, x, spec, y, flags);
    Matrix adv(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            const double d =
                std::clamp((1.0 + spec.overshoot) * raw(i, c), -spec.epsilon, spec.epsilon);
            adv(i, c) = clip(x(i, c) + d, spec.clip_min, spec.clip_max);
        }
    IntVector fallback;
    const IntVector& labels = y ? *y : fallback;
    if (!y) {
        fallback = model.predict_labels(x);
    }
    return make_set(spec, x, std::move(adv), labels, std::move(flags));
}

AdversarialSet cw(const DifferentiableClassifier& model, const Matrix& x, const IntVector& y,
                  const AttackSpec& spec) {
    spec.validate();
    require_kind(spec, {AttackKind::Cw}, "cw");
    require_rows(x, y);
    check_labels(y);
    const auto n = x.rows();
    const auto d = x.cols();
    const double lo = spec.clip_min;
    const double span = spec.clip_max - spec.clip_min;

    // tanh change of variables keeps every iterate inside the clip box
    Matrix w(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index c = 0; c < d; ++c) {
            const double t =
                std::clamp(2.0 * (x(i, c) - lo) / span - 1.0, -1.0 + 1e-12, 1.0 - 1e-12);
            w(i, c) = std::atanh(t);
        }

    Matrix best = x;
    Vector best_norm = Vector::Constant(n, std::numeric_limits<double>::infinity());
    Matrix last = x;
    std::vector<unsigned> flags(static_cast<std::size_t>(n), 0u);
    std::vector<char> success(static_cast<std::size_t>(n), 0);
    std::vector<char> aborted(static_cast<std::size_t>(n), 0);

    for (int it = 0; it < spec.iterations; ++it) {
        const Matrix th = w.array().tanh().matrix();
        Matrix xw(n, d);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index c = 0; c < d; ++c) xw(i, c) = lo + span * (th(i, c) + 1.0) / 2.0;
        const Matrix delta = xw - x;
        const Matrix scores = model.class_scores(xw);
        const Matrix g1 = model.score_class_gradient(xw, 1);
        const Matrix g0 = model.score_class_gradient(xw, 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (aborted[static_cast<std::size_t>(i)]) continue;
            const double l2sq = delta.row(i).squaredNorm();
            const double margin = y[i] == 1 ? scores(i, 1) - scores(i, 0)
                                            : scores(i, 0) - scores(i, 1);
            const double objective = l2sq + spec.cw_c * std::max(margin, -spec.cw_kappa);
            if (!std::isfinite(objective)) {
                aborted[static_cast<std::size_t>(i)] = 1;
                continue;
            }
            last.row(i) = xw.row(i);
            const int pred = scores(i, 1) > scores(i, 0) ? 1 : 0;
            if (pred != y[i]) {
                success[static_cast<std::size_t>(i)] = 1;
                const double norm = std::sqrt(l2sq);
                if (norm < best_norm[i]) {
                    best_norm[i] = norm;
                    best.row(i) = xw.row(i);
                }
            }
            // descend: d(objective)/dw = (2*delta + c*1{margin>-kappa}*dmargin/dx) . dx/dw
            for (Eigen::Index c = 0; c < d; ++c) {
                double dx = 2.0 * delta(i, c);
                if (margin > -spec.cw_kappa) {
                    const double dm = y[i] == 1 ? g1(i, c) - g0(i, c) : g0(i, c) - g1(i, c);
                    dx += spec.cw_c * dm;
                }
                const double dxdw = span / 2.0 * (1.0 - th(i, c) * th(i, c));
                w(i, c) -= spec.cw_lr * dx * dxdw;
            }
        }
    }

    Matrix adv(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (success[static_cast<std::size_t>(i)]) {
            adv.row(i) = best.row(i);
        } else {
            adv.row(i) = last.row(i);
            flags[static_cast<std::size_t>(i)] |= kAttackUnsuccessful;
        }
        if (aborted[static_cast<std::size_t>(i)]) flags[static_cast<std::size_t>(i)] |= kAttackAborted;
    }
    return make_set(spec, x, std::move(adv), y, std::move(flags));
}

BoxRescale BoxRescale::fit(const Matrix& x) {
    if (x.rows() == 0) throw DataError("cannot fit attack rescaling on an empty matrix");
    BoxRescale r;
    r.lo = x.colwise().minCoeff();
    r.range = (x.colwise().maxCoeff() - x.colwise().minCoeff());
    for (Eigen::Index c = 0; c < r.range.size(); ++c)
        if (!(r.range[c] > 0.0)) r.range[c] = 1.0;
    return r;
}

Matrix BoxRescale::to_unit(const Matrix& x) const {
    if (x.cols() != lo.size()) throw ShapeError("rescale width mismatch");
    Matrix out = x;
    out.rowwise() -= lo.transpose();
    out.array().rowwise() /= range.transpose().array();
    return out;
}

Matrix BoxRescale::to_native(const Matrix& u) const {
    if (u.cols() != lo.size()) throw ShapeError("rescale width mismatch");
    Matrix out = u;
    out.array().rowwise() *= range.transpose().array();
    out.rowwise() += lo.transpose();
    return out;
}

Matrix RescaledClassifier::predict_probs(const Matrix& u) const {
    return inner_.predict_probs(rescale_.to_native(u));
}

Matrix RescaledClassifier::class_scores(const Matrix& u) const {
    return inner_.class_scores(rescale_.to_native(u));
}

Matrix RescaledClassifier::loss_input_gradient(const Matrix& u, const IntVector& y) const {
    Matrix g = inner_.loss_input_gradient(rescale_.to_native(u), y);
    g.array().rowwise() *= rescale_.range.transpose().array();
    return g;
}

Matrix RescaledClassifier::prob_class_gradient(const Matrix& u, int c) const {
    Matrix g = inner_.prob_class_gradient(rescale_.to_native(u), c);
    g.array().rowwise() *= rescale_.range.transpose().array();
    return g;
}

Matrix RescaledClassifier::score_class_gradient(const Matrix& u, int c) const {
    Matrix g = inner_.score_class_gradient(rescale_.to_native(u), c);
    g.array().rowwise() *= rescale_.range.transpose().array();
    return g;
}

AdversarialSet craft_attack(const DifferentiableClassifier& victim, const Matrix& x,
                            const IntVector& y, const AttackSpec& spec,
                            const std::vector<int>& onehot_groups, std::uint64_t seed,
                            const std::string& victim_id) {
    const BoxRescale rescale = BoxRescale::fit(x);
    const RescaledClassifier wrapped(victim, rescale);
    const Matrix u = rescale.to_unit(x);
    AdversarialSet out;
    switch (spec.kind) {
        case AttackKind::Fgsm: out = fgsm(wrapped, u, y, spec); break;
        case AttackKind::BimA:
        case AttackKind::BimB: out = bim(wrapped, u, y, spec); break;
        case AttackKind::Jsma: out = jsma(wrapped, u, y, spec, onehot_groups); break;
        case AttackKind::DeepFool: out = deepfool(wrapped, u, spec, &y); break;
        case AttackKind::Cw: out = cw(wrapped, u, y, spec); break;
    }
    out.x_adv = rescale.to_native(out.x_adv);  // norms stay in the unit attack box
    out.victim_id = victim_id;
    out.seed = seed;
    return out;
}

void AdversarialSet::save(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    std::vector<std::string> names = column_names;
    if (names.empty())
        for (Eigen::Index c = 0; c < x_adv.cols(); ++c) names.push_back("f" + std::to_string(c));
    write_matrix_csv(dir + "/x_adv.csv", names, x_adv, y);
    json meta{{"format", "advens.advset/1"},
              {"spec", spec.to_json()},
              {"victim_id", victim_id},
              {"seed", seed},
              {"columns", names},
              {"flags", flags},
              {"linf", std::vector<double>(linf.data(), linf.data() + linf.size())},
              {"l2", std::vector<double>(l2.data(), l2.data() + l2.size())},
              {"l0", std::vector<int>(l0.data(), l0.data() + l0.size())}};
    write_text_file(dir + "/meta.json", meta.dump(2) + "\n");
}

AdversarialSet AdversarialSet::load(const std::string& dir) {
    const json meta = json::parse(read_text_file(dir + "/meta.json"));
    if (meta.at("format").get<std::string>() != "advens.advset/1")
        throw DataError("unsupported adversarial-set format in " + dir);
    AdversarialSet s;
    s.spec = AttackSpec::from_json(meta.at("spec"));
    s.victim_id = meta.at("victim_id").get<std::string>();
    s.seed = meta.at("seed").get<std::uint64_t>();
    s.column_names = meta.at("columns").get<std::vector<std::string>>();
    s.flags = meta.at("flags").get<std::vector<unsigned>>();
    const auto linf = meta.at("linf").get<std::vector<double>>();
    const auto l2 = meta.at("l2").get<std::vector<double>>();
    const auto l0 = meta.at("l0").get<std::vector<int>>();
    s.linf = Eigen::Map<const Vector>(linf.data(), static_cast<Eigen::Index>(linf.size()));
    s.l2 = Eigen::Map<const Vector>(l2.data(), static_cast<Eigen::Index>(l2.size()));
    s.l0 = Eigen::Map<const IntVector>(l0.data(), static_cast<Eigen::Index>(l0.size()));
    std::tie(s.x_adv, s.y) = read_matrix_csv(dir + "/x_adv.csv", s.column_names.size());
    return s;
}

AttackReport attack_success_rate(const Classifier& model, const Matrix& x_clean,
                                 const Matrix& x_adv, const IntVector& y) {
    if (x_clean.rows() != x_adv.rows() || x_clean.cols() != x_adv.cols())
        throw ShapeError("clean/adversarial shape mismatch");
    require_rows(x_clean, y);
    const IntVector clean = model.predict_labels(x_clean);
    const IntVector adv = model.predict_labels(x_adv);
    AttackReport r;
    std::size_t correct = 0, flipped = 0, adv_correct = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (adv[i] == y[i]) ++adv_correct;
        if (clean[i] == y[i]) {
            ++correct;
            if (adv[i] != y[i]) ++flipped;
        }
    }
    const auto n = static_cast<double>(y.size());
    r.clean_accuracy = static_cast<double>(correct) / n;
    r.adv_accuracy = static_cast<double>(adv_correct) / n;
    r.n_originally_correct = correct;
    r.success_rate = correct == 0 ? 0.0 : static_cast<double>(flipped) / static_cast<double>(correct);
    return r;
}

}  // namespace advens
