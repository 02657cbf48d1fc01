#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "advens/attacks.hpp"
#include "advens/common.hpp"
#include "advens/nn.hpp"

using namespace advens;

namespace {

// linear two-class model with analytic gradients; the ground truth for every
// attack oracle below
struct LinearStub : DifferentiableClassifier {
    Matrix w;  // d x 2
    Vector b = Vector::Zero(2);

    explicit LinearStub(Matrix weights) : w(std::move(weights)) {}

    int input_dim() const override { return static_cast<int>(w.rows()); }

    Matrix class_scores(const Matrix& x) const override {
        Matrix s = x * w;
        s.rowwise() += b.transpose();
        return s;
    }

    Matrix predict_probs(const Matrix& x) const override {
        Matrix s = class_scores(x);
        Matrix p(s.rows(), 2);
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
            double m = std::max(s(i, 0), s(i, 1));
            double e0 = std::exp(s(i, 0) - m), e1 = std::exp(s(i, 1) - m);
            p(i, 0) = e0 / (e0 + e1);
            p(i, 1) = e1 / (e0 + e1);
        }
        return p;
    }

    Matrix score_class_gradient(const Matrix& x, int c) const override {
        Matrix g(x.rows(), w.rows());
        g.rowwise() = w.col(c).transpose();
        return g;
    }

    Matrix prob_class_gradient(const Matrix& x, int c) const override {
        Matrix p = predict_probs(x);
        Matrix g(x.rows(), w.rows());
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            Vector mix = p(i, 0) * w.col(0) + p(i, 1) * w.col(1);
            g.row(i) = (p(i, c) * (w.col(c) - mix)).transpose();
        }
        return g;
    }

    Matrix loss_input_gradient(const Matrix& x, const IntVector& y) const override {
        // p_other * (w_other - w_y): the simplified form cancels exactly where
        // the columns agree, keeping sign(0) coordinates truly untouched
        Matrix p = predict_probs(x);
        Matrix g(x.rows(), w.rows());
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            const int other = 1 - y[i];
            g.row(i) = (p(i, other) * (w.col(other) - w.col(y[i]))).transpose();
        }
        return g;
    }
};

Matrix stub_weights(std::initializer_list<double> c0, std::initializer_list<double> c1) {
    Matrix w(static_cast<Eigen::Index>(c0.size()), 2);
    Eigen::Index i = 0;
    for (double v : c0) w(i++, 0) = v;
    i = 0;
    for (double v : c1) w(i++, 1) = v;
    return w;
}

}  // namespace

TEST_CASE("clip is the piecewise boundary projection") {
    CHECK(clip(-0.1, 0.0, 1.0) == 0.0);
    CHECK(clip(1.2, 0.0, 1.0) == 1.0);
    CHECK(clip(0.5, 0.0, 1.0) == 0.5);
    CHECK(clip(0.0, 0.0, 1.0) == 0.0);
    CHECK(clip(1.0, 0.0, 1.0) == 1.0);
    Matrix m(1, 3);
    m << -2.0, 0.3, 7.0;
    Matrix c = clip_matrix(m, 0.0, 1.0);
    CHECK(c(0, 0) == 0.0);
    CHECK(c(0, 1) == 0.3);
    CHECK(c(0, 2) == 1.0);
}

TEST_CASE("sign treats zero as zero") {
    CHECK(sign0(-3.0) == -1.0);
    CHECK(sign0(2.5) == 1.0);
    CHECK(sign0(0.0) == 0.0);
}

TEST_CASE("fgsm matches the hand-computed step with boundary clipping") {
    // sign(dL/dx) for y=0 is sign(w1-w0) = [-1, +1, 0]; mirrored for y=1
    LinearStub model(stub_weights({1.0, 0.0, 2.0}, {-1.0, 3.0, 2.0}));
    Matrix x(3, 3);
    x << 0.5, 0.4, 0.7,
         0.5, 0.4, 0.7,
         0.95, 0.05, 0.5;
    IntVector y(3);
    y << 0, 1, 1;
    AttackSpec spec = AttackSpec::defaults(AttackKind::Fgsm);

    AdversarialSet s = fgsm(model, x, y, spec);
    Matrix expect(3, 3);
    expect << 0.3, 0.6, 0.7,
              0.7, 0.2, 0.7,
              1.0, 0.0, 0.5;  // 1.15 and -0.15 clip to the box
    CHECK((s.x_adv - expect).cwiseAbs().maxCoeff() < 1e-15);
    for (Eigen::Index i = 0; i < 3; ++i) {
        CHECK(s.linf[i] <= spec.epsilon + 1e-15);
        CHECK(s.l0[i] == 2);
    }
    CHECK(s.linf[0] == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("single-round basic iteration reproduces fgsm bit for bit") {
    LinearStub model(stub_weights({1.0, 0.0, 2.0}, {-1.0, 3.0, 2.0}));
    Matrix x(2, 3);
    x << 0.5, 0.4, 0.7,
         0.9, 0.1, 0.3;
    IntVector y(2);
    y << 0, 1;
    AttackSpec one_step = AttackSpec::defaults(AttackKind::BimB);
    one_step.iterations = 1;
    AdversarialSet via_bim = bim(model, x, y, one_step);
    AdversarialSet via_fgsm = fgsm(model, x, y, AttackSpec::defaults(AttackKind::Fgsm));
    CHECK((via_bim.x_adv - via_fgsm.x_adv).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bim stays inside the max-norm ball and variant a freezes early") {
    LinearStub model(stub_weights({2.0, 0.0}, {-2.0, 1.0}));
    Matrix x(2, 2);
    x << 0.6, 0.5,   // scores 1.2 vs -0.7: predicted 0
         0.6, 0.5;
    IntVector y(2);
    y << 0, 1;  // row 1 is already misclassified
    AttackSpec spec = AttackSpec::defaults(AttackKind::BimA);

    AdversarialSet a = bim(model, x, y, spec);
    CHECK((a.x_adv.row(1) - x.row(1)).cwiseAbs().maxCoeff() == 0.0);  // untouched
    CHECK(a.linf[0] <= spec.epsilon + 1e-15);

    AttackSpec b_spec = spec;
    b_spec.kind = AttackKind::BimB;
    AdversarialSet b = bim(model, x, y, b_spec);
    for (Eigen::Index i = 0; i < 2; ++i) CHECK(b.linf[i] <= spec.epsilon + 1e-15);
    // variant b keeps attacking the already-wrong sample
    CHECK((b.x_adv.row(1) - x.row(1)).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("deepfool projects onto the linear boundary in one step") {
    // g(x) = 3 x0 + 4 x1, so from (1,1) the projection is -(7/25)*(3,4)
    LinearStub model(stub_weights({0.0, 0.0}, {3.0, 4.0}));
    Matrix x(1, 2);
    x << 1.0, 1.0;
    AttackSpec spec = AttackSpec::defaults(AttackKind::DeepFool);
    spec.epsilon = 1e6;
    spec.clip_min = -1e6;
    spec.clip_max = 1e6;

    Matrix raw = deepfool_raw(model, x, spec);
    CHECK(raw(0, 0) == doctest::Approx(-0.84).epsilon(1e-6));
    CHECK(raw(0, 1) == doctest::Approx(-1.12).epsilon(1e-6));

    AdversarialSet s = deepfool(model, x, spec);
    CHECK(s.x_adv(0, 0) == doctest::Approx(1.0 - 1.02 * 0.84).epsilon(1e-6));
    CHECK(s.x_adv(0, 1) == doctest::Approx(1.0 - 1.02 * 1.12).epsilon(1e-6));
    CHECK(s.flags[0] == 0u);
    CHECK(model.predict_labels(s.x_adv)[0] == 0);
}

TEST_CASE("deepfool caps the perturbation at the budget and flags dead gradients") {
    LinearStub model(stub_weights({0.0, 0.0}, {3.0, 4.0}));
    Matrix x(1, 2);
    x << 1.0, 1.0;
    AttackSpec spec = AttackSpec::defaults(AttackKind::DeepFool);  // eps 0.2, clip [0,1]
    AdversarialSet capped = deepfool(model, x, spec);
    CHECK(capped.x_adv(0, 0) == doctest::Approx(0.8));
    CHECK(capped.x_adv(0, 1) == doctest::Approx(0.8));
    CHECK(capped.linf[0] <= spec.epsilon + 1e-15);

    LinearStub flat(stub_weights({1.0, 1.0}, {1.0, 1.0}));  // s1 - s0 is constant
    AdversarialSet dead = deepfool(flat, x, spec);
    CHECK((dead.x_adv - x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((dead.flags[0] & kAttackDegenerate) != 0u);
    CHECK((dead.flags[0] & kAttackUnsuccessful) != 0u);
}

TEST_CASE("the saliency map zeroes hostile coordinates and scores the rest") {
    Vector target(3), other(3);
    target << 0.5, -0.2, 0.3;
    other << -0.4, 0.1, 0.2;
    Vector s = jsma_saliency(target, other);
    CHECK(s[0] == doctest::Approx(0.5 * 0.4).epsilon(1e-15));
    CHECK(s[1] == 0.0);
    CHECK(s[2] == 0.0);
}

TEST_CASE("jsma perturbs the top-saliency coordinate first") {
    // dp_target/dx is proportional to w1 - w0 = [-2, 2.5, 0]: only x1 is useful
    LinearStub model(stub_weights({2.0, 0.0, 1.0}, {0.0, 2.5, 1.0}));
    Matrix x(1, 3);
    x << 0.5, 0.2, 0.5;
    IntVector y(1);
    y << 0;
    AttackSpec spec = AttackSpec::defaults(AttackKind::Jsma);

    AdversarialSet s = jsma(model, x, y, spec);
    CHECK(s.x_adv(0, 0) == 0.5);
    CHECK(s.x_adv(0, 1) == 1.0);  // 0.2 + theta, clipped to the box
    CHECK(s.x_adv(0, 2) == 0.5);
    CHECK(s.l0[0] == 1);
    CHECK(s.flags[0] == 0u);
    CHECK(model.predict_labels(s.x_adv)[0] == 1);
}

TEST_CASE("jsma stops at the feature budget and flags the failure") {
    LinearStub model(stub_weights({2.0, 0.0, 1.0}, {0.0, 2.5, 1.0}));
    Matrix x(1, 3);
    x << 0.5, 0.2, 0.5;
    IntVector y(1);
    y << 0;
    AttackSpec spec = AttackSpec::defaults(AttackKind::Jsma);
    spec.theta = 0.1;   // one small step cannot cross
    spec.gamma = 0.3;   // ceil(0.3 * 3) = 1 coordinate allowed
    AdversarialSet s = jsma(model, x, y, spec);
    CHECK(s.x_adv(0, 1) == doctest::Approx(0.3));
    CHECK(s.l0[0] == 1);
    CHECK(s.flags[0] == kAttackUnsuccessful);
}

TEST_CASE("jsma flips one-hot groups as a unit") {
    LinearStub model(stub_weights({3.0, 0.0, 0.0, 0.2}, {2.0, 5.0, 0.5, 0.0}));
    Matrix x(1, 4);
    x << 1.0, 0.0, 0.5, 0.2;  // columns 0 and 1 are the indicators of one group
    IntVector y(1);
    y << 0;
    AttackSpec spec = AttackSpec::defaults(AttackKind::Jsma);
    std::vector<int> groups{0, 0, -1, -1};

    AdversarialSet s = jsma(model, x, y, spec, groups);
    CHECK(s.x_adv(0, 0) == 0.0);
    CHECK(s.x_adv(0, 1) == 1.0);
    CHECK(s.x_adv(0, 2) == 0.5);
    CHECK(s.x_adv(0, 3) == 0.2);
    CHECK(s.l0[0] == 2);
    CHECK(s.flags[0] == 0u);
}

TEST_CASE("jsma reports a starved saliency map") {
    LinearStub model(stub_weights({0.0, 0.0}, {0.0, 0.0}));
    Matrix x(1, 2);
    x << 0.5, 0.5;
    IntVector y(1);
    y << 0;  // tied probabilities predict class 0, so the attack must run
    AdversarialSet s = jsma(model, x, y, AttackSpec::defaults(AttackKind::Jsma));
    CHECK((s.x_adv - x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s.flags[0] & kAttackNoSaliency) != 0u);
    CHECK((s.flags[0] & kAttackUnsuccessful) != 0u);
}

TEST_CASE("carlini-wagner lands within ten percent of the boundary distance") {
    // s1 - s0 = 4x - 2: boundary at x = 0.5, so from 0.8 the distance is 0.3
    LinearStub model(stub_weights({0.0}, {4.0}));
    model.b << 0.0, -2.0;
    Matrix x(1, 1);
    x << 0.8;
    IntVector y(1);
    y << 1;
    AttackSpec spec = AttackSpec::defaults(AttackKind::Cw);
    spec.iterations = 2000;

    AdversarialSet s = cw(model, x, y, spec);
    double delta = std::abs(s.x_adv(0, 0) - 0.8);
    CHECK(delta >= 0.27);
    CHECK(delta <= 0.33);
    CHECK(s.flags[0] == 0u);
    CHECK(model.predict_labels(s.x_adv)[0] == 0);
    CHECK(s.l2[0] == doctest::Approx(delta).epsilon(1e-12));
}

TEST_CASE("carlini-wagner flags samples it cannot move across in time") {
    LinearStub model(stub_weights({0.0}, {4.0}));
    model.b << 0.0, -2.0;
    Matrix x(1, 1);
    x << 0.8;
    IntVector y(1);
    y << 1;
    AttackSpec spec = AttackSpec::defaults(AttackKind::Cw);
    spec.iterations = 3;
    AdversarialSet s = cw(model, x, y, spec);
    CHECK((s.flags[0] & kAttackUnsuccessful) != 0u);
}

TEST_CASE("box rescaling is an exact bridge to the unit cube") {
    Matrix x(3, 3);
    x << 2.0, 5.0, -1.0,
         6.0, 5.0, 0.5,
         4.0, 5.0, 3.0;
    BoxRescale r = BoxRescale::fit(x);
    Matrix u = r.to_unit(x);
    CHECK(u.col(0).minCoeff() == 0.0);
    CHECK(u.col(0).maxCoeff() == 1.0);
    CHECK(u.col(1).cwiseAbs().maxCoeff() == 0.0);  // constant column maps to zero
    CHECK((r.to_native(u) - x).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(BoxRescale::fit(Matrix(0, 2)), DataError);
}

TEST_CASE("crafting runs in the unit box and maps back to model space") {
    LinearStub model(stub_weights({1.0, 0.0}, {-1.0, 3.0}));
    Matrix x(4, 2);
    x << -3.0, 10.0,
          7.0, 30.0,
          1.0, 20.0,
          2.0, 15.0;
    IntVector y(4);
    y << 0, 1, 0, 1;
    AttackSpec spec = AttackSpec::defaults(AttackKind::Fgsm);

    AdversarialSet s = craft_attack(model, x, y, spec, {}, 42, "victim-1");
    CHECK(s.victim_id == "victim-1");
    CHECK(s.seed == 42);
    // norms are measured in the rescaled attack space where the budget applies
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(s.linf[i] <= spec.epsilon + 1e-12);
    // and the result respects the fitted box: rescaled clipping to [0, 1]
    CHECK(s.x_adv.col(0).minCoeff() >= -3.0 - 1e-12);
    CHECK(s.x_adv.col(0).maxCoeff() <= 7.0 + 1e-12);
    CHECK(s.x_adv.col(1).minCoeff() >= 10.0 - 1e-12);
    CHECK(s.x_adv.col(1).maxCoeff() <= 30.0 + 1e-12);
    // an interior row moves by the unit step scaled by the column range
    CHECK(std::abs(s.x_adv(3, 0) - x(3, 0)) == doctest::Approx(0.2 * 10.0).epsilon(1e-12));
    CHECK(std::abs(s.x_adv(3, 1) - x(3, 1)) == doctest::Approx(0.2 * 20.0).epsilon(1e-12));
}

TEST_CASE("adversarial sets round-trip through their directory format") {
    LinearStub model(stub_weights({1.0, 0.0}, {-1.0, 3.0}));
    Matrix x(3, 2);
    x << 0.1, 0.9,
         0.4, 0.2,
         0.8, 0.6;
    IntVector y(3);
    y << 0, 1, 0;
    AdversarialSet s = craft_attack(model, x, y, AttackSpec::defaults(AttackKind::Fgsm), {}, 7,
                                    "victim-7");
    s.column_names = {"a", "b"};
    const std::string dir = "/tmp/advens_adv_set";
    s.save(dir);
    AdversarialSet back = AdversarialSet::load(dir);
    CHECK(back.spec == s.spec);
    CHECK(back.victim_id == "victim-7");
    CHECK(back.seed == 7);
    CHECK((back.x_adv - s.x_adv).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.y.cwiseEqual(s.y).all());
    CHECK(back.flags == s.flags);
    CHECK((back.linf - s.linf).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.column_names == s.column_names);
}

TEST_CASE("success rates count only originally-correct samples") {
    LinearStub model(stub_weights({1.0}, {-1.0}));  // predicts 0 for x > 0
    Matrix x_clean(4, 1), x_adv(4, 1);
    x_clean << 1.0, 1.0, -1.0, -1.0;
    x_adv << -1.0, 1.0, -1.0, 1.0;
    IntVector y(4);
    y << 0, 1, 1, 0;
    AttackReport r = attack_success_rate(model, x_clean, x_adv, y);
    CHECK(r.clean_accuracy == 0.5);
    CHECK(r.n_originally_correct == 2);
    CHECK(r.success_rate == 0.5);
    CHECK(r.adv_accuracy == 0.5);
}

TEST_CASE("attack parameters validate and round-trip through json") {
    for (AttackKind kind : all_attacks()) {
        AttackSpec spec = AttackSpec::defaults(kind);
        CHECK_NOTHROW(spec.validate());
        AttackSpec back = AttackSpec::from_json(spec.to_json());
        CHECK(back == spec);
        CHECK(attack_from_string(to_string(kind)) == kind);
    }
    CHECK(AttackSpec::defaults(AttackKind::Fgsm).epsilon == 0.2);
    CHECK(AttackSpec::defaults(AttackKind::BimA).iterations == 10);
    CHECK(AttackSpec::defaults(AttackKind::DeepFool).overshoot == 0.02);
    CHECK(AttackSpec::defaults(AttackKind::Jsma).theta == 1.0);
    CHECK(AttackSpec::defaults(AttackKind::Cw).iterations == 100);

    AttackSpec bad = AttackSpec::defaults(AttackKind::Fgsm);
    bad.epsilon = -0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = AttackSpec::defaults(AttackKind::Fgsm);
    bad.clip_min = 2.0;  // empty clip box
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(attack_from_string("pgd"), ConfigError);
}
