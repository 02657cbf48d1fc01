#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advens/data.hpp"
#include "advens/nn.hpp"

namespace advens {

enum class AttackKind { Fgsm, BimA, BimB, Jsma, DeepFool, Cw };

const std::vector<AttackKind>& all_attacks();
std::string to_string(AttackKind kind);
AttackKind attack_from_string(const std::string& name);

// Parameters for one attack. defaults(kind) fills the published per-attack row;
// fields a kind does not use are ignored by it.
struct AttackSpec {
    AttackKind kind = AttackKind::Fgsm;
    double epsilon = 0.2;    // max-norm budget (FGSM/BIM); L-inf cap for DeepFool
    double clip_min = 0.0;
    double clip_max = 1.0;
    int iterations = 10;     // BIM rounds, DeepFool max rounds, CW descent steps
    double theta = 1.0;      // JSMA per-feature step
    double gamma = 1.0;      // JSMA max fraction of features perturbed
    double cw_c = 1.0;
    double cw_lr = 0.05;  // descent step; 0.01 stalls well short of typical margins in 100 steps
    double cw_kappa = 0.0;
    double overshoot = 0.02;  // DeepFool boundary overshoot

    static AttackSpec defaults(AttackKind kind);
    void validate() const;
    json to_json() const;
    static AttackSpec from_json(const json& j);
    bool operator==(const AttackSpec&) const = default;
};

// per-sample crafting flags
inline constexpr unsigned kAttackUnsuccessful = 1u;  // never crossed the boundary
inline constexpr unsigned kAttackDegenerate = 2u;    // vanishing gradient (DeepFool)
inline constexpr unsigned kAttackNoSaliency = 4u;    // saliency map all zero (JSMA)
inline constexpr unsigned kAttackAborted = 8u;       // non-finite objective (CW)

// Crafted adversarial features plus bookkeeping. x_adv lives in whatever space
// the attack ran in; craft_attack returns model-space features with norms taken
// in the rescaled [0,1] attack space where the eps budget applies.
struct AdversarialSet {
    AttackSpec spec;
    std::string victim_id;
    std::uint64_t seed = 0;
    Matrix x_adv;
    IntVector y;
    Vector linf, l2;
    IntVector l0;
    std::vector<unsigned> flags;
    std::vector<std::string> column_names;

    void save(const std::string& dir) const;
    static AdversarialSet load(const std::string& dir);
};

// piecewise clip to [lo, hi]
double clip(double v, double lo, double hi);
Matrix clip_matrix(const Matrix& x, double lo, double hi);

// sign with sign(0) = 0, so zero-gradient coordinates stay untouched
double sign0(double v);

// One-step max-norm attack: x + eps * sign(dL/dx), clipped.
AdversarialSet fgsm(const DifferentiableClassifier& model, const Matrix& x, const IntVector& y,
                    const AttackSpec& spec);

// Iterative FGSM with step eps/iterations, accumulated perturbation clamped to
// the eps ball before clipping. BIM-A freezes a sample once it misclassifies
// (already-wrong samples are never touched); BIM-B always runs every round.
AdversarialSet bim(const DifferentiableClassifier& model, const Matrix& x, const IntVector& y,
                   const AttackSpec& spec);

// Greedy saliency attack toward the opposite class. Columns belonging to a
// one-hot group (groups[i] >= 0) flip as a unit; continuous columns move by
// theta and clip. Stops on misclassification, an exhausted feature budget
// (ceil(gamma * d) changed coordinates), or an all-zero saliency map.
AdversarialSet jsma(const DifferentiableClassifier& model, const Matrix& x, const IntVector& y,
                    const AttackSpec& spec, const std::vector<int>& groups = {});

// positive-saliency map for one sample given d p_target/dx and d p_other/dx
Vector jsma_saliency(const Vector& target_grad, const Vector& other_grad);

// Binary DeepFool on the score difference g = s1 - s0: project onto the local
// linear boundary until the label flips, then apply the overshoot, cap the
// perturbation at eps per coordinate and clip. When y is given, samples the
// model already misclassifies are returned unperturbed.
AdversarialSet deepfool(const DifferentiableClassifier& model, const Matrix& x,
                        const AttackSpec& spec, const IntVector* y = nullptr);

// accumulated DeepFool perturbation before overshoot, cap and clip
Matrix deepfool_raw(const DifferentiableClassifier& model, const Matrix& x,
                    const AttackSpec& spec, const IntVector* y = nullptr);

// L2 Carlini-Wagner with tanh box change of variables and fixed-step descent on
// |delta|^2 + c * max(Z_true - Z_other, -kappa); keeps the smallest successful
// delta seen, else the final iterate flagged unsuccessful.
AdversarialSet cw(const DifferentiableClassifier& model, const Matrix& x, const IntVector& y,
                  const AttackSpec& spec);

// Per-column affine bridge between model space and the [0,1] attack box.
// Zero-range columns map with range 1 so the transform stays invertible.
struct BoxRescale {
    Vector lo, range;

    static BoxRescale fit(const Matrix& x);
    Matrix to_unit(const Matrix& x) const;
    Matrix to_native(const Matrix& u) const;
};

// Makes a model consume [0,1] attack-space features: inputs are mapped to model
// space before the wrapped forward pass and gradients are chain-ruled back.
class RescaledClassifier : public DifferentiableClassifier {
  public:
    RescaledClassifier(const DifferentiableClassifier& inner, BoxRescale rescale)
        : inner_(inner), rescale_(std::move(rescale)) {}

    int input_dim() const override { return inner_.input_dim(); }
    Matrix predict_probs(const Matrix& u) const override;
    Matrix class_scores(const Matrix& u) const override;
    Matrix loss_input_gradient(const Matrix& u, const IntVector& y) const override;
    Matrix prob_class_gradient(const Matrix& u, int c) const override;
    Matrix score_class_gradient(const Matrix& u, int c) const override;

  private:
    const DifferentiableClassifier& inner_;
    BoxRescale rescale_;
};

// Full crafting pipeline: rescale model-space features to [0,1] (ranges fitted
// on x), run the attack there against the wrapped victim, map the result back.
AdversarialSet craft_attack(const DifferentiableClassifier& victim, const Matrix& x,
                            const IntVector& y, const AttackSpec& spec,
                            const std::vector<int>& onehot_groups = {},
                            std::uint64_t seed = 0, const std::string& victim_id = "");

struct AttackReport {
    double clean_accuracy = 0.0;
    double adv_accuracy = 0.0;
    double success_rate = 0.0;  // originally-correct samples now misclassified
    std::size_t n_originally_correct = 0;
};

AttackReport attack_success_rate(const Classifier& model, const Matrix& x_clean,
                                 const Matrix& x_adv, const IntVector& y);

}  // namespace advens
