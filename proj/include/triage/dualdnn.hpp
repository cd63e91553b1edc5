#pragma once

#include "triage/orgchart.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace triage {

enum class NetworkKind {
    dual,      ///< team head + developer head fed by team logits
    developer, ///< developer head only (ablation)
};

const char* to_string(NetworkKind kind);

/// Affine layer acting on row vectors: y = x * weight + bias.
struct DenseLayer {
    Eigen::MatrixXd weight;
    Eigen::MatrixXd bias; ///< 1 x out
};

/// Two hidden layers feeding a team head and a developer head. The
/// developer head also sees the raw team logits through `team_to_dev`.
struct DualDnnModel {
    NetworkKind kind = NetworkKind::dual;
    int input_dim = 0;
    int hidden_dim = 0;
    int n_teams = 0;
    int n_devs = 0;
    double leaky_slope = 0.2;
    double dropout = 0.1;
    std::uint64_t encoding_fingerprint = 0;

    DenseLayer hidden1;      ///< input_dim x hidden_dim
    DenseLayer hidden2;      ///< hidden_dim x hidden_dim
    DenseLayer team_head;    ///< hidden_dim x n_teams (empty for NetworkKind::developer)
    DenseLayer dev_head;     ///< hidden_dim x n_devs
    Eigen::MatrixXd team_to_dev; ///< n_teams x n_devs (empty for NetworkKind::developer)

    bool has_team_head() const { return kind == NetworkKind::dual; }
};

/// Visits every tensor with its checkpoint name, in a fixed order. Tensors
/// absent from the model kind are skipped.
template <typename Model, typename Fn>
void for_each_tensor(Model& m, Fn&& fn)
{
    fn("hidden1.weight", m.hidden1.weight);
    fn("hidden1.bias", m.hidden1.bias);
    fn("hidden2.weight", m.hidden2.weight);
    fn("hidden2.bias", m.hidden2.bias);
    if (m.kind == NetworkKind::dual) {
        fn("team_head.weight", m.team_head.weight);
        fn("team_head.bias", m.team_head.bias);
    }
    fn("dev_head.weight", m.dev_head.weight);
    fn("dev_head.bias", m.dev_head.bias);
    if (m.kind == NetworkKind::dual) {
        fn("team_to_dev.weight", m.team_to_dev);
    }
}

struct ModelOptions {
    NetworkKind kind = NetworkKind::dual;
    std::optional<int> hidden_dim; ///< defaults to twice the number of teams
    double leaky_slope = 0.2;
    double dropout = 0.1;
};

/// Glorot-uniform weights, zero biases. Deterministic per seed.
DualDnnModel init_model(const OutputEncoding& enc, int input_dim, std::uint64_t seed, const ModelOptions& options = {});

/// Same shapes, all zeros.
DualDnnModel zeros_like(const DualDnnModel& model);

enum class Mode { train, eval };

struct Prediction {
    Eigen::RowVectorXd team_logits; ///< empty for NetworkKind::developer
    Eigen::RowVectorXd dev_logits;
    Eigen::RowVectorXd team_pmf;
    Eigen::RowVectorXd dev_pmf;
};

/// Single-case forward pass. Train mode applies inverted dropout to both
/// hidden layers and requires `rng`.
Prediction forward(const DualDnnModel& model, const Eigen::RowVectorXd& x, Mode mode, std::mt19937_64* rng = nullptr);

struct BatchPrediction {
    Eigen::MatrixXd team_logits;
    Eigen::MatrixXd dev_logits;
    Eigen::MatrixXd team_pmf;
    Eigen::MatrixXd dev_pmf;
};

/// Eval-mode forward pass over rows of `inputs`.
BatchPrediction predict(const DualDnnModel& model, const Eigen::MatrixXd& inputs);

Eigen::RowVectorXd softmax(const Eigen::RowVectorXd& logits);
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

/// L = -(1/n) sum_j y_j log softmax(o)_j, with n = |o|.
double cross_entropy(const Eigen::RowVectorXd& logits, const Eigen::RowVectorXd& target);
/// dL/do_k = -(1/n) sum_j y_j (delta_jk - softmax(o)_k), valid for any target.
Eigen::RowVectorXd cross_entropy_gradient(const Eigen::RowVectorXd& logits, const Eigen::RowVectorXd& target);
/// Two-branch form for a one-hot target with value `positive_value` at `positive`.
Eigen::RowVectorXd cross_entropy_gradient_one_hot(const Eigen::RowVectorXd& logits, Eigen::Index positive,
                                                  double positive_value = 1.0);

/// Relative weight of each head in the objective.
struct HeadWeights {
    double team = 1.0;
    double dev = 1.0;
};

/// Mean per-case loss over the batch (weighted sum of both heads). When
/// `grad` is non-null it receives the gradient of every tensor. Train mode
/// samples dropout masks from `rng`.
double loss_and_gradient(const DualDnnModel& model, const Eigen::MatrixXd& inputs,
                         const Eigen::MatrixXd& team_targets, const Eigen::MatrixXd& dev_targets,
                         HeadWeights heads, Mode mode, std::mt19937_64* rng, DualDnnModel* grad);

enum class Stage { team, developer, joint };

const char* to_string(Stage stage);

struct TrainConfig {
    Stage stage = Stage::team;
    int epochs = 30;
    int batch_size = 32;
    double learning_rate = 2e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 0;
};

void validate(const TrainConfig& cfg);

struct TrainingSet {
    Eigen::MatrixXd inputs;       ///< cases x input_dim
    Eigen::MatrixXd team_targets; ///< cases x n_teams, rows are pmfs
    Eigen::MatrixXd dev_targets;  ///< cases x n_devs
    std::uint64_t encoding_fingerprint = 0;
};

struct TrainResult {
    DualDnnModel model;
    std::vector<double> epoch_loss; ///< mean training loss per epoch
};

/// Stage::team trains the hidden layers and team head on team targets.
/// Stage::developer freezes those and trains the developer head and
/// team-to-developer weights on developer targets. Stage::joint trains every
/// tensor on developer targets (used by the developer-only network).
TrainResult train_stage(const DualDnnModel& model, const TrainingSet& data, const TrainConfig& cfg);

/// Single-stage training of a NetworkKind::developer model.
TrainResult train_developer_dnn(const DualDnnModel& model, const TrainingSet& data, TrainConfig cfg);

struct TransferPolicy {
    /// Fresh hidden->developer weights for developers whose manager changed.
    bool reset_moved_hidden = false;
    /// Accept remaps that add or remove teams by resizing the team head.
    bool allow_team_change = false;
};

/// Rearranges developer- and team-indexed tensors to a new encoding.
/// Surviving ids keep their weights; new ids get freshly initialised weights.
DualDnnModel transfer_on_role_change(const DualDnnModel& model, const IndexRemap& remap,
                                     const OutputEncoding& new_encoding, const TransferPolicy& policy,
                                     std::uint64_t seed);

} // namespace triage
