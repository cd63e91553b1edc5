#pragma once

#include "triage/baselines.hpp"
#include "triage/corpus.hpp"
#include "triage/dualdnn.hpp"
#include "triage/features.hpp"
#include "triage/labeling.hpp"
#include "triage/orgchart.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace triage {

/// Case indices sorted by submission time (stable on ties).
std::vector<std::size_t> time_order(const Corpus& corpus);

struct HoldoutSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

/// Contiguous time-ordered segments; boundaries are floors of the
/// cumulative fractions.
HoldoutSplit holdout_split(const Corpus& corpus, const std::array<double, 3>& fractions = {0.8, 0.1, 0.1});

struct IlcvRun {
    int index = 0; ///< 1-based run number, equal to the tested fold
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// [begin, end) positions of each fold in time order; earlier folds take
/// the remainder.
std::vector<std::pair<std::size_t, std::size_t>> fold_bounds(std::size_t m, int n_folds);

/// Run i trains on folds [0, i) and tests on fold i, for i = 1..n_folds-1.
std::vector<IlcvRun> ilcv_runs(const Corpus& corpus, int n_folds = 11);

/// Indices of the k largest entries, descending; ties by lowest index.
std::vector<Eigen::Index> top_k_indices(const Eigen::RowVectorXd& pmf, int k);

/// Per row: does the top-1 target class appear among the top-k predictions?
std::vector<bool> topk_hits(const Eigen::MatrixXd& predictions, const std::vector<Eigen::Index>& target_class, int k);
std::vector<bool> topk_hits(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& targets, int k);

/// 100 * hits / m. Throws ValidationError when k is outside [1, n_classes].
double topk_accuracy(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& targets, int k);

enum class ModelType { dual, developer, naive_bayes, logistic };

const char* to_string(ModelType type);
const char* display_name(ModelType type);
ModelType parse_model_type(const std::string& s);
bool is_stochastic(ModelType type);

enum class SplitKind { holdout, ilcv };

struct ExperimentConfig {
    std::vector<ModelType> models{ModelType::dual, ModelType::developer, ModelType::naive_bayes, ModelType::logistic};
    LabelMode label_mode = LabelMode::weighted;
    WeightConfig weights;
    SplitKind split = SplitKind::holdout;
    std::array<double, 3> fractions{0.8, 0.1, 0.1};
    int folds = 11;
    std::vector<int> ks{1, 2, 3, 5, 10};
    int repeats = 3;
    LsaConfig lsa;
    ModelOptions network;
    TrainConfig team_stage{Stage::team};
    TrainConfig dev_stage{Stage::developer};
    TrainConfig joint_stage{Stage::joint};
    double nb_alpha = 1.0;
    LogisticConfig logistic;
    std::uint64_t seed = 0;
};

struct ResultCell {
    std::string model;
    int run = 0;      ///< 0 for holdout, fold number for IL-CV
    std::string head; ///< "team" or "developer"
    int k = 1;
    double mean = 0.0;
    double spread = 0.0; ///< sample standard deviation over repeats
    int samples = 1;
};

struct RunInfo {
    int run = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::int64_t max_train_time = 0;
    std::int64_t min_test_time = 0;
    double team_coverage = 0.0; ///< share of test cases whose target team occurs in training
    double dev_coverage = 0.0;
    std::size_t empty_latent_test_cases = 0;
    int lsa_rank = 0;
};

struct EvalReport {
    std::string split;
    std::string label_mode;
    std::vector<std::string> models; ///< display names, config order
    std::vector<int> ks;
    std::vector<RunInfo> runs;
    std::vector<ResultCell> cells;

    std::optional<ResultCell> find(const std::string& model, int run, const std::string& head, int k) const;
    /// Mean over runs of the per-run means; nullopt when no run has the cell.
    std::optional<double> average(const std::string& model, const std::string& head, int k) const;
};

/// Full protocol: per run, fit features on the training slice, derive
/// targets, train each model and score both heads on the test slice.
EvalReport run_experiment(const Corpus& corpus, const OrgChart& chart, const ExperimentConfig& config);

/// Holdout layout: one row per model, one column per k.
std::string render_holdout_table(const EvalReport& report, const std::string& head);
/// IL-CV layout: one column per run plus Average, at a single k.
std::string render_ilcv_table(const EvalReport& report, const std::string& head, int k);
std::string render_report(const EvalReport& report, int ilcv_k = 10);

/// Canonical JSON (sorted keys), stable across runs.
std::string report_to_json(const EvalReport& report);

struct WeightingDelta {
    std::string head;
    std::optional<double> average_increase; ///< over all models present in both reports
    std::optional<double> dual_increase;
};

/// Increase of the k accuracy (IL-CV: run average; holdout: the single run)
/// from the non-weighted report to the weighted one.
std::vector<WeightingDelta> weighting_delta(const EvalReport& weighted, const EvalReport& unweighted, int k = 10);
std::string render_weighting_delta(const std::vector<WeightingDelta>& rows, int k = 10);

} // namespace triage
