#pragma once

#include "triage/baselines.hpp"
#include "triage/dualdnn.hpp"
#include "triage/eval.hpp"
#include "triage/features.hpp"
#include "triage/labeling.hpp"
#include "triage/orgchart.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace triage {

inline constexpr int kCheckpointVersion = 1;

/// Single-file model container: one canonical JSON header line followed by
/// raw little-endian float64 tensor payloads in header order.
struct Checkpoint {
    ModelType kind = ModelType::dual;
    OutputEncoding encoding;
    std::vector<std::string> schema;
    LsaModel lsa;
    LabelMode label_mode = LabelMode::weighted;
    WeightConfig weights;
    /// Free-form string settings (seed, training flags, corpus hash).
    std::map<std::string, std::string> metadata;

    std::optional<DualDnnModel> network;
    std::optional<NaiveBayesModel> team_nb;
    std::optional<NaiveBayesModel> dev_nb;
    std::optional<LogisticModel> team_logistic;
    std::optional<LogisticModel> dev_logistic;
};

std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint parse_checkpoint(const std::string& bytes);
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

struct CasePrediction {
    Eigen::RowVectorXd team_pmf; ///< empty when the model has no team output
    Eigen::RowVectorXd dev_pmf;
};

/// Eval-mode prediction for one case. Throws CompatibilityError when the
/// case carries features outside the checkpoint schema.
CasePrediction predict_case(const Checkpoint& ckpt, const BugCase& bug);

} // namespace triage
