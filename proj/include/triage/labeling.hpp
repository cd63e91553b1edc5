#pragma once

#include "triage/corpus.hpp"
#include "triage/orgchart.hpp"

#include <optional>
#include <vector>

namespace triage {

/// Per-category response weights. The scores they produce feed a softmax
/// directly, so the weights also set the effective temperature.
struct WeightConfig {
    double owner_weight = 0.5;
    double commenter_weight = 0.5;
    double closer_weight = 0.5;

    bool operator==(const WeightConfig&) const = default;
};

void validate(const WeightConfig& w);

enum class Level { team, developer };

/// How training targets are derived from an owner history.
enum class LabelMode {
    weighted, ///< softmax over owner-importance-weighted scores
    closer,   ///< one-hot at the closer (conventional multi-class labeling)
};

const char* to_string(LabelMode mode);
LabelMode parse_label_mode(const std::string& s);

struct SoftTarget {
    std::vector<double> team_pmf;
    std::vector<double> dev_pmf;
};

struct ResponseCounts {
    double owner = 0;
    double commenter = 0;
    double closer = 0;

    double total() const { return owner + commenter + closer; }
};

/// Per developer position: responses in each category (repeats counted).
std::vector<ResponseCounts> response_counts(const OwnerHistory& history, const OutputEncoding& enc);

/// Weighted response accumulation over developers, or over teams with each
/// response credited to the responder's manager.
std::vector<double> raw_scores(const OwnerHistory& history, const OutputEncoding& enc, const WeightConfig& w,
                               Level level);

/// exp(s_j) / sum_k exp(s_k), computed with max subtraction.
std::vector<double> soft_target(const std::vector<double>& scores);

/// Ratio of raw counts to weighted contributions for one index; nullopt
/// when the index has no responses.
std::optional<double> effective_temperature(const ResponseCounts& counts, const WeightConfig& w);

/// 1 at argmax (lowest index on ties). Throws ValidationError on an all-zero input.
std::vector<double> one_hot_target(const std::vector<double>& scores);

std::size_t argmax(const std::vector<double>& values);

/// Soft targets at both levels.
SoftTarget make_soft_target(const OwnerHistory& history, const OutputEncoding& enc, const WeightConfig& w);

/// One-hot targets at both levels: at the closer (LabelMode::closer) or at
/// the argmax of the weighted scores (LabelMode::weighted).
SoftTarget make_one_hot_target(const OwnerHistory& history, const OutputEncoding& enc, const WeightConfig& w,
                               LabelMode mode);

/// Training targets for a model: soft targets for weighted multi-label
/// learning, one-hot at the closer otherwise.
SoftTarget make_target(const OwnerHistory& history, const OutputEncoding& enc, const WeightConfig& w,
                       LabelMode mode);

} // namespace triage
