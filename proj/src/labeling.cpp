#include "triage/labeling.hpp"

#include "triage/error.hpp"

#include <algorithm>
#include <cmath>

namespace triage {

void validate(const WeightConfig& w)
{
    for (const double v : {w.owner_weight, w.commenter_weight, w.closer_weight}) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ValidationError("label weights must be finite and non-negative");
        }
    }
    if (w.owner_weight == 0.0 && w.commenter_weight == 0.0 && w.closer_weight == 0.0) {
        throw ValidationError("label weights must not all be zero");
    }
}

const char* to_string(LabelMode mode)
{
    return mode == LabelMode::weighted ? "weighted" : "closer";
}

LabelMode parse_label_mode(const std::string& s)
{
    if (s == "weighted") {
        return LabelMode::weighted;
    }
    if (s == "closer") {
        return LabelMode::closer;
    }
    throw ValidationError("unknown label mode '" + s + "'");
}

std::vector<ResponseCounts> response_counts(const OwnerHistory& history, const OutputEncoding& enc)
{
    std::vector<ResponseCounts> counts(enc.n_devs());
    for (const auto& id : history.owners) {
        counts[resolve_dev(id, enc)].owner += 1;
    }
    for (const auto& id : history.commenters) {
        counts[resolve_dev(id, enc)].commenter += 1;
    }
    counts[resolve_dev(history.closer, enc)].closer += 1;
    return counts;
}

std::vector<double> raw_scores(const OwnerHistory& history, const OutputEncoding& enc, const WeightConfig& w,
                               Level level)
{
    const bool teams = level == Level::team;
    std::vector<double> base(teams ? enc.n_teams() : enc.n_devs(), 0.0);
    auto slot = [&](const std::string& id) -> double& {
        const auto d = resolve_dev(id, enc);
        return base[teams ? enc.dev_team()[d] : d];
    };
    for (const auto& id : history.owners) {
        slot(id) += w.owner_weight;
    }
    for (const auto& id : history.commenters) {
        slot(id) += w.commenter_weight;
    }
    slot(history.closer) += w.closer_weight;
    return base;
}

std::vector<double> soft_target(const std::vector<double>& scores)
{
    std::vector<double> out(scores.size());
    if (scores.empty()) {
        return out;
    }
    const double peak = *std::max_element(scores.begin(), scores.end());
    double z = 0.0;
    for (std::size_t j = 0; j < scores.size(); ++j) {
        out[j] = std::exp(scores[j] - peak);
        z += out[j];
    }
    for (auto& v : out) {
        v /= z;
    }
    return out;
}

std::optional<double> effective_temperature(const ResponseCounts& c, const WeightConfig& w)
{
    const double responses = c.total();
    const double contribution = c.owner * w.owner_weight + c.commenter * w.commenter_weight + c.closer * w.closer_weight;
    if (responses == 0.0 || contribution == 0.0) {
        return std::nullopt;
    }
    return responses / contribution;
}

std::size_t argmax(const std::vector<double>& values)
{
    std::size_t best = 0;
    for (std::size_t j = 1; j < values.size(); ++j) {
        if (values[j] > values[best]) {
            best = j;
        }
    }
    return best;
}

std::vector<double> one_hot_target(const std::vector<double>& scores)
{
    if (std::all_of(scores.begin(), scores.end(), [](double v) { return v == 0.0; })) {
        throw ValidationError("no signal: all label scores are zero");
    }
    std::vector<double> out(scores.size(), 0.0);
    out[argmax(scores)] = 1.0;
    return out;
}

SoftTarget make_soft_target(const OwnerHistory& history, const OutputEncoding& enc, const WeightConfig& w)
{
    return {soft_target(raw_scores(history, enc, w, Level::team)),
            soft_target(raw_scores(history, enc, w, Level::developer))};
}

SoftTarget make_one_hot_target(const OwnerHistory& history, const OutputEncoding& enc, const WeightConfig& w,
                               LabelMode mode)
{
    if (mode == LabelMode::weighted) {
        return {one_hot_target(raw_scores(history, enc, w, Level::team)),
                one_hot_target(raw_scores(history, enc, w, Level::developer))};
    }
    SoftTarget t{std::vector<double>(enc.n_teams(), 0.0), std::vector<double>(enc.n_devs(), 0.0)};
    const auto d = resolve_dev(history.closer, enc);
    t.dev_pmf[d] = 1.0;
    t.team_pmf[enc.dev_team()[d]] = 1.0;
    return t;
}

SoftTarget make_target(const OwnerHistory& history, const OutputEncoding& enc, const WeightConfig& w, LabelMode mode)
{
    if (mode == LabelMode::weighted) {
        return make_soft_target(history, enc, w);
    }
    return make_one_hot_target(history, enc, w, LabelMode::closer);
}

} // namespace triage
