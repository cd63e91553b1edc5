#pragma once

#include "triage/orgchart.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace triage {

/// Raw owner history of one bug. Repeated ids are repeated responses.
struct OwnerHistory {
    std::vector<std::string> owners;     ///< interim owners, closer excluded
    std::vector<std::string> commenters;
    std::string closer;

    bool operator==(const OwnerHistory&) const = default;
};

struct BugCase {
    std::string id;
    std::int64_t submitted_at = 0;
    std::map<std::string, std::string> features;
    OwnerHistory history;

    bool operator==(const BugCase&) const = default;
};

struct Corpus {
    std::vector<std::string> schema; ///< feature names, first-seen order
    std::vector<BugCase> cases;

    bool operator==(const Corpus&) const = default;
};

/// One record per line. Absent schema features are filled with "".
Corpus parse_corpus(const std::string& text);
Corpus load_corpus(const std::string& path);
std::string format_corpus(const Corpus& corpus);
void save_corpus(const Corpus& corpus, const std::string& path);

/// Parses a single record line. With `require_history` false the history
/// object may be omitted (prediction input).
BugCase parse_case(const std::string& line, bool require_history = true);
std::string format_case(const BugCase& bug, const std::vector<std::string>& schema);

/// FNV-1a of the canonical serialization.
std::uint64_t corpus_hash(const Corpus& corpus);

struct SyntheticConfig {
    int n_teams = 6;
    int devs_per_team = 4;
    int n_cases = 3000;
    int topical_features = 3;      ///< features carrying team/dev topic tokens
    int context_features = 2;      ///< features with uniform noise tokens
    int tokens_per_feature = 4;
    int team_vocab = 30;           ///< topic tokens per team pool
    int dev_vocab = 6;             ///< personal tokens per developer
    int noise_vocab = 200;         ///< shared background tokens
    double signal_rate = 0.9;      ///< P(topical token comes from the true team's pools)
    double dev_affinity = 0.5;     ///< P(signal token is the closer's personal token)
    double intra_team_rate = 0.9;  ///< P(history participant is drawn from the true team)
    double closer_comment_rate = 0.8; ///< P(the closer also comments on the bug)
    int max_owners = 3;
    int max_commenters = 3;
    std::int64_t start_time = 1540857600; // 2018-10-30
    int mean_gap_seconds = 120;

    bool operator==(const SyntheticConfig&) const = default;
};

/// Applies `key = value` overrides; unknown keys are rejected.
void apply_overrides(SyntheticConfig& config, const std::map<std::string, std::string>& values,
                     bool ignore_unknown = false);
void validate(const SyntheticConfig& config);

struct SyntheticData {
    Corpus corpus;
    OrgChart chart;
};

/// Deterministic for fixed (config, seed).
SyntheticData generate_synthetic(const SyntheticConfig& config, std::uint64_t seed);

} // namespace triage
