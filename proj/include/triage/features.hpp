#pragma once

#include "triage/corpus.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace triage {

using TokenList = std::vector<std::string>;
using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Lowercases each feature value and splits it on non-alphanumeric
/// characters. Tokens are namespaced as `<feature>=<token>`. A value that is
/// a plain number is kept whole as a single token.
TokenList tokenize(const BugCase& bug);

class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> document_frequency,
               std::size_t n_documents);

    std::optional<std::size_t> find(const std::string& token) const;
    std::size_t size() const { return tokens_.size(); }
    const std::vector<std::string>& tokens() const { return tokens_; }
    const std::vector<std::size_t>& document_frequency() const { return df_; }
    std::size_t n_documents() const { return n_documents_; }

    bool operator==(const Vocabulary& o) const
    {
        return tokens_ == o.tokens_ && df_ == o.df_ && n_documents_ == o.n_documents_;
    }

private:
    std::vector<std::string> tokens_;
    std::vector<std::size_t> df_;
    std::size_t n_documents_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Vocabulary in first-seen order with document frequencies.
Vocabulary build_vocabulary(const std::vector<TokenList>& docs);

/// Smoothed idf: ln((1 + N) / (1 + df)) + 1.
Eigen::VectorXd inverse_document_frequency(const Vocabulary& vocab);

struct TfidfModel {
    Vocabulary vocab;
    Eigen::VectorXd idf;
};

/// Throws ValidationError on an empty slice.
TfidfModel fit_tfidf(const std::vector<TokenList>& docs);

/// Raw token counts; tokens outside the vocabulary are ignored.
SparseRows count_matrix(const std::vector<TokenList>& docs, const Vocabulary& vocab);
SparseRows tfidf_matrix(const std::vector<TokenList>& docs, const TfidfModel& model);

struct SvdOptions {
    int oversample = 8;
    int power_iterations = 2;     ///< minimum subspace iterations
    int max_power_iterations = 60;
    double tolerance = 1e-13;     ///< stop once leading values move less than tolerance * s_max
    std::uint64_t seed = 0;
};

struct SvdResult {
    Eigen::MatrixXd u;  ///< rows x k
    Eigen::VectorXd s;  ///< k, descending
    Eigen::MatrixXd v;  ///< cols x k
    int iterations = 0;
};

/// Randomized range finder with subspace (power) iteration followed by an
/// exact SVD of the small projected matrix.
SvdResult truncated_svd(const Eigen::MatrixXd& a, int k, const SvdOptions& options = {});
SvdResult truncated_svd(const SparseRows& a, int k, const SvdOptions& options = {});

struct LsaConfig {
    int rank = 64;
    SvdOptions svd;
};

struct LsaModel {
    Vocabulary vocab;
    Eigen::VectorXd idf;
    Eigen::MatrixXd projection;       ///< |vocab| x k, right singular vectors
    Eigen::VectorXd singular_values;  ///< k, descending

    int rank() const { return static_cast<int>(projection.cols()); }
};

/// Fits tf-idf and the projection on `docs`. The rank is capped at
/// min(docs, vocabulary) so small training slices still fit.
LsaModel fit_lsa(const std::vector<TokenList>& docs, const LsaConfig& config);

/// tf-idf row times projection. Unseen tokens contribute nothing.
Eigen::RowVectorXd project(const TokenList& tokens, const LsaModel& model);
Eigen::MatrixXd project_all(const std::vector<TokenList>& docs, const LsaModel& model);

/// Number of tokens in `tokens` present in the model vocabulary.
std::size_t known_token_count(const TokenList& tokens, const LsaModel& model);

} // namespace triage
