#include "triage/features.hpp"

#include "triage/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace triage {

namespace {

bool token_char(unsigned char c)
{
    return std::isalnum(c) != 0 || c >= 0x80;
}

bool is_number(const std::string& s)
{
    if (s.empty()) {
        return false;
    }
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    return res.ec == std::errc{} && res.ptr == end;
}

} // namespace

TokenList tokenize(const BugCase& bug)
{
    TokenList out;
    for (const auto& [name, raw] : bug.features) {
        std::string value;
        value.reserve(raw.size());
        for (const unsigned char c : raw) {
            value.push_back(static_cast<char>(std::tolower(c)));
        }
        const auto first = value.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) {
            continue;
        }
        const auto trimmed = value.substr(first, value.find_last_not_of(" \t\r\n") - first + 1);
        if (is_number(trimmed)) {
            out.push_back(name + "=" + trimmed);
            continue;
        }
        std::string cur;
        for (const unsigned char c : value) {
            if (token_char(c)) {
                cur.push_back(static_cast<char>(c));
            } else if (!cur.empty()) {
                out.push_back(name + "=" + cur);
                cur.clear();
            }
        }
        if (!cur.empty()) {
            out.push_back(name + "=" + cur);
        }
    }
    return out;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> document_frequency,
                       std::size_t n_documents)
    : tokens_(std::move(tokens)), df_(std::move(document_frequency)), n_documents_(n_documents)
{
    if (tokens_.size() != df_.size()) {
        throw ValidationError("vocabulary: token and frequency lists differ in length");
    }
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (df_[i] < 1) {
            throw ValidationError("vocabulary: document frequency must be >= 1");
        }
        if (!index_.emplace(tokens_[i], i).second) {
            throw ValidationError("vocabulary: duplicate token '" + tokens_[i] + "'");
        }
    }
}

std::optional<std::size_t> Vocabulary::find(const std::string& token) const
{
    const auto it = index_.find(token);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Vocabulary build_vocabulary(const std::vector<TokenList>& docs)
{
    std::vector<std::string> tokens;
    std::vector<std::size_t> df;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::size_t> last_doc;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& tok : docs[d]) {
            const auto [it, inserted] = index.emplace(tok, tokens.size());
            if (inserted) {
                tokens.push_back(tok);
                df.push_back(1);
                last_doc.push_back(d);
            } else if (last_doc[it->second] != d) {
                ++df[it->second];
                last_doc[it->second] = d;
            }
        }
    }
    return Vocabulary(std::move(tokens), std::move(df), docs.size());
}

Eigen::VectorXd inverse_document_frequency(const Vocabulary& vocab)
{
    Eigen::VectorXd idf(static_cast<Eigen::Index>(vocab.size()));
    const double n = static_cast<double>(vocab.n_documents());
    for (std::size_t t = 0; t < vocab.size(); ++t) {
        idf[static_cast<Eigen::Index>(t)] =
            std::log((1.0 + n) / (1.0 + static_cast<double>(vocab.document_frequency()[t]))) + 1.0;
    }
    return idf;
}

TfidfModel fit_tfidf(const std::vector<TokenList>& docs)
{
    if (docs.empty()) {
        throw ValidationError("tf-idf: cannot fit on an empty slice");
    }
    auto vocab = build_vocabulary(docs);
    auto idf = inverse_document_frequency(vocab);
    return {std::move(vocab), std::move(idf)};
}

SparseRows count_matrix(const std::vector<TokenList>& docs, const Vocabulary& vocab)
{
    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& tok : docs[d]) {
            if (const auto col = vocab.find(tok)) {
                entries.emplace_back(static_cast<int>(d), static_cast<int>(*col), 1.0);
            }
        }
    }
    SparseRows m(static_cast<Eigen::Index>(docs.size()), static_cast<Eigen::Index>(vocab.size()));
    m.setFromTriplets(entries.begin(), entries.end()); // duplicates are summed
    return m;
}

SparseRows tfidf_matrix(const std::vector<TokenList>& docs, const TfidfModel& model)
{
    auto m = count_matrix(docs, model.vocab);
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        for (SparseRows::InnerIterator it(m, r); it; ++it) {
            it.valueRef() *= model.idf[it.col()];
        }
    }
    return m;
}

LsaModel fit_lsa(const std::vector<TokenList>& docs, const LsaConfig& config)
{
    auto tfidf = fit_tfidf(docs);
    const auto matrix = tfidf_matrix(docs, tfidf);
    const auto cap = static_cast<int>(std::min(matrix.rows(), matrix.cols()));
    if (cap < 1) {
        throw ValidationError("lsa: training slice has no tokens");
    }
    const int rank = std::min(config.rank, cap);
    auto svd = truncated_svd(matrix, rank, config.svd);
    return {std::move(tfidf.vocab), std::move(tfidf.idf), std::move(svd.v), std::move(svd.s)};
}

Eigen::RowVectorXd project(const TokenList& tokens, const LsaModel& model)
{
    Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(model.projection.cols());
    for (const auto& tok : tokens) {
        if (const auto col = model.vocab.find(tok)) {
            const auto c = static_cast<Eigen::Index>(*col);
            out += model.idf[c] * model.projection.row(c);
        }
    }
    return out;
}

Eigen::MatrixXd project_all(const std::vector<TokenList>& docs, const LsaModel& model)
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(docs.size()), model.projection.cols());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        out.row(static_cast<Eigen::Index>(d)) = project(docs[d], model);
    }
    return out;
}

std::size_t known_token_count(const TokenList& tokens, const LsaModel& model)
{
    return static_cast<std::size_t>(
        std::count_if(tokens.begin(), tokens.end(), [&](const auto& t) { return model.vocab.find(t).has_value(); }));
}

} // namespace triage
