#include "triage/baselines.hpp"

#include "triage/dualdnn.hpp"
#include "triage/error.hpp"

#include <cmath>
#include <set>

namespace triage {

namespace {

void check_labels(const std::vector<int>& labels, Eigen::Index rows, int n_classes)
{
    if (static_cast<Eigen::Index>(labels.size()) != rows) {
        throw ValidationError("label count does not match the number of rows");
    }
    if (n_classes < 1) {
        throw ValidationError("need at least one class");
    }
    for (const int y : labels) {
        if (y < 0 || y >= n_classes) {
            throw ValidationError("label " + std::to_string(y) + " outside [0, " + std::to_string(n_classes) + ")");
        }
    }
}

} // namespace

NaiveBayesModel train_nb(const SparseRows& counts, const std::vector<int>& labels, int n_classes, double alpha)
{
    if (!(alpha > 0.0)) {
        throw ValidationError("naive Bayes smoothing alpha must be positive");
    }
    check_labels(labels, counts.rows(), n_classes);
    const auto vocab = counts.cols();
    Eigen::MatrixXd token_counts = Eigen::MatrixXd::Zero(n_classes, vocab);
    Eigen::RowVectorXd class_counts = Eigen::RowVectorXd::Zero(n_classes);
    for (Eigen::Index r = 0; r < counts.outerSize(); ++r) {
        const int y = labels[static_cast<std::size_t>(r)];
        class_counts[y] += 1.0;
        for (SparseRows::InnerIterator it(counts, r); it; ++it) {
            if (it.value() < 0.0) {
                throw ValidationError("naive Bayes needs non-negative counts");
            }
            token_counts(y, it.col()) += it.value();
        }
    }
    NaiveBayesModel m;
    m.alpha = alpha;
    const double n = static_cast<double>(labels.size());
    m.log_prior = ((class_counts.array() + alpha) / (n + alpha * n_classes)).log().matrix();
    m.log_likelihood.resize(n_classes, vocab);
    for (int c = 0; c < n_classes; ++c) {
        const double denom = token_counts.row(c).sum() + alpha * static_cast<double>(vocab);
        m.log_likelihood.row(c) = ((token_counts.row(c).array() + alpha) / denom).log().matrix();
    }
    return m;
}

Eigen::RowVectorXd predict_pmf(const NaiveBayesModel& model, const SparseRows& counts, Eigen::Index row)
{
    if (counts.cols() != model.log_likelihood.cols()) {
        throw ValidationError("naive Bayes input has " + std::to_string(counts.cols()) + " columns, model expects " +
                              std::to_string(model.log_likelihood.cols()));
    }
    Eigen::RowVectorXd score = model.log_prior;
    for (SparseRows::InnerIterator it(counts, row); it; ++it) {
        score += it.value() * model.log_likelihood.col(it.col()).transpose();
    }
    return softmax(score);
}

Eigen::MatrixXd predict_pmf(const NaiveBayesModel& model, const SparseRows& counts)
{
    Eigen::MatrixXd out(counts.rows(), model.n_classes());
    for (Eigen::Index r = 0; r < counts.rows(); ++r) {
        out.row(r) = predict_pmf(model, counts, r);
    }
    return out;
}

double logistic_loss(const LogisticModel& model, const Eigen::MatrixXd& inputs, const std::vector<int>& labels,
                     double l2, LogisticModel* grad)
{
    if (inputs.cols() != model.weight.rows()) {
        throw ValidationError("logistic input has " + std::to_string(inputs.cols()) + " columns, model expects " +
                              std::to_string(model.weight.rows()));
    }
    const auto n = inputs.rows();
    Eigen::MatrixXd logits = inputs * model.weight;
    logits.rowwise() += model.bias;
    const Eigen::MatrixXd p = softmax_rows(logits);
    double loss = 0.0;
    Eigen::MatrixXd delta = p;
    for (Eigen::Index r = 0; r < n; ++r) {
        const int y = labels[static_cast<std::size_t>(r)];
        loss -= std::log(std::max(p(r, y), 1e-300));
        delta(r, y) -= 1.0;
    }
    loss /= static_cast<double>(n);
    loss += 0.5 * l2 * model.weight.squaredNorm();
    if (grad != nullptr) {
        delta /= static_cast<double>(n);
        grad->weight = inputs.transpose() * delta + l2 * model.weight;
        grad->bias = delta.colwise().sum();
    }
    return loss;
}

LogisticModel train_logreg(const Eigen::MatrixXd& inputs, const std::vector<int>& labels, int n_classes,
                           const LogisticConfig& cfg)
{
    check_labels(labels, inputs.rows(), n_classes);
    if (std::set<int>(labels.begin(), labels.end()).size() < 2) {
        throw ValidationError("logistic regression needs at least two distinct classes");
    }
    if (cfg.epochs < 0 || !(cfg.learning_rate >= 0.0) || !(cfg.l2 >= 0.0)) {
        throw ValidationError("logistic config: epochs, learning_rate and l2 must be non-negative");
    }
    LogisticModel m{Eigen::MatrixXd::Zero(inputs.cols(), n_classes), Eigen::RowVectorXd::Zero(n_classes)};
    LogisticModel g;
    for (int e = 0; e < cfg.epochs; ++e) {
        logistic_loss(m, inputs, labels, cfg.l2, &g);
        m.weight -= cfg.learning_rate * g.weight;
        m.bias -= cfg.learning_rate * g.bias;
    }
    return m;
}

Eigen::MatrixXd predict_pmf(const LogisticModel& model, const Eigen::MatrixXd& inputs)
{
    if (inputs.cols() != model.weight.rows()) {
        throw ValidationError("logistic input has " + std::to_string(inputs.cols()) + " columns, model expects " +
                              std::to_string(model.weight.rows()));
    }
    Eigen::MatrixXd logits = inputs * model.weight;
    logits.rowwise() += model.bias;
    return softmax_rows(logits);
}

} // namespace triage
