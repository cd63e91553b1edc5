#pragma once

#include "triage/features.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace triage {

/// Multinomial naive Bayes over raw token counts with Laplace smoothing.
struct NaiveBayesModel {
    Eigen::RowVectorXd log_prior;     ///< n_classes
    Eigen::MatrixXd log_likelihood;   ///< n_classes x n_tokens
    double alpha = 1.0;

    int n_classes() const { return static_cast<int>(log_prior.size()); }
};

/// Class priors are smoothed with the same alpha, so classes without
/// examples keep a small non-zero prior.
NaiveBayesModel train_nb(const SparseRows& counts, const std::vector<int>& labels, int n_classes, double alpha = 1.0);

Eigen::RowVectorXd predict_pmf(const NaiveBayesModel& model, const SparseRows& counts, Eigen::Index row);
Eigen::MatrixXd predict_pmf(const NaiveBayesModel& model, const SparseRows& counts);

/// Multinomial logistic regression (softmax regression) on dense inputs.
struct LogisticModel {
    Eigen::MatrixXd weight; ///< n_features x n_classes
    Eigen::RowVectorXd bias;
};

struct LogisticConfig {
    int epochs = 300;
    double learning_rate = 0.5;
    double l2 = 1e-4;
};

/// Mean softmax cross-entropy over rows plus (l2/2)*|W|^2.
double logistic_loss(const LogisticModel& model, const Eigen::MatrixXd& inputs, const std::vector<int>& labels,
                     double l2, LogisticModel* grad = nullptr);

/// Full-batch gradient descent from zero weights. Throws ValidationError when
/// fewer than two classes occur in `labels`.
LogisticModel train_logreg(const Eigen::MatrixXd& inputs, const std::vector<int>& labels, int n_classes,
                           const LogisticConfig& cfg = {});

Eigen::MatrixXd predict_pmf(const LogisticModel& model, const Eigen::MatrixXd& inputs);

} // namespace triage
