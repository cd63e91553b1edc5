#include "triage/dualdnn.hpp"

#include "triage/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace triage {

namespace {

void glorot_fill(Eigen::MatrixXd& w, std::mt19937_64& rng, double fan_in, double fan_out)
{
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            w(r, c) = dist(rng);
        }
    }
}

Eigen::MatrixXd glorot(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng)
{
    Eigen::MatrixXd w(rows, cols);
    glorot_fill(w, rng, static_cast<double>(rows), static_cast<double>(cols));
    return w;
}

DenseLayer dense(Eigen::Index in, Eigen::Index out, std::mt19937_64& rng)
{
    return {glorot(in, out, rng), Eigen::MatrixXd::Zero(1, out)};
}

Eigen::MatrixXd leaky(const Eigen::MatrixXd& z, double slope)
{
    return z.unaryExpr([slope](double v) { return v >= 0.0 ? v : slope * v; });
}

Eigen::MatrixXd leaky_derivative(const Eigen::MatrixXd& z, double slope)
{
    return z.unaryExpr([slope](double v) { return v >= 0.0 ? 1.0 : slope; });
}

Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double keep = 1.0 - p;
    Eigen::MatrixXd mask(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            mask(r, c) = unit(rng) < keep ? 1.0 / keep : 0.0;
        }
    }
    return mask;
}

Eigen::MatrixXd add_bias(Eigen::MatrixXd z, const Eigen::MatrixXd& bias)
{
    z.rowwise() += bias.row(0);
    return z;
}

void check_input(const DualDnnModel& m, Eigen::Index cols)
{
    if (cols != m.input_dim) {
        throw ValidationError("network input has " + std::to_string(cols) + " columns, model expects " +
                              std::to_string(m.input_dim));
    }
}

struct Activations {
    Eigen::MatrixXd z1, h1, mask1, z2, h2, mask2, team, dev;
};

Activations run_forward(const DualDnnModel& m, const Eigen::MatrixXd& x, Mode mode, std::mt19937_64* rng)
{
    check_input(m, x.cols());
    const bool drop = mode == Mode::train && m.dropout > 0.0;
    if (drop && rng == nullptr) {
        throw ValidationError("train-mode forward needs a random generator");
    }
    Activations a;
    a.z1 = add_bias(x * m.hidden1.weight, m.hidden1.bias);
    a.h1 = leaky(a.z1, m.leaky_slope);
    if (drop) {
        a.mask1 = dropout_mask(a.h1.rows(), a.h1.cols(), m.dropout, *rng);
        a.h1 = a.h1.cwiseProduct(a.mask1);
    }
    a.z2 = add_bias(a.h1 * m.hidden2.weight, m.hidden2.bias);
    a.h2 = leaky(a.z2, m.leaky_slope);
    if (drop) {
        a.mask2 = dropout_mask(a.h2.rows(), a.h2.cols(), m.dropout, *rng);
        a.h2 = a.h2.cwiseProduct(a.mask2);
    }
    a.dev = add_bias(a.h2 * m.dev_head.weight, m.dev_head.bias);
    if (m.has_team_head()) {
        a.team = add_bias(a.h2 * m.team_head.weight, m.team_head.bias);
        a.dev += a.team * m.team_to_dev;
    }
    return a;
}

// Per-row gradient of the cross-entropy, scaled by `scale`; returns summed loss.
double head_loss(const Eigen::MatrixXd& logits, const Eigen::MatrixXd& targets, double scale, Eigen::MatrixXd* grad)
{
    if (targets.rows() != logits.rows() || targets.cols() != logits.cols()) {
        throw ValidationError("target shape does not match the output layer");
    }
    double total = 0.0;
    if (grad != nullptr) {
        grad->resize(logits.rows(), logits.cols());
    }
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
        const Eigen::RowVectorXd o = logits.row(r);
        const Eigen::RowVectorXd y = targets.row(r);
        total += cross_entropy(o, y);
        if (grad != nullptr) {
            grad->row(r) = scale * cross_entropy_gradient(o, y);
        }
    }
    return total;
}

struct AdamState {
    DualDnnModel m;
    DualDnnModel v;
    int step = 0;
};

bool trainable(Stage stage, const std::string& name)
{
    const bool head = name.rfind("dev_head.", 0) == 0 || name == "team_to_dev.weight";
    switch (stage) {
    case Stage::team:
        return !head;
    case Stage::developer:
        return head;
    case Stage::joint:
        return true;
    }
    return false;
}

} // namespace

const char* to_string(NetworkKind kind)
{
    return kind == NetworkKind::dual ? "dual" : "developer";
}

const char* to_string(Stage stage)
{
    switch (stage) {
    case Stage::team:
        return "team";
    case Stage::developer:
        return "developer";
    case Stage::joint:
        return "joint";
    }
    return "?";
}

DualDnnModel init_model(const OutputEncoding& enc, int input_dim, std::uint64_t seed, const ModelOptions& options)
{
    const auto n_teams = static_cast<int>(enc.n_teams());
    const auto n_devs = static_cast<int>(enc.n_devs());
    if (n_teams < 1 || n_devs < 1 || input_dim < 1) {
        throw ValidationError("network dimensions must be positive (teams, developers, input)");
    }
    DualDnnModel m;
    m.kind = options.kind;
    m.input_dim = input_dim;
    m.hidden_dim = options.hidden_dim.value_or(2 * n_teams);
    if (m.hidden_dim < 1) {
        throw ValidationError("hidden width must be positive");
    }
    m.n_teams = n_teams;
    m.n_devs = n_devs;
    m.leaky_slope = options.leaky_slope;
    m.dropout = options.dropout;
    if (!(m.dropout >= 0.0 && m.dropout < 1.0)) {
        throw ValidationError("dropout probability must lie in [0, 1)");
    }
    m.encoding_fingerprint = enc.fingerprint();

    std::mt19937_64 rng(seed);
    m.hidden1 = dense(input_dim, m.hidden_dim, rng);
    m.hidden2 = dense(m.hidden_dim, m.hidden_dim, rng);
    if (m.has_team_head()) {
        m.team_head = dense(m.hidden_dim, n_teams, rng);
    }
    m.dev_head = dense(m.hidden_dim, n_devs, rng);
    if (m.has_team_head()) {
        m.team_to_dev = glorot(n_teams, n_devs, rng);
    }
    return m;
}

DualDnnModel zeros_like(const DualDnnModel& model)
{
    DualDnnModel out = model;
    for_each_tensor(out, [](const char*, Eigen::MatrixXd& t) { t.setZero(); });
    return out;
}

Eigen::RowVectorXd softmax(const Eigen::RowVectorXd& logits)
{
    const double peak = logits.maxCoeff();
    Eigen::RowVectorXd e = (logits.array() - peak).exp().matrix();
    return e / e.sum();
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits)
{
    Eigen::MatrixXd out(logits.rows(), logits.cols());
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
        out.row(r) = softmax(logits.row(r));
    }
    return out;
}

double cross_entropy(const Eigen::RowVectorXd& logits, const Eigen::RowVectorXd& target)
{
    const double peak = logits.maxCoeff();
    const double log_z = peak + std::log((logits.array() - peak).exp().sum());
    const double n = static_cast<double>(logits.size());
    double sum = 0.0;
    for (Eigen::Index j = 0; j < logits.size(); ++j) {
        if (target[j] != 0.0) {
            sum += target[j] * (logits[j] - log_z);
        }
    }
    return -sum / n;
}

Eigen::RowVectorXd cross_entropy_gradient(const Eigen::RowVectorXd& logits, const Eigen::RowVectorXd& target)
{
    const Eigen::RowVectorXd p = softmax(logits);
    const double n = static_cast<double>(logits.size());
    const double mass = target.sum();
    // -(1/n) * sum_j y_j (delta_jk - p_k) = -(1/n) * (y_k - p_k * sum_j y_j)
    return -(target - p * mass) / n;
}

Eigen::RowVectorXd cross_entropy_gradient_one_hot(const Eigen::RowVectorXd& logits, Eigen::Index positive,
                                                  double positive_value)
{
    const Eigen::RowVectorXd p = softmax(logits);
    const double n = static_cast<double>(logits.size());
    Eigen::RowVectorXd g(logits.size());
    for (Eigen::Index k = 0; k < logits.size(); ++k) {
        g[k] = k == positive ? -(positive_value / n) * (1.0 - p[k]) : (positive_value / n) * p[k];
    }
    return g;
}

Prediction forward(const DualDnnModel& model, const Eigen::RowVectorXd& x, Mode mode, std::mt19937_64* rng)
{
    const auto a = run_forward(model, x, mode, rng);
    Prediction p;
    p.dev_logits = a.dev.row(0);
    p.dev_pmf = softmax(p.dev_logits);
    if (model.has_team_head()) {
        p.team_logits = a.team.row(0);
        p.team_pmf = softmax(p.team_logits);
    }
    return p;
}

BatchPrediction predict(const DualDnnModel& model, const Eigen::MatrixXd& inputs)
{
    const auto a = run_forward(model, inputs, Mode::eval, nullptr);
    BatchPrediction p;
    p.dev_logits = a.dev;
    p.dev_pmf = softmax_rows(a.dev);
    if (model.has_team_head()) {
        p.team_logits = a.team;
        p.team_pmf = softmax_rows(a.team);
    }
    return p;
}

double loss_and_gradient(const DualDnnModel& m, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& team_targets,
                         const Eigen::MatrixXd& dev_targets, HeadWeights heads, Mode mode, std::mt19937_64* rng,
                         DualDnnModel* grad)
{
    const auto a = run_forward(m, inputs, mode, rng);
    const double batch = static_cast<double>(inputs.rows());
    const bool use_team = m.has_team_head() && heads.team != 0.0;
    const bool use_dev = heads.dev != 0.0;

    Eigen::MatrixXd g_team;
    Eigen::MatrixXd g_dev;
    double loss = 0.0;
    if (use_team) {
        loss += heads.team * head_loss(a.team, team_targets, heads.team / batch, grad ? &g_team : nullptr) / batch;
    }
    if (use_dev) {
        loss += heads.dev * head_loss(a.dev, dev_targets, heads.dev / batch, grad ? &g_dev : nullptr) / batch;
    }
    if (grad == nullptr) {
        return loss;
    }

    *grad = zeros_like(m);
    if (!use_dev) {
        g_dev = Eigen::MatrixXd::Zero(a.dev.rows(), a.dev.cols());
    }
    Eigen::MatrixXd g_h2 = g_dev * m.dev_head.weight.transpose();
    grad->dev_head.weight = a.h2.transpose() * g_dev;
    grad->dev_head.bias = g_dev.colwise().sum();
    if (m.has_team_head()) {
        if (!use_team) {
            g_team = Eigen::MatrixXd::Zero(a.team.rows(), a.team.cols());
        }
        grad->team_to_dev = a.team.transpose() * g_dev;
        g_team += g_dev * m.team_to_dev.transpose();
        grad->team_head.weight = a.h2.transpose() * g_team;
        grad->team_head.bias = g_team.colwise().sum();
        g_h2 += g_team * m.team_head.weight.transpose();
    }
    if (a.mask2.size() != 0) {
        g_h2 = g_h2.cwiseProduct(a.mask2);
    }
    const Eigen::MatrixXd g_z2 = g_h2.cwiseProduct(leaky_derivative(a.z2, m.leaky_slope));
    grad->hidden2.weight = a.h1.transpose() * g_z2;
    grad->hidden2.bias = g_z2.colwise().sum();
    Eigen::MatrixXd g_h1 = g_z2 * m.hidden2.weight.transpose();
    if (a.mask1.size() != 0) {
        g_h1 = g_h1.cwiseProduct(a.mask1);
    }
    const Eigen::MatrixXd g_z1 = g_h1.cwiseProduct(leaky_derivative(a.z1, m.leaky_slope));
    grad->hidden1.weight = inputs.transpose() * g_z1;
    grad->hidden1.bias = g_z1.colwise().sum();
    return loss;
}

void validate(const TrainConfig& cfg)
{
    if (cfg.epochs < 0 || cfg.batch_size < 1 || !(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate)) {
        throw ValidationError("training config: epochs >= 0, batch_size >= 1 and a finite learning_rate >= 0 required");
    }
    if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0) || !(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0) || !(cfg.epsilon > 0.0)) {
        throw ValidationError("training config: optimizer moments must lie in [0, 1) and epsilon > 0");
    }
}

TrainResult train_stage(const DualDnnModel& model, const TrainingSet& data, const TrainConfig& cfg)
{
    validate(cfg);
    if (data.encoding_fingerprint != model.encoding_fingerprint) {
        throw CompatibilityError("training targets were built for encoding " + fingerprint_hex(data.encoding_fingerprint) +
                                 ", model expects " + fingerprint_hex(model.encoding_fingerprint));
    }
    if (cfg.stage != Stage::joint && !model.has_team_head()) {
        throw CompatibilityError("staged training needs a network with a team head");
    }
    const auto n = data.inputs.rows();
    if (n == 0) {
        throw ValidationError("training set is empty");
    }
    check_input(model, data.inputs.cols());
    if (data.dev_targets.rows() != n || data.dev_targets.cols() != model.n_devs ||
        (model.has_team_head() && (data.team_targets.rows() != n || data.team_targets.cols() != model.n_teams))) {
        throw ValidationError("training targets do not match the network outputs");
    }

    const HeadWeights heads = cfg.stage == Stage::team ? HeadWeights{1.0, 0.0} : HeadWeights{0.0, 1.0};

    TrainResult result{model, {}};
    auto& w = result.model;
    AdamState adam{zeros_like(model), zeros_like(model), 0};
    std::mt19937_64 rng(cfg.seed);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    DualDnnModel grad;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (Eigen::Index start = 0; start < n; start += cfg.batch_size) {
            const auto stop = std::min<Eigen::Index>(start + cfg.batch_size, n);
            const auto rows = stop - start;
            Eigen::MatrixXd x(rows, data.inputs.cols());
            Eigen::MatrixXd yt(rows, model.has_team_head() ? data.team_targets.cols() : 0);
            Eigen::MatrixXd yd(rows, data.dev_targets.cols());
            for (Eigen::Index r = 0; r < rows; ++r) {
                const auto src = order[static_cast<std::size_t>(start + r)];
                x.row(r) = data.inputs.row(src);
                if (model.has_team_head()) {
                    yt.row(r) = data.team_targets.row(src);
                }
                yd.row(r) = data.dev_targets.row(src);
            }
            epoch_loss += static_cast<double>(rows) * loss_and_gradient(w, x, yt, yd, heads, Mode::train, &rng, &grad);

            ++adam.step;
            const double c1 = 1.0 - std::pow(cfg.beta1, adam.step);
            const double c2 = 1.0 - std::pow(cfg.beta2, adam.step);
            // The four models share tensor layout, so the visitors line up.
            std::vector<Eigen::MatrixXd*> params;
            std::vector<Eigen::MatrixXd*> grads;
            std::vector<Eigen::MatrixXd*> moment1;
            std::vector<Eigen::MatrixXd*> moment2;
            std::vector<std::string> names;
            for_each_tensor(w, [&](const char* name, Eigen::MatrixXd& t) {
                params.push_back(&t);
                names.emplace_back(name);
            });
            for_each_tensor(grad, [&](const char*, Eigen::MatrixXd& t) { grads.push_back(&t); });
            for_each_tensor(adam.m, [&](const char*, Eigen::MatrixXd& t) { moment1.push_back(&t); });
            for_each_tensor(adam.v, [&](const char*, Eigen::MatrixXd& t) { moment2.push_back(&t); });
            for (std::size_t i = 0; i < params.size(); ++i) {
                if (!trainable(cfg.stage, names[i])) {
                    continue;
                }
                auto& g = *grads[i];
                *moment1[i] = cfg.beta1 * *moment1[i] + (1.0 - cfg.beta1) * g;
                *moment2[i] = cfg.beta2 * *moment2[i] + (1.0 - cfg.beta2) * g.cwiseProduct(g);
                const Eigen::ArrayXXd step = (moment1[i]->array() / c1) /
                                             ((moment2[i]->array() / c2).sqrt() + cfg.epsilon);
                *params[i] -= (cfg.learning_rate * step).matrix();
            }
        }
        result.epoch_loss.push_back(epoch_loss / static_cast<double>(n));
    }
    return result;
}

TrainResult train_developer_dnn(const DualDnnModel& model, const TrainingSet& data, TrainConfig cfg)
{
    if (model.kind != NetworkKind::developer) {
        throw CompatibilityError("developer-only training needs a NetworkKind::developer model");
    }
    cfg.stage = Stage::joint;
    return train_stage(model, data, cfg);
}

DualDnnModel transfer_on_role_change(const DualDnnModel& model, const IndexRemap& remap,
                                     const OutputEncoding& new_encoding, const TransferPolicy& policy,
                                     std::uint64_t seed)
{
    if (remap.old_fingerprint != model.encoding_fingerprint) {
        throw CompatibilityError("remap was built from encoding " + fingerprint_hex(remap.old_fingerprint) +
                                 " but the model uses " + fingerprint_hex(model.encoding_fingerprint));
    }
    if (remap.new_fingerprint != new_encoding.fingerprint() ||
        remap.dev_new_from_old.size() != new_encoding.n_devs() ||
        remap.team_new_from_old.size() != new_encoding.n_teams() ||
        remap.dev_old_to_new.size() != static_cast<std::size_t>(model.n_devs)) {
        throw CompatibilityError("remap does not match the target encoding");
    }
    if ((remap.team_added || remap.team_removed) && !policy.allow_team_change) {
        throw CompatibilityError("role change adds or removes a team; rerun with team changes allowed");
    }

    std::mt19937_64 rng(seed);
    const auto n_teams = static_cast<Eigen::Index>(new_encoding.n_teams());
    const auto n_devs = static_cast<Eigen::Index>(new_encoding.n_devs());
    const auto hidden = static_cast<Eigen::Index>(model.hidden_dim);

    DualDnnModel out = model;
    out.n_teams = static_cast<int>(n_teams);
    out.n_devs = static_cast<int>(n_devs);
    out.encoding_fingerprint = remap.new_fingerprint;

    // Fresh candidates are drawn for every slot so the result does not
    // depend on which slots happen to be new.
    const Eigen::MatrixXd fresh_dev = glorot(hidden, n_devs, rng);
    out.dev_head.weight.resize(hidden, n_devs);
    out.dev_head.bias = Eigen::MatrixXd::Zero(1, n_devs);
    for (Eigen::Index d = 0; d < n_devs; ++d) {
        const auto old = remap.dev_new_from_old[static_cast<std::size_t>(d)];
        const bool reset = !old || (policy.reset_moved_hidden && remap.dev_moved[static_cast<std::size_t>(d)]);
        out.dev_head.weight.col(d) =
            reset ? fresh_dev.col(d) : model.dev_head.weight.col(static_cast<Eigen::Index>(*old));
        if (old) {
            out.dev_head.bias(0, d) = model.dev_head.bias(0, static_cast<Eigen::Index>(*old));
        }
    }

    if (model.has_team_head()) {
        const Eigen::MatrixXd fresh_team = glorot(hidden, n_teams, rng);
        out.team_head.weight.resize(hidden, n_teams);
        out.team_head.bias = Eigen::MatrixXd::Zero(1, n_teams);
        for (Eigen::Index t = 0; t < n_teams; ++t) {
            const auto old = remap.team_new_from_old[static_cast<std::size_t>(t)];
            out.team_head.weight.col(t) = old ? model.team_head.weight.col(static_cast<Eigen::Index>(*old))
                                              : fresh_team.col(t);
            if (old) {
                out.team_head.bias(0, t) = model.team_head.bias(0, static_cast<Eigen::Index>(*old));
            }
        }
        Eigen::MatrixXd fresh_link(n_teams, n_devs);
        glorot_fill(fresh_link, rng, static_cast<double>(n_teams), static_cast<double>(n_devs));
        out.team_to_dev.resize(n_teams, n_devs);
        for (Eigen::Index d = 0; d < n_devs; ++d) {
            const auto old_d = remap.dev_new_from_old[static_cast<std::size_t>(d)];
            for (Eigen::Index t = 0; t < n_teams; ++t) {
                const auto old_t = remap.team_new_from_old[static_cast<std::size_t>(t)];
                out.team_to_dev(t, d) =
                    old_d && old_t ? model.team_to_dev(static_cast<Eigen::Index>(*old_t), static_cast<Eigen::Index>(*old_d))
                                   : fresh_link(t, d);
            }
        }
    }
    return out;
}

} // namespace triage
