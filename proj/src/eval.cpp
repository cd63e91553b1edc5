#include "triage/eval.hpp"

#include "triage/error.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace triage {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31U);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b)
{
    return splitmix64(splitmix64(splitmix64(base) ^ a) ^ b);
}

std::vector<std::size_t> slice(const std::vector<std::size_t>& order, std::size_t begin, std::size_t end)
{
    return {order.begin() + static_cast<std::ptrdiff_t>(begin), order.begin() + static_cast<std::ptrdiff_t>(end)};
}

struct Sample {
    std::string model;
    std::string head;
    int k;
    double value;
};

void summarize(std::vector<Sample>& samples, int run, std::vector<ResultCell>& out)
{
    // Group in insertion order of (model, head, k).
    std::vector<ResultCell> cells;
    std::vector<std::vector<double>> values;
    for (const auto& s : samples) {
        std::size_t i = 0;
        while (i < cells.size() && !(cells[i].model == s.model && cells[i].head == s.head && cells[i].k == s.k)) {
            ++i;
        }
        if (i == cells.size()) {
            cells.push_back(ResultCell{s.model, run, s.head, s.k, 0.0, 0.0, 0});
            values.emplace_back();
        }
        values[i].push_back(s.value);
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& v = values[i];
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double var = 0.0;
        for (const double x : v) {
            var += (x - mean) * (x - mean);
        }
        cells[i].mean = mean;
        cells[i].spread = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
        cells[i].samples = static_cast<int>(v.size());
        out.push_back(cells[i]);
    }
    samples.clear();
}

} // namespace

std::vector<std::size_t> time_order(const Corpus& corpus)
{
    std::vector<std::size_t> order(corpus.cases.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return corpus.cases[a].submitted_at < corpus.cases[b].submitted_at;
    });
    return order;
}

HoldoutSplit holdout_split(const Corpus& corpus, const std::array<double, 3>& fractions)
{
    for (const double f : fractions) {
        if (!(f >= 0.0)) {
            throw ValidationError("split fractions must be non-negative");
        }
    }
    if (std::abs(fractions[0] + fractions[1] + fractions[2] - 1.0) > 1e-9) {
        throw ValidationError("split fractions must sum to 1");
    }
    const auto m = corpus.cases.size();
    if (m < 3) {
        throw ValidationError("holdout split needs at least 3 cases");
    }
    const double md = static_cast<double>(m);
    const auto train_end = static_cast<std::size_t>(std::floor(md * fractions[0] + 1e-9));
    const auto val_end = std::min(m, static_cast<std::size_t>(std::floor(md * (fractions[0] + fractions[1]) + 1e-9)));
    if (train_end == 0 || val_end <= train_end || val_end >= m) {
        throw ValidationError(fmt::format("holdout split of {} cases leaves an empty segment ({}/{}/{})", m, train_end,
                                          val_end - std::min(val_end, train_end), m - val_end));
    }
    const auto order = time_order(corpus);
    return {slice(order, 0, train_end), slice(order, train_end, val_end), slice(order, val_end, m)};
}

std::vector<std::pair<std::size_t, std::size_t>> fold_bounds(std::size_t m, int n_folds)
{
    if (n_folds < 2) {
        throw ValidationError("IL-CV needs at least 2 folds");
    }
    const auto n = static_cast<std::size_t>(n_folds);
    if (m < n) {
        throw ValidationError(fmt::format("IL-CV with {} folds needs at least {} cases, got {}", n_folds, n_folds, m));
    }
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const auto base = m / n;
    const auto extra = m % n;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto end = begin + base + (i < extra ? 1 : 0);
        out.emplace_back(begin, end);
        begin = end;
    }
    return out;
}

std::vector<IlcvRun> ilcv_runs(const Corpus& corpus, int n_folds)
{
    const auto bounds = fold_bounds(corpus.cases.size(), n_folds);
    const auto order = time_order(corpus);
    std::vector<IlcvRun> runs;
    for (std::size_t i = 1; i < bounds.size(); ++i) {
        runs.push_back({static_cast<int>(i), slice(order, 0, bounds[i].first),
                        slice(order, bounds[i].first, bounds[i].second)});
    }
    return runs;
}

std::vector<Eigen::Index> top_k_indices(const Eigen::RowVectorXd& pmf, int k)
{
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(pmf.size()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    const auto kk = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 0)), idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(kk), idx.end(),
                      [&](Eigen::Index a, Eigen::Index b) { return pmf[a] > pmf[b] || (pmf[a] == pmf[b] && a < b); });
    idx.resize(kk);
    return idx;
}

std::vector<bool> topk_hits(const Eigen::MatrixXd& predictions, const std::vector<Eigen::Index>& target_class, int k)
{
    if (static_cast<Eigen::Index>(target_class.size()) != predictions.rows()) {
        throw ValidationError("prediction and target counts differ");
    }
    if (k < 1 || k > predictions.cols()) {
        throw ValidationError(fmt::format("top-k with k = {} outside [1, {}]", k, predictions.cols()));
    }
    std::vector<bool> hits(target_class.size());
    for (Eigen::Index r = 0; r < predictions.rows(); ++r) {
        const auto top = top_k_indices(predictions.row(r), k);
        hits[static_cast<std::size_t>(r)] =
            std::find(top.begin(), top.end(), target_class[static_cast<std::size_t>(r)]) != top.end();
    }
    return hits;
}

std::vector<bool> topk_hits(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& targets, int k)
{
    if (targets.rows() != predictions.rows() || targets.cols() != predictions.cols()) {
        throw ValidationError("prediction and target shapes differ");
    }
    std::vector<Eigen::Index> cls(static_cast<std::size_t>(targets.rows()));
    for (Eigen::Index r = 0; r < targets.rows(); ++r) {
        cls[static_cast<std::size_t>(r)] = top_k_indices(targets.row(r), 1).front();
    }
    return topk_hits(predictions, cls, k);
}

double topk_accuracy(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& targets, int k)
{
    const auto hits = topk_hits(predictions, targets, k);
    if (hits.empty()) {
        throw ValidationError("top-k accuracy of an empty set");
    }
    return 100.0 * static_cast<double>(std::count(hits.begin(), hits.end(), true)) / static_cast<double>(hits.size());
}

const char* to_string(ModelType type)
{
    switch (type) {
    case ModelType::dual:
        return "dual";
    case ModelType::developer:
        return "developer";
    case ModelType::naive_bayes:
        return "nb";
    case ModelType::logistic:
        return "logreg";
    }
    return "?";
}

const char* display_name(ModelType type)
{
    switch (type) {
    case ModelType::dual:
        return "Dual DNN";
    case ModelType::developer:
        return "Developer DNN";
    case ModelType::naive_bayes:
        return "Multinomial Bayes";
    case ModelType::logistic:
        return "Logistic Regression";
    }
    return "?";
}

ModelType parse_model_type(const std::string& s)
{
    for (const auto t : {ModelType::dual, ModelType::developer, ModelType::naive_bayes, ModelType::logistic}) {
        if (s == to_string(t)) {
            return t;
        }
    }
    throw CompatibilityError("unknown model kind '" + s + "'");
}

bool is_stochastic(ModelType type)
{
    return type == ModelType::dual || type == ModelType::developer;
}

std::optional<ResultCell> EvalReport::find(const std::string& model, int run, const std::string& head, int k) const
{
    for (const auto& c : cells) {
        if (c.model == model && c.run == run && c.head == head && c.k == k) {
            return c;
        }
    }
    return std::nullopt;
}

std::optional<double> EvalReport::average(const std::string& model, const std::string& head, int k) const
{
    double sum = 0.0;
    int n = 0;
    for (const auto& r : runs) {
        if (const auto c = find(model, r.run, head, k)) {
            sum += c->mean;
            ++n;
        }
    }
    if (n == 0) {
        return std::nullopt;
    }
    return sum / n;
}

EvalReport run_experiment(const Corpus& corpus, const OrgChart& chart, const ExperimentConfig& cfg)
{
    validate(cfg.weights);
    if (cfg.repeats < 1) {
        throw ValidationError("repeats must be >= 1");
    }
    if (cfg.models.empty()) {
        throw ValidationError("no models selected");
    }
    const auto enc = build_encoding(chart);
    const auto n_teams = static_cast<Eigen::Index>(enc.n_teams());
    const auto n_devs = static_cast<Eigen::Index>(enc.n_devs());

    EvalReport report;
    report.split = cfg.split == SplitKind::holdout ? "holdout" : "ilcv";
    report.label_mode = to_string(cfg.label_mode);
    report.ks = cfg.ks;
    for (const auto m : cfg.models) {
        report.models.emplace_back(display_name(m));
    }

    struct Plan {
        int run;
        std::vector<std::size_t> train;
        std::vector<std::size_t> test;
    };
    std::vector<Plan> plans;
    if (cfg.split == SplitKind::holdout) {
        auto split = holdout_split(corpus, cfg.fractions);
        plans.push_back({0, std::move(split.train), std::move(split.test)});
    } else {
        for (auto& r : ilcv_runs(corpus, cfg.folds)) {
            plans.push_back({r.index, std::move(r.train), std::move(r.test)});
        }
    }

    // Tokens and labels do not depend on the run.
    std::vector<TokenList> tokens;
    std::vector<SoftTarget> targets;
    std::vector<Eigen::Index> team_label;
    std::vector<Eigen::Index> dev_label;
    tokens.reserve(corpus.cases.size());
    for (const auto& bug : corpus.cases) {
        tokens.push_back(tokenize(bug));
        targets.push_back(make_target(bug.history, enc, cfg.weights, cfg.label_mode));
        const auto hot = make_one_hot_target(bug.history, enc, cfg.weights, cfg.label_mode);
        team_label.push_back(static_cast<Eigen::Index>(argmax(hot.team_pmf)));
        dev_label.push_back(static_cast<Eigen::Index>(argmax(hot.dev_pmf)));
    }

    std::vector<Sample> samples;
    for (const auto& plan : plans) {
        RunInfo info;
        info.run = plan.run;
        info.n_train = plan.train.size();
        info.n_test = plan.test.size();
        info.max_train_time = corpus.cases[plan.train.front()].submitted_at;
        for (const auto i : plan.train) {
            info.max_train_time = std::max(info.max_train_time, corpus.cases[i].submitted_at);
        }
        info.min_test_time = corpus.cases[plan.test.front()].submitted_at;
        for (const auto i : plan.test) {
            info.min_test_time = std::min(info.min_test_time, corpus.cases[i].submitted_at);
        }

        std::vector<TokenList> train_tokens;
        std::vector<TokenList> test_tokens;
        for (const auto i : plan.train) {
            train_tokens.push_back(tokens[i]);
        }
        for (const auto i : plan.test) {
            test_tokens.push_back(tokens[i]);
        }
        auto lsa_cfg = cfg.lsa;
        lsa_cfg.svd.seed = derive_seed(cfg.seed, 0x15a, static_cast<std::uint64_t>(plan.run));
        const auto lsa = fit_lsa(train_tokens, lsa_cfg);
        info.lsa_rank = lsa.rank();
        const Eigen::MatrixXd train_x = project_all(train_tokens, lsa);
        const Eigen::MatrixXd test_x = project_all(test_tokens, lsa);
        for (const auto& t : test_tokens) {
            info.empty_latent_test_cases += known_token_count(t, lsa) == 0 ? 1 : 0;
        }

        TrainingSet set;
        set.inputs = train_x;
        set.team_targets.resize(static_cast<Eigen::Index>(plan.train.size()), n_teams);
        set.dev_targets.resize(static_cast<Eigen::Index>(plan.train.size()), n_devs);
        set.encoding_fingerprint = enc.fingerprint();
        std::vector<int> train_team;
        std::vector<int> train_dev;
        std::vector<bool> team_seen(static_cast<std::size_t>(n_teams), false);
        std::vector<bool> dev_seen(static_cast<std::size_t>(n_devs), false);
        for (std::size_t r = 0; r < plan.train.size(); ++r) {
            const auto i = plan.train[r];
            const auto row = static_cast<Eigen::Index>(r);
            set.team_targets.row(row) = Eigen::Map<const Eigen::RowVectorXd>(targets[i].team_pmf.data(), n_teams);
            set.dev_targets.row(row) = Eigen::Map<const Eigen::RowVectorXd>(targets[i].dev_pmf.data(), n_devs);
            train_team.push_back(static_cast<int>(team_label[i]));
            train_dev.push_back(static_cast<int>(dev_label[i]));
            team_seen[static_cast<std::size_t>(team_label[i])] = true;
            dev_seen[static_cast<std::size_t>(dev_label[i])] = true;
        }
        std::vector<Eigen::Index> test_team;
        std::vector<Eigen::Index> test_dev;
        std::vector<bool> team_known;
        std::vector<bool> dev_known;
        for (const auto i : plan.test) {
            test_team.push_back(team_label[i]);
            test_dev.push_back(dev_label[i]);
            team_known.push_back(team_seen[static_cast<std::size_t>(team_label[i])]);
            dev_known.push_back(dev_seen[static_cast<std::size_t>(dev_label[i])]);
        }
        const auto share = [](const std::vector<bool>& v) {
            return static_cast<double>(std::count(v.begin(), v.end(), true)) / static_cast<double>(v.size());
        };
        info.team_coverage = share(team_known);
        info.dev_coverage = share(dev_known);

        auto score = [&](const std::string& model, const std::string& head, const Eigen::MatrixXd& pmf,
                         const std::vector<Eigen::Index>& labels, const std::vector<bool>& known) {
            for (const int k : cfg.ks) {
                if (k < 1 || k > pmf.cols()) {
                    continue;
                }
                const auto hits = topk_hits(pmf, labels, k);
                std::size_t n_hit = 0;
                for (std::size_t r = 0; r < hits.size(); ++r) {
                    // Classes never seen in training count as misses.
                    n_hit += hits[r] && known[r] ? 1 : 0;
                }
                samples.push_back({model, head, k, 100.0 * static_cast<double>(n_hit) / static_cast<double>(hits.size())});
            }
        };

        for (const auto type : cfg.models) {
            const std::string name = display_name(type);
            const int reps = is_stochastic(type) ? cfg.repeats : 1;
            for (int rep = 0; rep < reps; ++rep) {
                const auto seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(plan.run) * 16 + 1,
                                              static_cast<std::uint64_t>(rep));
                switch (type) {
                case ModelType::dual: {
                    auto opts = cfg.network;
                    opts.kind = NetworkKind::dual;
                    auto model = init_model(enc, lsa.rank(), seed, opts);
                    auto team_cfg = cfg.team_stage;
                    team_cfg.stage = Stage::team;
                    team_cfg.seed = seed ^ 0x7ea3ULL;
                    model = train_stage(model, set, team_cfg).model;
                    auto dev_cfg = cfg.dev_stage;
                    dev_cfg.stage = Stage::developer;
                    dev_cfg.seed = seed ^ 0xde7ULL;
                    model = train_stage(model, set, dev_cfg).model;
                    const auto pred = predict(model, test_x);
                    score(name, "team", pred.team_pmf, test_team, team_known);
                    score(name, "developer", pred.dev_pmf, test_dev, dev_known);
                    break;
                }
                case ModelType::developer: {
                    auto opts = cfg.network;
                    opts.kind = NetworkKind::developer;
                    auto model = init_model(enc, lsa.rank(), seed, opts);
                    auto joint = cfg.joint_stage;
                    joint.seed = seed ^ 0x10ULL;
                    model = train_developer_dnn(model, set, joint).model;
                    const auto pred = predict(model, test_x);
                    score(name, "developer", pred.dev_pmf, test_dev, dev_known);
                    break;
                }
                case ModelType::naive_bayes: {
                    const auto train_counts = count_matrix(train_tokens, lsa.vocab);
                    const auto test_counts = count_matrix(test_tokens, lsa.vocab);
                    const auto team_nb = train_nb(train_counts, train_team, static_cast<int>(n_teams), cfg.nb_alpha);
                    const auto dev_nb = train_nb(train_counts, train_dev, static_cast<int>(n_devs), cfg.nb_alpha);
                    score(name, "team", predict_pmf(team_nb, test_counts), test_team, team_known);
                    score(name, "developer", predict_pmf(dev_nb, test_counts), test_dev, dev_known);
                    break;
                }
                case ModelType::logistic: {
                    const auto team_lr = train_logreg(train_x, train_team, static_cast<int>(n_teams), cfg.logistic);
                    const auto dev_lr = train_logreg(train_x, train_dev, static_cast<int>(n_devs), cfg.logistic);
                    score(name, "team", predict_pmf(team_lr, test_x), test_team, team_known);
                    score(name, "developer", predict_pmf(dev_lr, test_x), test_dev, dev_known);
                    break;
                }
                }
            }
        }
        summarize(samples, plan.run, report.cells);
        report.runs.push_back(info);
    }
    return report;
}

namespace {

std::string format_cell(const std::optional<ResultCell>& c)
{
    if (!c) {
        return "n/a";
    }
    if (c->samples > 1) {
        return fmt::format("{:.2f} ± {:.2f}", c->mean, c->spread);
    }
    return fmt::format("{:.2f}", c->mean);
}

std::string render_rows(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows)
{
    std::vector<std::size_t> width(header.size(), 0);
    auto visible = [](const std::string& s) {
        // Count UTF-8 code points, not bytes.
        return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
    };
    for (std::size_t i = 0; i < header.size(); ++i) {
        width[i] = visible(header[i]);
        for (const auto& r : rows) {
            width[i] = std::max(width[i], visible(r[i]));
        }
    }
    auto line = [&](const std::vector<std::string>& cells) {
        std::string out = "|";
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out += " " + cells[i] + std::string(width[i] - visible(cells[i]), ' ') + " |";
        }
        return out + "\n";
    };
    std::string rule = "+";
    for (const auto w : width) {
        rule += std::string(w + 2, '-') + "+";
    }
    rule += "\n";
    std::string out = rule + line(header) + rule;
    for (const auto& r : rows) {
        out += line(r);
    }
    return out + rule;
}

} // namespace

std::string render_holdout_table(const EvalReport& report, const std::string& head)
{
    std::vector<std::string> header{"Model"};
    for (const int k : report.ks) {
        header.push_back(fmt::format("top-{}", k));
    }
    std::vector<std::vector<std::string>> rows;
    const int run = report.runs.empty() ? 0 : report.runs.front().run;
    for (const auto& model : report.models) {
        std::vector<std::string> row{model};
        bool any = false;
        for (const int k : report.ks) {
            const auto c = report.find(model, run, head, k);
            any = any || c.has_value();
            row.push_back(format_cell(c));
        }
        if (any) {
            rows.push_back(std::move(row));
        }
    }
    return render_rows(header, rows);
}

std::string render_ilcv_table(const EvalReport& report, const std::string& head, int k)
{
    std::vector<std::string> header{"Model"};
    for (const auto& r : report.runs) {
        header.push_back(std::to_string(r.run));
    }
    header.emplace_back("Average");
    std::vector<std::vector<std::string>> rows;
    for (const auto& model : report.models) {
        std::vector<std::string> row{model};
        for (const auto& r : report.runs) {
            row.push_back(format_cell(report.find(model, r.run, head, k)));
        }
        const auto avg = report.average(model, head, k);
        if (!avg) {
            continue;
        }
        row.push_back(fmt::format("{:.2f}", *avg));
        rows.push_back(std::move(row));
    }
    return render_rows(header, rows);
}

std::string render_report(const EvalReport& report, int ilcv_k)
{
    std::string out;
    const std::string labels = report.label_mode == "weighted" ? "owner-importance-weighted labels" : "closer labels";
    for (const std::string head : {"team", "developer"}) {
        if (report.split == "holdout") {
            out += fmt::format("Holdout top-k accuracy (%) for {} assignment, {}\n", head, labels);
            out += render_holdout_table(report, head);
        } else {
            out += fmt::format("IL-CV top-{} accuracy (%) for {} assignment, {}\n", ilcv_k, head, labels);
            out += render_ilcv_table(report, head, ilcv_k);
        }
        out += "\n";
    }
    out += "Runs:\n";
    for (const auto& r : report.runs) {
        out += fmt::format("  run {}: train {} test {} | team coverage {:.2f}% developer coverage {:.2f}% | lsa rank {} | "
                           "empty test latents {}\n",
                           r.run, r.n_train, r.n_test, 100.0 * r.team_coverage, 100.0 * r.dev_coverage, r.lsa_rank,
                           r.empty_latent_test_cases);
    }
    return out;
}

std::string report_to_json(const EvalReport& report)
{
    nlohmann::json j;
    j["split"] = report.split;
    j["label_mode"] = report.label_mode;
    j["models"] = report.models;
    j["ks"] = report.ks;
    auto& runs = j["runs"] = nlohmann::json::array();
    for (const auto& r : report.runs) {
        runs.push_back({{"run", r.run},
                        {"n_train", r.n_train},
                        {"n_test", r.n_test},
                        {"max_train_time", r.max_train_time},
                        {"min_test_time", r.min_test_time},
                        {"team_coverage", r.team_coverage},
                        {"dev_coverage", r.dev_coverage},
                        {"empty_latent_test_cases", r.empty_latent_test_cases},
                        {"lsa_rank", r.lsa_rank}});
    }
    auto& cells = j["results"] = nlohmann::json::array();
    for (const auto& c : report.cells) {
        cells.push_back({{"model", c.model},
                         {"run", c.run},
                         {"head", c.head},
                         {"k", c.k},
                         {"accuracy", c.mean},
                         {"spread", c.spread},
                         {"samples", c.samples}});
    }
    auto& avg = j["averages"] = nlohmann::json::array();
    for (const auto& model : report.models) {
        for (const std::string head : {"team", "developer"}) {
            for (const int k : report.ks) {
                if (const auto a = report.average(model, head, k)) {
                    avg.push_back({{"model", model}, {"head", head}, {"k", k}, {"accuracy", *a}});
                }
            }
        }
    }
    return j.dump(2) + "\n";
}

std::vector<WeightingDelta> weighting_delta(const EvalReport& weighted, const EvalReport& unweighted, int k)
{
    std::vector<WeightingDelta> out;
    for (const std::string head : {"team", "developer"}) {
        WeightingDelta row{head, std::nullopt, std::nullopt};
        double sum = 0.0;
        int n = 0;
        for (const auto& model : weighted.models) {
            const auto a = weighted.average(model, head, k);
            const auto b = unweighted.average(model, head, k);
            if (!a || !b) {
                continue;
            }
            sum += *a - *b;
            ++n;
            if (model == display_name(ModelType::dual)) {
                row.dual_increase = *a - *b;
            }
        }
        if (n > 0) {
            row.average_increase = sum / n;
        }
        out.push_back(row);
    }
    return out;
}

std::string render_weighting_delta(const std::vector<WeightingDelta>& rows, int k)
{
    std::vector<std::vector<std::string>> cells;
    auto pts = [](const std::optional<double>& v) { return v ? fmt::format("{:+.2f} %-points", *v) : "n/a"; };
    for (const auto& r : rows) {
        cells.push_back({r.head == "team" ? "Team" : "Developer", pts(r.average_increase), pts(r.dual_increase)});
    }
    return fmt::format("Increase of top-{} accuracy with owner-importance-weighted labels\n", k) +
           render_rows({"Dataset", "Average increase", "Dual DNN increase"}, cells);
}

} // namespace triage
