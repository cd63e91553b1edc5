#include "commands.hpp"

#include "triage/checkpoint.hpp"
#include "triage/corpus.hpp"
#include "triage/error.hpp"
#include "triage/eval.hpp"
#include "triage/keyvalue.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace triage::cli {

namespace {

/// Knobs shared by `train` and `evaluate`; recorded in checkpoints so that
/// `evaluate` can retrain the same configuration on each split.
struct Settings {
    std::uint64_t seed = 42;
    int lsa_rank = 64;
    int svd_oversample = 8;
    int svd_power_iterations = 2;
    int hidden_dim = 0; // 0: twice the number of teams
    int team_epochs = 30;
    int dev_epochs = 30;
    int joint_epochs = 60;
    int batch_size = 32;
    double learning_rate = 2e-3;
    double nb_alpha = 1.0;
    int logreg_epochs = 300;
    double logreg_lr = 0.5;
    double logreg_l2 = 1e-4;
    bool no_owner_weighting = false;
    double owner_weight = 0.5;
    double commenter_weight = 0.5;
    double closer_weight = 0.5;

    LabelMode label_mode() const { return no_owner_weighting ? LabelMode::closer : LabelMode::weighted; }
    WeightConfig weights() const { return {owner_weight, commenter_weight, closer_weight}; }
};

std::string num(double v)
{
    return fmt::format("{}", v);
}

std::map<std::string, std::string> to_metadata(const Settings& s)
{
    return {
        {"seed", std::to_string(s.seed)},
        {"lsa_rank", std::to_string(s.lsa_rank)},
        {"svd_oversample", std::to_string(s.svd_oversample)},
        {"svd_power_iterations", std::to_string(s.svd_power_iterations)},
        {"hidden_dim", std::to_string(s.hidden_dim)},
        {"team_epochs", std::to_string(s.team_epochs)},
        {"dev_epochs", std::to_string(s.dev_epochs)},
        {"joint_epochs", std::to_string(s.joint_epochs)},
        {"batch_size", std::to_string(s.batch_size)},
        {"learning_rate", num(s.learning_rate)},
        {"nb_alpha", num(s.nb_alpha)},
        {"logreg_epochs", std::to_string(s.logreg_epochs)},
        {"logreg_lr", num(s.logreg_lr)},
        {"logreg_l2", num(s.logreg_l2)},
    };
}

Settings from_checkpoint(const Checkpoint& c)
{
    Settings s;
    const auto& m = c.metadata;
    auto get = [&](const char* key) -> const std::string& {
        const auto it = m.find(key);
        if (it == m.end()) {
            throw CompatibilityError(std::string("checkpoint metadata lacks '") + key + "'");
        }
        return it->second;
    };
    s.seed = static_cast<std::uint64_t>(to_integer("seed", get("seed")));
    s.lsa_rank = static_cast<int>(to_integer("lsa_rank", get("lsa_rank")));
    s.svd_oversample = static_cast<int>(to_integer("svd_oversample", get("svd_oversample")));
    s.svd_power_iterations = static_cast<int>(to_integer("svd_power_iterations", get("svd_power_iterations")));
    s.hidden_dim = static_cast<int>(to_integer("hidden_dim", get("hidden_dim")));
    s.team_epochs = static_cast<int>(to_integer("team_epochs", get("team_epochs")));
    s.dev_epochs = static_cast<int>(to_integer("dev_epochs", get("dev_epochs")));
    s.joint_epochs = static_cast<int>(to_integer("joint_epochs", get("joint_epochs")));
    s.batch_size = static_cast<int>(to_integer("batch_size", get("batch_size")));
    s.learning_rate = to_double("learning_rate", get("learning_rate"));
    s.nb_alpha = to_double("nb_alpha", get("nb_alpha"));
    s.logreg_epochs = static_cast<int>(to_integer("logreg_epochs", get("logreg_epochs")));
    s.logreg_lr = to_double("logreg_lr", get("logreg_lr"));
    s.logreg_l2 = to_double("logreg_l2", get("logreg_l2"));
    s.no_owner_weighting = c.label_mode == LabelMode::closer;
    s.owner_weight = c.weights.owner_weight;
    s.commenter_weight = c.weights.commenter_weight;
    s.closer_weight = c.weights.closer_weight;
    return s;
}

void add_settings(CLI::App* sub, Settings& s)
{
    sub->add_option("--seed", s.seed, "Random seed");
    sub->add_option("--lsa-rank", s.lsa_rank, "Latent dimension of the LSA projection");
    sub->add_option("--svd-oversample", s.svd_oversample, "Oversampling columns for the randomized SVD");
    sub->add_option("--svd-power-iterations", s.svd_power_iterations, "Minimum subspace iterations");
    sub->add_option("--hidden-dim", s.hidden_dim, "Hidden width (0: twice the number of teams)");
    sub->add_option("--team-epochs", s.team_epochs, "Epochs of the team stage");
    sub->add_option("--dev-epochs", s.dev_epochs, "Epochs of the developer stage");
    sub->add_option("--joint-epochs", s.joint_epochs, "Epochs for the developer-only network");
    sub->add_option("--batch-size", s.batch_size, "Mini-batch size");
    sub->add_option("--learning-rate", s.learning_rate, "Step size of the adaptive-moment optimizer");
    sub->add_option("--nb-alpha", s.nb_alpha, "Laplace smoothing for naive Bayes");
    sub->add_option("--logreg-epochs", s.logreg_epochs, "Gradient steps for logistic regression");
    sub->add_option("--logreg-lr", s.logreg_lr, "Step size for logistic regression");
    sub->add_option("--logreg-l2", s.logreg_l2, "L2 penalty for logistic regression");
    sub->add_flag("--no-owner-weighting", s.no_owner_weighting, "Label with a one-hot target at the closer");
    sub->add_option("--owner-weight", s.owner_weight, "Weight of an interim-owner response");
    sub->add_option("--commenter-weight", s.commenter_weight, "Weight of a comment");
    sub->add_option("--closer-weight", s.closer_weight, "Weight of closing the bug");
}

TrainConfig train_config(const Settings& s, Stage stage, int epochs, std::uint64_t seed)
{
    TrainConfig c;
    c.stage = stage;
    c.epochs = epochs;
    c.batch_size = s.batch_size;
    c.learning_rate = s.learning_rate;
    c.seed = seed;
    return c;
}

ExperimentConfig experiment_config(const Settings& s)
{
    ExperimentConfig c;
    c.label_mode = s.label_mode();
    c.weights = s.weights();
    c.lsa.rank = s.lsa_rank;
    c.lsa.svd.oversample = s.svd_oversample;
    c.lsa.svd.power_iterations = s.svd_power_iterations;
    if (s.hidden_dim > 0) {
        c.network.hidden_dim = s.hidden_dim;
    }
    c.team_stage = train_config(s, Stage::team, s.team_epochs, 0);
    c.dev_stage = train_config(s, Stage::developer, s.dev_epochs, 0);
    c.joint_stage = train_config(s, Stage::joint, s.joint_epochs, 0);
    c.nb_alpha = s.nb_alpha;
    c.logistic = {s.logreg_epochs, s.logreg_lr, s.logreg_l2};
    c.seed = s.seed;
    return c;
}

std::string dashed(std::string key)
{
    std::replace(key.begin(), key.end(), '_', '-');
    return "--" + key;
}

/// Global flags precede the subcommand. `--seed` is forwarded to the
/// subcommand; `--config` entries become subcommand flags unless given
/// explicitly. Keys a subcommand does not know are skipped so one file can
/// serve every subcommand.
std::vector<std::string> expand_globals(const std::vector<std::string>& args, CLI::App& app)
{
    std::vector<std::string> globals;
    std::string config_path;
    std::optional<std::string> seed;
    std::size_t i = 0;
    for (; i < args.size() && args[i].rfind("--", 0) == 0; ++i) {
        if ((args[i] == "--config" || args[i] == "--seed") && i + 1 < args.size()) {
            (args[i] == "--config" ? config_path : seed.emplace()) = args[i + 1];
            ++i;
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else if (args[i].rfind("--seed=", 0) == 0) {
            seed = args[i].substr(7);
        } else {
            globals.push_back(args[i]);
        }
    }
    if (i == args.size()) {
        return globals;
    }
    CLI::App* sub = nullptr;
    for (auto* s : app.get_subcommands({})) {
        if (s->get_name() == args[i]) {
            sub = s;
        }
    }
    std::vector<std::string> out = globals;
    out.push_back(args[i]);
    const std::vector<std::string> rest(args.begin() + static_cast<std::ptrdiff_t>(i) + 1, args.end());
    if (sub == nullptr) {
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
    }
    auto given = [&](const std::string& flag) {
        return std::any_of(rest.begin(), rest.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
    };
    std::map<std::string, std::string> values;
    if (!config_path.empty()) {
        values = read_key_values(config_path);
    }
    if (seed) {
        values["seed"] = *seed;
    }
    for (const auto& [key, value] : values) {
        const auto flag = dashed(key);
        const auto* opt = sub->get_option_no_throw(flag);
        if (opt == nullptr || given(flag)) {
            continue;
        }
        if (opt->get_type_size() == 0) {
            if (to_bool(key, value)) {
                out.push_back(flag);
            }
        } else {
            out.push_back(flag);
            out.push_back(value);
        }
    }
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << text;
    if (!out) {
        throw IoError("write failed for " + path);
    }
}

Eigen::MatrixXd rows_of(const std::vector<std::vector<double>>& v, std::size_t cols)
{
    Eigen::MatrixXd m(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < v.size(); ++r) {
        m.row(static_cast<Eigen::Index>(r)) =
            Eigen::Map<const Eigen::RowVectorXd>(v[r].data(), static_cast<Eigen::Index>(cols));
    }
    return m;
}

// ---- generate ---------------------------------------------------------------

struct GenerateArgs {
    std::uint64_t seed = 42;
    std::map<std::string, std::string> overrides;
    std::string corpus_out = "corpus.jsonl";
    std::string chart_out = "chart.txt";
};

const std::vector<std::string> kSyntheticKeys{
    "n_teams",     "devs_per_team",  "n_cases",        "topical_features", "context_features", "tokens_per_feature",
    "team_vocab",  "dev_vocab",      "noise_vocab",    "signal_rate",      "dev_affinity",     "intra_team_rate",
    "max_owners",  "max_commenters", "start_time",     "mean_gap_seconds", "closer_comment_rate",
};

int cmd_generate(const GenerateArgs& a, std::ostream& out)
{
    SyntheticConfig cfg;
    apply_overrides(cfg, a.overrides);
    const auto data = generate_synthetic(cfg, a.seed);
    // The chart must yield a usable encoding before anything is written.
    const auto enc = build_encoding(data.chart);
    save_corpus(data.corpus, a.corpus_out);
    save_chart(data.chart, a.chart_out);
    out << fmt::format("wrote {} cases to {} and a chart with {} teams / {} developers to {}\n",
                       data.corpus.cases.size(), a.corpus_out, enc.n_teams(), enc.n_devs(), a.chart_out);
    return kOk;
}

// ---- train ------------------------------------------------------------------

struct TrainArgs {
    Settings settings;
    std::string corpus;
    std::string chart;
    std::string kind = "dual";
    std::string out = "model.ckpt";
};

int cmd_train(const TrainArgs& a, std::ostream& out)
{
    const auto& s = a.settings;
    const auto kind = parse_model_type(a.kind);
    const auto corpus = load_corpus(a.corpus);
    const auto chart = load_chart(a.chart);
    const auto enc = build_encoding(chart);
    validate(s.weights());
    if (corpus.cases.empty()) {
        throw ValidationError("corpus " + a.corpus + " has no cases");
    }

    std::vector<TokenList> tokens;
    std::vector<std::vector<double>> team_targets;
    std::vector<std::vector<double>> dev_targets;
    std::vector<int> team_labels;
    std::vector<int> dev_labels;
    std::size_t relabeled = 0; // weighted top developer differs from the closer
    for (const auto& bug : corpus.cases) {
        tokens.push_back(tokenize(bug));
        const auto t = make_target(bug.history, enc, s.weights(), s.label_mode());
        team_targets.push_back(t.team_pmf);
        dev_targets.push_back(t.dev_pmf);
        const auto hot = make_one_hot_target(bug.history, enc, s.weights(), s.label_mode());
        team_labels.push_back(static_cast<int>(argmax(hot.team_pmf)));
        dev_labels.push_back(static_cast<int>(argmax(hot.dev_pmf)));
        const auto closer = make_one_hot_target(bug.history, enc, s.weights(), LabelMode::closer);
        const auto weighted = make_one_hot_target(bug.history, enc, s.weights(), LabelMode::weighted);
        relabeled += argmax(closer.dev_pmf) != argmax(weighted.dev_pmf) ? 1 : 0;
    }

    Checkpoint ckpt;
    ckpt.kind = kind;
    ckpt.encoding = enc;
    ckpt.schema = corpus.schema;
    ckpt.label_mode = s.label_mode();
    ckpt.weights = s.weights();
    ckpt.metadata = to_metadata(s);
    ckpt.metadata["corpus_hash"] = fingerprint_hex(corpus_hash(corpus));
    ckpt.metadata["cases"] = std::to_string(corpus.cases.size());

    LsaConfig lsa_cfg;
    lsa_cfg.rank = s.lsa_rank;
    lsa_cfg.svd.oversample = s.svd_oversample;
    lsa_cfg.svd.power_iterations = s.svd_power_iterations;
    lsa_cfg.svd.seed = s.seed;
    ckpt.lsa = fit_lsa(tokens, lsa_cfg);
    const Eigen::MatrixXd x = project_all(tokens, ckpt.lsa);

    std::string losses = "stage,epoch,loss\n";
    auto record = [&](const char* stage, const std::vector<double>& curve) {
        for (std::size_t e = 0; e < curve.size(); ++e) {
            losses += fmt::format("{},{},{}\n", stage, e + 1, curve[e]);
        }
    };

    ModelOptions opts;
    if (s.hidden_dim > 0) {
        opts.hidden_dim = s.hidden_dim;
    }
    TrainingSet set{x, rows_of(team_targets, enc.n_teams()), rows_of(dev_targets, enc.n_devs()), enc.fingerprint()};
    switch (kind) {
    case ModelType::dual: {
        opts.kind = NetworkKind::dual;
        auto model = init_model(enc, ckpt.lsa.rank(), s.seed, opts);
        const auto team = train_stage(model, set, train_config(s, Stage::team, s.team_epochs, s.seed + 1));
        const auto dev = train_stage(team.model, set, train_config(s, Stage::developer, s.dev_epochs, s.seed + 2));
        record("team", team.epoch_loss);
        record("developer", dev.epoch_loss);
        ckpt.network = dev.model;
        break;
    }
    case ModelType::developer: {
        opts.kind = NetworkKind::developer;
        auto model = init_model(enc, ckpt.lsa.rank(), s.seed, opts);
        const auto res = train_developer_dnn(model, set, train_config(s, Stage::joint, s.joint_epochs, s.seed + 1));
        record("joint", res.epoch_loss);
        ckpt.network = res.model;
        break;
    }
    case ModelType::naive_bayes: {
        const auto counts = count_matrix(tokens, ckpt.lsa.vocab);
        ckpt.team_nb = train_nb(counts, team_labels, static_cast<int>(enc.n_teams()), s.nb_alpha);
        ckpt.dev_nb = train_nb(counts, dev_labels, static_cast<int>(enc.n_devs()), s.nb_alpha);
        break;
    }
    case ModelType::logistic: {
        const LogisticConfig lc{s.logreg_epochs, s.logreg_lr, s.logreg_l2};
        ckpt.team_logistic = train_logreg(x, team_labels, static_cast<int>(enc.n_teams()), lc);
        ckpt.dev_logistic = train_logreg(x, dev_labels, static_cast<int>(enc.n_devs()), lc);
        break;
    }
    }
    save_checkpoint(ckpt, a.out);
    write_text(a.out + ".loss.csv", losses);
    out << fmt::format("trained {} ({} labels) on {} cases; checkpoint {}\n", display_name(kind),
                       to_string(s.label_mode()), corpus.cases.size(), a.out);
    out << fmt::format("weighted top developer differs from the closer on {:.2f}% of cases\n",
                       100.0 * static_cast<double>(relabeled) / static_cast<double>(corpus.cases.size()));
    return kOk;
}

// ---- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
    Settings settings;
    std::vector<std::string> checkpoints;
    std::vector<std::string> models;
    std::string corpus;
    std::string chart;
    std::string split = "holdout";
    int folds = 11;
    std::vector<int> ks{1, 2, 3, 5, 10};
    int ilcv_k = 10;
    int repeats = 3;
    bool compare_unweighted = false;
    std::string report = "report.txt";
    std::string results = "results.json";
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out)
{
    const auto corpus = load_corpus(a.corpus);
    const auto chart = load_chart(a.chart);
    const auto enc = build_encoding(chart);

    Settings s = a.settings;
    std::vector<ModelType> models;
    std::optional<LabelMode> mode;
    for (const auto& path : a.checkpoints) {
        const auto ckpt = load_checkpoint(path);
        if (ckpt.encoding.fingerprint() != enc.fingerprint()) {
            throw CompatibilityError(fmt::format("checkpoint {} was built for encoding {}, chart {} gives {}", path,
                                                 fingerprint_hex(ckpt.encoding.fingerprint()), a.chart,
                                                 fingerprint_hex(enc.fingerprint())));
        }
        if (mode && *mode != ckpt.label_mode) {
            throw CompatibilityError("checkpoints disagree on the labeling mode");
        }
        mode = ckpt.label_mode;
        // The first checkpoint fixes the shared settings; later ones only add their model.
        if (models.empty()) {
            s = from_checkpoint(ckpt);
        } else {
            const auto other = from_checkpoint(ckpt);
            if (ckpt.kind == ModelType::naive_bayes) {
                s.nb_alpha = other.nb_alpha;
            } else if (ckpt.kind == ModelType::logistic) {
                s.logreg_epochs = other.logreg_epochs;
                s.logreg_lr = other.logreg_lr;
                s.logreg_l2 = other.logreg_l2;
            }
        }
        models.push_back(ckpt.kind);
    }
    for (const auto& m : a.models) {
        models.push_back(parse_model_type(m));
    }
    if (models.empty()) {
        throw ValidationError("evaluate needs --checkpoint or --models");
    }

    auto cfg = experiment_config(s);
    cfg.models = models;
    if (a.split == "holdout") {
        cfg.split = SplitKind::holdout;
    } else if (a.split == "ilcv") {
        cfg.split = SplitKind::ilcv;
    } else {
        throw ValidationError("unknown split '" + a.split + "' (holdout|ilcv)");
    }
    cfg.folds = a.folds;
    cfg.ks = a.ks;
    cfg.repeats = a.repeats;

    const auto report = run_experiment(corpus, chart, cfg);
    std::string text = render_report(report, a.ilcv_k);
    std::string json = report_to_json(report);
    if (a.compare_unweighted) {
        auto other = cfg;
        other.label_mode = cfg.label_mode == LabelMode::weighted ? LabelMode::closer : LabelMode::weighted;
        const auto second = run_experiment(corpus, chart, other);
        const auto& weighted = cfg.label_mode == LabelMode::weighted ? report : second;
        const auto& unweighted = cfg.label_mode == LabelMode::weighted ? second : report;
        text += "\n" + render_report(second, a.ilcv_k);
        text += "\n" + render_weighting_delta(weighting_delta(weighted, unweighted, a.ilcv_k), a.ilcv_k);
        json = "[\n" + report_to_json(weighted) + ",\n" + report_to_json(unweighted) + "]\n";
    }
    write_text(a.report, text);
    write_text(a.results, json);
    out << text;
    return kOk;
}

// ---- predict ----------------------------------------------------------------

struct PredictArgs {
    std::string checkpoint;
    std::string case_file;
    int k = 5;
};

int cmd_predict(const PredictArgs& a, std::ostream& out)
{
    if (a.k < 1) {
        throw ValidationError("--k must be >= 1");
    }
    const auto ckpt = load_checkpoint(a.checkpoint);
    std::ifstream in(a.case_file);
    if (!in) {
        throw IoError("cannot open case file " + a.case_file);
    }
    std::string line;
    while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
        throw ValidationError("case file " + a.case_file + " is empty");
    }
    const auto bug = parse_case(line, false);
    const auto pred = predict_case(ckpt, bug);
    auto emit = [&](const char* label, const Eigen::RowVectorXd& pmf, const std::vector<std::string>& ids) {
        if (pmf.size() == 0) {
            return;
        }
        const auto top = top_k_indices(pmf, std::min<int>(a.k, static_cast<int>(pmf.size())));
        for (std::size_t r = 0; r < top.size(); ++r) {
            out << fmt::format("{}\t{}\t{}\t{}\n", label, r + 1, ids[static_cast<std::size_t>(top[r])], pmf[top[r]]);
        }
    };
    emit("team", pred.team_pmf, ckpt.encoding.team_index());
    emit("developer", pred.dev_pmf, ckpt.encoding.dev_index());
    return kOk;
}

// ---- org-update -------------------------------------------------------------

struct OrgUpdateArgs {
    std::string checkpoint;
    std::string chart;
    std::string dev;
    std::string manager;
    bool allow_new_team = false;
    bool reset_moved_hidden = false;
    std::uint64_t seed = 42;
    std::string out_checkpoint;
    std::string out_chart;
};

int cmd_org_update(const OrgUpdateArgs& a, std::ostream& out)
{
    auto ckpt = load_checkpoint(a.checkpoint);
    if (!ckpt.network) {
        throw CompatibilityError(std::string("org-update applies to network checkpoints, not '") +
                                 to_string(ckpt.kind) + "'");
    }
    const auto chart = load_chart(a.chart);
    const auto enc = build_encoding(chart);
    if (enc.fingerprint() != ckpt.encoding.fingerprint()) {
        throw CompatibilityError("chart " + a.chart + " does not match the checkpoint encoding");
    }
    const auto change = apply_role_change(chart, a.dev, a.manager);
    TransferPolicy policy;
    policy.allow_team_change = a.allow_new_team;
    policy.reset_moved_hidden = a.reset_moved_hidden;
    ckpt.network = transfer_on_role_change(*ckpt.network, change.remap, change.encoding, policy, a.seed);
    ckpt.encoding = change.encoding;
    ckpt.metadata["org_update"] = a.dev + "->" + a.manager;

    const auto ckpt_out = a.out_checkpoint.empty() ? a.checkpoint : a.out_checkpoint;
    const auto chart_out = a.out_chart.empty() ? a.chart : a.out_chart;
    save_checkpoint(ckpt, ckpt_out);
    save_chart(change.chart, chart_out);
    std::size_t moved = 0;
    for (std::size_t d = 0; d < change.remap.dev_new_from_old.size(); ++d) {
        moved += change.remap.dev_new_from_old[d] != d ? 1 : 0;
    }
    out << fmt::format("moved {} under {}: {} developer positions changed{}; wrote {} and {}\n", a.dev, a.manager,
                       moved, change.remap.team_added ? ", new team added" : "", ckpt_out, chart_out);
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Bug triage: org-chart encoded two-headed network, baselines and evaluation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "triage 0.1.0");
    std::string config_help;
    std::uint64_t seed_help = 0;
    app.add_option("--config", config_help, "key = value file supplying defaults for the subcommand flags");
    app.add_option("--seed", seed_help, "Random seed passed to the subcommand");

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a synthetic corpus and org chart");
    generate->add_option("--seed", gen.seed, "Random seed");
    generate->add_option("--corpus-out", gen.corpus_out, "Corpus output path");
    generate->add_option("--chart-out", gen.chart_out, "Chart output path");
    for (const auto& key : kSyntheticKeys) {
        generate->add_option_function<std::string>(
            dashed(key), [&gen, key](const std::string& v) { gen.overrides[key] = v; }, "Synthetic generator setting");
    }

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "Train a model and write a checkpoint");
    add_settings(train_cmd, train.settings);
    train_cmd->add_option("--corpus", train.corpus, "Corpus file")->required();
    train_cmd->add_option("--chart", train.chart, "Org chart file")->required();
    train_cmd->add_option("--kind", train.kind, "dual | developer | nb | logreg");
    train_cmd->add_option("--out", train.out, "Checkpoint output path");

    EvaluateArgs eval;
    auto* eval_cmd = app.add_subcommand("evaluate", "Run the holdout or IL-CV protocol");
    add_settings(eval_cmd, eval.settings);
    eval_cmd->add_option("--checkpoint", eval.checkpoints, "Checkpoint(s) whose configuration is evaluated");
    eval_cmd->add_option("--models", eval.models, "Models to evaluate without checkpoints (dual developer nb logreg)")
        ->delimiter(',');
    eval_cmd->add_option("--corpus", eval.corpus, "Corpus file")->required();
    eval_cmd->add_option("--chart", eval.chart, "Org chart file")->required();
    eval_cmd->add_option("--split", eval.split, "holdout | ilcv");
    eval_cmd->add_option("--folds", eval.folds, "Number of IL-CV folds");
    eval_cmd->add_option("--ks", eval.ks, "Top-k values")->delimiter(',');
    eval_cmd->add_option("--ilcv-k", eval.ilcv_k, "k shown in IL-CV tables");
    eval_cmd->add_option("--repeats", eval.repeats, "Reseeded repetitions of the stochastic models");
    eval_cmd->add_flag("--compare-unweighted", eval.compare_unweighted,
                       "Also run the other labeling mode and print the accuracy increase");
    eval_cmd->add_option("--report", eval.report, "Text report path");
    eval_cmd->add_option("--results", eval.results, "JSON results path");

    PredictArgs pred;
    auto* predict_cmd = app.add_subcommand("predict", "Rank teams and developers for one case");
    predict_cmd->add_option("--checkpoint", pred.checkpoint, "Checkpoint")->required();
    predict_cmd->add_option("--case", pred.case_file, "File holding one case record")->required();
    predict_cmd->add_option("--k", pred.k, "Entries to list per output");

    OrgUpdateArgs org;
    auto* org_cmd = app.add_subcommand("org-update", "Move a developer and carry the model weights along");
    org_cmd->add_option("--checkpoint", org.checkpoint, "Checkpoint")->required();
    org_cmd->add_option("--chart", org.chart, "Current org chart")->required();
    org_cmd->add_option("--dev", org.dev, "Person to move")->required();
    org_cmd->add_option("--manager", org.manager, "New manager")->required();
    org_cmd->add_flag("--allow-new-team", org.allow_new_team, "Accept moves that create or remove a team");
    org_cmd->add_flag("--reset-moved-hidden", org.reset_moved_hidden,
                      "Reinitialise hidden-to-developer weights of moved developers");
    org_cmd->add_option("--seed", org.seed, "Seed for freshly initialised weights");
    org_cmd->add_option("--out-checkpoint", org.out_checkpoint, "Output checkpoint (default: overwrite)");
    org_cmd->add_option("--out-chart", org.out_chart, "Output chart (default: overwrite)");

    try {
        auto expanded = expand_globals(args, app);
        std::reverse(expanded.begin(), expanded.end());
        app.parse(expanded);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o;
        std::ostringstream eo;
        const int code = app.exit(e, o, eo);
        out << o.str();
        err << eo.str();
        return code == 0 ? kOk : kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    }

    try {
        if (generate->parsed()) {
            return cmd_generate(gen, out);
        }
        if (train_cmd->parsed()) {
            return cmd_train(train, out);
        }
        if (eval_cmd->parsed()) {
            return cmd_evaluate(eval, out);
        }
        if (predict_cmd->parsed()) {
            return cmd_predict(pred, out);
        }
        if (org_cmd->parsed()) {
            return cmd_org_update(org, out);
        }
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return kIoError;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kValidationError;
    } catch (const CompatibilityError& e) {
        err << "compatibility error: " << e.what() << "\n";
        return kCompatibilityError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}

} // namespace triage::cli
