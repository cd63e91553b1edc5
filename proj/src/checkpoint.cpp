#include "triage/checkpoint.hpp"

#include "triage/error.hpp"

#include <json.hpp>

#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace triage {

namespace {

using nlohmann::json;

constexpr const char* kMagic = "TRIAGE-CHECKPOINT";

void put_f64(std::string& out, double v)
{
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffU));
    }
}

double get_f64(const std::string& in, std::size_t offset)
{
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + static_cast<std::size_t>(i)]))
                << (8 * i);
    }
    double v = 0.0;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

Eigen::MatrixXd row_matrix(const Eigen::RowVectorXd& v)
{
    return Eigen::MatrixXd(v);
}

Eigen::MatrixXd col_matrix(const Eigen::VectorXd& v)
{
    return Eigen::MatrixXd(v);
}

void expect_shape(const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols, const std::string& name)
{
    if (m.rows() != rows || m.cols() != cols) {
        throw ValidationError("checkpoint tensor '" + name + "' has shape " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                              std::to_string(cols));
    }
}

} // namespace

std::string serialize_checkpoint(const Checkpoint& c)
{
    // Tensors owned here so references stay valid while the payload is written.
    std::vector<std::pair<std::string, Eigen::MatrixXd>> tensors;
    tensors.emplace_back("lsa.idf", col_matrix(c.lsa.idf));
    tensors.emplace_back("lsa.projection", c.lsa.projection);
    tensors.emplace_back("lsa.singular_values", col_matrix(c.lsa.singular_values));

    json header;
    header["format"] = kMagic;
    header["version"] = kCheckpointVersion;
    header["kind"] = to_string(c.kind);
    header["schema"] = c.schema;
    header["label_mode"] = to_string(c.label_mode);
    header["weights"] = {{"owner", c.weights.owner_weight},
                         {"commenter", c.weights.commenter_weight},
                         {"closer", c.weights.closer_weight}};
    header["metadata"] = c.metadata;
    header["encoding"] = {{"teams", c.encoding.team_index()},
                          {"developers", c.encoding.dev_index()},
                          {"developer_team", c.encoding.dev_team()},
                          {"fingerprint", fingerprint_hex(c.encoding.fingerprint())}};
    header["lsa"] = {{"tokens", c.lsa.vocab.tokens()},
                     {"document_frequency", c.lsa.vocab.document_frequency()},
                     {"n_documents", c.lsa.vocab.n_documents()}};

    if (c.network) {
        const auto& n = *c.network;
        header["network"] = {{"kind", to_string(n.kind)},
                             {"input_dim", n.input_dim},
                             {"hidden_dim", n.hidden_dim},
                             {"n_teams", n.n_teams},
                             {"n_devs", n.n_devs},
                             {"leaky_slope", n.leaky_slope},
                             {"dropout", n.dropout},
                             {"encoding_fingerprint", fingerprint_hex(n.encoding_fingerprint)}};
        for_each_tensor(n, [&](const char* name, const Eigen::MatrixXd& t) {
            tensors.emplace_back(std::string("net.") + name, t);
        });
    }
    auto add_nb = [&](const std::optional<NaiveBayesModel>& m, const std::string& prefix) {
        if (m) {
            header[prefix + "alpha"] = m->alpha;
            tensors.emplace_back(prefix + "log_prior", row_matrix(m->log_prior));
            tensors.emplace_back(prefix + "log_likelihood", m->log_likelihood);
        }
    };
    add_nb(c.team_nb, "team_nb.");
    add_nb(c.dev_nb, "dev_nb.");
    auto add_lr = [&](const std::optional<LogisticModel>& m, const std::string& prefix) {
        if (m) {
            tensors.emplace_back(prefix + "weight", m->weight);
            tensors.emplace_back(prefix + "bias", row_matrix(m->bias));
        }
    };
    add_lr(c.team_logistic, "team_logreg.");
    add_lr(c.dev_logistic, "dev_logreg.");

    auto& list = header["tensors"] = json::array();
    for (const auto& [name, t] : tensors) {
        list.push_back({{"name", name}, {"rows", t.rows()}, {"cols", t.cols()}});
    }

    std::string out = header.dump();
    out += '\n';
    for (const auto& [name, t] : tensors) {
        // Row-major payload.
        for (Eigen::Index r = 0; r < t.rows(); ++r) {
            for (Eigen::Index col = 0; col < t.cols(); ++col) {
                put_f64(out, t(r, col));
            }
        }
    }
    return out;
}

Checkpoint parse_checkpoint(const std::string& bytes)
{
    const auto eol = bytes.find('\n');
    if (eol == std::string::npos) {
        throw ValidationError("checkpoint: missing header line");
    }
    json header;
    try {
        header = json::parse(bytes.substr(0, eol));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("checkpoint: malformed header: ") + e.what());
    }
    try {
        if (header.value("format", std::string()) != kMagic) {
            throw ValidationError("checkpoint: not a checkpoint file");
        }
        if (header.at("version").get<int>() != kCheckpointVersion) {
            throw CompatibilityError("checkpoint: unsupported format version " + header.at("version").dump());
        }

        std::map<std::string, Eigen::MatrixXd> tensors;
        std::size_t offset = eol + 1;
        for (const auto& t : header.at("tensors")) {
            const auto name = t.at("name").get<std::string>();
            const auto rows = t.at("rows").get<Eigen::Index>();
            const auto cols = t.at("cols").get<Eigen::Index>();
            if (rows < 0 || cols < 0) {
                throw ValidationError("checkpoint: negative shape for '" + name + "'");
            }
            const auto need = static_cast<std::size_t>(rows * cols) * 8;
            if (bytes.size() < offset + need) {
                throw ValidationError("checkpoint: payload truncated in tensor '" + name + "'");
            }
            Eigen::MatrixXd m(rows, cols);
            for (Eigen::Index r = 0; r < rows; ++r) {
                for (Eigen::Index col = 0; col < cols; ++col) {
                    m(r, col) = get_f64(bytes, offset);
                    offset += 8;
                }
            }
            if (!tensors.emplace(name, std::move(m)).second) {
                throw ValidationError("checkpoint: duplicate tensor '" + name + "'");
            }
        }
        if (offset != bytes.size()) {
            throw ValidationError("checkpoint: trailing bytes after the last tensor");
        }
        auto take = [&](const std::string& name) {
            const auto it = tensors.find(name);
            if (it == tensors.end()) {
                throw ValidationError("checkpoint: missing tensor '" + name + "'");
            }
            auto m = std::move(it->second);
            tensors.erase(it);
            return m;
        };

        Checkpoint c;
        c.kind = parse_model_type(header.at("kind").get<std::string>());
        c.schema = header.at("schema").get<std::vector<std::string>>();
        c.label_mode = parse_label_mode(header.at("label_mode").get<std::string>());
        const auto& w = header.at("weights");
        c.weights = {w.at("owner").get<double>(), w.at("commenter").get<double>(), w.at("closer").get<double>()};
        c.metadata = header.at("metadata").get<std::map<std::string, std::string>>();
        const auto& e = header.at("encoding");
        c.encoding = OutputEncoding::from_lists(e.at("teams").get<std::vector<std::string>>(),
                                                e.at("developers").get<std::vector<std::string>>(),
                                                e.at("developer_team").get<std::vector<std::size_t>>());
        if (fingerprint_hex(c.encoding.fingerprint()) != e.at("fingerprint").get<std::string>()) {
            throw ValidationError("checkpoint: encoding fingerprint does not match its lists");
        }

        const auto& l = header.at("lsa");
        c.lsa.vocab = Vocabulary(l.at("tokens").get<std::vector<std::string>>(),
                                 l.at("document_frequency").get<std::vector<std::size_t>>(),
                                 l.at("n_documents").get<std::size_t>());
        const auto vocab = static_cast<Eigen::Index>(c.lsa.vocab.size());
        auto idf = take("lsa.idf");
        expect_shape(idf, vocab, 1, "lsa.idf");
        c.lsa.idf = idf.col(0);
        c.lsa.projection = take("lsa.projection");
        expect_shape(c.lsa.projection, vocab, c.lsa.projection.cols(), "lsa.projection");
        auto sv = take("lsa.singular_values");
        expect_shape(sv, c.lsa.projection.cols(), 1, "lsa.singular_values");
        c.lsa.singular_values = sv.col(0);

        const auto n_teams = static_cast<Eigen::Index>(c.encoding.n_teams());
        const auto n_devs = static_cast<Eigen::Index>(c.encoding.n_devs());
        if (header.contains("network")) {
            const auto& n = header.at("network");
            DualDnnModel m;
            const auto kind = n.at("kind").get<std::string>();
            if (kind != "dual" && kind != "developer") {
                throw CompatibilityError("checkpoint: unknown network kind '" + kind + "'");
            }
            m.kind = kind == "dual" ? NetworkKind::dual : NetworkKind::developer;
            m.input_dim = n.at("input_dim").get<int>();
            m.hidden_dim = n.at("hidden_dim").get<int>();
            m.n_teams = n.at("n_teams").get<int>();
            m.n_devs = n.at("n_devs").get<int>();
            m.leaky_slope = n.at("leaky_slope").get<double>();
            m.dropout = n.at("dropout").get<double>();
            m.encoding_fingerprint = std::stoull(n.at("encoding_fingerprint").get<std::string>(), nullptr, 16);
            if (m.encoding_fingerprint != c.encoding.fingerprint() || m.n_teams != n_teams || m.n_devs != n_devs) {
                throw CompatibilityError("checkpoint: network was built for a different encoding");
            }
            if (m.input_dim != c.lsa.rank()) {
                throw ValidationError("checkpoint: network input width differs from the LSA rank");
            }
            const std::map<std::string, std::pair<Eigen::Index, Eigen::Index>> shapes{
                {"hidden1.weight", {m.input_dim, m.hidden_dim}},
                {"hidden1.bias", {1, m.hidden_dim}},
                {"hidden2.weight", {m.hidden_dim, m.hidden_dim}},
                {"hidden2.bias", {1, m.hidden_dim}},
                {"team_head.weight", {m.hidden_dim, m.n_teams}},
                {"team_head.bias", {1, m.n_teams}},
                {"dev_head.weight", {m.hidden_dim, m.n_devs}},
                {"dev_head.bias", {1, m.n_devs}},
                {"team_to_dev.weight", {m.n_teams, m.n_devs}},
            };
            for_each_tensor(m, [&](const char* name, Eigen::MatrixXd& t) {
                t = take(std::string("net.") + name);
                const auto& [rows, cols] = shapes.at(name);
                expect_shape(t, rows, cols, name);
            });
            c.network = std::move(m);
        }
        auto read_nb = [&](const std::string& prefix, Eigen::Index classes) -> std::optional<NaiveBayesModel> {
            if (!header.contains(prefix + "alpha")) {
                return std::nullopt;
            }
            NaiveBayesModel m;
            m.alpha = header.at(prefix + "alpha").get<double>();
            auto prior = take(prefix + "log_prior");
            expect_shape(prior, 1, classes, prefix + "log_prior");
            m.log_prior = prior.row(0);
            m.log_likelihood = take(prefix + "log_likelihood");
            expect_shape(m.log_likelihood, classes, vocab, prefix + "log_likelihood");
            return m;
        };
        c.team_nb = read_nb("team_nb.", n_teams);
        c.dev_nb = read_nb("dev_nb.", n_devs);
        auto read_lr = [&](const std::string& prefix, Eigen::Index classes) -> std::optional<LogisticModel> {
            if (!tensors.count(prefix + "weight")) {
                return std::nullopt;
            }
            LogisticModel m;
            m.weight = take(prefix + "weight");
            expect_shape(m.weight, c.lsa.rank(), classes, prefix + "weight");
            auto bias = take(prefix + "bias");
            expect_shape(bias, 1, classes, prefix + "bias");
            m.bias = bias.row(0);
            return m;
        };
        c.team_logistic = read_lr("team_logreg.", n_teams);
        c.dev_logistic = read_lr("dev_logreg.", n_devs);
        if (!tensors.empty()) {
            throw ValidationError("checkpoint: unexpected tensor '" + tensors.begin()->first + "'");
        }

        const bool ok = (c.kind == ModelType::dual && c.network && c.network->kind == NetworkKind::dual) ||
                        (c.kind == ModelType::developer && c.network && c.network->kind == NetworkKind::developer) ||
                        (c.kind == ModelType::naive_bayes && c.team_nb && c.dev_nb) ||
                        (c.kind == ModelType::logistic && c.team_logistic && c.dev_logistic);
        if (!ok) {
            throw ValidationError(std::string("checkpoint: tensors do not match kind '") + to_string(c.kind) + "'");
        }
        return c;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("checkpoint: bad header field: ") + e.what());
    }
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path)
{
    const auto bytes = serialize_checkpoint(ckpt);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write checkpoint " + path);
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write failed for checkpoint " + path);
    }
}

Checkpoint load_checkpoint(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open checkpoint " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_checkpoint(buf.str());
}

CasePrediction predict_case(const Checkpoint& c, const BugCase& bug)
{
    const std::set<std::string> schema(c.schema.begin(), c.schema.end());
    for (const auto& [name, value] : bug.features) {
        if (!schema.count(name)) {
            throw CompatibilityError("case '" + bug.id + "' has feature '" + name + "' outside the model schema");
        }
    }
    const auto tokens = tokenize(bug);
    CasePrediction out;
    switch (c.kind) {
    case ModelType::dual:
    case ModelType::developer: {
        const auto p = forward(*c.network, project(tokens, c.lsa), Mode::eval);
        out.team_pmf = p.team_pmf;
        out.dev_pmf = p.dev_pmf;
        break;
    }
    case ModelType::naive_bayes: {
        const auto counts = count_matrix({tokens}, c.lsa.vocab);
        out.team_pmf = predict_pmf(*c.team_nb, counts, 0);
        out.dev_pmf = predict_pmf(*c.dev_nb, counts, 0);
        break;
    }
    case ModelType::logistic: {
        const Eigen::MatrixXd x = project(tokens, c.lsa);
        out.team_pmf = predict_pmf(*c.team_logistic, x).row(0);
        out.dev_pmf = predict_pmf(*c.dev_logistic, x).row(0);
        break;
    }
    }
    return out;
}

} // namespace triage
