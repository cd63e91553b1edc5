#include "triage/corpus.hpp"

#include "triage/error.hpp"
#include "triage/keyvalue.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace triage {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<std::string> string_list(const json& j, const std::string& what)
{
    if (!j.is_array()) {
        throw ValidationError(what + " must be an array");
    }
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string() || v.get_ref<const std::string&>().empty()) {
            throw ValidationError(what + " entries must be non-empty strings");
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

BugCase case_from_json(const json& j, bool require_history)
{
    if (!j.is_object()) {
        throw ValidationError("record is not an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "id" && key != "submitted_at" && key != "features" && key != "history") {
            throw ValidationError("unknown field '" + key + "'");
        }
    }
    BugCase bug;
    if (!j.contains("id") || !j["id"].is_string() || j["id"].get_ref<const std::string&>().empty()) {
        throw ValidationError("missing or empty 'id'");
    }
    bug.id = j["id"].get<std::string>();
    if (!j.contains("submitted_at") || !j["submitted_at"].is_number_integer()) {
        throw ValidationError("'submitted_at' must be an integer");
    }
    bug.submitted_at = j["submitted_at"].get<std::int64_t>();
    if (bug.submitted_at < 0) {
        throw ValidationError("'submitted_at' must be non-negative");
    }
    if (j.contains("features")) {
        const auto& f = j["features"];
        if (!f.is_object()) {
            throw ValidationError("'features' must be an object");
        }
        for (const auto& [name, value] : f.items()) {
            if (!value.is_string()) {
                throw ValidationError("feature '" + name + "' must be a string");
            }
            bug.features[name] = value.get<std::string>();
        }
    }
    if (!j.contains("history")) {
        if (require_history) {
            throw ValidationError("missing 'history'");
        }
        return bug;
    }
    const auto& h = j["history"];
    if (!h.is_object()) {
        throw ValidationError("'history' must be an object");
    }
    for (const auto& [key, value] : h.items()) {
        if (key != "owners" && key != "commenters" && key != "closer") {
            throw ValidationError("unknown history field '" + key + "'");
        }
    }
    if (!h.contains("closer") || !h["closer"].is_string() || h["closer"].get_ref<const std::string&>().empty()) {
        throw ValidationError("history lacks a 'closer'");
    }
    bug.history.closer = h["closer"].get<std::string>();
    if (h.contains("owners")) {
        bug.history.owners = string_list(h["owners"], "history.owners");
    }
    if (h.contains("commenters")) {
        bug.history.commenters = string_list(h["commenters"], "history.commenters");
    }
    return bug;
}

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

} // namespace

BugCase parse_case(const std::string& line, bool require_history)
{
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed record: ") + e.what());
    }
    return case_from_json(j, require_history);
}

std::string format_case(const BugCase& bug, const std::vector<std::string>& schema)
{
    ordered_json j;
    j["id"] = bug.id;
    j["submitted_at"] = bug.submitted_at;
    ordered_json features = ordered_json::object();
    for (const auto& name : schema) {
        const auto it = bug.features.find(name);
        features[name] = it == bug.features.end() ? std::string() : it->second;
    }
    for (const auto& [name, value] : bug.features) {
        if (!features.contains(name)) {
            features[name] = value;
        }
    }
    j["features"] = std::move(features);
    ordered_json history;
    history["owners"] = bug.history.owners;
    history["commenters"] = bug.history.commenters;
    history["closer"] = bug.history.closer;
    j["history"] = std::move(history);
    return j.dump();
}

Corpus parse_corpus(const std::string& text)
{
    Corpus corpus;
    std::set<std::string> ids;
    std::set<std::string> known;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        BugCase bug;
        try {
            bug = parse_case(line, true);
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!ids.insert(bug.id).second) {
            throw ValidationError("line " + std::to_string(lineno) + ": duplicate id '" + bug.id + "'");
        }
        // Object keys come back sorted from the parser, so first-seen order
        // is taken from the raw line.
        const auto raw = ordered_json::parse(line);
        if (raw.contains("features")) {
            for (const auto& [name, value] : raw["features"].items()) {
                if (known.insert(name).second) {
                    corpus.schema.push_back(name);
                }
            }
        }
        corpus.cases.push_back(std::move(bug));
    }
    for (auto& bug : corpus.cases) {
        for (const auto& name : corpus.schema) {
            bug.features.try_emplace(name, std::string());
        }
    }
    return corpus;
}

Corpus load_corpus(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open corpus file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_corpus(buf.str());
}

std::string format_corpus(const Corpus& corpus)
{
    std::string out;
    for (const auto& bug : corpus.cases) {
        out += format_case(bug, corpus.schema);
        out += '\n';
    }
    return out;
}

void save_corpus(const Corpus& corpus, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write corpus file " + path);
    }
    out << format_corpus(corpus);
    if (!out) {
        throw IoError("write failed for corpus file " + path);
    }
}

std::uint64_t corpus_hash(const Corpus& corpus)
{
    std::uint64_t h = kFnvOffset;
    for (const unsigned char c : format_corpus(corpus)) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

void apply_overrides(SyntheticConfig& c, const std::map<std::string, std::string>& values, bool ignore_unknown)
{
    for (const auto& [key, value] : values) {
        auto as_int = [&] { return static_cast<int>(to_integer(key, value)); };
        if (key == "n_teams") c.n_teams = as_int();
        else if (key == "devs_per_team") c.devs_per_team = as_int();
        else if (key == "n_cases") c.n_cases = as_int();
        else if (key == "topical_features") c.topical_features = as_int();
        else if (key == "context_features") c.context_features = as_int();
        else if (key == "tokens_per_feature") c.tokens_per_feature = as_int();
        else if (key == "team_vocab") c.team_vocab = as_int();
        else if (key == "dev_vocab") c.dev_vocab = as_int();
        else if (key == "noise_vocab") c.noise_vocab = as_int();
        else if (key == "signal_rate") c.signal_rate = to_double(key, value);
        else if (key == "dev_affinity") c.dev_affinity = to_double(key, value);
        else if (key == "intra_team_rate") c.intra_team_rate = to_double(key, value);
        else if (key == "closer_comment_rate") c.closer_comment_rate = to_double(key, value);
        else if (key == "max_owners") c.max_owners = as_int();
        else if (key == "max_commenters") c.max_commenters = as_int();
        else if (key == "start_time") c.start_time = to_integer(key, value);
        else if (key == "mean_gap_seconds") c.mean_gap_seconds = as_int();
        else if (!ignore_unknown) throw ValidationError("unknown synthetic config key '" + key + "'");
    }
}

void validate(const SyntheticConfig& c)
{
    auto positive = [](int v, const char* name) {
        if (v < 1) {
            throw ValidationError(std::string("synthetic config: ") + name + " must be >= 1");
        }
    };
    positive(c.n_teams, "n_teams");
    positive(c.devs_per_team, "devs_per_team");
    positive(c.n_cases, "n_cases");
    positive(c.topical_features, "topical_features");
    positive(c.tokens_per_feature, "tokens_per_feature");
    positive(c.team_vocab, "team_vocab");
    positive(c.dev_vocab, "dev_vocab");
    positive(c.noise_vocab, "noise_vocab");
    positive(c.mean_gap_seconds, "mean_gap_seconds");
    if (c.context_features < 0 || c.max_owners < 0 || c.max_commenters < 0) {
        throw ValidationError("synthetic config: counts must be non-negative");
    }
    for (const double rate : {c.signal_rate, c.dev_affinity, c.intra_team_rate, c.closer_comment_rate}) {
        if (!(rate >= 0.0 && rate <= 1.0)) {
            throw ValidationError("synthetic config: rates must lie in [0, 1]");
        }
    }
    if (c.start_time < 0) {
        throw ValidationError("synthetic config: start_time must be non-negative");
    }
}

SyntheticData generate_synthetic(const SyntheticConfig& c, std::uint64_t seed)
{
    validate(c);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto pick = [&rng](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    const auto n_teams = static_cast<std::size_t>(c.n_teams);
    const auto per_team = static_cast<std::size_t>(c.devs_per_team);

    std::vector<OrgChart::Edge> edges;
    std::vector<std::vector<std::string>> team_devs(n_teams);
    for (std::size_t t = 0; t < n_teams; ++t) {
        edges.emplace_back("mgr" + std::to_string(t), "org");
    }
    for (std::size_t t = 0; t < n_teams; ++t) {
        for (std::size_t d = 0; d < per_team; ++d) {
            team_devs[t].push_back("dev" + std::to_string(t) + "_" + std::to_string(d));
            edges.emplace_back(team_devs[t].back(), "mgr" + std::to_string(t));
        }
    }

    SyntheticData out{Corpus{}, OrgChart::from_edges("org", edges)};
    auto& corpus = out.corpus;
    for (int f = 0; f < c.topical_features; ++f) {
        corpus.schema.push_back("topic_" + std::to_string(f));
    }
    for (int f = 0; f < c.context_features; ++f) {
        corpus.schema.push_back("context_" + std::to_string(f));
    }
    corpus.schema.push_back("build");

    // Draws a history participant: the true team with probability
    // intra_team_rate, otherwise another team. People in `taken` are avoided
    // while the drawn pool has anyone else.
    auto draw_member = [&](std::size_t team, const std::vector<std::string>& taken) -> std::string {
        std::size_t src = team;
        if (n_teams > 1 && unit(rng) >= c.intra_team_rate) {
            src = pick(n_teams - 1);
            if (src >= team) {
                ++src;
            }
        }
        std::vector<std::string> free;
        for (const auto& cand : team_devs[src]) {
            if (std::find(taken.begin(), taken.end(), cand) == taken.end()) {
                free.push_back(cand);
            }
        }
        const auto& pool = free.empty() ? team_devs[src] : free;
        return pool[pick(pool.size())];
    };

    std::int64_t now = c.start_time;
    const std::size_t width = 6;
    for (int i = 0; i < c.n_cases; ++i) {
        BugCase bug;
        auto num = std::to_string(i);
        bug.id = "BUG-" + std::string(num.size() < width ? width - num.size() : 0, '0') + num;
        now += 1 + static_cast<std::int64_t>(pick(static_cast<std::size_t>(2 * c.mean_gap_seconds)));
        bug.submitted_at = now;

        const auto team = pick(n_teams);
        const auto member = pick(per_team);
        const auto& closer = team_devs[team][member];

        for (int f = 0; f < c.topical_features; ++f) {
            std::string value;
            for (int k = 0; k < c.tokens_per_feature; ++k) {
                std::string tok;
                if (unit(rng) < c.signal_rate) {
                    if (unit(rng) < c.dev_affinity) {
                        tok = "d" + std::to_string(team) + "x" + std::to_string(member) + "w" +
                              std::to_string(pick(static_cast<std::size_t>(c.dev_vocab)));
                    } else {
                        tok = "t" + std::to_string(team) + "w" +
                              std::to_string(pick(static_cast<std::size_t>(c.team_vocab)));
                    }
                } else {
                    tok = "n" + std::to_string(pick(static_cast<std::size_t>(c.noise_vocab)));
                }
                value += (k ? " " : "") + tok;
            }
            bug.features["topic_" + std::to_string(f)] = value;
        }
        for (int f = 0; f < c.context_features; ++f) {
            std::string value;
            for (int k = 0; k < c.tokens_per_feature; ++k) {
                value += (k ? " " : "") + std::string("n") +
                         std::to_string(pick(static_cast<std::size_t>(c.noise_vocab)));
            }
            bug.features["context_" + std::to_string(f)] = value;
        }
        bug.features["build"] = std::to_string(10000 + i / 50);

        bug.history.closer = closer;
        std::vector<std::string> taken{closer};
        const auto n_owners = pick(static_cast<std::size_t>(c.max_owners) + 1);
        for (std::size_t k = 0; k < n_owners; ++k) {
            bug.history.owners.push_back(draw_member(team, taken));
            taken.push_back(bug.history.owners.back());
        }
        // The closer usually comments too; other commenters are distinct.
        if (unit(rng) < c.closer_comment_rate) {
            bug.history.commenters.push_back(closer);
        }
        taken = {closer};
        const auto n_commenters = pick(static_cast<std::size_t>(c.max_commenters) + 1);
        for (std::size_t k = 0; k < n_commenters; ++k) {
            bug.history.commenters.push_back(draw_member(team, taken));
            taken.push_back(bug.history.commenters.back());
        }
        corpus.cases.push_back(std::move(bug));
    }
    return out;
}

} // namespace triage
