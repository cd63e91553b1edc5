#include "triage/orgchart.hpp"

#include "triage/error.hpp"

#include <deque>
#include <fstream>
#include <set>
#include <sstream>

namespace triage {

namespace {

const std::vector<std::string> kNoChildren;

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool valid_id(const std::string& id)
{
    if (id.empty()) {
        return false;
    }
    for (const char c : id) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            return false;
        }
    }
    return id.find("->") == std::string::npos;
}

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, const std::string& s)
{
    for (const unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
    h ^= 0xffU;
    h *= kFnvPrime;
}

} // namespace

OrgChart OrgChart::from_edges(std::string root, const std::vector<Edge>& edges)
{
    if (!valid_id(root)) {
        throw ValidationError("org chart: invalid root id '" + root + "'");
    }
    OrgChart chart;
    chart.root_ = std::move(root);
    for (const auto& [person, manager] : edges) {
        if (!valid_id(person) || !valid_id(manager)) {
            throw ValidationError("org chart: invalid id in edge '" + person + " -> " + manager + "'");
        }
        if (person == chart.root_) {
            throw ValidationError("org chart: root '" + person + "' cannot have a manager");
        }
        if (person == manager) {
            throw ValidationError("org chart: '" + person + "' manages itself");
        }
        if (!chart.parent_.emplace(person, manager).second) {
            throw ValidationError("org chart: '" + person + "' has more than one manager");
        }
        chart.children_[manager].push_back(person);
    }

    // Every person must be reachable from the root; this also rules out cycles
    // because each non-root person has exactly one parent.
    std::set<std::string> seen{chart.root_};
    std::deque<std::string> queue{chart.root_};
    while (!queue.empty()) {
        const auto cur = queue.front();
        queue.pop_front();
        for (const auto& child : chart.subordinates(cur)) {
            if (seen.insert(child).second) {
                queue.push_back(child);
            }
        }
    }
    for (const auto& [person, manager] : chart.parent_) {
        if (!seen.count(person)) {
            throw ValidationError("org chart: '" + person + "' is not reachable from root (cycle or detached manager '" +
                                  manager + "')");
        }
    }
    for (const auto& [manager, kids] : chart.children_) {
        if (!seen.count(manager)) {
            throw ValidationError("org chart: manager '" + manager + "' is not reachable from root");
        }
    }
    return chart;
}

bool OrgChart::contains(const std::string& person) const
{
    return person == root_ || parent_.count(person) > 0;
}

std::optional<std::string> OrgChart::manager_of(const std::string& person) const
{
    const auto it = parent_.find(person);
    if (it == parent_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const std::vector<std::string>& OrgChart::subordinates(const std::string& person) const
{
    const auto it = children_.find(person);
    return it == children_.end() ? kNoChildren : it->second;
}

std::vector<std::string> OrgChart::level_order() const
{
    std::vector<std::string> order{root_};
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (const auto& child : subordinates(order[i])) {
            order.push_back(child);
        }
    }
    return order;
}

std::vector<OrgChart::Edge> OrgChart::edges() const
{
    std::vector<Edge> out;
    out.reserve(parent_.size());
    for (const auto& person : level_order()) {
        for (const auto& child : subordinates(person)) {
            out.emplace_back(child, person);
        }
    }
    return out;
}

OrgChart parse_chart(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::optional<std::string> root;
    std::vector<OrgChart::Edge> edges;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (line.rfind("root:", 0) == 0) {
            if (root) {
                throw ValidationError("chart line " + std::to_string(lineno) + ": duplicate root line");
            }
            root = trim(line.substr(5));
            continue;
        }
        const auto arrow = line.find("->");
        if (arrow == std::string::npos) {
            throw ValidationError("chart line " + std::to_string(lineno) + ": expected 'person -> manager'");
        }
        edges.emplace_back(trim(line.substr(0, arrow)), trim(line.substr(arrow + 2)));
    }
    if (!root) {
        throw ValidationError("chart: missing 'root:' line");
    }
    return OrgChart::from_edges(*root, edges);
}

OrgChart load_chart(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open chart file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_chart(buf.str());
}

std::string format_chart(const OrgChart& chart)
{
    std::string out = "root: " + chart.root() + "\n";
    for (const auto& [person, manager] : chart.edges()) {
        out += person + " -> " + manager + "\n";
    }
    return out;
}

void save_chart(const OrgChart& chart, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write chart file " + path);
    }
    out << format_chart(chart);
    if (!out) {
        throw IoError("write failed for chart file " + path);
    }
}

OutputEncoding OutputEncoding::from_lists(std::vector<std::string> team_index,
                                          std::vector<std::string> dev_index,
                                          std::vector<std::size_t> dev_team)
{
    if (dev_index.size() != dev_team.size()) {
        throw ValidationError("encoding: developer and team-position lists differ in length");
    }
    OutputEncoding enc;
    enc.team_index_ = std::move(team_index);
    enc.dev_index_ = std::move(dev_index);
    enc.dev_team_ = std::move(dev_team);
    for (std::size_t t = 0; t < enc.team_index_.size(); ++t) {
        if (!enc.team_pos_.emplace(enc.team_index_[t], t).second) {
            throw ValidationError("encoding: duplicate team '" + enc.team_index_[t] + "'");
        }
    }
    enc.block_begin_.assign(enc.team_index_.size() + 1, 0);
    std::size_t prev = 0;
    for (std::size_t d = 0; d < enc.dev_index_.size(); ++d) {
        if (!enc.dev_pos_.emplace(enc.dev_index_[d], d).second) {
            throw ValidationError("encoding: duplicate developer '" + enc.dev_index_[d] + "'");
        }
        const auto t = enc.dev_team_[d];
        if (t >= enc.team_index_.size() || t < prev) {
            throw ValidationError("encoding: developer blocks are not grouped in team order");
        }
        prev = t;
    }
    // block_begin_[t] = first developer position with team >= t
    std::size_t d = 0;
    for (std::size_t t = 0; t <= enc.team_index_.size(); ++t) {
        while (d < enc.dev_team_.size() && enc.dev_team_[d] < t) {
            ++d;
        }
        enc.block_begin_[t] = d;
    }
    return enc;
}

std::optional<std::size_t> OutputEncoding::find_dev(const std::string& id) const
{
    const auto it = dev_pos_.find(id);
    if (it == dev_pos_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<std::size_t> OutputEncoding::find_team(const std::string& manager) const
{
    const auto it = team_pos_.find(manager);
    if (it == team_pos_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::pair<std::size_t, std::size_t> OutputEncoding::team_block(std::size_t team) const
{
    return {block_begin_.at(team), block_begin_.at(team + 1)};
}

std::uint64_t OutputEncoding::fingerprint() const
{
    std::uint64_t h = kFnvOffset;
    fnv_mix(h, "teams");
    for (const auto& t : team_index_) {
        fnv_mix(h, t);
    }
    fnv_mix(h, "devs");
    for (std::size_t d = 0; d < dev_index_.size(); ++d) {
        fnv_mix(h, dev_index_[d]);
        fnv_mix(h, std::to_string(dev_team_[d]));
    }
    return h;
}

OutputEncoding build_encoding(const OrgChart& chart)
{
    std::vector<std::string> teams;
    for (const auto& person : chart.level_order()) {
        const auto& kids = chart.subordinates(person);
        if (kids.empty()) {
            continue;
        }
        if (person == chart.root()) {
            // The root is a team only when developers report to it directly.
            bool has_leaf = false;
            for (const auto& k : kids) {
                has_leaf = has_leaf || chart.subordinates(k).empty();
            }
            if (!has_leaf) {
                continue;
            }
        }
        teams.push_back(person);
    }
    if (teams.empty()) {
        throw ValidationError("no teams: org chart has no manager with subordinates");
    }
    std::vector<std::string> devs;
    std::vector<std::size_t> dev_team;
    for (std::size_t t = 0; t < teams.size(); ++t) {
        for (const auto& k : chart.subordinates(teams[t])) {
            if (chart.subordinates(k).empty()) {
                devs.push_back(k);
                dev_team.push_back(t);
            }
        }
    }
    return OutputEncoding::from_lists(std::move(teams), std::move(devs), std::move(dev_team));
}

std::size_t resolve_team(const std::string& dev, const OutputEncoding& enc)
{
    return enc.dev_team()[resolve_dev(dev, enc)];
}

std::size_t resolve_dev(const std::string& dev, const OutputEncoding& enc)
{
    const auto pos = enc.find_dev(dev);
    if (!pos) {
        throw ValidationError("developer '" + dev + "' is not in the org chart encoding");
    }
    return *pos;
}

std::string fingerprint_hex(std::uint64_t fp)
{
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kHex[fp & 0xfU];
        fp >>= 4U;
    }
    return out;
}

bool IndexRemap::is_identity() const
{
    if (old_fingerprint != new_fingerprint) {
        return false;
    }
    for (std::size_t i = 0; i < dev_old_to_new.size(); ++i) {
        if (dev_old_to_new[i] != i) {
            return false;
        }
    }
    return dev_old_to_new.size() == dev_new_from_old.size();
}

bool IndexRemap::preserves_ids() const
{
    if (team_added || team_removed || dev_old_to_new.size() != dev_new_from_old.size()) {
        return false;
    }
    for (const auto& p : dev_new_from_old) {
        if (!p) {
            return false;
        }
    }
    for (const auto& p : team_new_from_old) {
        if (!p) {
            return false;
        }
    }
    return true;
}

IndexRemap make_remap(const OutputEncoding& before, const OutputEncoding& after)
{
    IndexRemap remap;
    remap.old_fingerprint = before.fingerprint();
    remap.new_fingerprint = after.fingerprint();
    for (const auto& id : before.dev_index()) {
        remap.dev_old_to_new.push_back(after.find_dev(id));
    }
    for (const auto& id : after.dev_index()) {
        remap.dev_new_from_old.push_back(before.find_dev(id));
    }
    for (const auto& id : before.team_index()) {
        remap.team_old_to_new.push_back(after.find_team(id));
        remap.team_removed = remap.team_removed || !remap.team_old_to_new.back();
    }
    for (const auto& id : after.team_index()) {
        remap.team_new_from_old.push_back(before.find_team(id));
        remap.team_added = remap.team_added || !remap.team_new_from_old.back();
    }
    for (std::size_t d = 0; d < after.n_devs(); ++d) {
        const auto old = remap.dev_new_from_old[d];
        bool moved = false;
        if (old) {
            moved = before.team_index()[before.dev_team()[*old]] != after.team_index()[after.dev_team()[d]];
        }
        remap.dev_moved.push_back(moved);
    }
    return remap;
}

RoleChange apply_role_change(const OrgChart& chart, const std::string& dev, const std::string& new_manager)
{
    if (!chart.contains(dev)) {
        throw ValidationError("role change: unknown person '" + dev + "'");
    }
    if (!chart.contains(new_manager)) {
        throw ValidationError("role change: unknown manager '" + new_manager + "'");
    }
    if (dev == chart.root()) {
        throw ValidationError("role change: cannot move the root '" + dev + "'");
    }
    // Moving under one's own subtree would create a cycle.
    for (auto cur = std::optional<std::string>(new_manager); cur; cur = chart.manager_of(*cur)) {
        if (*cur == dev) {
            throw ValidationError("role change: moving '" + dev + "' under '" + new_manager + "' creates a cycle");
        }
    }

    const auto before = build_encoding(chart);
    if (chart.manager_of(dev) == new_manager) {
        return {chart, before, make_remap(before, before)};
    }

    // Re-derive child order from the original chart, appending the moved
    // person at the end of the new manager's list.
    std::vector<OrgChart::Edge> ordered;
    for (const auto& person : chart.level_order()) {
        for (const auto& child : chart.subordinates(person)) {
            if (child != dev) {
                ordered.emplace_back(child, person);
            }
        }
        if (person == new_manager) {
            ordered.emplace_back(dev, new_manager);
        }
    }
    auto moved = OrgChart::from_edges(chart.root(), ordered);
    auto after = build_encoding(moved);
    auto remap = make_remap(before, after);
    return {std::move(moved), std::move(after), std::move(remap)};
}

} // namespace triage
