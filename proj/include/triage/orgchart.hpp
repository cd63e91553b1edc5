#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace triage {

/// Rooted organization tree. Child order is insertion order and is
/// significant: the output encodings are derived from it.
class OrgChart {
public:
    using Edge = std::pair<std::string, std::string>; ///< (person, manager)

    /// Builds and validates a chart. Edges are applied in order, which
    /// fixes each manager's child order.
    static OrgChart from_edges(std::string root, const std::vector<Edge>& edges);

    const std::string& root() const { return root_; }
    bool contains(const std::string& person) const;
    std::optional<std::string> manager_of(const std::string& person) const;
    const std::vector<std::string>& subordinates(const std::string& person) const;
    std::size_t size() const { return parent_.size() + 1; }

    /// Breadth-first order from the root, ties by child order.
    std::vector<std::string> level_order() const;

    /// Edges in level order; feeding them back to from_edges reproduces the chart.
    std::vector<Edge> edges() const;

    bool operator==(const OrgChart&) const = default;

private:
    std::string root_;
    std::map<std::string, std::string> parent_;
    std::map<std::string, std::vector<std::string>> children_;
};

OrgChart parse_chart(const std::string& text);
OrgChart load_chart(const std::string& path);
std::string format_chart(const OrgChart& chart);
void save_chart(const OrgChart& chart, const std::string& path);

/// Output-neuron layout. Teams are managers in level order; developers are
/// laid out as one contiguous block per team, in team order.
class OutputEncoding {
public:
    OutputEncoding() = default;

    /// Rebuilds an encoding from stored lists (checkpoint load). Validates
    /// the grouping invariant.
    static OutputEncoding from_lists(std::vector<std::string> team_index,
                                     std::vector<std::string> dev_index,
                                     std::vector<std::size_t> dev_team);

    const std::vector<std::string>& team_index() const { return team_index_; }
    const std::vector<std::string>& dev_index() const { return dev_index_; }
    /// Team position for each developer position.
    const std::vector<std::size_t>& dev_team() const { return dev_team_; }

    std::size_t n_teams() const { return team_index_.size(); }
    std::size_t n_devs() const { return dev_index_.size(); }

    std::optional<std::size_t> find_dev(const std::string& id) const;
    std::optional<std::size_t> find_team(const std::string& manager) const;
    /// Half-open [begin, end) developer positions of a team's block.
    std::pair<std::size_t, std::size_t> team_block(std::size_t team) const;

    /// FNV-1a over the canonical layout; identifies the encoding a model was built for.
    std::uint64_t fingerprint() const;

    bool operator==(const OutputEncoding& other) const
    {
        return team_index_ == other.team_index_ && dev_index_ == other.dev_index_ &&
               dev_team_ == other.dev_team_;
    }

private:
    std::vector<std::string> team_index_;
    std::vector<std::string> dev_index_;
    std::vector<std::size_t> dev_team_;
    std::map<std::string, std::size_t> dev_pos_;
    std::map<std::string, std::size_t> team_pos_;
    std::vector<std::size_t> block_begin_;
};

OutputEncoding build_encoding(const OrgChart& chart);

/// Team position of a developer; throws ValidationError naming the id if unknown.
std::size_t resolve_team(const std::string& dev, const OutputEncoding& enc);
/// Developer position; throws ValidationError naming the id if unknown.
std::size_t resolve_dev(const std::string& dev, const OutputEncoding& enc);

std::string fingerprint_hex(std::uint64_t fp);

/// Position mapping between two encodings. nullopt in a `*_new_from_old`
/// entry means the id is new; nullopt in `*_old_to_new` means it disappeared.
struct IndexRemap {
    std::uint64_t old_fingerprint = 0;
    std::uint64_t new_fingerprint = 0;
    std::vector<std::optional<std::size_t>> dev_old_to_new;
    std::vector<std::optional<std::size_t>> dev_new_from_old;
    std::vector<std::optional<std::size_t>> team_old_to_new;
    std::vector<std::optional<std::size_t>> team_new_from_old;
    /// Per new developer position: surviving developer whose manager changed.
    std::vector<bool> dev_moved;
    bool team_added = false;
    bool team_removed = false;

    bool is_identity() const;
    /// Same developer and team sets; only positions (or team membership) changed.
    bool preserves_ids() const;
};

IndexRemap make_remap(const OutputEncoding& before, const OutputEncoding& after);

struct RoleChange {
    OrgChart chart;
    OutputEncoding encoding;
    IndexRemap remap;
};

/// Moves `dev` (and any subtree under it) under `new_manager`. The moved
/// person is appended to the new manager's child list.
RoleChange apply_role_change(const OrgChart& chart, const std::string& dev,
                             const std::string& new_manager);

} // namespace triage
