#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecplan/core.hpp"

namespace ecplan {

enum class FindingSeverity { violation, warning };

struct Finding {
    std::string rule;
    FindingSeverity severity = FindingSeverity::violation;
    std::string message;
    std::vector<std::string> members; // implicated member ids, sorted
};

struct ComplianceVerdict {
    CommunityType community_type = CommunityType::REC;
    bool passed = true; // no violation-severity finding
    std::vector<Finding> findings;
};

enum class FeederNodeKind { transformer, connection_point };

// Topology of the local feeder: MV/LV transformers and the connection points
// hanging below them. A forest; every node has at most one parent.
class FeederGraph {
public:
    void add_node(const std::string& id, FeederNodeKind kind, const std::string& parent_id = "") {
        if (nodes_.count(id))
            throw std::invalid_argument("feeder graph: duplicate node '" + id + "'");
        nodes_[id] = Node{kind, parent_id};
    }

    bool has_node(const std::string& id) const { return nodes_.count(id) != 0; }

    std::vector<std::string> validate() const {
        std::vector<std::string> problems;
        for (const auto& [id, node] : nodes_) {
            if (!node.parent.empty() && !nodes_.count(node.parent))
                problems.push_back("node '" + id + "' references unknown parent '" + node.parent + "'");
        }
        // cycle check by walking each chain with a step budget
        for (const auto& [id, node] : nodes_) {
            std::size_t steps = 0;
            const Node* cur = &node;
            while (!cur->parent.empty() && nodes_.count(cur->parent)) {
                if (++steps > nodes_.size()) {
                    problems.push_back("cycle through node '" + id + "'");
                    break;
                }
                cur = &nodes_.at(cur->parent);
            }
        }
        return problems;
    }

    // Transformers on the path from `id` to its root, including `id` itself
    // when it is a transformer.
    std::set<std::string> transformer_ancestors(const std::string& id) const {
        std::set<std::string> result;
        auto it = nodes_.find(id);
        if (it == nodes_.end())
            throw std::invalid_argument("feeder graph: unknown node '" + id + "'");
        std::size_t steps = 0;
        while (it != nodes_.end()) {
            if (it->second.kind == FeederNodeKind::transformer) result.insert(it->first);
            if (it->second.parent.empty() || ++steps > nodes_.size()) break;
            it = nodes_.find(it->second.parent);
        }
        return result;
    }

    std::size_t size() const noexcept { return nodes_.size(); }

private:
    struct Node {
        FeederNodeKind kind = FeederNodeKind::connection_point;
        std::string parent;
    };
    std::map<std::string, Node> nodes_;
};

// A community generation asset and where it sits, for the proximity tests.
struct GenerationAsset {
    std::string id;
    std::optional<std::string> node_id;      // feeder attachment, network method
    std::optional<GeoPoint> location;        // distance method
    std::optional<std::string> admin_region; // administrative method
};

/// Great-circle distance on a spherical Earth of radius 6371.0 km.
inline double haversine_km(const GeoPoint& a, const GeoPoint& b) {
    constexpr double earth_radius_km = 6371.0;
    constexpr double deg = std::numbers::pi / 180.0;
    const double phi1 = a.latitude_deg * deg;
    const double phi2 = b.latitude_deg * deg;
    const double dphi = (b.latitude_deg - a.latitude_deg) * deg;
    const double dlambda = (b.longitude_deg - a.longitude_deg) * deg;
    const double s = std::sin(dphi / 2.0) * std::sin(dphi / 2.0) +
                     std::cos(phi1) * std::cos(phi2) * std::sin(dlambda / 2.0) * std::sin(dlambda / 2.0);
    return 2.0 * earth_radius_km * std::asin(std::min(1.0, std::sqrt(s)));
}

namespace detail {

inline bool controls(const Member& m, double threshold) { return m.voting_share > threshold; }

inline std::vector<std::string> sorted_ids(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

}  // namespace detail

struct ProximityQuery {
    ProximityMethod method = ProximityMethod::network;
    const FeederGraph* graph = nullptr;          // network method
    double radius_km = 0.0;                      // distance method
    double control_threshold = 0.5;
    std::vector<std::string> transformer_allowlist; // optional regulator perimeter restriction
};

/// Checks that the controlling members sit in the proximity of the
/// community's generation assets, by the configured definition: a shared
/// MV/LV transformer ancestor (network), a great-circle radius around the
/// nearest asset (distance), or matching region codes (admin).
inline std::vector<Finding> check_proximity(const std::vector<Member>& members,
                                            const std::vector<GenerationAsset>& assets,
                                            const ProximityQuery& query) {
    std::vector<Finding> findings;
    std::vector<const Member*> controllers;
    for (const Member& m : members)
        if (detail::controls(m, query.control_threshold)) controllers.push_back(&m);

    switch (query.method) {
        case ProximityMethod::network: {
            if (query.graph == nullptr)
                throw std::invalid_argument("proximity check: network method needs a feeder graph");
            // Transformers common to every asset, optionally restricted to the
            // regulator's allow-list.
            std::set<std::string> common;
            bool first = true;
            for (const GenerationAsset& asset : assets) {
                if (!asset.node_id)
                    throw std::invalid_argument("proximity check: asset '" + asset.id +
                                                "' lacks a feeder node for the network method");
                const auto anc = query.graph->transformer_ancestors(*asset.node_id);
                if (first) {
                    common = anc;
                    first = false;
                } else {
                    std::set<std::string> kept;
                    std::set_intersection(common.begin(), common.end(), anc.begin(), anc.end(),
                                          std::inserter(kept, kept.begin()));
                    common.swap(kept);
                }
            }
            if (!query.transformer_allowlist.empty()) {
                std::set<std::string> allowed(query.transformer_allowlist.begin(),
                                              query.transformer_allowlist.end());
                std::set<std::string> kept;
                std::set_intersection(common.begin(), common.end(), allowed.begin(), allowed.end(),
                                      std::inserter(kept, kept.begin()));
                common.swap(kept);
            }
            if (!first && common.empty()) {
                findings.push_back({"proximity.network", FindingSeverity::violation,
                                    "generation assets share no common transformer inside the perimeter",
                                    {}});
                break;
            }

            std::set<std::string> joint = common;
            std::vector<std::string> offenders;
            for (const Member* m : controllers) {
                if (!m->transformer_id)
                    throw std::invalid_argument("proximity check: member '" + m->id +
                                                "' lacks a feeder node for the network method");
                const auto anc = query.graph->transformer_ancestors(*m->transformer_id);
                std::set<std::string> against_assets;
                std::set_intersection(common.begin(), common.end(), anc.begin(), anc.end(),
                                      std::inserter(against_assets, against_assets.begin()));
                if (against_assets.empty()) offenders.push_back(m->id);
                std::set<std::string> kept;
                std::set_intersection(joint.begin(), joint.end(), anc.begin(), anc.end(),
                                      std::inserter(kept, kept.begin()));
                joint.swap(kept);
            }
            if (!offenders.empty()) {
                findings.push_back({"proximity.network", FindingSeverity::violation,
                                    "controlling members outside the transformer perimeter of the assets",
                                    detail::sorted_ids(offenders)});
            } else if (!controllers.empty() && !assets.empty() && joint.empty()) {
                std::vector<std::string> all;
                for (const Member* m : controllers) all.push_back(m->id);
                findings.push_back({"proximity.network", FindingSeverity::violation,
                                    "no single transformer covers all controlling members and assets",
                                    detail::sorted_ids(all)});
            }
            break;
        }
        case ProximityMethod::distance: {
            for (const GenerationAsset& asset : assets)
                if (!asset.location)
                    throw std::invalid_argument("proximity check: asset '" + asset.id +
                                                "' lacks coordinates for the distance method");
            std::vector<std::string> offenders;
            for (const Member* m : controllers) {
                if (!m->location)
                    throw std::invalid_argument("proximity check: member '" + m->id +
                                                "' lacks coordinates for the distance method");
                double nearest = std::numeric_limits<double>::infinity();
                for (const GenerationAsset& asset : assets)
                    nearest = std::min(nearest, haversine_km(*m->location, *asset.location));
                if (!assets.empty() && nearest > query.radius_km) offenders.push_back(m->id);
            }
            if (!offenders.empty())
                findings.push_back({"proximity.distance", FindingSeverity::violation,
                                    "controlling members beyond " + std::to_string(query.radius_km) +
                                        " km of the nearest asset",
                                    detail::sorted_ids(offenders)});
            break;
        }
        case ProximityMethod::admin: {
            std::set<std::string> regions;
            for (const GenerationAsset& asset : assets) {
                if (!asset.admin_region)
                    throw std::invalid_argument("proximity check: asset '" + asset.id +
                                                "' lacks a region code for the admin method");
                regions.insert(*asset.admin_region);
            }
            std::vector<std::string> offenders;
            for (const Member* m : controllers) {
                if (!m->admin_region)
                    throw std::invalid_argument("proximity check: member '" + m->id +
                                                "' lacks a region code for the admin method");
                if (!regions.empty() && !regions.count(*m->admin_region)) offenders.push_back(m->id);
            }
            if (!offenders.empty())
                findings.push_back({"proximity.admin", FindingSeverity::violation,
                                    "controlling members outside the administrative region of the assets",
                                    detail::sorted_ids(offenders)});
            break;
        }
    }
    return findings;
}

struct GovernanceThresholds {
    double control_threshold = 0.5;
    double autonomy_threshold = 0.5;
};

/// Membership and control rules. RECs restrict membership to natural persons,
/// SMEs and local authorities; CECs admit anyone but deny medium and large
/// enterprises control; both deny control to energy companies. The REC
/// autonomy provision has no quantitative test in the Directives, so a
/// dominant voting share only raises a warning, never a violation.
inline std::vector<Finding> check_governance(const std::vector<Member>& members, CommunityType type,
                                             const GovernanceThresholds& thresholds = {}) {
    double share_sum = 0.0;
    for (const Member& m : members) share_sum += m.voting_share;
    if (!members.empty() && std::abs(share_sum - 1.0) > 1e-9)
        throw std::invalid_argument("governance check: voting shares sum to " +
                                    std::to_string(share_sum) + ", expected 1");

    std::vector<Finding> findings;
    std::vector<std::string> ineligible, energy_control, enterprise_control, dominant;
    for (const Member& m : members) {
        const bool controller = detail::controls(m, thresholds.control_threshold);
        if (type == CommunityType::REC && m.category != MemberCategory::natural_person &&
            m.category != MemberCategory::sme && m.category != MemberCategory::local_authority)
            ineligible.push_back(m.id);
        if (controller && m.category == MemberCategory::energy_company)
            energy_control.push_back(m.id);
        if (type == CommunityType::CEC && controller &&
            m.category == MemberCategory::medium_large_enterprise)
            enterprise_control.push_back(m.id);
        if (type == CommunityType::REC && m.voting_share > thresholds.autonomy_threshold)
            dominant.push_back(m.id);
    }
    if (!ineligible.empty())
        findings.push_back({"governance.rec-membership", FindingSeverity::violation,
                            "members outside the REC categories (natural persons, SMEs, local authorities)",
                            detail::sorted_ids(ineligible)});
    if (!energy_control.empty())
        findings.push_back({"governance.energy-sector-control", FindingSeverity::violation,
                            "energy-sector control of the community", detail::sorted_ids(energy_control)});
    if (!enterprise_control.empty())
        findings.push_back({"governance.cec-enterprise-control", FindingSeverity::violation,
                            "medium or large enterprise controls the CEC",
                            detail::sorted_ids(enterprise_control)});
    if (!dominant.empty())
        findings.push_back({"governance.rec-autonomy", FindingSeverity::warning,
                            "a single member's voting share can override the community",
                            detail::sorted_ids(dominant)});
    return findings;
}

/// Runs governance and proximity checks and folds the findings into one
/// verdict; proximity applies to RECs only. Findings are sorted by rule and
/// member list, so the verdict does not depend on member order.
inline ComplianceVerdict evaluate_compliance(const std::vector<Member>& members,
                                             const std::vector<GenerationAsset>& assets,
                                             CommunityType type, const ProximityQuery& proximity,
                                             const GovernanceThresholds& thresholds = {}) {
    ComplianceVerdict verdict;
    verdict.community_type = type;
    auto add_all = [&](std::vector<Finding> batch) {
        for (Finding& f : batch) verdict.findings.push_back(std::move(f));
    };
    add_all(check_governance(members, type, thresholds));
    if (type == CommunityType::REC) add_all(check_proximity(members, assets, proximity));
    std::sort(verdict.findings.begin(), verdict.findings.end(), [](const Finding& a, const Finding& b) {
        if (a.rule != b.rule) return a.rule < b.rule;
        return a.members < b.members;
    });
    verdict.passed = std::none_of(verdict.findings.begin(), verdict.findings.end(), [](const Finding& f) {
        return f.severity == FindingSeverity::violation;
    });
    return verdict;
}

}  // namespace ecplan
