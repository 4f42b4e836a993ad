#pragma once

#include "swarmplan/errors.hpp"

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace swarmplan {

struct NetworkNode {
    NodeId id = 0;
    double gpu_total = 0.0;
    double gpu_used = 0.0;
    double load = 0.0;   // raw computational load, pre-smoothing
    double uptime = 1.0; // fraction in [0, 1]
    std::array<double, 2> coords{0.0, 0.0};
    /// Fast-memory capacity (bytes); negative means "use the global default".
    double mem_capacity = -1.0;
};

struct NetworkLink {
    NodeId u = 0, v = 0;
    double latency = 0.0;   // >= 0
    double bandwidth = 1.0; // > 0
};

/// Immutable snapshot of the node pool: per-node capacity metrics plus
/// undirected pairwise links. Construction validates all invariants.
class NetworkState {
public:
    NetworkState(std::vector<NetworkNode> nodes, std::vector<NetworkLink> links);

    std::size_t size() const { return nodes_.size(); }
    const std::vector<NetworkNode>& nodes() const { return nodes_; }
    const std::vector<NetworkLink>& links() const { return links_; }

    bool contains(NodeId id) const { return index_.count(id) != 0; }
    std::size_t index_of(NodeId id) const;
    const NetworkNode& node(NodeId id) const { return nodes_[index_of(id)]; }

    bool has_link(NodeId a, NodeId b) const;
    double latency(NodeId a, NodeId b) const;   // throws if no link
    double bandwidth(NodeId a, NodeId b) const; // throws if no link

    /// Copy of the snapshot with one node (and its links) removed.
    NetworkState without_node(NodeId id) const;

private:
    const NetworkLink& link(NodeId a, NodeId b) const;

    std::vector<NetworkNode> nodes_; // sorted by id
    std::vector<NetworkLink> links_;
    std::unordered_map<NodeId, std::size_t> index_;
    std::unordered_map<std::uint64_t, std::size_t> link_index_;
};

/// Snapshot document I/O. Format:
///   {"nodes": [{"id": 0, "gpu_total": 8, "gpu_used": 2, "load": 1,
///               "uptime": 0.9, "coords": [0, 0], "mem": 1e9}],
///    "links": [{"u": 0, "v": 1, "latency": 0.5, "bandwidth": 10}]}
/// "coords" and "mem" are optional; unknown fields are rejected.
NetworkState parse_network(const std::string& text, const std::string& origin = "<string>");
NetworkState load_network(const std::filesystem::path& file);
std::string serialize_network(const NetworkState& network);
void save_network(const NetworkState& network, const std::filesystem::path& file);

} // namespace swarmplan
