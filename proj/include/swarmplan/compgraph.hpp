#pragma once

#include "swarmplan/errors.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace swarmplan {

/// One operation of a computation graph with its resource annotations:
/// execution time, parameter memory and output tensor size. Units are
/// abstract (time units, bytes); the core never converts them.
struct OpNode {
    NodeId id = 0;
    double work = 0.0;
    double size_param = 0.0;
    double size_out = 0.0;
};

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

/// Immutable DAG of operations. Construction validates everything (unique
/// ids, finite non-negative annotations, edge endpoints, acyclicity) and
/// collapses multi-edges, so an instance is always well-formed. Nodes are
/// kept sorted by id; adjacency is exposed as indices into that order.
class CompGraph {
public:
    CompGraph(std::vector<OpNode> nodes, EdgeList edges);

    std::size_t size() const { return nodes_.size(); }
    const std::vector<OpNode>& nodes() const { return nodes_; }
    const EdgeList& edges() const { return edges_; }

    bool contains(NodeId id) const { return index_.count(id) != 0; }
    std::size_t index_of(NodeId id) const;
    NodeId id_at(std::size_t idx) const { return nodes_[idx].id; }
    const OpNode& node(NodeId id) const { return nodes_[index_of(id)]; }
    const OpNode& node_at(std::size_t idx) const { return nodes_[idx]; }

    /// Ascending-index (hence ascending-id) neighbor lists.
    std::span<const std::size_t> in_neighbors(std::size_t idx) const { return in_[idx]; }
    std::span<const std::size_t> out_neighbors(std::size_t idx) const { return out_[idx]; }

private:
    std::vector<OpNode> nodes_; // sorted by id
    EdgeList edges_;            // collapsed, sorted by (u, v)
    std::unordered_map<NodeId, std::size_t> index_;
    std::vector<std::vector<std::size_t>> in_, out_;
};

/// Checks graph data without constructing; throws CycleDetected (with one
/// cycle's node ids), DanglingEdge or ValidationError.
void validate_graph_data(const std::vector<OpNode>& nodes, const EdgeList& edges);

struct TopoOrder {
    std::vector<NodeId> order;
};

/// Kahn's algorithm. Among ready nodes the one with the highest priority is
/// emitted next (ties by ascending id); with no priorities, ascending id.
/// `priority` is aligned with the graph's sorted-by-id node order.
TopoOrder kahn_topo_sort(const CompGraph& graph, std::span<const double> priority = {});

/// True iff every edge (u, v) has u before v in the order and the order is a
/// permutation of the node ids.
bool is_topo_order(const CompGraph& graph, const TopoOrder& order);

/// Graph document I/O. Format:
///   {"nodes": [{"id": 0, "work": 1.0, "sizeparam": 0.0, "sizeout": 0.0}],
///    "edges": [[0, 1]]}
/// Unknown fields are rejected. serialize/load round-trip losslessly.
CompGraph parse_graph(const std::string& text, const std::string& origin = "<string>");
CompGraph load_graph(const std::filesystem::path& file);
std::string serialize_graph(const CompGraph& graph);
void save_graph(const CompGraph& graph, const std::filesystem::path& file);

} // namespace swarmplan
