#include "swarmplan/compgraph.hpp"

#include "swarmplan/json_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

namespace swarmplan {

namespace {

std::string join_ids(const std::vector<NodeId>& ids) {
    std::ostringstream os;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) os << " -> ";
        os << ids[i];
    }
    return os.str();
}

} // namespace

CycleDetected::CycleDetected(std::vector<NodeId> cycle)
    : Error("cycle detected: " + join_ids(cycle)), cycle_(std::move(cycle)) {}

void validate_graph_data(const std::vector<OpNode>& nodes, const EdgeList& edges) {
    std::unordered_map<NodeId, std::size_t> index;
    for (const OpNode& n : nodes) {
        if (n.id < 0) throw ValidationError("node id must be non-negative, got " + std::to_string(n.id));
        if (!index.emplace(n.id, index.size()).second)
            throw ValidationError("duplicate node id " + std::to_string(n.id));
        for (auto [value, name] : {std::pair{n.work, "work"},
                                   std::pair{n.size_param, "sizeparam"},
                                   std::pair{n.size_out, "sizeout"}}) {
            if (!std::isfinite(value) || value < 0.0)
                throw ValidationError("node " + std::to_string(n.id) + ": " + name +
                                      " must be finite and non-negative");
        }
    }
    for (const auto& [u, v] : edges) {
        if (!index.count(u) || !index.count(v))
            throw DanglingEdge("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                               ") references a node not in the graph");
    }

    // Kahn pass for acyclicity; on failure, walk the residual graph to
    // report one concrete cycle.
    const std::size_t n = nodes.size();
    std::vector<std::vector<std::size_t>> out(n);
    std::vector<std::size_t> indeg(n, 0);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& [u, v] : edges) {
        auto key = std::pair{index.at(u), index.at(v)};
        if (!seen.insert(key).second) continue;
        out[key.first].push_back(key.second);
        ++indeg[key.second];
    }
    std::queue<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indeg[i] == 0) ready.push(i);
    std::size_t emitted = 0;
    while (!ready.empty()) {
        std::size_t u = ready.front();
        ready.pop();
        ++emitted;
        for (std::size_t v : out[u])
            if (--indeg[v] == 0) ready.push(v);
    }
    if (emitted == n) return;

    // every remaining node has an in-edge from a remaining node: follow
    // predecessors until one repeats
    std::vector<std::vector<std::size_t>> in(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v : out[u])
            if (indeg[v] > 0) in[v].push_back(u);
    std::size_t start = 0;
    while (indeg[start] == 0) ++start;
    std::vector<std::size_t> path{start};
    std::vector<int> mark(n, -1);
    mark[start] = 0;
    for (;;) {
        std::size_t cur = path.back();
        std::size_t pred = n;
        for (std::size_t p : in[cur])
            if (indeg[p] > 0) { pred = p; break; }
        if (mark[pred] >= 0) {
            std::vector<NodeId> cycle;
            for (std::size_t i = static_cast<std::size_t>(mark[pred]); i < path.size(); ++i)
                cycle.push_back(nodes[path[i]].id);
            std::reverse(cycle.begin(), cycle.end());
            throw CycleDetected(std::move(cycle));
        }
        mark[pred] = static_cast<int>(path.size());
        path.push_back(pred);
    }
}

CompGraph::CompGraph(std::vector<OpNode> nodes, EdgeList edges) {
    validate_graph_data(nodes, edges);
    nodes_ = std::move(nodes);
    std::sort(nodes_.begin(), nodes_.end(),
              [](const OpNode& a, const OpNode& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i].id, i);

    // collapse multi-edges
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    in_.assign(nodes_.size(), {});
    out_.assign(nodes_.size(), {});
    for (const auto& [u, v] : edges_) {
        out_[index_.at(u)].push_back(index_.at(v));
        in_[index_.at(v)].push_back(index_.at(u));
    }
    for (auto& adj : in_) std::sort(adj.begin(), adj.end());
    for (auto& adj : out_) std::sort(adj.begin(), adj.end());
}

std::size_t CompGraph::index_of(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end())
        throw ValidationError("unknown node id " + std::to_string(id));
    return it->second;
}

TopoOrder kahn_topo_sort(const CompGraph& graph, std::span<const double> priority) {
    const std::size_t n = graph.size();
    if (!priority.empty() && priority.size() != n)
        throw LengthMismatch("priority vector has " + std::to_string(priority.size()) +
                             " entries for " + std::to_string(n) + " nodes");

    auto rank = [&](std::size_t idx) { return priority.empty() ? 0.0 : priority[idx]; };
    // highest priority first, then ascending id (== ascending index)
    auto better = [&](std::size_t a, std::size_t b) {
        if (rank(a) != rank(b)) return rank(a) > rank(b);
        return a < b;
    };

    std::vector<std::size_t> indeg(n, 0);
    for (std::size_t v = 0; v < n; ++v) indeg[v] = graph.in_neighbors(v).size();
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push_back(v);

    TopoOrder result;
    result.order.reserve(n);
    while (!ready.empty()) {
        auto it = std::min_element(ready.begin(), ready.end(),
                                   [&](std::size_t a, std::size_t b) { return better(a, b); });
        std::size_t u = *it;
        ready.erase(it);
        result.order.push_back(graph.id_at(u));
        for (std::size_t v : graph.out_neighbors(u))
            if (--indeg[v] == 0) ready.push_back(v);
    }
    if (result.order.size() != n) {
        // constructor guarantees acyclicity, but keep the contract honest
        std::vector<NodeId> leftover;
        for (std::size_t v = 0; v < n; ++v)
            if (indeg[v] > 0) leftover.push_back(graph.id_at(v));
        throw CycleDetected(std::move(leftover));
    }
    return result;
}

bool is_topo_order(const CompGraph& graph, const TopoOrder& order) {
    if (order.order.size() != graph.size()) return false;
    std::unordered_map<NodeId, std::size_t> pos;
    for (std::size_t i = 0; i < order.order.size(); ++i) {
        if (!graph.contains(order.order[i])) return false;
        if (!pos.emplace(order.order[i], i).second) return false;
    }
    for (const auto& [u, v] : graph.edges()) {
        auto pu = pos.find(u), pv = pos.find(v);
        if (pu == pos.end() || pv == pos.end()) return false;
        if (pu->second >= pv->second) return false;
    }
    return true;
}

CompGraph parse_graph(const std::string& text, const std::string& origin) {
    json doc = parse_json_document(text, origin);
    require_object(doc, origin, {"nodes", "edges"});

    std::vector<OpNode> nodes;
    for (const json& jn : require_array(doc, "nodes", origin)) {
        require_object(jn, origin + ": nodes[]", {"id", "work", "sizeparam", "sizeout"});
        OpNode n;
        n.id = require_int(jn, "id", origin + ": nodes[]");
        n.work = require_number(jn, "work", origin + ": nodes[]");
        n.size_param = require_number(jn, "sizeparam", origin + ": nodes[]");
        n.size_out = require_number(jn, "sizeout", origin + ": nodes[]");
        nodes.push_back(n);
    }
    EdgeList edges;
    for (const json& je : require_array(doc, "edges", origin)) {
        if (!je.is_array() || je.size() != 2 || !je[0].is_number_integer() ||
            !je[1].is_number_integer())
            throw ParseError(origin + ": edges[] entries must be [u, v] id pairs");
        edges.emplace_back(je[0].get<NodeId>(), je[1].get<NodeId>());
    }
    return CompGraph(std::move(nodes), std::move(edges));
}

CompGraph load_graph(const std::filesystem::path& file) {
    return parse_graph(read_text_file(file), file.string());
}

std::string serialize_graph(const CompGraph& graph) {
    ordered_json doc;
    doc["nodes"] = ordered_json::array();
    for (const OpNode& n : graph.nodes()) {
        ordered_json jn;
        jn["id"] = n.id;
        jn["work"] = n.work;
        jn["sizeparam"] = n.size_param;
        jn["sizeout"] = n.size_out;
        doc["nodes"].push_back(std::move(jn));
    }
    doc["edges"] = ordered_json::array();
    for (const auto& [u, v] : graph.edges()) doc["edges"].push_back({u, v});
    return doc.dump(2) + "\n";
}

void save_graph(const CompGraph& graph, const std::filesystem::path& file) {
    write_text_file(file, serialize_graph(graph));
}

} // namespace swarmplan
