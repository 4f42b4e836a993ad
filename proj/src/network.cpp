#include "swarmplan/network.hpp"

#include "swarmplan/json_util.hpp"

#include <algorithm>
#include <cmath>

namespace swarmplan {

namespace {

std::uint64_t pair_key(std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

void check_node(const NetworkNode& n) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (n.id < 0) throw ValidationError("network node id must be non-negative");
    if (!finite(n.gpu_total) || !finite(n.gpu_used) || n.gpu_total < 0.0 || n.gpu_used < 0.0)
        throw ValidationError("node " + std::to_string(n.id) + ": gpu fields must be finite and non-negative");
    if (n.gpu_used > n.gpu_total)
        throw ValidationError("node " + std::to_string(n.id) + ": gpu_used exceeds gpu_total");
    if (!finite(n.load) || n.load < 0.0)
        throw ValidationError("node " + std::to_string(n.id) + ": load must be finite and non-negative");
    if (!finite(n.uptime) || n.uptime < 0.0 || n.uptime > 1.0)
        throw ValidationError("node " + std::to_string(n.id) + ": uptime must lie in [0, 1]");
    if (!finite(n.coords[0]) || !finite(n.coords[1]))
        throw ValidationError("node " + std::to_string(n.id) + ": coords must be finite");
}

} // namespace

NetworkState::NetworkState(std::vector<NetworkNode> nodes, std::vector<NetworkLink> links) {
    for (const NetworkNode& n : nodes) check_node(n);
    nodes_ = std::move(nodes);
    std::sort(nodes_.begin(), nodes_.end(),
              [](const NetworkNode& a, const NetworkNode& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!index_.emplace(nodes_[i].id, i).second)
            throw ValidationError("duplicate network node id " + std::to_string(nodes_[i].id));
    }
    links_ = std::move(links);
    std::sort(links_.begin(), links_.end(), [](const NetworkLink& a, const NetworkLink& b) {
        return std::pair{std::min(a.u, a.v), std::max(a.u, a.v)} <
               std::pair{std::min(b.u, b.v), std::max(b.u, b.v)};
    });
    for (std::size_t i = 0; i < links_.size(); ++i) {
        const NetworkLink& l = links_[i];
        if (!contains(l.u) || !contains(l.v))
            throw ValidationError("link (" + std::to_string(l.u) + ", " + std::to_string(l.v) +
                                  ") references an unknown node");
        if (l.u == l.v)
            throw ValidationError("self-link on node " + std::to_string(l.u));
        if (!(l.bandwidth > 0.0) || !std::isfinite(l.bandwidth))
            throw ValidationError("link (" + std::to_string(l.u) + ", " + std::to_string(l.v) +
                                  "): bandwidth must be positive and finite");
        if (l.latency < 0.0 || !std::isfinite(l.latency))
            throw ValidationError("link (" + std::to_string(l.u) + ", " + std::to_string(l.v) +
                                  "): latency must be non-negative and finite");
        if (!link_index_.emplace(pair_key(index_of(l.u), index_of(l.v)), i).second)
            throw ValidationError("duplicate link (" + std::to_string(l.u) + ", " +
                                  std::to_string(l.v) + ")");
    }
}

std::size_t NetworkState::index_of(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw ValidationError("unknown network node id " + std::to_string(id));
    return it->second;
}

bool NetworkState::has_link(NodeId a, NodeId b) const {
    if (!contains(a) || !contains(b) || a == b) return false;
    return link_index_.count(pair_key(index_of(a), index_of(b))) != 0;
}

const NetworkLink& NetworkState::link(NodeId a, NodeId b) const {
    auto it = link_index_.find(pair_key(index_of(a), index_of(b)));
    if (it == link_index_.end())
        throw ValidationError("no link between " + std::to_string(a) + " and " +
                              std::to_string(b));
    return links_[it->second];
}

double NetworkState::latency(NodeId a, NodeId b) const { return link(a, b).latency; }
double NetworkState::bandwidth(NodeId a, NodeId b) const { return link(a, b).bandwidth; }

NetworkState NetworkState::without_node(NodeId id) const {
    std::vector<NetworkNode> nodes;
    for (const NetworkNode& n : nodes_)
        if (n.id != id) nodes.push_back(n);
    if (nodes.size() == nodes_.size())
        throw ValidationError("cannot remove unknown node " + std::to_string(id));
    std::vector<NetworkLink> links;
    for (const NetworkLink& l : links_)
        if (l.u != id && l.v != id) links.push_back(l);
    return NetworkState(std::move(nodes), std::move(links));
}

NetworkState parse_network(const std::string& text, const std::string& origin) {
    json doc = parse_json_document(text, origin);
    require_object(doc, origin, {"nodes", "links"});
    std::vector<NetworkNode> nodes;
    for (const json& jn : require_array(doc, "nodes", origin)) {
        const std::string ctx = origin + ": nodes[]";
        require_object(jn, ctx, {"id", "gpu_total", "gpu_used", "load", "uptime", "coords", "mem"});
        NetworkNode n;
        n.id = require_int(jn, "id", ctx);
        n.gpu_total = require_number(jn, "gpu_total", ctx);
        n.gpu_used = require_number(jn, "gpu_used", ctx);
        n.load = require_number(jn, "load", ctx);
        n.uptime = require_number(jn, "uptime", ctx);
        if (jn.contains("coords")) {
            const json& jc = jn["coords"];
            if (!jc.is_array() || jc.size() != 2 || !jc[0].is_number() || !jc[1].is_number())
                throw ParseError(ctx + ": coords must be a [x, y] pair");
            n.coords = {jc[0].get<double>(), jc[1].get<double>()};
        }
        if (jn.contains("mem")) {
            if (!jn["mem"].is_number()) throw ParseError(ctx + ": mem must be a number");
            n.mem_capacity = jn["mem"].get<double>();
            if (!(n.mem_capacity >= 0.0))
                throw ValidationError(ctx + ": mem must be non-negative");
        }
        nodes.push_back(n);
    }
    std::vector<NetworkLink> links;
    for (const json& jl : require_array(doc, "links", origin)) {
        const std::string ctx = origin + ": links[]";
        require_object(jl, ctx, {"u", "v", "latency", "bandwidth"});
        NetworkLink l;
        l.u = require_int(jl, "u", ctx);
        l.v = require_int(jl, "v", ctx);
        l.latency = require_number(jl, "latency", ctx);
        l.bandwidth = require_number(jl, "bandwidth", ctx);
        links.push_back(l);
    }
    return NetworkState(std::move(nodes), std::move(links));
}

NetworkState load_network(const std::filesystem::path& file) {
    return parse_network(read_text_file(file), file.string());
}

std::string serialize_network(const NetworkState& network) {
    ordered_json doc;
    doc["nodes"] = ordered_json::array();
    for (const NetworkNode& n : network.nodes()) {
        ordered_json jn;
        jn["id"] = n.id;
        jn["gpu_total"] = n.gpu_total;
        jn["gpu_used"] = n.gpu_used;
        jn["load"] = n.load;
        jn["uptime"] = n.uptime;
        jn["coords"] = {n.coords[0], n.coords[1]};
        if (n.mem_capacity >= 0.0) jn["mem"] = n.mem_capacity;
        doc["nodes"].push_back(std::move(jn));
    }
    doc["links"] = ordered_json::array();
    for (const NetworkLink& l : network.links()) {
        ordered_json jl;
        jl["u"] = l.u;
        jl["v"] = l.v;
        jl["latency"] = l.latency;
        jl["bandwidth"] = l.bandwidth;
        doc["links"].push_back(std::move(jl));
    }
    return doc.dump(2) + "\n";
}

void save_network(const NetworkState& network, const std::filesystem::path& file) {
    write_text_file(file, serialize_network(network));
}

} // namespace swarmplan
