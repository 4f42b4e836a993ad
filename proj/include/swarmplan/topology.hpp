#pragma once

#include "swarmplan/network.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace swarmplan {

/// Finite metric on the node set: all-pairs shortest-path distances over
/// link weights w(u, v) = latency + lambda / bandwidth.
class MetricGraph {
public:
    MetricGraph(std::vector<NodeId> ids, std::vector<double> distances);

    std::size_t size() const { return ids_.size(); }
    const std::vector<NodeId>& ids() const { return ids_; }
    double distance(std::size_t i, std::size_t j) const { return dist_[i * ids_.size() + j]; }

private:
    std::vector<NodeId> ids_; // sorted ascending
    std::vector<double> dist_;
};

/// Throws DisconnectedNetwork (listing the components) when some pair is
/// unreachable.
MetricGraph build_metric(const NetworkState& network, double lambda = 1.0);

/// Vertex (dim 0), edge (dim 1) or triangle (dim 2) with its filtration
/// value. Vertices are sorted ascending; the filtration value of a simplex
/// is at least that of every face.
struct Simplex {
    int dim = 0;
    std::array<NodeId, 3> verts{-1, -1, -1};
    double filtration = 0.0;
};

constexpr double kInfDeath = std::numeric_limits<double>::infinity();

/// Vietoris-Rips filtration up to dimension 2: vertices at 0, edges at
/// d(u, v), triangles at the max of their three edges; only simplices with
/// filtration value <= max_scale are emitted. Sorted by (filtration,
/// dimension, lexicographic vertices).
std::vector<Simplex> rips_filtration(const MetricGraph& metric, int max_dim = 2,
                                     double max_scale = kInfDeath);

struct PersistencePair {
    double birth = 0.0;
    double death = kInfDeath;
    bool finite() const { return death != kInfDeath; }
    double persistence() const { return death - birth; }
};

/// Multiset of (birth, death) pairs for homology dimensions 0 and 1, kept
/// sorted by (birth, death) for deterministic output.
struct PersistenceDiagram {
    std::vector<PersistencePair> h0;
    std::vector<PersistencePair> h1;

    std::span<const PersistencePair> dim(int d) const;
    std::size_t infinite_count(int d) const;
    void sort();
};

struct Ph0Result {
    PersistenceDiagram diagram; // h0 part only
    /// Scale at which each node's component is absorbed into an older one
    /// (elder survives, ties to the smaller root id); nodes that are never
    /// absorbed carry the largest finite death (1 if there is none).
    std::unordered_map<NodeId, double> lifetimes;
};

/// Union-find sweep over edges sorted by length; finite deaths equal the
/// minimum-spanning-tree edge weights of the metric.
Ph0Result compute_ph0(const MetricGraph& metric, double max_scale = kInfDeath);

struct Ph1Options {
    /// Keep pairs with birth == death (dropped from the diagram by default).
    bool keep_zero_persistence = false;
};

/// Boundary-matrix reduction over the two-element field. The filtration
/// must order faces before cofaces (InvalidFiltration otherwise). Returns
/// the dimension-1 part: cycles killed by triangles plus infinite bars for
/// cycles that are never filled.
PersistenceDiagram compute_ph1(std::span<const Simplex> filtration, const Ph1Options& opts = {});

/// Exact bottleneck distance between the finite bars of one dimension via
/// threshold search plus bipartite matching (unmatched points pair to the
/// diagonal at cost persistence/2). Exhaustive matching is limited to 12
/// points per diagram (TooManyPoints). InfiniteBarMismatch when the
/// diagrams disagree on infinite-bar counts.
double bottleneck_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2, int dim,
                           std::size_t max_points = 12);

/// bottleneck_distance, except an infinite-bar mismatch yields +infinity.
double bottleneck_distance_or_inf(const PersistenceDiagram& d1, const PersistenceDiagram& d2,
                                  int dim, std::size_t max_points = 12);

struct SchemaEntry {
    std::string id;
    PersistenceDiagram reference;
    std::filesystem::path plan_file;
};

struct SchemaLibrary {
    std::vector<SchemaEntry> entries;
};

/// Directory of plan documents plus an index.json:
///   {"entries": [{"id": "ring", "plan": "ring.json",
///                 "diagram": [[0, 0.0, 1.0], [0, 0.0, "inf"]]}]}
SchemaLibrary load_schema_library(const std::filesystem::path& dir);

/// Entry whose reference diagram is nearest to `observed` in H0 bottleneck
/// distance; ties broken by H1 distance, then by lowest entry id.
const SchemaEntry& select_schema(const SchemaLibrary& library,
                                 const PersistenceDiagram& observed);

/// Formal signed sum of oriented simplices; the didactic boundary algebra.
struct ChainTerm {
    std::vector<NodeId> verts;
    int coeff = 0;
};

class SignedChain {
public:
    SignedChain() = default;
    void add(std::vector<NodeId> verts, int coeff);
    SignedChain operator+(const SignedChain& other) const;
    bool is_zero() const { return terms_.empty(); }
    const std::vector<ChainTerm>& terms() const { return terms_; }

private:
    std::vector<ChainTerm> terms_; // canonical order, zero coefficients dropped
};

/// Alternating-sign face sum of an oriented simplex, e.g. boundary of
/// (v0, v1) is v1 - v0. Orientation is the order of `oriented_verts`.
SignedChain boundary(std::span<const NodeId> oriented_verts);
SignedChain boundary(const Simplex& simplex);

/// Diagram CSV: header "dim,birth,death", one row per bar, "inf" for
/// infinite deaths.
std::string diagram_to_csv(const PersistenceDiagram& diagram);
PersistenceDiagram diagram_from_csv(const std::string& text,
                                    const std::string& origin = "<string>");

} // namespace swarmplan
