#include "swarmplan/topology.hpp"

#include "swarmplan/json_util.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace swarmplan {

namespace {

std::string join_component(const std::vector<NodeId>& c) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) os << " ";
        os << c[i];
    }
    os << "]";
    return os.str();
}

std::string components_message(const std::vector<std::vector<NodeId>>& components) {
    std::ostringstream os;
    os << "network is disconnected: components";
    for (const auto& c : components) os << " " << join_component(c);
    return os.str();
}

struct DisjointSet {
    std::vector<std::size_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    /// Keeps the smaller root as the representative; returns false when the
    /// two elements were already joined.
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent[b] = a;
        return true;
    }
};

} // namespace

DisconnectedNetwork::DisconnectedNetwork(std::vector<std::vector<NodeId>> components)
    : Error(components_message(components)), components_(std::move(components)) {}

MetricGraph::MetricGraph(std::vector<NodeId> ids, std::vector<double> distances)
    : ids_(std::move(ids)), dist_(std::move(distances)) {
    const std::size_t n = ids_.size();
    if (n == 0) throw ValidationError("metric graph needs at least one node");
    if (!std::is_sorted(ids_.begin(), ids_.end()) ||
        std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
        throw ValidationError("metric node ids must be strictly ascending");
    if (dist_.size() != n * n) throw ValidationError("distance matrix must be n*n");
    for (std::size_t i = 0; i < n; ++i) {
        if (dist_[i * n + i] != 0.0) throw ValidationError("metric diagonal must be zero");
        for (std::size_t j = 0; j < n; ++j) {
            const double d = dist_[i * n + j];
            if (!std::isfinite(d) || d < 0.0)
                throw ValidationError("metric distances must be finite and non-negative");
            if (d != dist_[j * n + i]) throw ValidationError("metric must be symmetric");
        }
    }
}

MetricGraph build_metric(const NetworkState& network, double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw ValidationError("lambda must be non-negative and finite");
    const std::size_t n = network.size();
    if (n == 0) throw ValidationError("cannot build a metric over an empty network");

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> d(n * n, kInf);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
    for (const NetworkLink& l : network.links()) {
        const std::size_t a = network.index_of(l.u);
        const std::size_t b = network.index_of(l.v);
        const double w = l.latency + lambda / l.bandwidth;
        d[a * n + b] = std::min(d[a * n + b], w);
        d[b * n + a] = d[a * n + b];
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);

    bool connected = true;
    for (double v : d)
        if (v == kInf) connected = false;
    if (!connected) {
        DisjointSet ds(n);
        for (const NetworkLink& l : network.links())
            ds.unite(network.index_of(l.u), network.index_of(l.v));
        std::map<std::size_t, std::vector<NodeId>> groups;
        for (std::size_t i = 0; i < n; ++i)
            groups[ds.find(i)].push_back(network.nodes()[i].id);
        std::vector<std::vector<NodeId>> components;
        for (auto& [_, c] : groups) components.push_back(std::move(c));
        throw DisconnectedNetwork(std::move(components));
    }

    std::vector<NodeId> ids;
    ids.reserve(n);
    for (const NetworkNode& node : network.nodes()) ids.push_back(node.id);
    return MetricGraph(std::move(ids), std::move(d));
}

std::vector<Simplex> rips_filtration(const MetricGraph& metric, int max_dim, double max_scale) {
    if (max_dim < 0 || max_dim > 2)
        throw ValidationError("rips_filtration supports dimensions 0..2");
    const std::size_t n = metric.size();
    std::vector<Simplex> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(Simplex{0, {metric.ids()[i], -1, -1}, 0.0});
    if (max_dim >= 1) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (metric.distance(i, j) <= max_scale)
                    out.push_back(
                        Simplex{1, {metric.ids()[i], metric.ids()[j], -1}, metric.distance(i, j)});
    }
    if (max_dim >= 2) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k) {
                    const double f = std::max(
                        {metric.distance(i, j), metric.distance(i, k), metric.distance(j, k)});
                    if (f <= max_scale)
                        out.push_back(Simplex{
                            2, {metric.ids()[i], metric.ids()[j], metric.ids()[k]}, f});
                }
    }
    std::sort(out.begin(), out.end(), [](const Simplex& a, const Simplex& b) {
        if (a.filtration != b.filtration) return a.filtration < b.filtration;
        if (a.dim != b.dim) return a.dim < b.dim;
        return a.verts < b.verts;
    });
    return out;
}

std::span<const PersistencePair> PersistenceDiagram::dim(int d) const {
    if (d == 0) return h0;
    if (d == 1) return h1;
    throw ValidationError("diagram dimensions are 0 and 1");
}

std::size_t PersistenceDiagram::infinite_count(int d) const {
    std::size_t count = 0;
    for (const PersistencePair& p : dim(d))
        if (!p.finite()) ++count;
    return count;
}

void PersistenceDiagram::sort() {
    auto less = [](const PersistencePair& a, const PersistencePair& b) {
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.death < b.death;
    };
    std::sort(h0.begin(), h0.end(), less);
    std::sort(h1.begin(), h1.end(), less);
}

Ph0Result compute_ph0(const MetricGraph& metric, double max_scale) {
    const std::size_t n = metric.size();
    struct Edge {
        double w;
        std::size_t i, j;
    };
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (metric.distance(i, j) <= max_scale)
                edges.push_back({metric.distance(i, j), i, j});
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.w != b.w) return a.w < b.w;
        return std::pair{a.i, a.j} < std::pair{b.i, b.j};
    });

    DisjointSet ds(n);
    std::vector<std::vector<std::size_t>> members(n);
    for (std::size_t i = 0; i < n; ++i) members[i] = {i};

    Ph0Result result;
    std::vector<double> lifetime(n, -1.0);
    double max_death = 0.0;
    for (const Edge& e : edges) {
        std::size_t ra = ds.find(e.i), rb = ds.find(e.j);
        if (ra == rb) continue;
        if (rb < ra) std::swap(ra, rb); // ra survives (elder rule, ties to smaller id)
        for (std::size_t v : members[rb])
            if (lifetime[v] < 0.0) lifetime[v] = e.w;
        ds.unite(ra, rb);
        members[ra].insert(members[ra].end(), members[rb].begin(), members[rb].end());
        members[rb].clear();
        result.diagram.h0.push_back({0.0, e.w});
        max_death = std::max(max_death, e.w);
    }
    std::size_t component_count = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (ds.find(i) == i) ++component_count;
    for (std::size_t c = 0; c < component_count; ++c)
        result.diagram.h0.push_back({0.0, kInfDeath});
    result.diagram.sort();

    const double survivor_lifetime = max_death > 0.0 ? max_death : 1.0;
    for (std::size_t i = 0; i < n; ++i)
        result.lifetimes[metric.ids()[i]] =
            lifetime[i] >= 0.0 ? lifetime[i] : survivor_lifetime;
    return result;
}

namespace {

using SimplexKey = std::array<NodeId, 3>;

std::vector<std::size_t> symmetric_difference(const std::vector<std::size_t>& a,
                                              const std::vector<std::size_t>& b) {
    std::vector<std::size_t> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out));
    return out;
}

} // namespace

PersistenceDiagram compute_ph1(std::span<const Simplex> filtration, const Ph1Options& opts) {
    const std::size_t m = filtration.size();
    std::map<SimplexKey, std::size_t> position;
    for (std::size_t i = 0; i < m; ++i) {
        const Simplex& s = filtration[i];
        if (s.dim < 0 || s.dim > 2) throw ValidationError("filtration dimensions must be 0..2");
        if (!position.emplace(s.verts, i).second)
            throw ValidationError("duplicate simplex in filtration");
    }

    auto facet_positions = [&](const Simplex& s) {
        std::vector<std::size_t> out;
        if (s.dim == 1) {
            for (NodeId v : {s.verts[0], s.verts[1]}) {
                auto it = position.find(SimplexKey{v, -1, -1});
                if (it == position.end())
                    throw InvalidFiltration("edge appears without its vertices");
                out.push_back(it->second);
            }
        } else if (s.dim == 2) {
            const SimplexKey faces[3] = {{s.verts[1], s.verts[2], -1},
                                         {s.verts[0], s.verts[2], -1},
                                         {s.verts[0], s.verts[1], -1}};
            for (const SimplexKey& f : faces) {
                auto it = position.find(f);
                if (it == position.end())
                    throw InvalidFiltration("triangle appears without one of its edges");
                out.push_back(it->second);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::vector<std::size_t>> cols(m);
    std::vector<std::size_t> pivot_owner(m, kNone);
    std::vector<char> is_creator(m, 0), is_killed(m, 0);
    PersistenceDiagram diagram;

    for (std::size_t j = 0; j < m; ++j) {
        const Simplex& s = filtration[j];
        if (s.dim == 0) {
            is_creator[j] = 1;
            continue;
        }
        std::vector<std::size_t> col = facet_positions(s);
        if (!col.empty() && col.back() >= j)
            throw InvalidFiltration("simplex precedes one of its faces");
        while (!col.empty()) {
            const std::size_t low = col.back();
            const std::size_t owner = pivot_owner[low];
            if (owner == kNone) break;
            col = symmetric_difference(col, cols[owner]);
        }
        if (col.empty()) {
            is_creator[j] = 1;
        } else {
            const std::size_t low = col.back();
            pivot_owner[low] = j;
            is_killed[low] = 1;
            cols[j] = std::move(col);
            if (filtration[low].dim == 1) {
                const double birth = filtration[low].filtration;
                const double death = s.filtration;
                if (birth != death || opts.keep_zero_persistence)
                    diagram.h1.push_back({birth, death});
            }
        }
    }
    for (std::size_t i = 0; i < m; ++i)
        if (filtration[i].dim == 1 && is_creator[i] && !is_killed[i])
            diagram.h1.push_back({filtration[i].filtration, kInfDeath});
    diagram.sort();
    return diagram;
}

namespace {

double linf(const PersistencePair& a, const PersistencePair& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

double diag_cost(const PersistencePair& p) { return p.persistence() / 2.0; }

/// Kuhn augmenting-path matching on the eps-feasibility graph of the two
/// finite point sets plus interchangeable diagonal slots.
bool matchable_at(const std::vector<PersistencePair>& a, const std::vector<PersistencePair>& b,
                  double eps) {
    const std::size_t n1 = a.size(), n2 = b.size();
    const std::size_t left = n1 + n2, right = n2 + n1;
    auto feasible = [&](std::size_t l, std::size_t r) {
        const bool l_diag = l >= n1, r_diag = r >= n2;
        if (l_diag && r_diag) return true;
        if (!l_diag && !r_diag) return linf(a[l], b[r]) <= eps;
        if (!l_diag) return diag_cost(a[l]) <= eps;
        return diag_cost(b[r]) <= eps;
    };
    std::vector<std::size_t> match_right(right, static_cast<std::size_t>(-1));
    std::vector<char> visited;
    auto try_augment = [&](auto&& self, std::size_t l) -> bool {
        for (std::size_t r = 0; r < right; ++r) {
            if (visited[r] || !feasible(l, r)) continue;
            visited[r] = 1;
            if (match_right[r] == static_cast<std::size_t>(-1) ||
                self(self, match_right[r])) {
                match_right[r] = l;
                return true;
            }
        }
        return false;
    };
    for (std::size_t l = 0; l < left; ++l) {
        visited.assign(right, 0);
        if (!try_augment(try_augment, l)) return false;
    }
    return true;
}

std::vector<PersistencePair> finite_bars(const PersistenceDiagram& d, int dim) {
    std::vector<PersistencePair> out;
    for (const PersistencePair& p : d.dim(dim))
        if (p.finite()) out.push_back(p);
    return out;
}

} // namespace

double bottleneck_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2, int dim,
                           std::size_t max_points) {
    if (d1.infinite_count(dim) != d2.infinite_count(dim))
        throw InfiniteBarMismatch("diagrams disagree on infinite-bar counts in dimension " +
                                  std::to_string(dim));
    const std::vector<PersistencePair> a = finite_bars(d1, dim);
    const std::vector<PersistencePair> b = finite_bars(d2, dim);
    if (a.size() > max_points || b.size() > max_points)
        throw TooManyPoints("exact bottleneck matching is limited to " +
                            std::to_string(max_points) + " points per diagram");

    std::vector<double> candidates{0.0};
    for (const PersistencePair& p : a) candidates.push_back(diag_cost(p));
    for (const PersistencePair& q : b) candidates.push_back(diag_cost(q));
    for (const PersistencePair& p : a)
        for (const PersistencePair& q : b) candidates.push_back(linf(p, q));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::size_t lo = 0, hi = candidates.size() - 1;
    if (!matchable_at(a, b, candidates[hi]))
        throw Error("internal: bottleneck matching infeasible at max candidate");
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (matchable_at(a, b, candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return candidates[lo];
}

double bottleneck_distance_or_inf(const PersistenceDiagram& d1, const PersistenceDiagram& d2,
                                  int dim, std::size_t max_points) {
    if (d1.infinite_count(dim) != d2.infinite_count(dim)) return kInfDeath;
    return bottleneck_distance(d1, d2, dim, max_points);
}

SchemaLibrary load_schema_library(const std::filesystem::path& dir) {
    const std::filesystem::path index = dir / "index.json";
    json doc = parse_json_document(read_text_file(index), index.string());
    require_object(doc, index.string(), {"entries"});
    SchemaLibrary library;
    for (const json& je : require_array(doc, "entries", index.string())) {
        const std::string ctx = index.string() + ": entries[]";
        require_object(je, ctx, {"id", "plan", "diagram"});
        SchemaEntry entry;
        const json& jid = require_field(je, "id", ctx);
        if (!jid.is_string()) throw ParseError(ctx + ": id must be a string");
        entry.id = jid.get<std::string>();
        const json& jplan = require_field(je, "plan", ctx);
        if (!jplan.is_string()) throw ParseError(ctx + ": plan must be a file name");
        entry.plan_file = dir / jplan.get<std::string>();
        if (!std::filesystem::exists(entry.plan_file))
            throw ValidationError(ctx + ": plan document " + entry.plan_file.string() +
                                  " does not exist");
        for (const json& row : require_array(je, "diagram", ctx)) {
            if (!row.is_array() || row.size() != 3)
                throw ParseError(ctx + ": diagram rows must be [dim, birth, death]");
            const int d = row[0].get<int>();
            const double birth = row[1].get<double>();
            double death;
            if (row[2].is_string()) {
                if (row[2].get<std::string>() != "inf")
                    throw ParseError(ctx + ": death must be a number or \"inf\"");
                death = kInfDeath;
            } else {
                death = row[2].get<double>();
            }
            if (birth > death) throw ValidationError(ctx + ": birth must not exceed death");
            if (d == 0)
                entry.reference.h0.push_back({birth, death});
            else if (d == 1)
                entry.reference.h1.push_back({birth, death});
            else
                throw ValidationError(ctx + ": diagram dimensions are 0 and 1");
        }
        entry.reference.sort();
        library.entries.push_back(std::move(entry));
    }
    std::sort(library.entries.begin(), library.entries.end(),
              [](const SchemaEntry& a, const SchemaEntry& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < library.entries.size(); ++i)
        if (library.entries[i].id == library.entries[i - 1].id)
            throw ValidationError("duplicate schema id '" + library.entries[i].id + "'");
    return library;
}

const SchemaEntry& select_schema(const SchemaLibrary& library,
                                 const PersistenceDiagram& observed) {
    if (library.entries.empty()) throw EmptyLibrary("schema library has no entries");
    const SchemaEntry* best = nullptr;
    double best_d0 = kInfDeath, best_d1 = kInfDeath;
    for (const SchemaEntry& entry : library.entries) {
        const double d0 = bottleneck_distance_or_inf(entry.reference, observed, 0);
        const double d1 = bottleneck_distance_or_inf(entry.reference, observed, 1);
        // entries are id-sorted, so strict improvement keeps the lowest id
        if (best == nullptr || d0 < best_d0 || (d0 == best_d0 && d1 < best_d1)) {
            best = &entry;
            best_d0 = d0;
            best_d1 = d1;
        }
    }
    return *best;
}

void SignedChain::add(std::vector<NodeId> verts, int coeff) {
    if (coeff == 0) return;
    for (ChainTerm& t : terms_) {
        if (t.verts == verts) {
            t.coeff += coeff;
            if (t.coeff == 0)
                terms_.erase(terms_.begin() + (&t - terms_.data()));
            return;
        }
    }
    terms_.push_back({std::move(verts), coeff});
    std::sort(terms_.begin(), terms_.end(), [](const ChainTerm& a, const ChainTerm& b) {
        if (a.verts.size() != b.verts.size()) return a.verts.size() < b.verts.size();
        return a.verts < b.verts;
    });
}

SignedChain SignedChain::operator+(const SignedChain& other) const {
    SignedChain out = *this;
    for (const ChainTerm& t : other.terms_) out.add(t.verts, t.coeff);
    return out;
}

SignedChain boundary(std::span<const NodeId> oriented_verts) {
    if (oriented_verts.size() < 2)
        throw ZeroDimensional("boundary of a 0-simplex is trivial");
    SignedChain chain;
    int sign = 1;
    for (std::size_t skip = 0; skip < oriented_verts.size(); ++skip) {
        std::vector<NodeId> face;
        for (std::size_t i = 0; i < oriented_verts.size(); ++i)
            if (i != skip) face.push_back(oriented_verts[i]);
        chain.add(std::move(face), sign);
        sign = -sign;
    }
    return chain;
}

SignedChain boundary(const Simplex& simplex) {
    std::vector<NodeId> verts(simplex.verts.begin(), simplex.verts.begin() + simplex.dim + 1);
    return boundary(verts);
}

std::string diagram_to_csv(const PersistenceDiagram& diagram) {
    std::ostringstream os;
    os << "dim,birth,death\n";
    for (int d : {0, 1})
        for (const PersistencePair& p : diagram.dim(d))
            os << d << "," << format_double(p.birth) << "," << format_double(p.death) << "\n";
    return os.str();
}

PersistenceDiagram diagram_from_csv(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "dim,birth,death")
        throw ParseError(origin + ":1: expected header 'dim,birth,death'");
    PersistenceDiagram diagram;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string dim_s, birth_s, death_s;
        if (!std::getline(row, dim_s, ',') || !std::getline(row, birth_s, ',') ||
            !std::getline(row, death_s))
            throw ParseError(origin + ":" + std::to_string(lineno) + ": malformed row");
        const int d = std::stoi(dim_s);
        const double birth = std::stod(birth_s);
        const double death = death_s == "inf" ? kInfDeath : std::stod(death_s);
        if (birth > death)
            throw ValidationError(origin + ":" + std::to_string(lineno) +
                                  ": birth must not exceed death");
        if (d == 0)
            diagram.h0.push_back({birth, death});
        else if (d == 1)
            diagram.h1.push_back({birth, death});
        else
            throw ValidationError(origin + ":" + std::to_string(lineno) +
                                  ": dimensions are 0 and 1");
    }
    diagram.sort();
    return diagram;
}

} // namespace swarmplan
