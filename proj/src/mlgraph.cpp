#include "dymgnn/mlgraph.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

namespace dymgnn {

namespace {

EdgeList canonicalize(const EdgeList& edges, std::size_t n) {
    std::set<std::pair<std::size_t, std::size_t>> dedup;
    for (auto [a, b] : edges) {
        if (a >= n || b >= n)
            throw ShapeError("edge endpoint (" + std::to_string(a) + "," + std::to_string(b) +
                             ") outside 0.." + std::to_string(n - 1));
        if (a == b) throw ShapeError("self-edge (" + std::to_string(a) + ") not allowed in input");
        dedup.emplace(std::min(a, b), std::max(a, b));
    }
    return EdgeList(dedup.begin(), dedup.end());
}

}  // namespace

MultilayerTopology build_supra_adjacency(const std::vector<EdgeList>& intra_edges,
                                         std::size_t n, std::size_t l) {
    if (intra_edges.size() != l)
        throw ShapeError("expected " + std::to_string(l) + " edge lists, got " +
                         std::to_string(intra_edges.size()));
    MultilayerTopology topo;
    topo.n = n;
    topo.l = l;
    topo.supra = SparseBinaryMatrix(n * l, n * l);
    for (std::size_t k = 0; k < l; ++k) {
        topo.intra_edges.push_back(canonicalize(intra_edges[k], n));
        for (auto [i, j] : topo.intra_edges.back()) {
            topo.supra.add_entry(k * n + i, k * n + j);
            topo.supra.add_entry(k * n + j, k * n + i);
        }
    }
    // Complete interlayer coupling between replicas of the same node.
    for (std::size_t k = 0; k < l; ++k)
        for (std::size_t m = 0; m < l; ++m)
            if (k != m)
                for (std::size_t i = 0; i < n; ++i)
                    topo.supra.add_entry(k * n + i, m * n + i);
    topo.supra.finalize();
    return topo;
}

NormalizedAdjacency normalize_adjacency(const MultilayerTopology& topology) {
    const std::size_t nl = topology.supra_size();
    std::vector<double> deg(nl, 1.0);  // self-loop contributes 1 to every degree
    for (const auto& e : topology.supra.entries()) deg[e.row] += 1.0;

    NormalizedAdjacency norm;
    norm.matrix = SparseBinaryMatrix(nl, nl);
    for (std::size_t i = 0; i < nl; ++i)
        norm.matrix.add_entry(i, i, 1.0 / deg[i]);
    for (const auto& e : topology.supra.entries())
        norm.matrix.add_entry(e.row, e.col, 1.0 / std::sqrt(deg[e.row] * deg[e.col]));
    norm.matrix.finalize();
    return norm;
}

std::vector<std::size_t> sample_isolated_nodes(std::size_t n, double fraction,
                                               std::uint64_t seed) {
    if (fraction < 0.0 || fraction > 1.0)
        throw NumericError("isolation fraction " + std::to_string(fraction) + " outside [0,1]");
    const std::size_t count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    std::vector<std::size_t> nodes(n);
    std::iota(nodes.begin(), nodes.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(nodes.begin(), nodes.end(), rng);
    nodes.resize(count);
    std::sort(nodes.begin(), nodes.end());
    return nodes;
}

MultilayerTopology isolate_nodes(const MultilayerTopology& topology, double fraction,
                                 std::uint64_t seed) {
    auto isolated = sample_isolated_nodes(topology.n, fraction, seed);
    std::vector<bool> hit(topology.n, false);
    for (std::size_t i : isolated) hit[i] = true;

    std::vector<EdgeList> kept(topology.l);
    for (std::size_t k = 0; k < topology.l; ++k)
        for (auto [i, j] : topology.intra_edges[k])
            if (!hit[i] && !hit[j]) kept[k].emplace_back(i, j);
    return build_supra_adjacency(kept, topology.n, topology.l);
}

DenseMatrix replicate_features(const DenseMatrix& per_node, std::size_t l) {
    DenseMatrix out(per_node.rows() * l, per_node.cols());
    for (std::size_t k = 0; k < l; ++k)
        for (std::size_t i = 0; i < per_node.rows(); ++i)
            for (std::size_t j = 0; j < per_node.cols(); ++j)
                out(k * per_node.rows() + i, j) = per_node(i, j);
    return out;
}

std::vector<TopologyViolation> validate_topology(const MultilayerTopology& topology) {
    std::vector<TopologyViolation> out;
    const std::size_t n = topology.n;
    for (const auto& e : topology.supra.entries()) {
        if (e.weight != 1.0) out.push_back({"nonbinary", e.row, e.col});
        if (e.row == e.col) out.push_back({"diagonal", e.row, e.col});
        if (!topology.supra.has_entry(e.col, e.row)) out.push_back({"asymmetry", e.row, e.col});
        const std::size_t layer_r = e.row / n, layer_c = e.col / n;
        if (layer_r != layer_c && e.row % n != e.col % n)
            out.push_back({"replica coupling", e.row, e.col});
    }
    return out;
}

EdgeList supra_edges_with_self_loops(const MultilayerTopology& topology) {
    EdgeList edges;
    edges.reserve(topology.supra.nnz() + topology.supra_size());
    for (std::size_t i = 0; i < topology.supra_size(); ++i) edges.emplace_back(i, i);
    for (const auto& e : topology.supra.entries()) edges.emplace_back(e.row, e.col);
    std::sort(edges.begin(), edges.end());
    return edges;
}

void write_topology(const MultilayerTopology& topology, const std::string& dir,
                    const std::vector<std::string>& layer_names) {
    if (layer_names.size() != topology.l)
        throw ShapeError("layer name count does not match layer count");
    std::filesystem::create_directories(dir);
    std::ofstream header(dir + "/graph_header.txt");
    header << "n = " << topology.n << "\n";
    header << "l = " << topology.l << "\n";
    for (std::size_t k = 0; k < topology.l; ++k)
        header << "layer = " << layer_names[k] << "\n";
    for (std::size_t k = 0; k < topology.l; ++k) {
        std::ofstream f(dir + "/layer_" + layer_names[k] + ".edges");
        for (auto [a, b] : topology.intra_edges[k]) f << a << "," << b << "\n";
    }
}

MultilayerTopology read_topology(const std::string& dir) {
    std::ifstream header(dir + "/graph_header.txt");
    if (!header) throw std::runtime_error("missing graph header in " + dir);
    std::size_t n = 0, l = 0;
    std::vector<std::string> names;
    std::string line;
    while (std::getline(header, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        key.erase(std::remove(key.begin(), key.end(), ' '), key.end());
        val.erase(std::remove(val.begin(), val.end(), ' '), val.end());
        if (key == "n") n = std::stoul(val);
        else if (key == "l") l = std::stoul(val);
        else if (key == "layer") names.push_back(val);
    }
    if (names.size() != l) throw std::runtime_error("graph header declares inconsistent layers");
    std::vector<EdgeList> intra(l);
    for (std::size_t k = 0; k < l; ++k) {
        std::ifstream f(dir + "/layer_" + names[k] + ".edges");
        if (!f) throw std::runtime_error("missing edge list for layer " + names[k]);
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            auto comma = line.find(',');
            intra[k].emplace_back(std::stoul(line.substr(0, comma)),
                                  std::stoul(line.substr(comma + 1)));
        }
    }
    return build_supra_adjacency(intra, n, l);
}

}  // namespace dymgnn
