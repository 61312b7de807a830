#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dymgnn/matrix.hpp"

namespace dymgnn {

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

// Multilayer snapshot topology: n nodes replicated across l layers.
// The replica of node i in layer k (0-based) sits at supra index k*n + i.
struct MultilayerTopology {
    std::size_t n = 0;
    std::size_t l = 0;
    std::vector<EdgeList> intra_edges;  // canonical i < j, deduplicated, per layer
    SparseBinaryMatrix supra;           // (n*l) x (n*l), symmetric, binary, zero diagonal

    std::size_t supra_size() const { return n * l; }
};

// One training/testing window: fixed topology, tau feature matrices.
struct SnapshotSequence {
    MultilayerTopology topology;
    std::vector<DenseMatrix> features;   // tau matrices, each (n*l) x d
    std::vector<std::string> timestamps; // tau ordered period labels
};

// D^{-1/2} (A + I) D^{-1/2} stored as a weighted sparse matrix.
struct NormalizedAdjacency {
    SparseBinaryMatrix matrix;
};

// Intra-layer edges go into diagonal block (k,k); every pair of layers is
// coupled through the replica edges (k*n + i, m*n + i).
MultilayerTopology build_supra_adjacency(const std::vector<EdgeList>& intra_edges,
                                         std::size_t n, std::size_t l);

NormalizedAdjacency normalize_adjacency(const MultilayerTopology& topology);

// Removes all intra-layer edges incident to a seeded uniform sample of
// floor(fraction * n) nodes; interlayer replica edges are kept.
MultilayerTopology isolate_nodes(const MultilayerTopology& topology, double fraction,
                                 std::uint64_t seed);
std::vector<std::size_t> sample_isolated_nodes(std::size_t n, double fraction,
                                               std::uint64_t seed);

// Stacks the per-node feature matrix once per layer: row k*n + i = input row i.
DenseMatrix replicate_features(const DenseMatrix& per_node, std::size_t l);

struct TopologyViolation {
    std::string kind;  // "asymmetry" | "nonbinary" | "diagonal" | "replica coupling"
    std::size_t row, col;
};

std::vector<TopologyViolation> validate_topology(const MultilayerTopology& topology);

// Directed edge list of the supra graph plus self-edges, as (dst, src) pairs;
// used by attention-based aggregation.
EdgeList supra_edges_with_self_loops(const MultilayerTopology& topology);

// Plain-text interchange: one edge-list file per layer ("a,b" per line,
// 0-based) plus a header declaring n, l and the layer names.
void write_topology(const MultilayerTopology& topology, const std::string& dir,
                    const std::vector<std::string>& layer_names);
MultilayerTopology read_topology(const std::string& dir);

}  // namespace dymgnn
