#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "dymgnn/matrix.hpp"

namespace dymgnn {

// Handle into a Tape.
struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
};

// Reverse-mode autodiff over matrix-level primitives. Operations are
// recorded in execution order; backward() replays them in exact reverse.
// A Tape is confined to one thread.
class Tape {
public:
    Var input(DenseMatrix value);

    Var matmul(Var a, Var b);
    // The sparse factor is a constant; gradient flows through the dense side.
    Var spmm(const SparseBinaryMatrix& s, Var d);

    // add/sub/hadamard broadcast a 1 x cols right operand across rows.
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var hadamard(Var a, Var b);
    Var scale(double c, Var a);
    Var add_scalar(double c, Var a);

    Var sigmoid(Var a);
    Var tanh(Var a);
    Var relu(Var a);
    Var leaky_relu(Var a, double slope);

    // scores is E x 1; softmax within each segment, max-subtracted.
    Var segment_softmax(Var scores, const std::vector<int>& segments);
    // Column-vector softmax over all rows, max-subtracted.
    Var softmax(Var a);

    // Inverted dropout: zero with probability p, survivors scaled by 1/(1-p).
    Var dropout(Var a, double p, bool training, std::uint64_t seed);

    Var gather_rows(Var a, std::vector<std::size_t> rows);
    // out[i, :] += alpha_e * h[src_e, :] for each edge e = (dst, src); alpha is E x 1.
    Var edge_aggregate(Var alpha, Var h, std::vector<std::pair<std::size_t, std::size_t>> edges,
                       std::size_t out_rows);
    // Mean over the l layer replicas of each of the n nodes; a is (n*l) x d.
    Var replica_mean(Var a, std::size_t n, std::size_t l);

    // Stack 1x1 scalars into a k x 1 column.
    Var stack_scalars(const std::vector<Var>& scalars);
    // out = s * a where s is a 1x1 scalar var.
    Var scale_by(Var s, Var a);

    Var sum(Var a);

    // Mean binary cross-entropy of an n x 1 probability column against labels,
    // probabilities clamped to [1e-7, 1 - 1e-7].
    Var bce_loss(Var yhat, const std::vector<double>& labels);

    void backward(Var loss);

    const DenseMatrix& value(Var v) const { return nodes_[v.id].value; }
    const DenseMatrix& grad(Var v) const { return nodes_[v.id].grad; }
    std::size_t size() const { return nodes_.size(); }

    static constexpr double kProbClamp = 1e-7;

private:
    struct Node {
        DenseMatrix value;
        DenseMatrix grad;
        std::function<void(Tape&)> back;  // null for inputs
    };

    Var push(DenseMatrix value, std::function<void(Tape&)> back);
    DenseMatrix& grad_ref(Var v) { return nodes_[v.id].grad; }
    Var binary_elementwise(Var a, Var b, int op);

    std::vector<Node> nodes_;
};

}  // namespace dymgnn
