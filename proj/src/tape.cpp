#include "dymgnn/tape.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <unordered_map>

namespace dymgnn {

Var Tape::push(DenseMatrix value, std::function<void(Tape&)> back) {
    Node n;
    n.grad = DenseMatrix(value.rows(), value.cols());
    n.value = std::move(value);
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::input(DenseMatrix value) { return push(std::move(value), nullptr); }

Var Tape::matmul(Var a, Var b) {
    DenseMatrix out = dymgnn::matmul(value(a), value(b));
    Var v = push(std::move(out), nullptr);
    nodes_[v.id].back = [a, b, v](Tape& t) {
        const DenseMatrix& g = t.grad(v);
        // dA = g * B^T
        DenseMatrix da = dymgnn::matmul(g, transpose(t.value(b)));
        DenseMatrix db = dymgnn::matmul(transpose(t.value(a)), g);
        auto& ga = t.grad_ref(a);
        auto& gb = t.grad_ref(b);
        for (std::size_t i = 0; i < ga.size(); ++i) ga.values()[i] += da.values()[i];
        for (std::size_t i = 0; i < gb.size(); ++i) gb.values()[i] += db.values()[i];
    };
    return v;
}

Var Tape::spmm(const SparseBinaryMatrix& s, Var d) {
    DenseMatrix out = dymgnn::spmm(s, value(d));
    Var v = push(std::move(out), nullptr);
    const SparseBinaryMatrix* sp = &s;  // caller keeps s alive for the tape's lifetime
    nodes_[v.id].back = [sp, d, v](Tape& t) {
        DenseMatrix dd = spmm_transposed(*sp, t.grad(v));
        auto& gd = t.grad_ref(d);
        for (std::size_t i = 0; i < gd.size(); ++i) gd.values()[i] += dd.values()[i];
    };
    return v;
}

// op: 0 add, 1 sub, 2 hadamard
Var Tape::binary_elementwise(Var a, Var b, int op) {
    const DenseMatrix& va = value(a);
    const DenseMatrix& vb = value(b);
    const bool bcast = vb.rows() == 1 && vb.cols() == va.cols() && va.rows() != 1;
    if (!bcast && !va.same_shape(vb))
        throw ShapeError("elementwise: " + va.shape_str() + " vs " + vb.shape_str());
    DenseMatrix out(va.rows(), va.cols());
    for (std::size_t i = 0; i < va.rows(); ++i)
        for (std::size_t j = 0; j < va.cols(); ++j) {
            const double x = va(i, j);
            const double y = bcast ? vb(0, j) : vb(i, j);
            out(i, j) = op == 0 ? x + y : op == 1 ? x - y : x * y;
        }
    Var v = push(std::move(out), nullptr);
    nodes_[v.id].back = [a, b, v, op, bcast](Tape& t) {
        const DenseMatrix& g = t.grad(v);
        const DenseMatrix& va = t.value(a);
        const DenseMatrix& vb = t.value(b);
        auto& ga = t.grad_ref(a);
        auto& gb = t.grad_ref(b);
        for (std::size_t i = 0; i < va.rows(); ++i)
            for (std::size_t j = 0; j < va.cols(); ++j) {
                const double gij = g(i, j);
                const double y = bcast ? vb(0, j) : vb(i, j);
                const double da = op == 2 ? gij * y : gij;
                const double db = op == 0 ? gij : op == 1 ? -gij : gij * va(i, j);
                ga(i, j) += da;
                if (bcast)
                    gb(0, j) += db;
                else
                    gb(i, j) += db;
            }
    };
    return v;
}

Var Tape::add(Var a, Var b) { return binary_elementwise(a, b, 0); }
Var Tape::sub(Var a, Var b) { return binary_elementwise(a, b, 1); }
Var Tape::hadamard(Var a, Var b) { return binary_elementwise(a, b, 2); }

Var Tape::scale(double c, Var a) {
    DenseMatrix out = value(a);
    for (double& x : out.values()) x *= c;
    Var v = push(std::move(out), nullptr);
    nodes_[v.id].back = [a, v, c](Tape& t) {
        auto& ga = t.grad_ref(a);
        const DenseMatrix& g = t.grad(v);
        for (std::size_t i = 0; i < ga.size(); ++i) ga.values()[i] += c * g.values()[i];
    };
    return v;
}

Var Tape::add_scalar(double c, Var a) {
    DenseMatrix out = value(a);
    for (double& x : out.values()) x += c;
    Var v = push(std::move(out), nullptr);
    nodes_[v.id].back = [a, v](Tape& t) {
        auto& ga = t.grad_ref(a);
        const DenseMatrix& g = t.grad(v);
        for (std::size_t i = 0; i < ga.size(); ++i) ga.values()[i] += g.values()[i];
    };
    return v;
}

Var Tape::sigmoid(Var a) {
    DenseMatrix out = value(a);
    for (double& x : out.values()) x = 1.0 / (1.0 + std::exp(-x));
    Var v = push(std::move(out), nullptr);
    nodes_[v.id].back = [a, v](Tape& t) {
        auto& ga = t.grad_ref(a);
        const DenseMatrix& g = t.grad(v);
        const DenseMatrix& y = t.value(v);
        for (std::size_t i = 0; i < ga.size(); ++i) {
            const double s = y.values()[i];
            ga.values()[i] += g.values()[i] * s * (1.0 - s);
        }
    };
    return v;
}

Var Tape::tanh(Var a) {
    DenseMatrix out = value(a);
    for (double& x : out.values()) x = std::tanh(x);
    Var v = push(std::move(out), nullptr);
    nodes_[v.id].back = [a, v](Tape& t) {
        auto& ga = t.grad_ref(a);
        const DenseMatrix& g = t.grad(v);
        const DenseMatrix& y = t.value(v);
        for (std::size_t i = 0; i < ga.size(); ++i) {
            const double th = y.values()[i];
            ga.values()[i] += g.values()[i] * (1.0 - th * th);
        }
    };
    return v;
}

Var Tape::relu(Var a) { return leaky_relu(a, 0.0); }

Var Tape::leaky_relu(Var a, double slope) {
    DenseMatrix out = value(a);
    for (double& x : out.values()) x = x > 0.0 ? x : slope * x;
    Var v = push(std::move(out), nullptr);
    nodes_[v.id].back = [a, v, slope](Tape& t) {
        auto& ga = t.grad_ref(a);
        const DenseMatrix& g = t.grad(v);
        const DenseMatrix& x = t.value(a);
        for (std::size_t i = 0; i < ga.size(); ++i)
            ga.values()[i] += g.values()[i] * (x.values()[i] > 0.0 ? 1.0 : slope);
    };
    return v;
}

Var Tape::segment_softmax(Var scores, const std::vector<int>& segments) {
    const DenseMatrix& s = value(scores);
    if (s.cols() != 1 || s.rows() != segments.size())
        throw ShapeError("segment_softmax: scores " + s.shape_str() + ", " +
                         std::to_string(segments.size()) + " segment ids");
    // Group rows by segment id, preserving order within groups.
    std::unordered_map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < segments.size(); ++i) groups[segments[i]].push_back(i);

    DenseMatrix out(s.rows(), 1);
    for (const auto& [seg, idx] : groups) {
        double mx = s(idx[0], 0);
        for (std::size_t i : idx) mx = std::max(mx, s(i, 0));
        double denom = 0.0;
        for (std::size_t i : idx) denom += std::exp(s(i, 0) - mx);
        for (std::size_t i : idx) out(i, 0) = std::exp(s(i, 0) - mx) / denom;
    }
    Var v = push(std::move(out), nullptr);
    auto grouped = std::make_shared<std::unordered_map<int, std::vector<std::size_t>>>(std::move(groups));
    nodes_[v.id].back = [scores, v, grouped](Tape& t) {
        const DenseMatrix& y = t.value(v);
        const DenseMatrix& g = t.grad(v);
        auto& gs = t.grad_ref(scores);
        for (const auto& [seg, idx] : *grouped) {
            double dot = 0.0;
            for (std::size_t i : idx) dot += y(i, 0) * g(i, 0);
            for (std::size_t i : idx) gs(i, 0) += y(i, 0) * (g(i, 0) - dot);
        }
    };
    return v;
}

Var Tape::softmax(Var a) {
    std::vector<int> segs(value(a).rows(), 0);
    return segment_softmax(a, segs);
}

Var Tape::dropout(Var a, double p, bool training, std::uint64_t seed) {
    if (p < 0.0 || p >= 1.0)
        throw NumericError("dropout probability " + std::to_string(p) + " outside [0,1)");
    if (!training || p == 0.0) {
        // Identity pass-through still records a node so gradients flow.
        return scale(1.0, a);
    }
    const DenseMatrix& va = value(a);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto mask = std::make_shared<std::vector<double>>(va.size());
    const double keep_scale = 1.0 / (1.0 - p);
    DenseMatrix out(va.rows(), va.cols());
    for (std::size_t i = 0; i < va.size(); ++i) {
        (*mask)[i] = unif(rng) < p ? 0.0 : keep_scale;
        out.values()[i] = va.values()[i] * (*mask)[i];
    }
    Var v = push(std::move(out), nullptr);
    nodes_[v.id].back = [a, v, mask](Tape& t) {
        auto& ga = t.grad_ref(a);
        const DenseMatrix& g = t.grad(v);
        for (std::size_t i = 0; i < ga.size(); ++i)
            ga.values()[i] += g.values()[i] * (*mask)[i];
    };
    return v;
}

Var Tape::gather_rows(Var a, std::vector<std::size_t> rows) {
    const DenseMatrix& va = value(a);
    DenseMatrix out(rows.size(), va.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= va.rows()) throw ShapeError("gather_rows: index out of range");
        for (std::size_t j = 0; j < va.cols(); ++j) out(i, j) = va(rows[i], j);
    }
    Var v = push(std::move(out), nullptr);
    auto idx = std::make_shared<std::vector<std::size_t>>(std::move(rows));
    nodes_[v.id].back = [a, v, idx](Tape& t) {
        auto& ga = t.grad_ref(a);
        const DenseMatrix& g = t.grad(v);
        for (std::size_t i = 0; i < idx->size(); ++i)
            for (std::size_t j = 0; j < ga.cols(); ++j) ga((*idx)[i], j) += g(i, j);
    };
    return v;
}

Var Tape::edge_aggregate(Var alpha, Var h,
                         std::vector<std::pair<std::size_t, std::size_t>> edges,
                         std::size_t out_rows) {
    const DenseMatrix& va = value(alpha);
    const DenseMatrix& vh = value(h);
    if (va.cols() != 1 || va.rows() != edges.size())
        throw ShapeError("edge_aggregate: alpha " + va.shape_str() + " for " +
                         std::to_string(edges.size()) + " edges");
    DenseMatrix out(out_rows, vh.cols());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [dst, src] = edges[e];
        for (std::size_t j = 0; j < vh.cols(); ++j) out(dst, j) += va(e, 0) * vh(src, j);
    }
    Var v = push(std::move(out), nullptr);
    auto el = std::make_shared<std::vector<std::pair<std::size_t, std::size_t>>>(std::move(edges));
    nodes_[v.id].back = [alpha, h, v, el](Tape& t) {
        const DenseMatrix& g = t.grad(v);
        const DenseMatrix& va = t.value(alpha);
        const DenseMatrix& vh = t.value(h);
        auto& galpha = t.grad_ref(alpha);
        auto& gh = t.grad_ref(h);
        for (std::size_t e = 0; e < el->size(); ++e) {
            const auto [dst, src] = (*el)[e];
            double da = 0.0;
            for (std::size_t j = 0; j < vh.cols(); ++j) {
                da += g(dst, j) * vh(src, j);
                gh(src, j) += va(e, 0) * g(dst, j);
            }
            galpha(e, 0) += da;
        }
    };
    return v;
}

Var Tape::replica_mean(Var a, std::size_t n, std::size_t l) {
    const DenseMatrix& va = value(a);
    if (va.rows() != n * l)
        throw ShapeError("replica_mean: " + va.shape_str() + " for n=" + std::to_string(n) +
                         " l=" + std::to_string(l));
    DenseMatrix out(n, va.cols());
    const double inv = 1.0 / static_cast<double>(l);
    for (std::size_t k = 0; k < l; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < va.cols(); ++j) out(i, j) += inv * va(k * n + i, j);
    Var v = push(std::move(out), nullptr);
    nodes_[v.id].back = [a, v, n, l, inv](Tape& t) {
        auto& ga = t.grad_ref(a);
        const DenseMatrix& g = t.grad(v);
        for (std::size_t k = 0; k < l; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < ga.cols(); ++j) ga(k * n + i, j) += inv * g(i, j);
    };
    return v;
}

Var Tape::stack_scalars(const std::vector<Var>& scalars) {
    DenseMatrix out(scalars.size(), 1);
    for (std::size_t i = 0; i < scalars.size(); ++i) {
        const DenseMatrix& s = value(scalars[i]);
        if (s.rows() != 1 || s.cols() != 1) throw ShapeError("stack_scalars: non-scalar input");
        out(i, 0) = s(0, 0);
    }
    Var v = push(std::move(out), nullptr);
    auto parts = std::make_shared<std::vector<Var>>(scalars);
    nodes_[v.id].back = [v, parts](Tape& t) {
        const DenseMatrix& g = t.grad(v);
        for (std::size_t i = 0; i < parts->size(); ++i)
            t.grad_ref((*parts)[i])(0, 0) += g(i, 0);
    };
    return v;
}

Var Tape::scale_by(Var s, Var a) {
    const DenseMatrix& vs = value(s);
    if (vs.rows() != 1 || vs.cols() != 1) throw ShapeError("scale_by: scalar expected");
    DenseMatrix out = value(a);
    const double c = vs(0, 0);
    for (double& x : out.values()) x *= c;
    Var v = push(std::move(out), nullptr);
    nodes_[v.id].back = [s, a, v](Tape& t) {
        const DenseMatrix& g = t.grad(v);
        const DenseMatrix& va = t.value(a);
        const double c = t.value(s)(0, 0);
        auto& ga = t.grad_ref(a);
        double ds = 0.0;
        for (std::size_t i = 0; i < va.size(); ++i) {
            ds += g.values()[i] * va.values()[i];
            ga.values()[i] += c * g.values()[i];
        }
        t.grad_ref(s)(0, 0) += ds;
    };
    return v;
}

Var Tape::sum(Var a) {
    const DenseMatrix& va = value(a);
    double total = 0.0;
    for (double x : va.values()) total += x;
    DenseMatrix out(1, 1);
    out(0, 0) = total;
    Var v = push(std::move(out), nullptr);
    nodes_[v.id].back = [a, v](Tape& t) {
        auto& ga = t.grad_ref(a);
        const double g = t.grad(v)(0, 0);
        for (double& x : ga.values()) x += g;
    };
    return v;
}

Var Tape::bce_loss(Var yhat, const std::vector<double>& labels) {
    const DenseMatrix& p = value(yhat);
    if (p.cols() != 1 || p.rows() != labels.size())
        throw ShapeError("bce_loss: predictions " + p.shape_str() + " vs " +
                         std::to_string(labels.size()) + " labels");
    const std::size_t n = labels.size();
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pi = std::clamp(p(i, 0), kProbClamp, 1.0 - kProbClamp);
        loss -= labels[i] * std::log(pi) + (1.0 - labels[i]) * std::log(1.0 - pi);
    }
    DenseMatrix out(1, 1);
    out(0, 0) = loss / static_cast<double>(n);
    if (!std::isfinite(out(0, 0))) throw NumericError("bce_loss: non-finite loss");
    Var v = push(std::move(out), nullptr);
    auto y = std::make_shared<std::vector<double>>(labels);
    nodes_[v.id].back = [yhat, v, y, n](Tape& t) {
        const double g = t.grad(v)(0, 0);
        const DenseMatrix& p = t.value(yhat);
        auto& gp = t.grad_ref(yhat);
        for (std::size_t i = 0; i < n; ++i) {
            const double pi = std::clamp(p(i, 0), kProbClamp, 1.0 - kProbClamp);
            gp(i, 0) += g * (pi - (*y)[i]) / (pi * (1.0 - pi) * static_cast<double>(n));
        }
    };
    return v;
}

void Tape::backward(Var loss) {
    const DenseMatrix& l = value(loss);
    if (l.rows() != 1 || l.cols() != 1)
        throw ShapeError("backward: loss must be scalar, got " + l.shape_str());
    for (Node& n : nodes_)
        std::fill(n.grad.values().begin(), n.grad.values().end(), 0.0);
    nodes_[loss.id].grad(0, 0) = 1.0;
    for (int i = loss.id; i >= 0; --i)
        if (nodes_[i].back) nodes_[i].back(*this);
}

}  // namespace dymgnn
