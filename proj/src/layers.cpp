#include "dymgnn/layers.hpp"

namespace dymgnn {

Var gcn_forward(Tape& tape, const SparseBinaryMatrix& anorm, Var x, const GcnVars& params) {
    Var agg = tape.spmm(anorm, x);
    return tape.matmul(agg, params.weight);
}

Var gat_forward(Tape& tape, const EdgeList& edges_with_self, std::size_t nl, Var x,
                const GatVars& params) {
    if (params.weight.empty() || params.weight.size() != params.attn.size())
        throw ShapeError("gat_forward: head parameter lists inconsistent");
    const std::size_t heads = params.weight.size();
    const std::size_t big_d = tape.value(params.weight[0]).cols();

    std::vector<std::size_t> dst_idx, src_idx;
    std::vector<int> segments;
    dst_idx.reserve(edges_with_self.size());
    src_idx.reserve(edges_with_self.size());
    segments.reserve(edges_with_self.size());
    for (auto [dst, src] : edges_with_self) {
        dst_idx.push_back(dst);
        src_idx.push_back(src);
        segments.push_back(static_cast<int>(dst));
    }

    std::vector<std::size_t> left_rows(big_d), right_rows(big_d);
    for (std::size_t i = 0; i < big_d; ++i) {
        left_rows[i] = i;
        right_rows[i] = big_d + i;
    }

    Var mean;
    for (std::size_t h = 0; h < heads; ++h) {
        Var proj = tape.matmul(x, params.weight[h]);  // nl x D
        Var a_left = tape.gather_rows(params.attn[h], left_rows);
        Var a_right = tape.gather_rows(params.attn[h], right_rows);
        Var score_dst = tape.matmul(proj, a_left);   // nl x 1
        Var score_src = tape.matmul(proj, a_right);  // nl x 1
        Var e = tape.leaky_relu(
            tape.add(tape.gather_rows(score_dst, dst_idx), tape.gather_rows(score_src, src_idx)),
            params.leaky_slope);
        Var alpha = tape.segment_softmax(e, segments);
        Var z = tape.edge_aggregate(alpha, proj, edges_with_self, nl);
        mean = h == 0 ? z : tape.add(mean, z);
    }
    if (heads > 1) mean = tape.scale(1.0 / static_cast<double>(heads), mean);
    return mean;
}

std::pair<Var, Var> lstm_cell(Tape& tape, Var z, Var h_prev, Var c_prev,
                              const LstmVars& p) {
    Var gate_i = tape.sigmoid(tape.add(
        tape.add(tape.matmul(z, p.w_ii), tape.matmul(h_prev, p.w_ih)), p.b_i));
    Var gate_f = tape.sigmoid(tape.add(
        tape.add(tape.matmul(z, p.w_fi), tape.matmul(h_prev, p.w_fh)), p.b_f));
    Var candidate = tape.tanh(tape.add(
        tape.add(tape.matmul(z, p.w_ci), tape.matmul(h_prev, p.w_ch)), p.b_c));
    Var c = tape.add(tape.hadamard(gate_f, c_prev), tape.hadamard(gate_i, candidate));
    Var gate_o = tape.sigmoid(tape.add(
        tape.add(tape.matmul(z, p.w_oi), tape.matmul(h_prev, p.w_oh)), p.b_o));
    Var h = tape.hadamard(gate_o, tape.tanh(c));
    return {h, c};
}

Var gru_cell(Tape& tape, Var z, Var h_prev, const GruVars& p) {
    Var update = tape.sigmoid(tape.add(
        tape.add(tape.matmul(z, p.w_ui), tape.matmul(h_prev, p.w_uh)), p.b_u));
    Var reset = tape.sigmoid(tape.add(
        tape.add(tape.matmul(z, p.w_ri), tape.matmul(h_prev, p.w_rh)), p.b_r));
    Var candidate = tape.tanh(tape.add(
        tape.add(tape.matmul(z, p.w_hi), tape.matmul(tape.hadamard(reset, h_prev), p.w_hh)),
        p.b_h));
    // H = (1 - U) . H_prev + U . candidate
    Var keep = tape.add_scalar(1.0, tape.scale(-1.0, update));
    return tape.add(tape.hadamard(keep, h_prev), tape.hadamard(update, candidate));
}

std::pair<Var, Var> temporal_attention(Tape& tape, const std::vector<Var>& h_seq,
                                       const TemporalAttentionVars& params) {
    if (h_seq.empty()) throw ShapeError("temporal_attention: empty sequence");
    const std::size_t nl = tape.value(h_seq[0]).rows();
    const std::size_t m = tape.value(params.a_h).rows();
    if (tape.value(params.a_h).cols() != 1)
        throw ShapeError("temporal_attention: a_h must be a column vector");
    const std::size_t r = std::min(m, nl);
    if (r == 0) throw ShapeError("temporal_attention: empty a_h");
    std::vector<std::size_t> head_rows(r);
    for (std::size_t i = 0; i < r; ++i) head_rows[i] = i;
    Var a_use = m == r ? params.a_h : tape.gather_rows(params.a_h, head_rows);
    std::vector<Var> scores;
    scores.reserve(h_seq.size());
    for (Var h : h_seq) {
        // s = a_h^T H W_h, restricted to the overlapping rows.
        Var hw = tape.matmul(h, params.w_h);  // nl x 1
        if (nl != r) hw = tape.gather_rows(hw, head_rows);
        scores.push_back(tape.sum(tape.hadamard(a_use, hw)));
    }
    Var beta = tape.softmax(tape.stack_scalars(scores));
    Var h_att;
    for (std::size_t t = 0; t < h_seq.size(); ++t) {
        Var beta_t = tape.gather_rows(beta, {t});
        Var term = tape.scale_by(beta_t, h_seq[t]);
        h_att = t == 0 ? term : tape.add(h_att, term);
    }
    return {h_att, beta};
}

Var decoder_forward(Tape& tape, Var pooled, const DecoderVars& params, bool training,
                    std::uint64_t seed) {
    Var hidden = tape.relu(tape.add(tape.matmul(pooled, params.w1), params.b1));
    hidden = tape.dropout(hidden, params.dropout_p, training, seed);
    Var logits = tape.add(tape.matmul(hidden, params.w2), params.b2);
    return tape.sigmoid(logits);
}

}  // namespace dymgnn
