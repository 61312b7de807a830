#pragma once

#include <utility>
#include <vector>

#include "dymgnn/mlgraph.hpp"
#include "dymgnn/tape.hpp"

namespace dymgnn {

// Tape handles for one layer's parameters. The owning ParameterStore
// registers the matrices on the tape and hands out these views.

struct GcnVars {
    Var weight;  // d x D
};

struct GatVars {
    std::vector<Var> weight;  // per head, d x D
    std::vector<Var> attn;    // per head, 2D x 1
    double leaky_slope = 0.2;
};

struct LstmVars {
    Var w_ii, w_ih, w_fi, w_fh, w_ci, w_ch, w_oi, w_oh;  // D x D
    Var b_i, b_f, b_c, b_o;                              // 1 x D
};

struct GruVars {
    Var w_ui, w_uh, w_ri, w_rh, w_hi, w_hh;  // D x D
    Var b_u, b_r, b_h;                       // 1 x D
};

struct TemporalAttentionVars {
    // a_h is kept as a column so it can be truncated to a smaller window;
    // rows beyond min(len(a_h), nl) act as zero padding.
    Var a_h;  // nl x 1
    Var w_h;  // D x 1
};

struct DecoderVars {
    Var w1, b1;  // D x hidden, 1 x hidden
    Var w2, b2;  // hidden x 1, 1 x 1
    double dropout_p = 0.5;
};

// Z = Anorm X W, isotropic aggregation over the normalized supra graph.
Var gcn_forward(Tape& tape, const SparseBinaryMatrix& anorm, Var x, const GcnVars& params);

// Multi-head attention aggregation over the supra edges (self-edges included),
// heads combined by elementwise mean. edges are (dst, src) pairs.
Var gat_forward(Tape& tape, const EdgeList& edges_with_self, std::size_t nl, Var x,
                const GatVars& params);

std::pair<Var, Var> lstm_cell(Tape& tape, Var z, Var h_prev, Var c_prev,
                              const LstmVars& params);  // -> (h, c)

Var gru_cell(Tape& tape, Var z, Var h_prev, const GruVars& params);

// Softmax-weighted combination of the per-timestamp hidden states.
// Returns (h_att, beta) where beta is tau x 1.
std::pair<Var, Var> temporal_attention(Tape& tape, const std::vector<Var>& h_seq,
                                       const TemporalAttentionVars& params);

// pooled (n x D) -> hidden, ReLU, dropout, linear, sigmoid -> n x 1.
Var decoder_forward(Tape& tape, Var pooled, const DecoderVars& params, bool training,
                    std::uint64_t seed);

}  // namespace dymgnn
