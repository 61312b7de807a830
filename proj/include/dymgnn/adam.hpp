#pragma once

#include <map>
#include <string>

#include "dymgnn/matrix.hpp"

namespace dymgnn {

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Per-parameter first/second moment estimates plus a shared step counter.
class AdamState {
public:
    explicit AdamState(AdamConfig cfg = {}) : cfg_(cfg) {}

    const AdamConfig& config() const { return cfg_; }
    long step() const { return step_; }

    // One bias-corrected Adam update over all named parameters. Parameters
    // without a gradient entry are left untouched (zero gradient).
    void step_update(std::map<std::string, DenseMatrix>& params,
                     const std::map<std::string, DenseMatrix>& grads);

private:
    AdamConfig cfg_;
    long step_ = 0;
    std::map<std::string, DenseMatrix> m_;
    std::map<std::string, DenseMatrix> v_;
};

}  // namespace dymgnn
