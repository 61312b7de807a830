#include "dymgnn/adam.hpp"

#include <cmath>

namespace dymgnn {

void AdamState::step_update(std::map<std::string, DenseMatrix>& params,
                            const std::map<std::string, DenseMatrix>& grads) {
    ++step_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
    for (auto& [name, p] : params) {
        auto git = grads.find(name);
        if (git == grads.end()) continue;
        const DenseMatrix& g = git->second;
        if (!p.same_shape(g))
            throw ShapeError("adam: parameter " + name + " " + p.shape_str() +
                             " vs gradient " + g.shape_str());
        auto mit = m_.find(name);
        if (mit == m_.end()) {
            mit = m_.emplace(name, DenseMatrix(p.rows(), p.cols())).first;
            v_.emplace(name, DenseMatrix(p.rows(), p.cols()));
        }
        DenseMatrix& m = mit->second;
        DenseMatrix& v = v_.at(name);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double gi = g.values()[i];
            m.values()[i] = cfg_.beta1 * m.values()[i] + (1.0 - cfg_.beta1) * gi;
            v.values()[i] = cfg_.beta2 * v.values()[i] + (1.0 - cfg_.beta2) * gi * gi;
            const double mhat = m.values()[i] / bc1;
            const double vhat = v.values()[i] / bc2;
            p.values()[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
    }
}

}  // namespace dymgnn
