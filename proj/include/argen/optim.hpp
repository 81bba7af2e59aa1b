#pragma once

#include <vector>

#include "argen/tape.hpp"

namespace argen {

double global_grad_norm(const std::vector<Parameter*>& params);

// Scales all gradients so their global L2 norm is at most max_norm.
// Returns the pre-clip norm.
double clip_global_norm(const std::vector<Parameter*>& params, double max_norm);

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    // Raw gradients are clipped to this global norm before the moment
    // update; <= 0 disables clipping.
    double clip_norm = 2.0;
};

class Adam {
public:
    Adam(std::vector<Parameter*> params, AdamConfig cfg);

    void step();
    void zero_grads();
    double last_grad_norm() const { return last_norm_; }
    int steps_taken() const { return t_; }

private:
    std::vector<Parameter*> params_;
    AdamConfig cfg_;
    std::vector<Tensor> m_;
    std::vector<Tensor> v_;
    int t_ = 0;
    double last_norm_ = 0.0;
};

}  // namespace argen
