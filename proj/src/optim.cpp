#include "argen/optim.hpp"

#include <cmath>

namespace argen {

double global_grad_norm(const std::vector<Parameter*>& params) {
    double sq = 0.0;
    for (const Parameter* p : params) {
        for (double g : p->grad.data) sq += g * g;
    }
    return std::sqrt(sq);
}

double clip_global_norm(const std::vector<Parameter*>& params, double max_norm) {
    double norm = global_grad_norm(params);
    if (norm > max_norm && norm > 0.0) {
        double s = max_norm / norm;
        for (Parameter* p : params) {
            for (double& g : p->grad.data) g *= s;
        }
    }
    return norm;
}

Adam::Adam(std::vector<Parameter*> params, AdamConfig cfg)
    : params_(std::move(params)), cfg_(cfg) {
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (const Parameter* p : params_) {
        m_.push_back(Tensor::zeros(p->value.shape));
        v_.push_back(Tensor::zeros(p->value.shape));
    }
}

void Adam::step() {
    if (cfg_.clip_norm > 0.0) {
        last_norm_ = clip_global_norm(params_, cfg_.clip_norm);
    } else {
        last_norm_ = global_grad_norm(params_);
    }
    ++t_;
    double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
    double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
    for (size_t pi = 0; pi < params_.size(); ++pi) {
        Parameter* p = params_[pi];
        Tensor& m = m_[pi];
        Tensor& v = v_[pi];
        for (size_t i = 0; i < p->value.data.size(); ++i) {
            double g = p->grad.data[i];
            m.data[i] = cfg_.beta1 * m.data[i] + (1.0 - cfg_.beta1) * g;
            v.data[i] = cfg_.beta2 * v.data[i] + (1.0 - cfg_.beta2) * g * g;
            double mh = m.data[i] / bc1;
            double vh = v.data[i] / bc2;
            p->value.data[i] -= cfg_.lr * mh / (std::sqrt(vh) + cfg_.eps);
        }
    }
}

void Adam::zero_grads() {
    for (Parameter* p : params_) p->zero_grad();
}

}  // namespace argen
