#pragma once

#include <string>
#include <vector>

#include "argen/errors.hpp"

namespace argen {

// Dense row-major float64 tensor. Rank is whatever the shape says; the model
// only ever needs vectors and matrices.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::vector<int> s, std::vector<double> d);

    static Tensor zeros(const std::vector<int>& shape);
    static Tensor full(const std::vector<int>& shape, double v);
    static Tensor scalar(double v);
    static Tensor vec(std::vector<double> v);
    static Tensor mat(int rows, int cols, std::vector<double> v);

    long long numel() const;
    int rank() const { return static_cast<int>(shape.size()); }
    int dim(int i) const { return shape[static_cast<size_t>(i)]; }
    bool is_scalar() const { return numel() == 1; }

    double& at(int i) { return data[static_cast<size_t>(i)]; }
    double at(int i) const { return data[static_cast<size_t>(i)]; }
    double& at(int i, int j) { return data[static_cast<size_t>(i) * shape[1] + j]; }
    double at(int i, int j) const { return data[static_cast<size_t>(i) * shape[1] + j]; }

    double scalar_value() const;
    bool same_shape(const Tensor& o) const { return shape == o.shape; }
    bool all_finite() const;
    std::string shape_str() const;
};

// Plain (untracked) kernels. The tape ops in tape.hpp wrap these same
// routines, and the inference paths call them directly.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor matvec(const Tensor& w, const Tensor& x);
Tensor add(const Tensor& a, const Tensor& b);
Tensor add_n(const std::vector<const Tensor*>& xs);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor concat(const Tensor& a, const Tensor& b);
Tensor slice(const Tensor& x, int start, int len);
Tensor tanh(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor softmax(const Tensor& logits);
Tensor scale(const Tensor& x, double c);
double dot(const Tensor& a, const Tensor& b);
Tensor weighted_sum(const Tensor& alpha, const std::vector<const Tensor*>& vs);

// -log(max(probs[target], kProbFloor)).
double cross_entropy(const Tensor& probs, int target);
inline constexpr double kProbFloor = 1e-12;

// One LSTM step. w is [4h x (dim(x)+h)] with gate rows packed in the order
// input, forget, candidate, output; b is [4h].
struct LstmOut {
    Tensor h;
    Tensor c;
};
LstmOut lstm_cell(const Tensor& x, const Tensor& h_prev, const Tensor& c_prev,
                  const Tensor& w, const Tensor& b);

void check_finite(const Tensor& t, const char* where);

}  // namespace argen
