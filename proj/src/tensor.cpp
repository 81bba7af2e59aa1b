#include "argen/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace argen {

static long long shape_numel(const std::vector<int>& shape) {
    long long n = 1;
    for (int d : shape) {
        if (d <= 0) throw DimensionError("tensor dimension must be positive");
        n *= d;
    }
    return n;
}

Tensor::Tensor(std::vector<int> s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {
    if (shape_numel(shape) != static_cast<long long>(data.size())) {
        throw DimensionError("tensor data length does not match shape " + shape_str());
    }
}

Tensor Tensor::zeros(const std::vector<int>& shape) {
    return Tensor(shape, std::vector<double>(static_cast<size_t>(shape_numel(shape)), 0.0));
}

Tensor Tensor::full(const std::vector<int>& shape, double v) {
    return Tensor(shape, std::vector<double>(static_cast<size_t>(shape_numel(shape)), v));
}

Tensor Tensor::scalar(double v) { return Tensor({1}, {v}); }

Tensor Tensor::vec(std::vector<double> v) {
    int n = static_cast<int>(v.size());
    return Tensor({n}, std::move(v));
}

Tensor Tensor::mat(int rows, int cols, std::vector<double> v) {
    return Tensor({rows, cols}, std::move(v));
}

long long Tensor::numel() const {
    long long n = 1;
    for (int d : shape) n *= d;
    return n;
}

double Tensor::scalar_value() const {
    if (!is_scalar()) throw DimensionError("expected scalar, got shape " + shape_str());
    return data[0];
}

bool Tensor::all_finite() const {
    for (double v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

std::string Tensor::shape_str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
    os << "]";
    return os.str();
}

void check_finite(const Tensor& t, const char* where) {
    if (!t.all_finite()) {
        throw NumericError(std::string("non-finite value produced by ") + where);
    }
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
        throw DimensionError("matmul shape mismatch " + a.shape_str() + " x " + b.shape_str());
    }
    int m = a.dim(0), k = a.dim(1), n = b.dim(1);
    Tensor out = Tensor::zeros({m, n});
    for (int i = 0; i < m; ++i) {
        for (int p = 0; p < k; ++p) {
            double av = a.at(i, p);
            if (av == 0.0) continue;
            for (int j = 0; j < n; ++j) out.at(i, j) += av * b.at(p, j);
        }
    }
    return out;
}

Tensor matvec(const Tensor& w, const Tensor& x) {
    if (w.rank() != 2 || x.rank() != 1 || w.dim(1) != x.dim(0)) {
        throw DimensionError("matvec shape mismatch " + w.shape_str() + " x " + x.shape_str());
    }
    int m = w.dim(0), n = w.dim(1);
    Tensor out = Tensor::zeros({m});
    for (int i = 0; i < m; ++i) {
        double acc = 0.0;
        const double* row = &w.data[static_cast<size_t>(i) * n];
        for (int j = 0; j < n; ++j) acc += row[j] * x.data[static_cast<size_t>(j)];
        out.at(i) = acc;
    }
    return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) {
        throw DimensionError("add shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    }
    Tensor out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    return out;
}

Tensor add_n(const std::vector<const Tensor*>& xs) {
    if (xs.empty()) throw DimensionError("add_n on empty list");
    Tensor out = *xs[0];
    for (size_t k = 1; k < xs.size(); ++k) {
        if (!out.same_shape(*xs[k])) throw DimensionError("add_n shape mismatch");
        for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += xs[k]->data[i];
    }
    return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) {
        throw DimensionError("mul shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    }
    Tensor out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] *= b.data[i];
    return out;
}

Tensor concat(const Tensor& a, const Tensor& b) {
    if (a.rank() != 1 || b.rank() != 1) throw DimensionError("concat expects vectors");
    Tensor out = Tensor::zeros({a.dim(0) + b.dim(0)});
    std::copy(a.data.begin(), a.data.end(), out.data.begin());
    std::copy(b.data.begin(), b.data.end(), out.data.begin() + a.dim(0));
    return out;
}

Tensor slice(const Tensor& x, int start, int len) {
    if (x.rank() != 1) throw DimensionError("slice expects a vector");
    if (start < 0 || len <= 0 || start + len > x.dim(0)) {
        throw DimensionError("slice range out of bounds");
    }
    Tensor out = Tensor::zeros({len});
    std::copy(x.data.begin() + start, x.data.begin() + start + len, out.data.begin());
    return out;
}

Tensor tanh(const Tensor& x) {
    Tensor out = x;
    for (double& v : out.data) v = std::tanh(v);
    return out;
}

Tensor sigmoid(const Tensor& x) {
    Tensor out = x;
    for (double& v : out.data) v = 1.0 / (1.0 + std::exp(-v));
    return out;
}

Tensor softmax(const Tensor& logits) {
    if (logits.rank() != 1 || logits.dim(0) < 1) throw DimensionError("softmax expects a non-empty vector");
    double mx = *std::max_element(logits.data.begin(), logits.data.end());
    Tensor out = logits;
    double total = 0.0;
    for (double& v : out.data) {
        v = std::exp(v - mx);
        total += v;
    }
    for (double& v : out.data) v /= total;
    return out;
}

Tensor scale(const Tensor& x, double c) {
    Tensor out = x;
    for (double& v : out.data) v *= c;
    return out;
}

double dot(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw DimensionError("dot shape mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) acc += a.data[i] * b.data[i];
    return acc;
}

Tensor weighted_sum(const Tensor& alpha, const std::vector<const Tensor*>& vs) {
    if (alpha.rank() != 1 || static_cast<size_t>(alpha.dim(0)) != vs.size() || vs.empty()) {
        throw DimensionError("weighted_sum arity mismatch");
    }
    Tensor out = Tensor::zeros(vs[0]->shape);
    for (size_t j = 0; j < vs.size(); ++j) {
        if (!out.same_shape(*vs[j])) throw DimensionError("weighted_sum shape mismatch");
        double a = alpha.at(static_cast<int>(j));
        for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += a * vs[j]->data[i];
    }
    return out;
}

double cross_entropy(const Tensor& probs, int target) {
    if (probs.rank() != 1) throw DimensionError("cross_entropy expects a vector");
    if (target < 0 || target >= probs.dim(0)) {
        throw DimensionError("cross_entropy target index out of range");
    }
    return -std::log(std::max(probs.at(target), kProbFloor));
}

LstmOut lstm_cell(const Tensor& x, const Tensor& h_prev, const Tensor& c_prev,
                  const Tensor& w, const Tensor& b) {
    int h = h_prev.dim(0);
    if (c_prev.dim(0) != h || w.rank() != 2 || w.dim(0) != 4 * h ||
        w.dim(1) != x.dim(0) + h || b.dim(0) != 4 * h) {
        throw DimensionError("lstm_cell parameter shapes inconsistent");
    }
    Tensor z = add(matvec(w, concat(x, h_prev)), b);
    Tensor gi = sigmoid(slice(z, 0, h));
    Tensor gf = sigmoid(slice(z, h, h));
    Tensor gc = tanh(slice(z, 2 * h, h));
    Tensor go = sigmoid(slice(z, 3 * h, h));
    LstmOut out;
    out.c = add(mul(gf, c_prev), mul(gi, gc));
    out.h = mul(go, tanh(out.c));
    return out;
}

}  // namespace argen
