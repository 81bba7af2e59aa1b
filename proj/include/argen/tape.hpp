#pragma once

#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "argen/rng.hpp"
#include "argen/tensor.hpp"

namespace argen {

// A named trainable tensor plus its gradient accumulator.
struct Parameter {
    std::string name;
    Tensor value;
    Tensor grad;

    Parameter() = default;
    Parameter(std::string n, Tensor v)
        : name(std::move(n)), value(std::move(v)), grad(Tensor::zeros(value.shape)) {}

    void zero_grad() { std::fill(grad.data.begin(), grad.data.end(), 0.0); }
};

using NodeId = int;

// Append-only record of a forward computation. Node order is topological by
// construction; backward walks it in exact reverse. One tape per traced
// forward pass; gradients accumulate (+=) into Parameter::grad so batches can
// share parameter state across tapes.
class Tape {
public:
    using BackFn = std::function<void(Tape&, NodeId)>;

    NodeId leaf(Tensor v);
    NodeId leaf(const Tensor* ref);  // non-owning; caller keeps the tensor alive
    NodeId param(Parameter& p);      // memoized per tape

    NodeId emit(Tensor value, std::vector<NodeId> inputs, BackFn back, const char* op_name);

    const Tensor& val(NodeId id) const {
        const Node& n = nodes_[static_cast<size_t>(id)];
        return n.ref ? *n.ref : n.owned;
    }
    // Gradient buffer, allocated to zeros on first touch.
    Tensor& grad_buf(NodeId id);
    bool has_grad(NodeId id) const { return !grads_[static_cast<size_t>(id)].data.empty(); }

    // Reverse sweep from a scalar loss node. Parameter gradients are
    // accumulated into Parameter::grad; nodes unreachable from the loss are
    // skipped (their parameters keep whatever gradient they already had).
    void backward(NodeId loss);

    void mark_stochastic() { stochastic_ = true; }
    bool stochastic() const { return stochastic_; }
    size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Tensor owned;
        const Tensor* ref = nullptr;
        std::vector<NodeId> inputs;
        BackFn back;
        Parameter* flush = nullptr;
    };
    std::vector<Node> nodes_;
    std::vector<Tensor> grads_;
    std::unordered_map<const Parameter*, NodeId> param_nodes_;
    bool stochastic_ = false;
};

// Traced counterparts of the kernels in tensor.hpp.
NodeId matmul(Tape& t, NodeId a, NodeId b);
NodeId matvec(Tape& t, NodeId w, NodeId x);
NodeId add(Tape& t, NodeId a, NodeId b);
NodeId add_n(Tape& t, const std::vector<NodeId>& xs);
NodeId mul(Tape& t, NodeId a, NodeId b);
NodeId concat(Tape& t, NodeId a, NodeId b);
NodeId slice(Tape& t, NodeId x, int start, int len);
NodeId tanh(Tape& t, NodeId x);
NodeId sigmoid(Tape& t, NodeId x);
NodeId softmax(Tape& t, NodeId logits);
NodeId scale(Tape& t, NodeId x, double c);
NodeId dot(Tape& t, NodeId a, NodeId b);                  // -> scalar
NodeId stack(Tape& t, const std::vector<NodeId>& scalars);  // -> vector
NodeId weighted_sum(Tape& t, NodeId alpha, const std::vector<NodeId>& vs);
NodeId embedding_row(Tape& t, NodeId table, int row);
NodeId cross_entropy(Tape& t, NodeId probs, int target);  // -> scalar
// Elementwise multiply by a fixed mask (the mask is not differentiated).
NodeId apply_mask(Tape& t, NodeId x, Tensor mask);
// Numerically stable -log sigmoid((2*label-1) * score); label is 0 or 1.
NodeId logistic_loss(Tape& t, NodeId score, int label);

std::pair<NodeId, NodeId> lstm_cell(Tape& t, NodeId x, NodeId h_prev, NodeId c_prev,
                                    NodeId w, NodeId b);

// Dropout mask store with an explicit RNG and a frozen mode. While unfrozen,
// each mask_for() samples a fresh inverted-dropout mask, records it under its
// slot name, and marks the tape stochastic. Once frozen, cached masks are
// replayed so a trace becomes deterministic (required by grad_check).
class DropoutCtx {
public:
    DropoutCtx(Rng* rng, double keep_prob) : rng_(rng), keep_(keep_prob) {}

    bool active() const { return keep_ < 1.0; }
    double keep_prob() const { return keep_; }
    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }
    void clear() { masks_.clear(); }

    NodeId apply(Tape& t, NodeId x, const std::string& slot);

private:
    Rng* rng_;
    double keep_;
    bool frozen_ = false;
    std::map<std::string, Tensor> masks_;
};

// Central-difference gradient verification. f must build the traced loss on
// the given tape and return its node. Refuses stochastic traces.
struct GradCheckReport {
    double max_rel_err = 0.0;
    std::string worst_param;
    int worst_index = -1;

    bool pass(double rel_tol) const { return max_rel_err <= rel_tol; }
};
GradCheckReport grad_check(const std::function<NodeId(Tape&)>& f,
                           const std::vector<Parameter*>& params, double eps, double rel_tol);

}  // namespace argen
