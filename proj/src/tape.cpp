#include "argen/tape.hpp"

#include <algorithm>
#include <cmath>

namespace argen {

NodeId Tape::leaf(Tensor v) {
    Node n;
    n.owned = std::move(v);
    nodes_.push_back(std::move(n));
    grads_.emplace_back();
    return static_cast<NodeId>(nodes_.size()) - 1;
}

NodeId Tape::leaf(const Tensor* ref) {
    Node n;
    n.ref = ref;
    nodes_.push_back(std::move(n));
    grads_.emplace_back();
    return static_cast<NodeId>(nodes_.size()) - 1;
}

NodeId Tape::param(Parameter& p) {
    auto it = param_nodes_.find(&p);
    if (it != param_nodes_.end()) return it->second;
    Node n;
    n.ref = &p.value;
    n.flush = &p;
    nodes_.push_back(std::move(n));
    grads_.emplace_back();
    NodeId id = static_cast<NodeId>(nodes_.size()) - 1;
    param_nodes_.emplace(&p, id);
    return id;
}

NodeId Tape::emit(Tensor value, std::vector<NodeId> inputs, BackFn back, const char* op_name) {
    check_finite(value, op_name);
    Node n;
    n.owned = std::move(value);
    n.inputs = std::move(inputs);
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    grads_.emplace_back();
    return static_cast<NodeId>(nodes_.size()) - 1;
}

Tensor& Tape::grad_buf(NodeId id) {
    Tensor& g = grads_[static_cast<size_t>(id)];
    if (g.data.empty()) g = Tensor::zeros(val(id).shape);
    return g;
}

void Tape::backward(NodeId loss) {
    const Tensor& lv = val(loss);
    if (!lv.is_scalar()) {
        throw DimensionError("backward requires a scalar loss, got shape " + lv.shape_str());
    }
    grad_buf(loss).data[0] = 1.0;
    for (NodeId id = loss; id >= 0; --id) {
        Node& n = nodes_[static_cast<size_t>(id)];
        if (!has_grad(id)) continue;
        if (n.back) n.back(*this, id);
        if (n.flush) {
            const Tensor& g = grads_[static_cast<size_t>(id)];
            for (size_t i = 0; i < g.data.size(); ++i) n.flush->grad.data[i] += g.data[i];
        }
    }
}

// ---------------------------------------------------------------------------
// Ops
// ---------------------------------------------------------------------------

NodeId matmul(Tape& t, NodeId a, NodeId b) {
    Tensor out = matmul(t.val(a), t.val(b));
    return t.emit(std::move(out), {a, b},
                  [a, b](Tape& tp, NodeId self) {
                      const Tensor& g = tp.grad_buf(self);
                      const Tensor& av = tp.val(a);
                      const Tensor& bv = tp.val(b);
                      int m = av.dim(0), k = av.dim(1), n = bv.dim(1);
                      Tensor& ga = tp.grad_buf(a);
                      Tensor& gb = tp.grad_buf(b);
                      for (int i = 0; i < m; ++i) {
                          for (int p = 0; p < k; ++p) {
                              double acc = 0.0;
                              for (int j = 0; j < n; ++j) acc += g.at(i, j) * bv.at(p, j);
                              ga.at(i, p) += acc;
                          }
                      }
                      for (int p = 0; p < k; ++p) {
                          for (int j = 0; j < n; ++j) {
                              double acc = 0.0;
                              for (int i = 0; i < m; ++i) acc += av.at(i, p) * g.at(i, j);
                              gb.at(p, j) += acc;
                          }
                      }
                  },
                  "matmul");
}

NodeId matvec(Tape& t, NodeId w, NodeId x) {
    Tensor out = matvec(t.val(w), t.val(x));
    return t.emit(std::move(out), {w, x},
                  [w, x](Tape& tp, NodeId self) {
                      const Tensor& g = tp.grad_buf(self);
                      const Tensor& wv = tp.val(w);
                      const Tensor& xv = tp.val(x);
                      int m = wv.dim(0), n = wv.dim(1);
                      Tensor& gw = tp.grad_buf(w);
                      Tensor& gx = tp.grad_buf(x);
                      for (int i = 0; i < m; ++i) {
                          double gi = g.at(i);
                          if (gi == 0.0) continue;
                          for (int j = 0; j < n; ++j) {
                              gw.at(i, j) += gi * xv.at(j);
                              gx.at(j) += gi * wv.at(i, j);
                          }
                      }
                  },
                  "matvec");
}

NodeId add(Tape& t, NodeId a, NodeId b) {
    Tensor out = add(t.val(a), t.val(b));
    return t.emit(std::move(out), {a, b},
                  [a, b](Tape& tp, NodeId self) {
                      const Tensor& g = tp.grad_buf(self);
                      Tensor& ga = tp.grad_buf(a);
                      Tensor& gb = tp.grad_buf(b);
                      for (size_t i = 0; i < g.data.size(); ++i) {
                          ga.data[i] += g.data[i];
                          gb.data[i] += g.data[i];
                      }
                  },
                  "add");
}

NodeId add_n(Tape& t, const std::vector<NodeId>& xs) {
    std::vector<const Tensor*> vals;
    vals.reserve(xs.size());
    for (NodeId x : xs) vals.push_back(&t.val(x));
    Tensor out = add_n(vals);
    return t.emit(std::move(out), xs,
                  [xs](Tape& tp, NodeId self) {
                      const Tensor& g = tp.grad_buf(self);
                      for (NodeId x : xs) {
                          Tensor& gx = tp.grad_buf(x);
                          for (size_t i = 0; i < g.data.size(); ++i) gx.data[i] += g.data[i];
                      }
                  },
                  "add_n");
}

NodeId mul(Tape& t, NodeId a, NodeId b) {
    Tensor out = mul(t.val(a), t.val(b));
    return t.emit(std::move(out), {a, b},
                  [a, b](Tape& tp, NodeId self) {
                      const Tensor& g = tp.grad_buf(self);
                      const Tensor& av = tp.val(a);
                      const Tensor& bv = tp.val(b);
                      Tensor& ga = tp.grad_buf(a);
                      Tensor& gb = tp.grad_buf(b);
                      for (size_t i = 0; i < g.data.size(); ++i) {
                          ga.data[i] += g.data[i] * bv.data[i];
                          gb.data[i] += g.data[i] * av.data[i];
                      }
                  },
                  "mul");
}

NodeId concat(Tape& t, NodeId a, NodeId b) {
    Tensor out = concat(t.val(a), t.val(b));
    int na = t.val(a).dim(0);
    return t.emit(std::move(out), {a, b},
                  [a, b, na](Tape& tp, NodeId self) {
                      const Tensor& g = tp.grad_buf(self);
                      Tensor& ga = tp.grad_buf(a);
                      Tensor& gb = tp.grad_buf(b);
                      for (int i = 0; i < na; ++i) ga.at(i) += g.at(i);
                      for (size_t i = static_cast<size_t>(na); i < g.data.size(); ++i) {
                          gb.data[i - na] += g.data[i];
                      }
                  },
                  "concat");
}

NodeId slice(Tape& t, NodeId x, int start, int len) {
    Tensor out = slice(t.val(x), start, len);
    return t.emit(std::move(out), {x},
                  [x, start, len](Tape& tp, NodeId self) {
                      const Tensor& g = tp.grad_buf(self);
                      Tensor& gx = tp.grad_buf(x);
                      for (int i = 0; i < len; ++i) gx.at(start + i) += g.at(i);
                  },
                  "slice");
}

NodeId tanh(Tape& t, NodeId x) {
    Tensor out = tanh(t.val(x));
    return t.emit(std::move(out), {x},
                  [x](Tape& tp, NodeId self) {
                      const Tensor& g = tp.grad_buf(self);
                      const Tensor& y = tp.val(self);
                      Tensor& gx = tp.grad_buf(x);
                      for (size_t i = 0; i < g.data.size(); ++i) {
                          gx.data[i] += g.data[i] * (1.0 - y.data[i] * y.data[i]);
                      }
                  },
                  "tanh");
}

NodeId sigmoid(Tape& t, NodeId x) {
    Tensor out = sigmoid(t.val(x));
    return t.emit(std::move(out), {x},
                  [x](Tape& tp, NodeId self) {
                      const Tensor& g = tp.grad_buf(self);
                      const Tensor& y = tp.val(self);
                      Tensor& gx = tp.grad_buf(x);
                      for (size_t i = 0; i < g.data.size(); ++i) {
                          gx.data[i] += g.data[i] * y.data[i] * (1.0 - y.data[i]);
                      }
                  },
                  "sigmoid");
}

NodeId softmax(Tape& t, NodeId logits) {
    Tensor out = softmax(t.val(logits));
    return t.emit(std::move(out), {logits},
                  [logits](Tape& tp, NodeId self) {
                      const Tensor& g = tp.grad_buf(self);
                      const Tensor& y = tp.val(self);
                      Tensor& gx = tp.grad_buf(logits);
                      double gy = 0.0;
                      for (size_t i = 0; i < g.data.size(); ++i) gy += g.data[i] * y.data[i];
                      for (size_t i = 0; i < g.data.size(); ++i) {
                          gx.data[i] += y.data[i] * (g.data[i] - gy);
                      }
                  },
                  "softmax");
}

NodeId scale(Tape& t, NodeId x, double c) {
    Tensor out = scale(t.val(x), c);
    return t.emit(std::move(out), {x},
                  [x, c](Tape& tp, NodeId self) {
                      const Tensor& g = tp.grad_buf(self);
                      Tensor& gx = tp.grad_buf(x);
                      for (size_t i = 0; i < g.data.size(); ++i) gx.data[i] += c * g.data[i];
                  },
                  "scale");
}

NodeId dot(Tape& t, NodeId a, NodeId b) {
    double v = dot(t.val(a), t.val(b));
    return t.emit(Tensor::scalar(v), {a, b},
                  [a, b](Tape& tp, NodeId self) {
                      double g = tp.grad_buf(self).data[0];
                      const Tensor& av = tp.val(a);
                      const Tensor& bv = tp.val(b);
                      Tensor& ga = tp.grad_buf(a);
                      Tensor& gb = tp.grad_buf(b);
                      for (size_t i = 0; i < av.data.size(); ++i) {
                          ga.data[i] += g * bv.data[i];
                          gb.data[i] += g * av.data[i];
                      }
                  },
                  "dot");
}

NodeId stack(Tape& t, const std::vector<NodeId>& scalars) {
    Tensor out = Tensor::zeros({static_cast<int>(scalars.size())});
    for (size_t i = 0; i < scalars.size(); ++i) out.data[i] = t.val(scalars[i]).scalar_value();
    return t.emit(std::move(out), scalars,
                  [scalars](Tape& tp, NodeId self) {
                      const Tensor& g = tp.grad_buf(self);
                      for (size_t i = 0; i < scalars.size(); ++i) {
                          tp.grad_buf(scalars[i]).data[0] += g.data[i];
                      }
                  },
                  "stack");
}

NodeId weighted_sum(Tape& t, NodeId alpha, const std::vector<NodeId>& vs) {
    std::vector<const Tensor*> vals;
    vals.reserve(vs.size());
    for (NodeId v : vs) vals.push_back(&t.val(v));
    Tensor out = weighted_sum(t.val(alpha), vals);
    std::vector<NodeId> inputs = vs;
    inputs.push_back(alpha);
    return t.emit(std::move(out), std::move(inputs),
                  [alpha, vs](Tape& tp, NodeId self) {
                      const Tensor& g = tp.grad_buf(self);
                      const Tensor& av = tp.val(alpha);
                      Tensor& ga = tp.grad_buf(alpha);
                      for (size_t j = 0; j < vs.size(); ++j) {
                          const Tensor& vj = tp.val(vs[j]);
                          Tensor& gv = tp.grad_buf(vs[j]);
                          double aj = av.at(static_cast<int>(j));
                          double accum = 0.0;
                          for (size_t i = 0; i < g.data.size(); ++i) {
                              gv.data[i] += aj * g.data[i];
                              accum += g.data[i] * vj.data[i];
                          }
                          ga.at(static_cast<int>(j)) += accum;
                      }
                  },
                  "weighted_sum");
}

NodeId embedding_row(Tape& t, NodeId table, int row) {
    const Tensor& tb = t.val(table);
    if (tb.rank() != 2 || row < 0 || row >= tb.dim(0)) {
        throw DimensionError("embedding_row index out of range");
    }
    int cols = tb.dim(1);
    Tensor out = Tensor::zeros({cols});
    for (int j = 0; j < cols; ++j) out.at(j) = tb.at(row, j);
    return t.emit(std::move(out), {table},
                  [table, row, cols](Tape& tp, NodeId self) {
                      const Tensor& g = tp.grad_buf(self);
                      Tensor& gt = tp.grad_buf(table);
                      for (int j = 0; j < cols; ++j) gt.at(row, j) += g.at(j);
                  },
                  "embedding_row");
}

NodeId cross_entropy(Tape& t, NodeId probs, int target) {
    double v = cross_entropy(t.val(probs), target);
    return t.emit(Tensor::scalar(v), {probs},
                  [probs, target](Tape& tp, NodeId self) {
                      double g = tp.grad_buf(self).data[0];
                      const Tensor& p = tp.val(probs);
                      Tensor& gp = tp.grad_buf(probs);
                      double pt = p.at(target);
                      if (pt > kProbFloor) gp.at(target) += -g / pt;
                  },
                  "cross_entropy");
}

NodeId apply_mask(Tape& t, NodeId x, Tensor mask) {
    Tensor out = mul(t.val(x), mask);
    return t.emit(std::move(out), {x},
                  [x, mask = std::move(mask)](Tape& tp, NodeId self) {
                      const Tensor& g = tp.grad_buf(self);
                      Tensor& gx = tp.grad_buf(x);
                      for (size_t i = 0; i < g.data.size(); ++i) gx.data[i] += g.data[i] * mask.data[i];
                  },
                  "apply_mask");
}

NodeId logistic_loss(Tape& t, NodeId score, int label) {
    double s = t.val(score).scalar_value();
    double z = (label == 1) ? s : -s;
    // -log sigmoid(z) = max(-z, 0) + log1p(exp(-|z|))
    double v = std::max(-z, 0.0) + std::log1p(std::exp(-std::abs(z)));
    return t.emit(Tensor::scalar(v), {score},
                  [score, label](Tape& tp, NodeId self) {
                      double g = tp.grad_buf(self).data[0];
                      double s2 = tp.val(score).scalar_value();
                      double sig = 1.0 / (1.0 + std::exp(-s2));
                      tp.grad_buf(score).data[0] += g * (sig - (label == 1 ? 1.0 : 0.0));
                  },
                  "logistic_loss");
}

std::pair<NodeId, NodeId> lstm_cell(Tape& t, NodeId x, NodeId h_prev, NodeId c_prev,
                                    NodeId w, NodeId b) {
    int h = t.val(h_prev).dim(0);
    NodeId z = add(t, matvec(t, w, concat(t, x, h_prev)), b);
    NodeId gi = sigmoid(t, slice(t, z, 0, h));
    NodeId gf = sigmoid(t, slice(t, z, h, h));
    NodeId gc = tanh(t, slice(t, z, 2 * h, h));
    NodeId go = sigmoid(t, slice(t, z, 3 * h, h));
    NodeId c = add(t, mul(t, gf, c_prev), mul(t, gi, gc));
    NodeId hn = mul(t, go, tanh(t, c));
    return {hn, c};
}

NodeId DropoutCtx::apply(Tape& t, NodeId x, const std::string& slot) {
    if (!active()) return x;
    int n = t.val(x).dim(0);
    auto it = masks_.find(slot);
    if (it == masks_.end()) {
        if (frozen_) throw ConfigError("dropout: no frozen mask for slot " + slot);
        Tensor m = Tensor::zeros({n});
        for (int i = 0; i < n; ++i) m.at(i) = (rng_->uniform01() < keep_) ? 1.0 / keep_ : 0.0;
        it = masks_.emplace(slot, std::move(m)).first;
        t.mark_stochastic();
    }
    if (it->second.dim(0) != n) throw DimensionError("dropout mask size mismatch for slot " + slot);
    return apply_mask(t, x, it->second);
}

GradCheckReport grad_check(const std::function<NodeId(Tape&)>& f,
                           const std::vector<Parameter*>& params, double eps, double rel_tol) {
    if (eps <= 0) throw ConfigError("grad_check: eps must be positive");
    for (Parameter* p : params) p->zero_grad();
    std::vector<Tensor> analytic;
    {
        Tape t;
        NodeId loss = f(t);
        if (t.stochastic()) {
            throw ConfigError("grad_check refused: traced function is stochastic (unfrozen dropout)");
        }
        t.backward(loss);
    }
    analytic.reserve(params.size());
    for (Parameter* p : params) analytic.push_back(p->grad);

    auto eval = [&f]() {
        Tape t;
        NodeId loss = f(t);
        return t.val(loss).scalar_value();
    };

    GradCheckReport report;
    for (size_t pi = 0; pi < params.size(); ++pi) {
        Parameter* p = params[pi];
        for (size_t i = 0; i < p->value.data.size(); ++i) {
            double saved = p->value.data[i];
            p->value.data[i] = saved + eps;
            double up = eval();
            p->value.data[i] = saved - eps;
            double down = eval();
            p->value.data[i] = saved;
            double numeric = (up - down) / (2.0 * eps);
            double a = analytic[pi].data[i];
            double err;
            if (std::abs(a) < 1e-8 && std::abs(numeric) < 1e-8) {
                err = std::abs(a - numeric);
            } else {
                err = std::abs(a - numeric) / std::max(std::abs(a), std::abs(numeric));
            }
            if (err > report.max_rel_err) {
                report.max_rel_err = err;
                report.worst_param = p->name;
                report.worst_index = static_cast<int>(i);
            }
        }
    }
    (void)rel_tol;
    return report;
}

}  // namespace argen
