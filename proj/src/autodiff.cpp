#include "scaffold/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scaffold/common.hpp"
#include "scaffold/kernels.hpp"

namespace scaffold {

const char* op_name(Op op) {
  switch (op) {
    case Op::kInput: return "input";
    case Op::kParam: return "param";
    case Op::kMatmul: return "matmul";
    case Op::kMatvec: return "matvec";
    case Op::kAdd: return "add";
    case Op::kSub: return "sub";
    case Op::kMul: return "mul";
    case Op::kSmul: return "smul";
    case Op::kScale: return "scale";
    case Op::kAddc: return "addc";
    case Op::kConcat: return "concat";
    case Op::kSlice: return "slice";
    case Op::kRow: return "row";
    case Op::kAt: return "at";
    case Op::kTanh: return "tanh";
    case Op::kSigmoid: return "sigmoid";
    case Op::kRelu: return "relu";
    case Op::kSoftmax: return "softmax";
    case Op::kLogSumExp: return "logsumexp";
    case Op::kDot: return "dot";
    case Op::kSum: return "sum";
    case Op::kDropout: return "dropout";
  }
  return "?";
}

double logsumexp(const std::vector<double>& xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;  // all -inf (or empty would be UB upstream)
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

Parameter* ParameterStore::add(const std::string& name,
                               std::vector<std::size_t> shape, Rng& rng,
                               bool trainable) {
  if (by_name_.count(name))
    throw config_error("duplicate parameter name: " + name);
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = Tensor::zeros(shape);
  p->grad = Tensor::zeros(shape);
  p->trainable = trainable;
  p->value.requires_grad = trainable;
  glorot_init(p->value, rng);
  Parameter* raw = p.get();
  params_.push_back(std::move(p));
  by_name_[name] = raw;
  return raw;
}

void ParameterStore::glorot_init(Tensor& t, Rng& rng) {
  if (t.shape.size() == 2) {
    const double fan_in = static_cast<double>(t.shape[1]);
    const double fan_out = static_cast<double>(t.shape[0]);
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& v : t.data) v = rng.uniform(-bound, bound);
  }
  // rank-1 tensors are biases: keep zeros
}

Parameter* ParameterStore::find(const std::string& name) {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

void ParameterStore::zero_grads() {
  for (auto& p : params_)
    std::fill(p->grad.data.begin(), p->grad.data.end(), 0.0);
}

std::size_t ParameterStore::total_size() const {
  std::size_t n = 0;
  for (auto& p : params_) n += p->value.size();
  return n;
}

namespace {

void check_finite(const Node& n, int id) {
  for (double v : n.val.data) {
    if (!std::isfinite(v))
      throw numeric_error(std::string("non-finite value in forward op '") +
                          op_name(n.op) + "' (node " + std::to_string(id) + ")");
  }
}

void require(bool cond, const char* msg) {
  if (!cond) throw numeric_error(msg);
}

}  // namespace

Var Tape::emit(Node node) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(node));
  check_finite(nodes_.back(), id);
  return Var{this, id};
}

Var Tape::input(Tensor value) {
  Node n;
  n.op = Op::kInput;
  n.val = std::move(value);
  return emit(std::move(n));
}

Var Tape::param(Parameter& p) {
  Node n;
  n.op = Op::kParam;
  n.val = p.value;  // snapshot; adam_step is serialized against tapes
  n.param = &p;
  return emit(std::move(n));
}

namespace {

Tape* same_tape(Var a, Var b) {
  require(a.valid() && b.valid() && a.tape == b.tape,
          "op inputs must live on one tape");
  return a.tape;
}

const Tensor& val(Var v) { return v.tape->node(v.id).val; }

}  // namespace

Var matmul(Var a, Var b) {
  Tape* t = same_tape(a, b);
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  require(A.is_matrix() && B.is_matrix() && A.shape[1] == B.shape[0],
          "matmul: shape mismatch");
  Node n;
  n.op = Op::kMatmul;
  n.inputs = {a.id, b.id};
  n.val = Tensor::zeros({A.shape[0], B.shape[1]});
  kernels::matmul(A.data.data(), B.data.data(), n.val.data.data(),
                  A.shape[0], A.shape[1], B.shape[1]);
  return t->emit(std::move(n));
}

Var matvec(Var w, Var x) {
  Tape* t = same_tape(w, x);
  const Tensor& W = val(w);
  const Tensor& X = val(x);
  require(W.is_matrix() && X.shape.size() == 1 && W.shape[1] == X.size(),
          "matvec: shape mismatch");
  Node n;
  n.op = Op::kMatvec;
  n.inputs = {w.id, x.id};
  n.val = Tensor::zeros({W.shape[0]});
  kernels::matvec(W.data.data(), X.data.data(), n.val.data.data(),
                  W.shape[0], W.shape[1]);
  return t->emit(std::move(n));
}

namespace {

Var binary_elementwise(Op op, Var a, Var b) {
  Tape* t = same_tape(a, b);
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  require(A.size() == B.size(), "elementwise op: size mismatch");
  Node n;
  n.op = op;
  n.inputs = {a.id, b.id};
  n.val = Tensor::zeros(A.shape);
  for (std::size_t i = 0; i < A.size(); ++i) {
    switch (op) {
      case Op::kAdd: n.val[i] = A[i] + B[i]; break;
      case Op::kSub: n.val[i] = A[i] - B[i]; break;
      case Op::kMul: n.val[i] = A[i] * B[i]; break;
      default: break;
    }
  }
  return t->emit(std::move(n));
}

}  // namespace

Var add(Var a, Var b) { return binary_elementwise(Op::kAdd, a, b); }
Var sub(Var a, Var b) { return binary_elementwise(Op::kSub, a, b); }
Var mul(Var a, Var b) { return binary_elementwise(Op::kMul, a, b); }

Var smul(Var v, Var s) {
  Tape* t = same_tape(v, s);
  const Tensor& V = val(v);
  const Tensor& S = val(s);
  require(S.is_scalar(), "smul: second input must be a scalar node");
  Node n;
  n.op = Op::kSmul;
  n.inputs = {v.id, s.id};
  n.val = Tensor::zeros(V.shape);
  const double c = S[0];
  for (std::size_t i = 0; i < V.size(); ++i) n.val[i] = V[i] * c;
  return t->emit(std::move(n));
}

Var scale(Var v, double c) {
  const Tensor& V = val(v);
  Node n;
  n.op = Op::kScale;
  n.inputs = {v.id};
  n.c = c;
  n.val = Tensor::zeros(V.shape);
  for (std::size_t i = 0; i < V.size(); ++i) n.val[i] = V[i] * c;
  return v.tape->emit(std::move(n));
}

Var addc(Var v, double c) {
  const Tensor& V = val(v);
  Node n;
  n.op = Op::kAddc;
  n.inputs = {v.id};
  n.c = c;
  n.val = Tensor::zeros(V.shape);
  for (std::size_t i = 0; i < V.size(); ++i) n.val[i] = V[i] + c;
  return v.tape->emit(std::move(n));
}

Var concat(const std::vector<Var>& parts) {
  require(!parts.empty(), "concat: empty input list");
  Tape* t = parts[0].tape;
  std::size_t total = 0;
  for (Var p : parts) {
    require(p.valid() && p.tape == t, "concat: inputs must live on one tape");
    total += val(p).size();
  }
  Node n;
  n.op = Op::kConcat;
  n.val = Tensor::zeros({total});
  std::size_t off = 0;
  for (Var p : parts) {
    n.inputs.push_back(p.id);
    const Tensor& P = val(p);
    std::copy(P.data.begin(), P.data.end(), n.val.data.begin() + off);
    off += P.size();
  }
  return t->emit(std::move(n));
}

Var slice(Var v, std::size_t begin, std::size_t end) {
  const Tensor& V = val(v);
  require(begin < end && end <= V.size(), "slice: bounds out of range");
  Node n;
  n.op = Op::kSlice;
  n.inputs = {v.id};
  n.a0 = begin;
  n.a1 = end;
  n.val = Tensor::zeros({end - begin});
  std::copy(V.data.begin() + begin, V.data.begin() + end, n.val.data.begin());
  return v.tape->emit(std::move(n));
}

Var row(Var m, std::size_t r) {
  const Tensor& M = val(m);
  require(M.is_matrix() && r < M.rows(), "row: index out of range");
  Node n;
  n.op = Op::kRow;
  n.inputs = {m.id};
  n.a0 = r;
  const std::size_t c = M.cols();
  n.val = Tensor::zeros({c});
  std::copy(M.data.begin() + r * c, M.data.begin() + (r + 1) * c,
            n.val.data.begin());
  return m.tape->emit(std::move(n));
}

Var at(Var v, std::size_t idx) {
  const Tensor& V = val(v);
  require(idx < V.size(), "at: index out of range");
  Node n;
  n.op = Op::kAt;
  n.inputs = {v.id};
  n.a0 = idx;
  n.val = Tensor::scalar(V[idx]);
  return v.tape->emit(std::move(n));
}

namespace {

Var unary_elementwise(Op op, Var v) {
  const Tensor& V = val(v);
  Node n;
  n.op = op;
  n.inputs = {v.id};
  n.val = Tensor::zeros(V.shape);
  for (std::size_t i = 0; i < V.size(); ++i) {
    switch (op) {
      case Op::kTanh: n.val[i] = std::tanh(V[i]); break;
      case Op::kSigmoid: n.val[i] = 1.0 / (1.0 + std::exp(-V[i])); break;
      case Op::kRelu: n.val[i] = V[i] > 0.0 ? V[i] : 0.0; break;
      default: break;
    }
  }
  return v.tape->emit(std::move(n));
}

}  // namespace

Var vtanh(Var v) { return unary_elementwise(Op::kTanh, v); }
Var vsigmoid(Var v) { return unary_elementwise(Op::kSigmoid, v); }
Var vrelu(Var v) { return unary_elementwise(Op::kRelu, v); }

Var softmax(Var v) {
  const Tensor& V = val(v);
  Node n;
  n.op = Op::kSoftmax;
  n.inputs = {v.id};
  n.val = Tensor::zeros(V.shape);
  double m = -std::numeric_limits<double>::infinity();
  for (double x : V.data) m = std::max(m, x);
  double z = 0.0;
  for (std::size_t i = 0; i < V.size(); ++i) {
    n.val[i] = std::exp(V[i] - m);
    z += n.val[i];
  }
  for (std::size_t i = 0; i < V.size(); ++i) n.val[i] /= z;
  return v.tape->emit(std::move(n));
}

Var logsumexp(Var v) {
  const Tensor& V = val(v);
  Node n;
  n.op = Op::kLogSumExp;
  n.inputs = {v.id};
  n.val = Tensor::scalar(logsumexp(V.data));
  return v.tape->emit(std::move(n));
}

Var dot(Var a, Var b) {
  Tape* t = same_tape(a, b);
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  require(A.size() == B.size(), "dot: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) acc += A[i] * B[i];
  Node n;
  n.op = Op::kDot;
  n.inputs = {a.id, b.id};
  n.val = Tensor::scalar(acc);
  return t->emit(std::move(n));
}

Var sum(Var v) {
  const Tensor& V = val(v);
  double acc = 0.0;
  for (double x : V.data) acc += x;
  Node n;
  n.op = Op::kSum;
  n.inputs = {v.id};
  n.val = Tensor::scalar(acc);
  return v.tape->emit(std::move(n));
}

Var dropout(Var v, double p) {
  Tape* t = v.tape;
  const Tensor& V = val(v);
  if (!t->training() || p <= 0.0) return v;  // eval mode is the identity
  require(p < 1.0, "dropout: rate must be < 1");
  require(t->rng() != nullptr, "dropout: training tape needs an rng");
  Node n;
  n.op = Op::kDropout;
  n.inputs = {v.id};
  n.val = Tensor::zeros(V.shape);
  n.mask.resize(V.size());
  const double keep_scale = 1.0 / (1.0 - p);
  for (std::size_t i = 0; i < V.size(); ++i) {
    n.mask[i] = t->rng()->bernoulli(p) ? 0.0 : keep_scale;
    n.val[i] = V[i] * n.mask[i];
  }
  return t->emit(std::move(n));
}

void Tape::backward(const Var& loss) {
  if (!loss.valid() || loss.tape != this)
    throw numeric_error("backward: loss is not a node of this tape");
  if (!nodes_[loss.id].val.is_scalar())
    throw numeric_error("backward: loss must be a scalar");

  for (Node& n : nodes_) n.grad.assign(n.val.size(), 0.0);
  nodes_[loss.id].grad[0] = 1.0;

  for (int id = loss.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (n.grad.empty()) continue;
    const std::vector<double>& g = n.grad;
    // All consumers have higher ids, so this node's gradient is final here.
    for (double gv : g) {
      if (!std::isfinite(gv))
        throw numeric_error(std::string("non-finite gradient at op '") +
                            op_name(n.op) + "' (node " + std::to_string(id) +
                            ")");
    }
    switch (n.op) {
      case Op::kInput:
        break;
      case Op::kParam:
        if (n.param->trainable) {
          for (std::size_t i = 0; i < g.size(); ++i)
            n.param->grad.data[i] += g[i];
        }
        break;
      case Op::kMatmul: {
        Node& a = nodes_[n.inputs[0]];
        Node& b = nodes_[n.inputs[1]];
        const std::size_t m = a.val.shape[0], k = a.val.shape[1],
                          c = b.val.shape[1];
        // dA += dC * B^T ; dB += A^T * dC
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t p = 0; p < k; ++p) {
            double acc = 0.0;
            for (std::size_t j = 0; j < c; ++j)
              acc += g[i * c + j] * b.val[p * c + j];
            a.grad[i * k + p] += acc;
          }
        for (std::size_t p = 0; p < k; ++p)
          for (std::size_t j = 0; j < c; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m; ++i)
              acc += a.val[i * k + p] * g[i * c + j];
            b.grad[p * c + j] += acc;
          }
        break;
      }
      case Op::kMatvec: {
        Node& w = nodes_[n.inputs[0]];
        Node& x = nodes_[n.inputs[1]];
        const std::size_t m = w.val.shape[0], k = w.val.shape[1];
        kernels::outer_acc(g.data(), x.val.data.data(), w.grad.data(), m, k);
        kernels::matvec_t_acc(w.val.data.data(), g.data(), x.grad.data(), m, k);
        break;
      }
      case Op::kAdd: {
        Node& a = nodes_[n.inputs[0]];
        Node& b = nodes_[n.inputs[1]];
        for (std::size_t i = 0; i < g.size(); ++i) {
          a.grad[i] += g[i];
          b.grad[i] += g[i];
        }
        break;
      }
      case Op::kSub: {
        Node& a = nodes_[n.inputs[0]];
        Node& b = nodes_[n.inputs[1]];
        for (std::size_t i = 0; i < g.size(); ++i) {
          a.grad[i] += g[i];
          b.grad[i] -= g[i];
        }
        break;
      }
      case Op::kMul: {
        Node& a = nodes_[n.inputs[0]];
        Node& b = nodes_[n.inputs[1]];
        for (std::size_t i = 0; i < g.size(); ++i) {
          a.grad[i] += g[i] * b.val[i];
          b.grad[i] += g[i] * a.val[i];
        }
        break;
      }
      case Op::kSmul: {
        Node& v = nodes_[n.inputs[0]];
        Node& s = nodes_[n.inputs[1]];
        const double c = s.val[0];
        double acc = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          v.grad[i] += g[i] * c;
          acc += g[i] * v.val[i];
        }
        s.grad[0] += acc;
        break;
      }
      case Op::kScale: {
        Node& v = nodes_[n.inputs[0]];
        for (std::size_t i = 0; i < g.size(); ++i) v.grad[i] += g[i] * n.c;
        break;
      }
      case Op::kAddc: {
        Node& v = nodes_[n.inputs[0]];
        for (std::size_t i = 0; i < g.size(); ++i) v.grad[i] += g[i];
        break;
      }
      case Op::kConcat: {
        std::size_t off = 0;
        for (int in : n.inputs) {
          Node& p = nodes_[in];
          for (std::size_t i = 0; i < p.val.size(); ++i)
            p.grad[i] += g[off + i];
          off += p.val.size();
        }
        break;
      }
      case Op::kSlice: {
        Node& v = nodes_[n.inputs[0]];
        for (std::size_t i = 0; i < g.size(); ++i) v.grad[n.a0 + i] += g[i];
        break;
      }
      case Op::kRow: {
        Node& m = nodes_[n.inputs[0]];
        const std::size_t c = m.val.cols();
        for (std::size_t i = 0; i < c; ++i) m.grad[n.a0 * c + i] += g[i];
        break;
      }
      case Op::kAt: {
        Node& v = nodes_[n.inputs[0]];
        v.grad[n.a0] += g[0];
        break;
      }
      case Op::kTanh: {
        Node& v = nodes_[n.inputs[0]];
        for (std::size_t i = 0; i < g.size(); ++i)
          v.grad[i] += g[i] * (1.0 - n.val[i] * n.val[i]);
        break;
      }
      case Op::kSigmoid: {
        Node& v = nodes_[n.inputs[0]];
        for (std::size_t i = 0; i < g.size(); ++i)
          v.grad[i] += g[i] * n.val[i] * (1.0 - n.val[i]);
        break;
      }
      case Op::kRelu: {
        Node& v = nodes_[n.inputs[0]];
        for (std::size_t i = 0; i < g.size(); ++i)
          if (v.val[i] > 0.0) v.grad[i] += g[i];
        break;
      }
      case Op::kSoftmax: {
        Node& v = nodes_[n.inputs[0]];
        double gs = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) gs += g[i] * n.val[i];
        for (std::size_t i = 0; i < g.size(); ++i)
          v.grad[i] += n.val[i] * (g[i] - gs);
        break;
      }
      case Op::kLogSumExp: {
        Node& v = nodes_[n.inputs[0]];
        // gradient is softmax of the input
        double m = -std::numeric_limits<double>::infinity();
        for (double x : v.val.data) m = std::max(m, x);
        double z = 0.0;
        for (double x : v.val.data) z += std::exp(x - m);
        for (std::size_t i = 0; i < v.val.size(); ++i)
          v.grad[i] += g[0] * std::exp(v.val[i] - m) / z;
        break;
      }
      case Op::kDot: {
        Node& a = nodes_[n.inputs[0]];
        Node& b = nodes_[n.inputs[1]];
        for (std::size_t i = 0; i < a.val.size(); ++i) {
          a.grad[i] += g[0] * b.val[i];
          b.grad[i] += g[0] * a.val[i];
        }
        break;
      }
      case Op::kSum: {
        Node& v = nodes_[n.inputs[0]];
        for (std::size_t i = 0; i < v.val.size(); ++i) v.grad[i] += g[0];
        break;
      }
      case Op::kDropout: {
        Node& v = nodes_[n.inputs[0]];
        for (std::size_t i = 0; i < g.size(); ++i)
          v.grad[i] += g[i] * n.mask[i];
        break;
      }
    }
  }
}

}  // namespace scaffold
