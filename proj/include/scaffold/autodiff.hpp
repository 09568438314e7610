#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "scaffold/rng.hpp"
#include "scaffold/tensor.hpp"

namespace scaffold {

// A named learnable tensor. Gradients accumulate into `grad` across backward
// passes until the optimizer consumes and clears them. `trainable == false`
// (frozen embeddings) keeps the tensor out of backward and the optimizer.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  bool trainable = true;
};

// Owns parameters in registration order. Registration order is part of the
// determinism contract: the optimizer, the gradient clipper and the
// checkpoint writer all iterate in this order.
class ParameterStore {
 public:
  Parameter* add(const std::string& name, std::vector<std::size_t> shape,
                 Rng& rng, bool trainable = true);
  // Glorot-uniform for matrices, zeros for vectors (biases).
  static void glorot_init(Tensor& t, Rng& rng);

  Parameter* find(const std::string& name);
  const std::vector<std::unique_ptr<Parameter>>& all() const { return params_; }
  void zero_grads();
  std::size_t total_size() const;

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::map<std::string, Parameter*> by_name_;
};

enum class Op {
  kInput,
  kParam,
  kMatmul,
  kMatvec,
  kAdd,
  kSub,
  kMul,      // elementwise
  kSmul,     // vector * scalar node
  kScale,    // vector * compile-time constant
  kAddc,     // vector + compile-time constant
  kConcat,
  kSlice,
  kRow,      // row of a matrix as a vector
  kAt,       // single element as a scalar
  kTanh,
  kSigmoid,
  kRelu,
  kSoftmax,
  kLogSumExp,
  kDot,
  kSum,
  kDropout,
};

const char* op_name(Op op);

class Tape;

// Cheap handle to a node on a tape.
struct Var {
  Tape* tape = nullptr;
  int id = -1;
  bool valid() const { return tape != nullptr && id >= 0; }
};

struct Node {
  Op op;
  std::vector<int> inputs;
  Tensor val;
  std::vector<double> grad;   // allocated lazily by backward
  Parameter* param = nullptr; // kParam only
  std::size_t a0 = 0, a1 = 0; // slice bounds / row index / element index
  double c = 0.0;             // kScale / kAddc constant
  std::vector<double> mask;   // kDropout: inverted-scaled keep mask
};

// Record of one forward computation. Nodes are appended in topological order;
// backward walks them once in reverse. A tape is single-threaded; concurrent
// work uses one tape per thread over a read-only ParameterStore.
class Tape {
 public:
  // rng is only needed when training==true (dropout mask draws).
  explicit Tape(bool training = false, Rng* rng = nullptr)
      : training_(training), rng_(rng) {}

  bool training() const { return training_; }
  Rng* rng() { return rng_; }

  Var input(Tensor value);           // constant leaf, no gradient
  Var param(Parameter& p);           // learnable leaf

  const Tensor& value(const Var& v) const { return nodes_[v.id].val; }
  const std::vector<double>& grad(const Var& v) const { return nodes_[v.id].grad; }
  double scalar(const Var& v) const { return nodes_[v.id].val.data[0]; }
  std::size_t size() const { return nodes_.size(); }

  // Reverse pass from a scalar loss. Gradients of trainable parameters are
  // accumulated into Parameter::grad. Throws numeric_error on a non-scalar
  // loss or a non-finite gradient, naming the offending op.
  void backward(const Var& loss);

  // op builders (also exposed as free functions below)
  Var emit(Node node);
  Node& node(int id) { return nodes_[id]; }
  const Node& node(int id) const { return nodes_[id]; }

 private:
  std::vector<Node> nodes_;
  bool training_;
  Rng* rng_;
};

Var matmul(Var a, Var b);
Var matvec(Var w, Var x);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var smul(Var v, Var s);
Var scale(Var v, double c);
Var addc(Var v, double c);
Var concat(const std::vector<Var>& parts);
Var slice(Var v, std::size_t begin, std::size_t end);
Var row(Var m, std::size_t r);
Var at(Var v, std::size_t idx);
Var vtanh(Var v);
Var vsigmoid(Var v);
Var vrelu(Var v);
Var softmax(Var v);
Var logsumexp(Var v);
Var dot(Var a, Var b);
Var sum(Var v);
Var dropout(Var v, double p);

inline Var operator+(Var a, Var b) { return add(a, b); }
inline Var operator-(Var a, Var b) { return sub(a, b); }
inline Var operator*(Var a, Var b) { return mul(a, b); }

// Numerically stable log(sum(exp(xs))) over plain doubles; tolerates -inf
// entries (and returns -inf when all entries are -inf).
double logsumexp(const std::vector<double>& xs);

}  // namespace scaffold
