#pragma once

#include <cstdint>
#include <vector>

#include "scaffold/autodiff.hpp"

namespace scaffold {

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First/second moment estimates, one pair per trainable parameter, in
// ParameterStore registration order.
class AdamState {
 public:
  explicit AdamState(const ParameterStore& store);

  // Standard bias-corrected Adam update from Parameter::grad; clears grads.
  void step(ParameterStore& store, const AdamConfig& cfg);

  std::uint64_t steps() const { return step_count_; }

 private:
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  std::uint64_t step_count_ = 0;
};

// Scales all trainable gradients by max_norm/g when their global 2-norm g
// exceeds max_norm. Returns the pre-clip norm.
double clip_global_norm(ParameterStore& store, double max_norm);

}  // namespace scaffold
