#include "scaffold/optim.hpp"

#include <cmath>

#include "scaffold/common.hpp"

namespace scaffold {

AdamState::AdamState(const ParameterStore& store) {
  for (const auto& p : store.all()) {
    m_.push_back(Tensor::zeros(p->value.shape));
    v_.push_back(Tensor::zeros(p->value.shape));
  }
}

void AdamState::step(ParameterStore& store, const AdamConfig& cfg) {
  if (m_.size() != store.all().size())
    throw config_error("adam state does not match the parameter store");
  ++step_count_;
  const double t = static_cast<double>(step_count_);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t pi = 0; pi < store.all().size(); ++pi) {
    Parameter& p = *store.all()[pi];
    if (!p.trainable) continue;
    if (p.grad.size() != p.value.size())
      throw config_error("gradient shape mismatch for " + p.name);
    Tensor& m = m_[pi];
    Tensor& v = v_[pi];
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      p.value[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.epsilon);
    }
  }
  store.zero_grads();
}

double clip_global_norm(ParameterStore& store, double max_norm) {
  if (max_norm <= 0.0) throw config_error("clip norm must be positive");
  double sq = 0.0;
  for (const auto& p : store.all()) {
    if (!p->trainable) continue;
    for (double g : p->grad.data) sq += g * g;
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const double s = max_norm / norm;
    for (auto& p : store.all()) {
      if (!p->trainable) continue;
      for (double& g : p->grad.data) g *= s;
    }
  }
  return norm;
}

}  // namespace scaffold
