#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

namespace scaffold {

// Dense row-major tensor of 64-bit floats. Rank 1 and 2 are the only ranks
// the engine ever produces; scalars are rank-1 tensors of size 1.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;
  bool requires_grad = false;

  Tensor() = default;
  Tensor(std::vector<std::size_t> s, std::vector<double> d)
      : shape(std::move(s)), data(std::move(d)) {}

  std::size_t size() const { return data.size(); }
  bool is_scalar() const { return data.size() == 1; }
  bool is_matrix() const { return shape.size() == 2; }
  std::size_t rows() const { return shape[0]; }
  std::size_t cols() const { return shape.size() == 2 ? shape[1] : 1; }

  double& operator[](std::size_t i) { return data[i]; }
  double operator[](std::size_t i) const { return data[i]; }

  static std::size_t count(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
  }

  static Tensor zeros(std::vector<std::size_t> shape) {
    std::size_t n = count(shape);
    return Tensor(std::move(shape), std::vector<double>(n, 0.0));
  }

  static Tensor scalar(double v) { return Tensor({1}, {v}); }

  static Tensor from_vector(std::vector<double> v) {
    std::size_t n = v.size();
    return Tensor({n}, std::move(v));
  }
};

}  // namespace scaffold
