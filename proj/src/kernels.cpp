#include "scaffold/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace scaffold {
namespace kernels {

namespace {
// Below this many multiply-adds the OpenMP fork overhead dominates.
constexpr std::size_t kParallelCutoff = 64 * 1024;
}  // namespace

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void matmul_serial(const double* a, const double* b, double* c,
                   std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] = 0.0;
    const double* ai = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = ai[p];
      const double* bp = b + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
}

void matmul_parallel(const double* a, const double* b, double* c,
                     std::size_t m, std::size_t k, std::size_t n) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(m); ++i) {
    double* ci = c + i * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] = 0.0;
    const double* ai = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = ai[p];
      const double* bp = b + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
#else
  matmul_serial(a, b, c, m, k, n);
#endif
}

void matmul(const double* a, const double* b, double* c,
            std::size_t m, std::size_t k, std::size_t n) {
  if (m * k * n >= kParallelCutoff) {
    matmul_parallel(a, b, c, m, k, n);
  } else {
    matmul_serial(a, b, c, m, k, n);
  }
}

void matvec_serial(const double* w, const double* x, double* y,
                   std::size_t m, std::size_t k) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* wi = w + i * k;
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += wi[j] * x[j];
    y[i] = acc;
  }
}

void matvec_parallel(const double* w, const double* x, double* y,
                     std::size_t m, std::size_t k) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(m); ++i) {
    const double* wi = w + i * k;
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += wi[j] * x[j];
    y[i] = acc;
  }
#else
  matvec_serial(w, x, y, m, k);
#endif
}

void matvec(const double* w, const double* x, double* y,
            std::size_t m, std::size_t k) {
  if (m * k >= kParallelCutoff) {
    matvec_parallel(w, x, y, m, k);
  } else {
    matvec_serial(w, x, y, m, k);
  }
}

void outer_acc_serial(const double* g, const double* x, double* w,
                      std::size_t m, std::size_t k) {
  for (std::size_t i = 0; i < m; ++i) {
    double* wi = w + i * k;
    const double gi = g[i];
    for (std::size_t j = 0; j < k; ++j) wi[j] += gi * x[j];
  }
}

void outer_acc_parallel(const double* g, const double* x, double* w,
                        std::size_t m, std::size_t k) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(m); ++i) {
    double* wi = w + i * k;
    const double gi = g[i];
    for (std::size_t j = 0; j < k; ++j) wi[j] += gi * x[j];
  }
#else
  outer_acc_serial(g, x, w, m, k);
#endif
}

void outer_acc(const double* g, const double* x, double* w,
               std::size_t m, std::size_t k) {
  if (m * k >= kParallelCutoff) {
    outer_acc_parallel(g, x, w, m, k);
  } else {
    outer_acc_serial(g, x, w, m, k);
  }
}

void matvec_t_acc_serial(const double* w, const double* g, double* x,
                         std::size_t m, std::size_t k) {
  // x[j] += sum_i w[i,j] * g[i]; iterate j outermost so each x[j] is
  // accumulated in a fixed order.
  for (std::size_t j = 0; j < k; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += w[i * k + j] * g[i];
    x[j] += acc;
  }
}

void matvec_t_acc_parallel(const double* w, const double* g, double* x,
                           std::size_t m, std::size_t k) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long long j = 0; j < static_cast<long long>(k); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += w[i * k + j] * g[i];
    x[j] += acc;
  }
#else
  matvec_t_acc_serial(w, g, x, m, k);
#endif
}

void matvec_t_acc(const double* w, const double* g, double* x,
                  std::size_t m, std::size_t k) {
  if (m * k >= kParallelCutoff) {
    matvec_t_acc_parallel(w, g, x, m, k);
  } else {
    matvec_t_acc_serial(w, g, x, m, k);
  }
}

}  // namespace kernels
}  // namespace scaffold
