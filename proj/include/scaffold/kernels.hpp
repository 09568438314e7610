#pragma once

#include <cstddef>

namespace scaffold {
namespace kernels {

// Dense kernels behind the tensor ops. Each kernel has a serial reference
// version and an OpenMP version; the unsuffixed entry point dispatches on
// problem size. The parallel versions split work so that every output
// element is produced by exactly one thread with the same inner summation
// order as the serial code, so results are bit-identical regardless of
// thread count.

// C[m,n] = A[m,k] * B[k,n], row-major
void matmul_serial(const double* a, const double* b, double* c,
                   std::size_t m, std::size_t k, std::size_t n);
void matmul_parallel(const double* a, const double* b, double* c,
                     std::size_t m, std::size_t k, std::size_t n);
void matmul(const double* a, const double* b, double* c,
            std::size_t m, std::size_t k, std::size_t n);

// y[m] = W[m,k] * x[k]
void matvec_serial(const double* w, const double* x, double* y,
                   std::size_t m, std::size_t k);
void matvec_parallel(const double* w, const double* x, double* y,
                     std::size_t m, std::size_t k);
void matvec(const double* w, const double* x, double* y,
            std::size_t m, std::size_t k);

// W[m,k] += g[m] * x[k]  (rank-1 accumulate, used by matvec backward)
void outer_acc_serial(const double* g, const double* x, double* w,
                      std::size_t m, std::size_t k);
void outer_acc_parallel(const double* g, const double* x, double* w,
                        std::size_t m, std::size_t k);
void outer_acc(const double* g, const double* x, double* w,
               std::size_t m, std::size_t k);

// x[k] += W^T[m,k] * g[m]
void matvec_t_acc_serial(const double* w, const double* g, double* x,
                         std::size_t m, std::size_t k);
void matvec_t_acc_parallel(const double* w, const double* g, double* x,
                           std::size_t m, std::size_t k);
void matvec_t_acc(const double* w, const double* g, double* x,
                  std::size_t m, std::size_t k);

// Number of threads the parallel kernels will use (1 when built without OpenMP).
int thread_count();

}  // namespace kernels
}  // namespace scaffold
