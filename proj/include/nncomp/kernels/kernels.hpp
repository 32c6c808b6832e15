#pragma once

#include <cstddef>

#include "nncomp/kernels/backend.hpp"

// Dense inner-loop kernels shared by the SVD, the neural models and the
// feature code. Every kernel has a scalar reference implementation and a
// SIMD variant selected at runtime (see backend.hpp). SIMD variants may
// reassociate additions, so results can differ from the scalar path by
// normal floating-point reordering error; the equivalence tests bound it.

namespace nncomp::kern {

float dot(const float* x, const float* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);

// y += a * x
void axpy(float a, const float* x, float* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);

// x *= a
void scale(float* x, float a, std::size_t n);
void scale(double* x, double a, std::size_t n);

float sqnorm(const float* x, std::size_t n);
double sqnorm(const double* x, std::size_t n);

// y = M x for row-major M (rows x cols); y has `rows` entries.
template <typename T>
void matvec(const T* m, std::size_t rows, std::size_t cols, const T* x, T* y) {
    for (std::size_t r = 0; r < rows; ++r)
        y[r] = dot(m + r * cols, x, cols);
}

// y += M^T x for row-major M (rows x cols); y has `cols` entries.
template <typename T>
void matvec_t_acc(const T* m, std::size_t rows, std::size_t cols, const T* x, T* y) {
    for (std::size_t r = 0; r < rows; ++r)
        axpy(x[r], m + r * cols, y, cols);
}

// M += u v^T for row-major M (rows x cols).
template <typename T>
void outer_acc(T* m, const T* u, const T* v, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r)
        axpy(u[r], v, m + r * cols, cols);
}

namespace scalar {
float dot(const float* x, const float* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void axpy(float a, const float* x, float* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(float* x, float a, std::size_t n);
void scale(double* x, double a, std::size_t n);
}  // namespace scalar

}  // namespace nncomp::kern
