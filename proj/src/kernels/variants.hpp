#pragma once

#include <cstddef>

// Internal declarations for the per-ISA kernel variants. Each variant lives
// in its own translation unit so it can be built with the matching target
// flags while the rest of the project stays at the baseline ISA.

#if defined(__x86_64__) || defined(_M_X64)
#define NNCOMP_KERNELS_HAVE_AVX2 1
#else
#define NNCOMP_KERNELS_HAVE_AVX2 0
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define NNCOMP_KERNELS_HAVE_NEON 1
#else
#define NNCOMP_KERNELS_HAVE_NEON 0
#endif

namespace nncomp::kern {

#if NNCOMP_KERNELS_HAVE_AVX2
namespace avx2 {
float dot(const float* x, const float* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void axpy(float a, const float* x, float* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(float* x, float a, std::size_t n);
void scale(double* x, double a, std::size_t n);
}  // namespace avx2
#endif

#if NNCOMP_KERNELS_HAVE_NEON
namespace neon {
float dot(const float* x, const float* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void axpy(float a, const float* x, float* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(float* x, float a, std::size_t n);
void scale(double* x, double a, std::size_t n);
}  // namespace neon
#endif

}  // namespace nncomp::kern
