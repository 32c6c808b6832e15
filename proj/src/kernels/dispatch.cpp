#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "nncomp/kernels/kernels.hpp"
#include "variants.hpp"

namespace nncomp::kern {

namespace {

struct Table {
    float (*dot_f)(const float*, const float*, std::size_t);
    double (*dot_d)(const double*, const double*, std::size_t);
    void (*axpy_f)(float, const float*, float*, std::size_t);
    void (*axpy_d)(double, const double*, double*, std::size_t);
    void (*scale_f)(float*, float, std::size_t);
    void (*scale_d)(double*, double, std::size_t);
};

constexpr Table kScalarTable = {
    scalar::dot, scalar::dot, scalar::axpy, scalar::axpy, scalar::scale, scalar::scale,
};

#if NNCOMP_KERNELS_HAVE_AVX2
constexpr Table kAvx2Table = {
    avx2::dot, avx2::dot, avx2::axpy, avx2::axpy, avx2::scale, avx2::scale,
};
#endif
#if NNCOMP_KERNELS_HAVE_NEON
constexpr Table kNeonTable = {
    neon::dot, neon::dot, neon::axpy, neon::axpy, neon::scale, neon::scale,
};
#endif

bool backend_supported(Backend b) {
    switch (b) {
        case Backend::Auto:
        case Backend::Scalar:
            return true;
        case Backend::Avx2:
#if NNCOMP_KERNELS_HAVE_AVX2
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Backend::Neon:
            return NNCOMP_KERNELS_HAVE_NEON != 0;
    }
    return false;
}

const Table* table_for(Backend b) {
    switch (b) {
        case Backend::Scalar:
            return &kScalarTable;
#if NNCOMP_KERNELS_HAVE_AVX2
        case Backend::Avx2:
            return &kAvx2Table;
#endif
#if NNCOMP_KERNELS_HAVE_NEON
        case Backend::Neon:
            return &kNeonTable;
#endif
        default:
            return &kScalarTable;
    }
}

struct State {
    std::atomic<const Table*> table;
    std::atomic<Backend> backend;

    State() {
        Backend b = detect_backend();
        if (const char* env = std::getenv("NNCOMP_KERNELS")) {
            Backend requested = backend_from_string(env);
            if (requested != Backend::Auto && backend_supported(requested)) b = requested;
        }
        backend.store(b);
        table.store(table_for(b));
    }
};

State& state() {
    static State s;
    return s;
}

}  // namespace

Backend detect_backend() {
#if NNCOMP_KERNELS_HAVE_AVX2
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::Avx2;
#endif
#if NNCOMP_KERNELS_HAVE_NEON
    return Backend::Neon;
#endif
    return Backend::Scalar;
}

void set_backend(Backend b) {
    if (b == Backend::Auto) b = detect_backend();
    if (!backend_supported(b))
        throw std::invalid_argument("kernel backend not supported on this CPU: " + backend_name(b));
    state().backend.store(b);
    state().table.store(table_for(b));
}

Backend active_backend() { return state().backend.load(); }

Backend backend_from_string(const std::string& name) {
    if (name == "auto") return Backend::Auto;
    if (name == "scalar") return Backend::Scalar;
    if (name == "avx2") return Backend::Avx2;
    if (name == "neon") return Backend::Neon;
    throw std::invalid_argument("unknown kernel backend: " + name);
}

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::Auto: return "auto";
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "?";
}

float dot(const float* x, const float* y, std::size_t n) {
    return state().table.load()->dot_f(x, y, n);
}
double dot(const double* x, const double* y, std::size_t n) {
    return state().table.load()->dot_d(x, y, n);
}
void axpy(float a, const float* x, float* y, std::size_t n) {
    state().table.load()->axpy_f(a, x, y, n);
}
void axpy(double a, const double* x, double* y, std::size_t n) {
    state().table.load()->axpy_d(a, x, y, n);
}
void scale(float* x, float a, std::size_t n) {
    state().table.load()->scale_f(x, a, n);
}
void scale(double* x, double a, std::size_t n) {
    state().table.load()->scale_d(x, a, n);
}

float sqnorm(const float* x, std::size_t n) { return dot(x, x, n); }
double sqnorm(const double* x, std::size_t n) { return dot(x, x, n); }

}  // namespace nncomp::kern
