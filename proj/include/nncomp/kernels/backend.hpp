#pragma once

#include <string>

namespace nncomp::kern {

enum class Backend {
    Auto,    // pick the best available at first use
    Scalar,  // portable reference kernels
    Avx2,    // x86-64 AVX2+FMA
    Neon,    // aarch64 NEON
};

// Highest-performance backend supported by this CPU.
Backend detect_backend();

// Force a backend for the whole process. Throws std::invalid_argument if the
// requested backend is not supported on this CPU. Backend::Auto re-enables
// detection.
void set_backend(Backend b);

// Backend the dispatched kernels are currently bound to.
Backend active_backend();

Backend backend_from_string(const std::string& name);
std::string backend_name(Backend b);

}  // namespace nncomp::kern
