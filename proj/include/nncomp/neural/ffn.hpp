#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "nncomp/kernels/kernels.hpp"
#include "nncomp/util/rng.hpp"

namespace nncomp::neural {

// Feed-forward scorer: y = w2 . relu(w1 x + b1). Templated on the scalar
// type: float for training, double for the finite-difference checks.
template <typename T>
struct FfnParams {
    std::size_t input = 0;
    std::size_t hidden = 0;
    std::vector<T> w1;  // hidden x input, row-major
    std::vector<T> b1;  // hidden
    std::vector<T> w2;  // hidden

    void resize(std::size_t in, std::size_t hid) {
        input = in;
        hidden = hid;
        w1.assign(in * hid, T(0));
        b1.assign(hid, T(0));
        w2.assign(hid, T(0));
    }

    // uniform(+-1/sqrt(fan-in)) weights, zero biases
    void init(std::size_t in, std::size_t hid, util::Rng& rng) {
        resize(in, hid);
        const double s1 = 1.0 / std::sqrt(static_cast<double>(in));
        for (T& v : w1) v = static_cast<T>((rng.uniform() * 2.0 - 1.0) * s1);
        const double s2 = 1.0 / std::sqrt(static_cast<double>(hid));
        for (T& v : w2) v = static_cast<T>((rng.uniform() * 2.0 - 1.0) * s2);
    }

    template <typename F>
    void for_each_param(F&& f) {
        f(w1);
        f(b1);
        f(w2);
    }
};

template <typename T>
struct FfnCache {
    std::vector<T> x;   // input copy
    std::vector<T> z;   // pre-activation
    std::vector<T> a;   // relu(z)
    std::vector<T> dz;  // backward scratch
};

template <typename T>
T ffn_forward(const FfnParams<T>& p, const T* x, FfnCache<T>& cache) {
    cache.x.assign(x, x + p.input);
    cache.z.resize(p.hidden);
    cache.a.resize(p.hidden);
    kern::matvec(p.w1.data(), p.hidden, p.input, x, cache.z.data());
    for (std::size_t h = 0; h < p.hidden; ++h) {
        cache.z[h] += p.b1[h];
        cache.a[h] = cache.z[h] > T(0) ? cache.z[h] : T(0);
    }
    return kern::dot(p.w2.data(), cache.a.data(), p.hidden);
}

// Accumulates parameter gradients into `grads` (same shapes as the
// params); when dx is non-null, accumulates dL/dx into it (caller zeroes).
template <typename T>
void ffn_backward(const FfnParams<T>& p, FfnCache<T>& cache, T dy, FfnParams<T>& grads, T* dx) {
    kern::axpy(dy, cache.a.data(), grads.w2.data(), p.hidden);
    cache.dz.resize(p.hidden);
    for (std::size_t h = 0; h < p.hidden; ++h)
        cache.dz[h] = cache.z[h] > T(0) ? dy * p.w2[h] : T(0);
    kern::outer_acc(grads.w1.data(), cache.dz.data(), cache.x.data(), p.hidden, p.input);
    for (std::size_t h = 0; h < p.hidden; ++h) grads.b1[h] += cache.dz[h];
    if (dx) kern::matvec_t_acc(p.w1.data(), p.hidden, p.input, cache.dz.data(), dx);
}

}  // namespace nncomp::neural
