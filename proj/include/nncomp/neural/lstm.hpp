#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "nncomp/kernels/kernels.hpp"
#include "nncomp/util/rng.hpp"

namespace nncomp::neural {

// Single-layer LSTM over a fixed-length chronological sequence, final
// hidden state linearly projected to `out` dims. Gate rows in w/b are
// ordered input, forget, candidate, output.
template <typename T>
struct LstmParams {
    std::size_t input = 0;
    std::size_t hidden = 0;
    std::size_t out = 0;
    std::vector<T> w;     // 4*hidden x (input + hidden), row-major
    std::vector<T> b;     // 4*hidden
    std::vector<T> proj;  // out x hidden, row-major

    void resize(std::size_t in, std::size_t hid, std::size_t o) {
        input = in;
        hidden = hid;
        out = o;
        w.assign(4 * hid * (in + hid), T(0));
        b.assign(4 * hid, T(0));
        proj.assign(o * hid, T(0));
    }

    // uniform(+-1/sqrt(fan-in)) weights; biases zero except forget gate = 1
    void init(std::size_t in, std::size_t hid, std::size_t o, util::Rng& rng) {
        resize(in, hid, o);
        const double sw = 1.0 / std::sqrt(static_cast<double>(in + hid));
        for (T& v : w) v = static_cast<T>((rng.uniform() * 2.0 - 1.0) * sw);
        for (std::size_t h = hidden; h < 2 * hidden; ++h) b[h] = T(1);
        const double sp = 1.0 / std::sqrt(static_cast<double>(hid));
        for (T& v : proj) v = static_cast<T>((rng.uniform() * 2.0 - 1.0) * sp);
    }

    template <typename F>
    void for_each_param(F&& f) {
        f(w);
        f(b);
        f(proj);
    }
};

template <typename T>
struct LstmCache {
    std::size_t steps = 0;
    std::vector<T> concat;  // steps x (input+hidden): [x_t ; h_{t-1}]
    std::vector<T> gates;   // steps x 4*hidden, post-activation (i,f,g,o)
    std::vector<T> c;       // steps x hidden
    std::vector<T> tanh_c;  // steps x hidden
    std::vector<T> h;       // steps x hidden
    std::vector<T> out;     // projection of h_{T-1}
    // backward scratch
    std::vector<T> dh, dc, dz, dconcat;
};

template <typename T>
T sigmoid_s(T x) {
    if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
    const T e = std::exp(x);
    return e / (T(1) + e);
}

// seq is steps x input, chronological; absent steps are zero vectors
// (the caller fills them). Throws nothing; steps must be >= 1.
template <typename T>
void lstm_forward(const LstmParams<T>& p, const T* seq, std::size_t steps, LstmCache<T>& cache) {
    const std::size_t in = p.input, hid = p.hidden, width = in + hid;
    cache.steps = steps;
    cache.concat.assign(steps * width, T(0));
    cache.gates.resize(steps * 4 * hid);
    cache.c.resize(steps * hid);
    cache.tanh_c.resize(steps * hid);
    cache.h.resize(steps * hid);
    cache.out.resize(p.out);

    std::vector<T> z(4 * hid);
    for (std::size_t t = 0; t < steps; ++t) {
        T* cat = cache.concat.data() + t * width;
        for (std::size_t j = 0; j < in; ++j) cat[j] = seq[t * in + j];
        if (t > 0) {
            const T* h_prev = cache.h.data() + (t - 1) * hid;
            for (std::size_t j = 0; j < hid; ++j) cat[in + j] = h_prev[j];
        }
        kern::matvec(p.w.data(), 4 * hid, width, cat, z.data());
        T* gates = cache.gates.data() + t * 4 * hid;
        for (std::size_t j = 0; j < hid; ++j) {
            gates[j] = sigmoid_s(z[j] + p.b[j]);                              // i
            gates[hid + j] = sigmoid_s(z[hid + j] + p.b[hid + j]);            // f
            gates[2 * hid + j] = std::tanh(z[2 * hid + j] + p.b[2 * hid + j]);  // g
            gates[3 * hid + j] = sigmoid_s(z[3 * hid + j] + p.b[3 * hid + j]);  // o
        }
        T* c_t = cache.c.data() + t * hid;
        T* tanh_c = cache.tanh_c.data() + t * hid;
        T* h_t = cache.h.data() + t * hid;
        const T* c_prev = t > 0 ? cache.c.data() + (t - 1) * hid : nullptr;
        for (std::size_t j = 0; j < hid; ++j) {
            const T prev = c_prev ? c_prev[j] : T(0);
            c_t[j] = gates[hid + j] * prev + gates[j] * gates[2 * hid + j];
            tanh_c[j] = std::tanh(c_t[j]);
            h_t[j] = gates[3 * hid + j] * tanh_c[j];
        }
    }
    kern::matvec(p.proj.data(), p.out, hid, cache.h.data() + (steps - 1) * hid, cache.out.data());
}

// BPTT; accumulates into `grads`, and (when non-null) dL/dseq into dseq
// (steps x input, caller zeroes).
template <typename T>
void lstm_backward(const LstmParams<T>& p, LstmCache<T>& cache, const T* dout,
                   LstmParams<T>& grads, T* dseq) {
    const std::size_t in = p.input, hid = p.hidden, width = in + hid;
    const std::size_t steps = cache.steps;

    kern::outer_acc(grads.proj.data(), dout, cache.h.data() + (steps - 1) * hid, p.out, hid);
    cache.dh.assign(hid, T(0));
    kern::matvec_t_acc(p.proj.data(), p.out, hid, dout, cache.dh.data());
    cache.dc.assign(hid, T(0));
    cache.dz.resize(4 * hid);
    cache.dconcat.resize(width);

    for (std::size_t t = steps; t-- > 0;) {
        const T* gates = cache.gates.data() + t * 4 * hid;
        const T* tanh_c = cache.tanh_c.data() + t * hid;
        const T* c_prev = t > 0 ? cache.c.data() + (t - 1) * hid : nullptr;
        for (std::size_t j = 0; j < hid; ++j) {
            const T i_g = gates[j], f_g = gates[hid + j], g_g = gates[2 * hid + j],
                    o_g = gates[3 * hid + j];
            const T dh_j = cache.dh[j];
            const T dc_j = cache.dc[j] + dh_j * o_g * (T(1) - tanh_c[j] * tanh_c[j]);
            const T prev = c_prev ? c_prev[j] : T(0);
            cache.dz[j] = dc_j * g_g * i_g * (T(1) - i_g);                      // input gate
            cache.dz[hid + j] = dc_j * prev * f_g * (T(1) - f_g);               // forget gate
            cache.dz[2 * hid + j] = dc_j * i_g * (T(1) - g_g * g_g);            // candidate
            cache.dz[3 * hid + j] = dh_j * tanh_c[j] * o_g * (T(1) - o_g);      // output gate
            cache.dc[j] = dc_j * f_g;  // carried to c_{t-1}
        }
        const T* cat = cache.concat.data() + t * width;
        kern::outer_acc(grads.w.data(), cache.dz.data(), cat, 4 * hid, width);
        for (std::size_t j = 0; j < 4 * hid; ++j) grads.b[j] += cache.dz[j];
        std::fill(cache.dconcat.begin(), cache.dconcat.end(), T(0));
        kern::matvec_t_acc(p.w.data(), 4 * hid, width, cache.dz.data(), cache.dconcat.data());
        if (dseq) {
            for (std::size_t j = 0; j < in; ++j) dseq[t * in + j] += cache.dconcat[j];
        }
        for (std::size_t j = 0; j < hid; ++j) cache.dh[j] = cache.dconcat[in + j];
    }
}

}  // namespace nncomp::neural
