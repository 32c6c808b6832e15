#pragma once

#include <filesystem>
#include <vector>

#include "nncomp/neural/ffn.hpp"
#include "nncomp/neural/lstm.hpp"
#include "nncomp/vectorspace/roles.hpp"

namespace nncomp::neural {

// The full plausibility scorer: constituent inputs -> (DecadeCentric: a
// shared LSTM history encoder per constituent ->) concatenation -> FFN ->
// scalar score. DecadeAgnostic feeds the k-dim embeddings straight into
// the FFN.
template <typename T>
struct NnmParams {
    vs::TimeAspect time = vs::TimeAspect::DecadeAgnostic;
    std::size_t k = 0;      // embedding dim (per constituent)
    std::size_t steps = 1;  // sequence length (training decades); 1 for DA
    FfnParams<T> ffn;       // input 2k
    LstmParams<T> lstm;     // input k, out k; unused for DA

    bool uses_lstm() const { return time == vs::TimeAspect::DecadeCentric; }

    void init(vs::TimeAspect t, std::size_t k_, std::size_t steps_, std::size_t hidden,
              std::size_t lstm_hidden, util::Rng& rng) {
        time = t;
        k = k_;
        steps = uses_lstm() ? steps_ : 1;
        if (uses_lstm()) lstm.init(k_, lstm_hidden, k_, rng);
        ffn.init(2 * k_, hidden, rng);
    }

    void resize_like(const NnmParams<T>& other) {
        time = other.time;
        k = other.k;
        steps = other.steps;
        ffn.resize(other.ffn.input, other.ffn.hidden);
        if (other.uses_lstm()) lstm.resize(other.lstm.input, other.lstm.hidden, other.lstm.out);
    }

    template <typename F>
    void for_each_param(F&& f) {
        ffn.for_each_param(f);
        if (uses_lstm()) lstm.for_each_param(f);
    }
};

template <typename T>
struct NnmCache {
    FfnCache<T> ffn;
    LstmCache<T> lstm_mod, lstm_head;
    std::vector<T> x;   // 2k
    std::vector<T> dx;  // 2k backward scratch
};

// mod_input/head_input: k floats (DA) or steps*k floats (DC, zero-filled
// absent decades).
template <typename T>
T nnm_forward(const NnmParams<T>& p, const T* mod_input, const T* head_input,
              NnmCache<T>& cache) {
    cache.x.resize(2 * p.k);
    if (p.uses_lstm()) {
        lstm_forward(p.lstm, mod_input, p.steps, cache.lstm_mod);
        lstm_forward(p.lstm, head_input, p.steps, cache.lstm_head);
        for (std::size_t j = 0; j < p.k; ++j) {
            cache.x[j] = cache.lstm_mod.out[j];
            cache.x[p.k + j] = cache.lstm_head.out[j];
        }
    } else {
        for (std::size_t j = 0; j < p.k; ++j) {
            cache.x[j] = mod_input[j];
            cache.x[p.k + j] = head_input[j];
        }
    }
    return ffn_forward(p.ffn, cache.x.data(), cache.ffn);
}

template <typename T>
void nnm_backward(const NnmParams<T>& p, NnmCache<T>& cache, T dy, NnmParams<T>& grads) {
    cache.dx.assign(2 * p.k, T(0));
    ffn_backward(p.ffn, cache.ffn, dy, grads.ffn, cache.dx.data());
    if (p.uses_lstm()) {
        lstm_backward(p.lstm, cache.lstm_mod, cache.dx.data(), grads.lstm,
                      static_cast<T*>(nullptr));
        lstm_backward(p.lstm, cache.lstm_head, cache.dx.data() + p.k, grads.lstm,
                      static_cast<T*>(nullptr));
    }
}

// Frozen-encoder pass for the DSM DecadeCentric inputs: the constituent's
// decade sequence through the trained LSTM, returning the k-dim encoding.
std::vector<float> encode_constituent(const NnmParams<float>& p, const float* seq);

void save_nnm(const NnmParams<float>& p, const std::filesystem::path& dir);
NnmParams<float> load_nnm(const std::filesystem::path& dir);

}  // namespace nncomp::neural
