#pragma once

#include <cstdint>
#include <vector>

#include "nncomp/neural/model.hpp"

namespace nncomp::neural {

struct NnmOptions {
    std::size_t hidden = 300;       // FFN hidden width
    std::size_t lstm_hidden = 300;  // encoder state size
};

struct TrainConfig {
    int epochs = 50;
    std::size_t batch_size = 100;
    double learning_rate = 0.01;
    std::uint64_t seed = 0;
    bool margin_loss = false;  // max(0, 1 - y_pos + y_neg) over matched pairs
};

struct TrainExample {
    std::vector<float> mod;  // k floats (DA) or steps*k (DC)
    std::vector<float> head;
    int label = 0;  // 1 = attested
};

struct TrainResult {
    NnmParams<float> params;
    std::vector<double> train_loss;       // per-epoch mean
    std::vector<double> validation_loss;  // per-epoch; empty without validation examples
};

// Mini-batch SGD on sigmoid cross-entropy (or the margin objective when
// the flag is on), backpropagating through the encoder under
// DecadeCentric. Deterministic for a given config. Throws
// std::runtime_error naming the epoch if the loss goes non-finite.
TrainResult train_nnm(const std::vector<TrainExample>& train,
                      const std::vector<TrainExample>& validation, vs::TimeAspect time,
                      std::size_t k, std::size_t steps, const NnmOptions& arch,
                      const TrainConfig& cfg);

struct Prediction {
    double score = 0.0;  // raw network output y
    bool plausible = false;  // sigmoid(y) >= 0.5
};

Prediction nnm_predict(const NnmParams<float>& params, const float* mod, const float* head);

// Mean sigmoid cross-entropy of the model over a labeled example set.
double dataset_loss(const NnmParams<float>& params, const std::vector<TrainExample>& examples);

}  // namespace nncomp::neural
