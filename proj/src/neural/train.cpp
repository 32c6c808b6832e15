#include "nncomp/neural/train.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nncomp::neural {

namespace {

double sigmoid_d(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double ce_loss(double y, int label) {
    const double p = sigmoid_d(y);
    return label ? -std::log(std::max(p, 1e-12)) : -std::log(std::max(1.0 - p, 1e-12));
}

void check_shapes(const std::vector<TrainExample>& examples, std::size_t expect) {
    for (const TrainExample& e : examples)
        if (e.mod.size() != expect || e.head.size() != expect)
            throw std::invalid_argument("nnm: example input width mismatch");
}

std::vector<std::vector<float>*> param_vectors(NnmParams<float>& p) {
    std::vector<std::vector<float>*> out;
    p.for_each_param([&](std::vector<float>& v) { out.push_back(&v); });
    return out;
}

void zero_params(NnmParams<float>& p) {
    p.for_each_param([](std::vector<float>& v) { std::fill(v.begin(), v.end(), 0.0f); });
}

void sgd_step(std::vector<std::vector<float>*>& params, std::vector<std::vector<float>*>& grads,
              float step) {
    for (std::size_t i = 0; i < params.size(); ++i)
        kern::axpy(-step, grads[i]->data(), params[i]->data(), params[i]->size());
}

}  // namespace

TrainResult train_nnm(const std::vector<TrainExample>& train,
                      const std::vector<TrainExample>& validation, vs::TimeAspect time,
                      std::size_t k, std::size_t steps, const NnmOptions& arch,
                      const TrainConfig& cfg) {
    if (train.empty()) throw std::invalid_argument("nnm: empty training set");
    if (cfg.epochs < 0 || cfg.batch_size == 0)
        throw std::invalid_argument("nnm: bad training config");

    TrainResult res;
    util::Rng init_rng(util::mix_seed(cfg.seed, 0x4e4e4d31u));  // "NNM1"
    res.params.init(time, k, steps, arch.hidden, arch.lstm_hidden, init_rng);
    const std::size_t width = res.params.uses_lstm() ? steps * k : k;
    check_shapes(train, width);
    check_shapes(validation, width);

    NnmParams<float> grads;
    grads.resize_like(res.params);
    auto param_ptrs = param_vectors(res.params);
    auto grad_ptrs = param_vectors(grads);
    NnmCache<float> cache;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        util::Rng epoch_rng(util::mix_seed(cfg.seed, static_cast<std::uint64_t>(epoch),
                                           0x45504f43u));  // "EPOC"
        double epoch_loss = 0.0;
        std::size_t counted = 0;

        if (!cfg.margin_loss) {
            std::vector<std::uint32_t> order(train.size());
            std::iota(order.begin(), order.end(), 0);
            epoch_rng.shuffle(order);

            for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
                const std::size_t end = std::min(order.size(), start + cfg.batch_size);
                zero_params(grads);
                for (std::size_t i = start; i < end; ++i) {
                    const TrainExample& ex = train[order[i]];
                    const float y = nnm_forward(res.params, ex.mod.data(), ex.head.data(), cache);
                    epoch_loss += ce_loss(y, ex.label);
                    const float dy = static_cast<float>(sigmoid_d(y)) -
                                     static_cast<float>(ex.label);
                    nnm_backward(res.params, cache, dy, grads);
                }
                sgd_step(param_ptrs, grad_ptrs,
                         static_cast<float>(cfg.learning_rate / static_cast<double>(end - start)));
            }
            counted = order.size();
        } else {
            // Matched positive/negative streams; each pair contributes the
            // hinge max(0, 1 - y_pos + y_neg).
            std::vector<std::uint32_t> pos, neg;
            for (std::uint32_t i = 0; i < train.size(); ++i)
                (train[i].label ? pos : neg).push_back(i);
            if (pos.empty() || neg.empty())
                throw std::invalid_argument("nnm: margin loss needs both classes");
            epoch_rng.shuffle(pos);
            epoch_rng.shuffle(neg);
            const std::size_t n_pairs = std::min(pos.size(), neg.size());
            const std::size_t pairs_per_batch = std::max<std::size_t>(1, cfg.batch_size / 2);

            NnmCache<float> cache_neg;
            for (std::size_t start = 0; start < n_pairs; start += pairs_per_batch) {
                const std::size_t end = std::min(n_pairs, start + pairs_per_batch);
                zero_params(grads);
                for (std::size_t i = start; i < end; ++i) {
                    const TrainExample& ep = train[pos[i]];
                    const TrainExample& en = train[neg[i]];
                    const float y_pos = nnm_forward(res.params, ep.mod.data(), ep.head.data(), cache);
                    const float y_neg =
                        nnm_forward(res.params, en.mod.data(), en.head.data(), cache_neg);
                    const double margin = 1.0 - static_cast<double>(y_pos) + static_cast<double>(y_neg);
                    if (margin <= 0.0) continue;
                    epoch_loss += margin;
                    nnm_backward(res.params, cache, -1.0f, grads);
                    nnm_backward(res.params, cache_neg, 1.0f, grads);
                }
                sgd_step(param_ptrs, grad_ptrs,
                         static_cast<float>(cfg.learning_rate / static_cast<double>(end - start)));
            }
            counted = n_pairs;
        }

        const double mean_loss = counted ? epoch_loss / static_cast<double>(counted) : 0.0;
        if (!std::isfinite(mean_loss))
            throw std::runtime_error("nnm training diverged at epoch " + std::to_string(epoch));
        res.train_loss.push_back(mean_loss);
        if (!validation.empty()) res.validation_loss.push_back(dataset_loss(res.params, validation));
    }
    return res;
}

Prediction nnm_predict(const NnmParams<float>& params, const float* mod, const float* head) {
    NnmCache<float> cache;
    const float y = nnm_forward(params, mod, head, cache);
    return {static_cast<double>(y), y >= 0.0f};
}

double dataset_loss(const NnmParams<float>& params, const std::vector<TrainExample>& examples) {
    if (examples.empty()) return 0.0;
    NnmCache<float> cache;
    double total = 0.0;
    for (const TrainExample& ex : examples) {
        const float y = nnm_forward(params, ex.mod.data(), ex.head.data(), cache);
        total += ce_loss(y, ex.label);
    }
    return total / static_cast<double>(examples.size());
}

}  // namespace nncomp::neural
