#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace nncomp::gbdt {

// Dedicated large-negative sentinel for missing feature values; fit and
// predict route sentinel rows through a per-split learned default
// direction. NaN inputs are rejected by fit (encode first).
inline constexpr double kMissingSentinel = -1e30;

// NaN -> kMissingSentinel, everything else untouched.
std::vector<double> encode_missing(std::vector<double> features);

struct GbdtConfig {
    double learning_rate = 0.1;
    int max_depth = 3;
    int n_estimators = 100;
    double min_child_weight = 6.0;
    double subsample = 0.5;
    double gamma = 0.0;
    double l1_alpha = 0.05;
    double l2_lambda = 1.0;
    std::uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument
};

struct TreeNode {
    int feature = -1;  // -1: leaf
    double threshold = 0.0;
    bool missing_goes_left = true;
    int left = -1;
    int right = -1;
    double leaf_weight = 0.0;  // unshrunk w*; learning rate applied at predict
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double leaf_value(const double* row) const;
    int max_depth() const;
};

class TreeEnsemble {
public:
    double base_score = 0.0;  // log-odds
    std::size_t n_features = 0;
    GbdtConfig config;
    std::vector<Tree> trees;

    double predict_margin(std::span<const double> row) const;
    double predict_proba(std::span<const double> row) const;  // sigmoid(margin)

    void save_json(const std::filesystem::path& path) const;
    static TreeEnsemble load_json(const std::filesystem::path& path);
};

// Fit-time audit trail for the structural tests: which rows reached each
// node, at which depth, with which hessian mass.
struct NodeAudit {
    int tree = 0;
    int node = 0;
    int depth = 0;
    bool leaf = false;
    double hessian_sum = 0.0;
    std::vector<std::uint32_t> rows;  // build-subset rows reaching the node
};

struct FitDiagnostics {
    bool record_nodes = false;
    std::vector<double> train_loss;  // mean logistic loss after each round
    std::vector<NodeAudit> nodes;
};

// Second-order stochastic gradient boosting with logistic loss. `features`
// is row-major n x n_features; labels are 0/1. Deterministic for a given
// config (per-round row subsampling uses a round-derived seed). Throws
// std::invalid_argument on empty data, NaN features, width mismatch or
// single-class labels.
TreeEnsemble fit(std::span<const double> features, std::size_t n_features,
                 std::span<const int> labels, const GbdtConfig& config,
                 FitDiagnostics* diag = nullptr);

double sigmoid(double x);

}  // namespace nncomp::gbdt
