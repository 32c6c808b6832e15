#include "nncomp/gbdt/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "nncomp/util/io.hpp"
#include "nncomp/util/rng.hpp"

namespace nncomp::gbdt {

std::vector<double> encode_missing(std::vector<double> features) {
    for (double& v : features)
        if (std::isnan(v)) v = kMissingSentinel;
    return features;
}

void GbdtConfig::validate() const {
    if (learning_rate <= 0.0) throw std::invalid_argument("gbdt: learning_rate must be positive");
    if (max_depth < 1) throw std::invalid_argument("gbdt: max_depth must be >= 1");
    if (n_estimators < 0) throw std::invalid_argument("gbdt: n_estimators must be >= 0");
    if (min_child_weight < 0.0) throw std::invalid_argument("gbdt: min_child_weight must be >= 0");
    if (subsample <= 0.0 || subsample > 1.0)
        throw std::invalid_argument("gbdt: subsample must be in (0, 1]");
    if (gamma < 0.0 || l1_alpha < 0.0 || l2_lambda < 0.0)
        throw std::invalid_argument("gbdt: regularizers must be >= 0");
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double Tree::leaf_value(const double* row) const {
    int idx = 0;
    while (nodes[static_cast<std::size_t>(idx)].feature >= 0) {
        const TreeNode& n = nodes[static_cast<std::size_t>(idx)];
        const double x = row[n.feature];
        if (x == kMissingSentinel || std::isnan(x)) {
            idx = n.missing_goes_left ? n.left : n.right;
        } else {
            idx = x < n.threshold ? n.left : n.right;
        }
    }
    return nodes[static_cast<std::size_t>(idx)].leaf_weight;
}

int Tree::max_depth() const {
    int deepest = 0;
    // depth of node i by walking from the root; trees are tiny
    struct Item {
        int node;
        int depth;
    };
    std::vector<Item> stack{{0, 0}};
    while (!stack.empty()) {
        auto [node, depth] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, depth);
        const TreeNode& n = nodes[static_cast<std::size_t>(node)];
        if (n.feature >= 0) {
            stack.push_back({n.left, depth + 1});
            stack.push_back({n.right, depth + 1});
        }
    }
    return deepest;
}

double TreeEnsemble::predict_margin(std::span<const double> row) const {
    if (row.size() != n_features)
        throw std::invalid_argument("gbdt: feature row width mismatch");
    double margin = base_score;
    for (const Tree& t : trees) margin += config.learning_rate * t.leaf_value(row.data());
    return margin;
}

double TreeEnsemble::predict_proba(std::span<const double> row) const {
    return sigmoid(predict_margin(row));
}

namespace {

// L1 soft threshold of the gradient sum, then the L2-damped Newton step.
double thresholded(double g, double alpha) {
    if (g > alpha) return g - alpha;
    if (g < -alpha) return g + alpha;
    return 0.0;
}

double leaf_weight(double g, double h, const GbdtConfig& cfg) {
    return -thresholded(g, cfg.l1_alpha) / (h + cfg.l2_lambda);
}

double node_score(double g, double h, const GbdtConfig& cfg) {
    const double t = thresholded(g, cfg.l1_alpha);
    return t * t / (h + cfg.l2_lambda);
}

// Per-feature presorted columns, built once per fit and reused by every
// node (the node filters them through its row mark).
struct SortedColumns {
    std::vector<std::vector<std::pair<double, std::uint32_t>>> present;  // sorted by (value, row)
    std::vector<std::vector<std::uint32_t>> missing;

    SortedColumns(const double* x, std::size_t n, std::size_t width) : present(width), missing(width) {
        for (std::size_t f = 0; f < width; ++f) {
            for (std::uint32_t r = 0; r < n; ++r) {
                const double v = x[static_cast<std::size_t>(r) * width + f];
                if (v == kMissingSentinel) {
                    missing[f].push_back(r);
                } else {
                    present[f].push_back({v, r});
                }
            }
            std::sort(present[f].begin(), present[f].end());
        }
    }
};

struct BuildContext {
    const double* x;  // row-major
    std::size_t width;
    const SortedColumns& columns;
    const std::vector<double>& grad;
    const std::vector<double>& hess;
    const GbdtConfig& cfg;
    Tree& tree;
    FitDiagnostics* diag;
    int tree_index;
    std::vector<std::uint32_t> mark;  // mark[row] == mark_id: row is in the node
    std::uint32_t mark_id = 0;
};

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    bool missing_goes_left = true;
    double gain = 0.0;
};

SplitChoice best_split(BuildContext& ctx, const std::vector<std::uint32_t>& rows, double g_sum,
                       double h_sum) {
    const double parent = node_score(g_sum, h_sum, ctx.cfg);
    SplitChoice best;
    ++ctx.mark_id;
    for (std::uint32_t r : rows) ctx.mark[r] = ctx.mark_id;

    for (std::size_t f = 0; f < ctx.width; ++f) {
        double g_miss = 0.0, h_miss = 0.0;
        for (std::uint32_t r : ctx.columns.missing[f]) {
            if (ctx.mark[r] != ctx.mark_id) continue;
            g_miss += ctx.grad[r];
            h_miss += ctx.hess[r];
        }
        const double g_present = g_sum - g_miss;
        const double h_present = h_sum - h_miss;

        double g_left = 0.0, h_left = 0.0;
        bool have_prev = false;
        double prev_val = 0.0;
        for (const auto& [v, r] : ctx.columns.present[f]) {
            if (ctx.mark[r] != ctx.mark_id) continue;
            if (have_prev && v != prev_val) {
                const double threshold = prev_val + (v - prev_val) / 2.0;
                const double g_right = g_present - g_left;
                const double h_right = h_present - h_left;
                // Missing rows try both sides; with none the two options tie
                // and the first (left) is kept.
                const bool have_missing = g_miss != 0.0 || h_miss != 0.0;
                for (int dir = 0; dir < (have_missing ? 2 : 1); ++dir) {
                    const bool miss_left = dir == 0;
                    const double gl = g_left + (miss_left ? g_miss : 0.0);
                    const double hl = h_left + (miss_left ? h_miss : 0.0);
                    const double gr = g_right + (miss_left ? 0.0 : g_miss);
                    const double hr = h_right + (miss_left ? 0.0 : h_miss);
                    if (hl < ctx.cfg.min_child_weight || hr < ctx.cfg.min_child_weight) continue;
                    const double gain =
                        0.5 * (node_score(gl, hl, ctx.cfg) + node_score(gr, hr, ctx.cfg) - parent) -
                        ctx.cfg.gamma;
                    if (gain > best.gain) {
                        best = {true, static_cast<int>(f), threshold, miss_left, gain};
                    }
                }
            }
            g_left += ctx.grad[r];
            h_left += ctx.hess[r];
            prev_val = v;
            have_prev = true;
        }
    }
    return best;
}

int build_node(BuildContext& ctx, std::vector<std::uint32_t> rows, int depth) {
    double g_sum = 0.0, h_sum = 0.0;
    for (std::uint32_t r : rows) {
        g_sum += ctx.grad[r];
        h_sum += ctx.hess[r];
    }

    const int idx = static_cast<int>(ctx.tree.nodes.size());
    ctx.tree.nodes.emplace_back();

    SplitChoice split;
    if (depth < ctx.cfg.max_depth) split = best_split(ctx, rows, g_sum, h_sum);

    if (ctx.diag && ctx.diag->record_nodes) {
        ctx.diag->nodes.push_back(
            {ctx.tree_index, idx, depth, !split.found || split.gain <= 0.0, h_sum, rows});
    }

    if (!split.found || split.gain <= 0.0) {
        ctx.tree.nodes[static_cast<std::size_t>(idx)].leaf_weight =
            leaf_weight(g_sum, h_sum, ctx.cfg);
        return idx;
    }

    std::vector<std::uint32_t> left_rows, right_rows;
    for (std::uint32_t r : rows) {
        const double v = ctx.x[static_cast<std::size_t>(r) * ctx.width +
                               static_cast<std::size_t>(split.feature)];
        const bool go_left =
            v == kMissingSentinel ? split.missing_goes_left : v < split.threshold;
        (go_left ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    const int left = build_node(ctx, std::move(left_rows), depth + 1);
    const int right = build_node(ctx, std::move(right_rows), depth + 1);
    TreeNode& node = ctx.tree.nodes[static_cast<std::size_t>(idx)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.missing_goes_left = split.missing_goes_left;
    node.left = left;
    node.right = right;
    return idx;
}

}  // namespace

TreeEnsemble fit(std::span<const double> features, std::size_t n_features,
                 std::span<const int> labels, const GbdtConfig& config, FitDiagnostics* diag) {
    config.validate();
    const std::size_t n = labels.size();
    if (n == 0 || n_features == 0) throw std::invalid_argument("gbdt: empty training data");
    if (features.size() != n * n_features)
        throw std::invalid_argument("gbdt: feature matrix size mismatch");
    for (double v : features)
        if (std::isnan(v)) throw std::invalid_argument("gbdt: NaN feature (encode_missing first)");
    std::size_t n_pos = 0;
    for (int y : labels) {
        if (y != 0 && y != 1) throw std::invalid_argument("gbdt: labels must be 0/1");
        n_pos += static_cast<std::size_t>(y);
    }
    if (n_pos == 0 || n_pos == n)
        throw std::invalid_argument("gbdt: training labels are single-class");

    TreeEnsemble model;
    model.config = config;
    model.n_features = n_features;
    model.base_score =
        std::log(static_cast<double>(n_pos) / static_cast<double>(n - n_pos));

    std::vector<double> margin(n, model.base_score);
    std::vector<double> grad(n), hess(n);
    std::vector<std::uint32_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), 0);
    const SortedColumns columns(features.data(), n, n_features);

    for (int round = 0; round < config.n_estimators; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(margin[i]);
            grad[i] = p - static_cast<double>(labels[i]);
            hess[i] = std::max(p * (1.0 - p), 1e-16);
        }

        std::vector<std::uint32_t> rows = all_rows;
        if (config.subsample < 1.0) {
            util::Rng rng(util::mix_seed(config.seed, static_cast<std::uint64_t>(round),
                                         0x47424454u));  // "GBDT"
            rng.shuffle(rows);
            const auto keep = std::max<std::size_t>(
                1, static_cast<std::size_t>(static_cast<double>(n) * config.subsample));
            rows.resize(keep);
            std::sort(rows.begin(), rows.end());
        }

        model.trees.emplace_back();
        BuildContext ctx{features.data(),   n_features, columns, grad, hess, config,
                         model.trees.back(), diag,       round,   {},   0};
        ctx.mark.assign(n, 0);
        build_node(ctx, std::move(rows), 0);

        const Tree& tree = model.trees.back();
        for (std::size_t i = 0; i < n; ++i)
            margin[i] += config.learning_rate * tree.leaf_value(features.data() + i * n_features);

        if (diag) {
            double loss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double p = sigmoid(margin[i]);
                loss -= labels[i] ? std::log(std::max(p, 1e-300))
                                  : std::log(std::max(1.0 - p, 1e-300));
            }
            diag->train_loss.push_back(loss / static_cast<double>(n));
        }
    }
    return model;
}

void TreeEnsemble::save_json(const std::filesystem::path& path) const {
    nlohmann::json js;
    js["format"] = "nncomp-gbdt-v1";
    js["base_score"] = base_score;
    js["n_features"] = n_features;
    js["config"] = {{"learning_rate", config.learning_rate},
                    {"max_depth", config.max_depth},
                    {"n_estimators", config.n_estimators},
                    {"min_child_weight", config.min_child_weight},
                    {"subsample", config.subsample},
                    {"gamma", config.gamma},
                    {"l1_alpha", config.l1_alpha},
                    {"l2_lambda", config.l2_lambda},
                    {"seed", config.seed}};
    js["trees"] = nlohmann::json::array();
    for (const Tree& t : trees) {
        auto jt = nlohmann::json::array();
        for (const TreeNode& n : t.nodes) {
            if (n.feature < 0) {
                jt.push_back({{"w", n.leaf_weight}});
            } else {
                jt.push_back({{"f", n.feature},
                              {"t", n.threshold},
                              {"ml", n.missing_goes_left},
                              {"l", n.left},
                              {"r", n.right}});
            }
        }
        js["trees"].push_back(std::move(jt));
    }
    util::write_text_file(path, js.dump(2) + "\n");
}

TreeEnsemble TreeEnsemble::load_json(const std::filesystem::path& path) {
    const auto js = nlohmann::json::parse(util::read_text_file(path));
    if (js.at("format").get<std::string>() != "nncomp-gbdt-v1")
        throw std::runtime_error("unrecognized gbdt model format in " + path.string());
    TreeEnsemble model;
    model.base_score = js.at("base_score").get<double>();
    model.n_features = js.at("n_features").get<std::size_t>();
    const auto& jc = js.at("config");
    model.config.learning_rate = jc.at("learning_rate").get<double>();
    model.config.max_depth = jc.at("max_depth").get<int>();
    model.config.n_estimators = jc.at("n_estimators").get<int>();
    model.config.min_child_weight = jc.at("min_child_weight").get<double>();
    model.config.subsample = jc.at("subsample").get<double>();
    model.config.gamma = jc.at("gamma").get<double>();
    model.config.l1_alpha = jc.at("l1_alpha").get<double>();
    model.config.l2_lambda = jc.at("l2_lambda").get<double>();
    model.config.seed = jc.at("seed").get<std::uint64_t>();
    for (const auto& jt : js.at("trees")) {
        Tree t;
        for (const auto& jn : jt) {
            TreeNode n;
            if (jn.contains("w")) {
                n.leaf_weight = jn.at("w").get<double>();
            } else {
                n.feature = jn.at("f").get<int>();
                n.threshold = jn.at("t").get<double>();
                n.missing_goes_left = jn.at("ml").get<bool>();
                n.left = jn.at("l").get<int>();
                n.right = jn.at("r").get<int>();
            }
            t.nodes.push_back(n);
        }
        model.trees.push_back(std::move(t));
    }
    return model;
}

}  // namespace nncomp::gbdt
