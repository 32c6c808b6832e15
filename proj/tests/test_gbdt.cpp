#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <limits>
#include <vector>

#include "doctest.h"
#include "nncomp/gbdt/gbdt.hpp"

using namespace nncomp;
namespace fs = std::filesystem;

namespace {

// Independent one-stump oracle written straight from the second-order
// boosting math: soft-thresholded Newton leaves, midpoint thresholds,
// missing rows tried on both sides.
struct StumpOracle {
    bool split = false;
    int feature = -1;
    double threshold = 0.0;
    bool missing_left = true;
    double left_weight = 0.0, right_weight = 0.0, root_weight = 0.0;
    double base = 0.0;
};

StumpOracle stump_oracle(const std::vector<double>& x, std::size_t width,
                         const std::vector<int>& y, const gbdt::GbdtConfig& cfg) {
    const std::size_t n = y.size();
    StumpOracle out;
    std::size_t n_pos = 0;
    for (int v : y) n_pos += static_cast<std::size_t>(v);
    out.base = std::log(static_cast<double>(n_pos) / static_cast<double>(n - n_pos));
    const double p = 1.0 / (1.0 + std::exp(-out.base));

    std::vector<double> g(n), h(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = p - y[i];
        h[i] = std::max(p * (1.0 - p), 1e-16);
    }
    auto soft = [&](double v) {
        if (v > cfg.l1_alpha) return v - cfg.l1_alpha;
        if (v < -cfg.l1_alpha) return v + cfg.l1_alpha;
        return 0.0;
    };
    auto score = [&](double gs, double hs) { return soft(gs) * soft(gs) / (hs + cfg.l2_lambda); };
    auto weight = [&](double gs, double hs) { return -soft(gs) / (hs + cfg.l2_lambda); };

    double g_all = 0, h_all = 0;
    for (std::size_t i = 0; i < n; ++i) {
        g_all += g[i];
        h_all += h[i];
    }
    out.root_weight = weight(g_all, h_all);

    double best_gain = 0.0;
    for (std::size_t f = 0; f < width; ++f) {
        std::vector<std::pair<double, std::size_t>> vals;
        double g_miss = 0, h_miss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = x[i * width + f];
            if (v == gbdt::kMissingSentinel) {
                g_miss += g[i];
                h_miss += h[i];
            } else {
                vals.push_back({v, i});
            }
        }
        std::sort(vals.begin(), vals.end());
        for (std::size_t cut = 1; cut < vals.size(); ++cut) {
            if (vals[cut].first == vals[cut - 1].first) continue;
            const double thr = vals[cut - 1].first + (vals[cut].first - vals[cut - 1].first) / 2;
            double gl = 0, hl = 0;
            for (std::size_t i = 0; i < cut; ++i) {
                gl += g[vals[i].second];
                hl += h[vals[i].second];
            }
            const double g_present = g_all - g_miss, h_present = h_all - h_miss;
            for (bool miss_left : {true, false}) {
                if (!miss_left && g_miss == 0.0 && h_miss == 0.0) continue;
                const double gL = gl + (miss_left ? g_miss : 0.0);
                const double hL = hl + (miss_left ? h_miss : 0.0);
                const double gR = (g_present - gl) + (miss_left ? 0.0 : g_miss);
                const double hR = (h_present - hl) + (miss_left ? 0.0 : h_miss);
                if (hL < cfg.min_child_weight || hR < cfg.min_child_weight) continue;
                const double gain =
                    0.5 * (score(gL, hL) + score(gR, hR) - score(g_all, h_all)) - cfg.gamma;
                if (gain > best_gain) {
                    best_gain = gain;
                    out.split = true;
                    out.feature = static_cast<int>(f);
                    out.threshold = thr;
                    out.missing_left = miss_left;
                    out.left_weight = weight(gL, hL);
                    out.right_weight = weight(gR, hR);
                }
            }
        }
    }
    return out;
}

gbdt::GbdtConfig test_config() {
    gbdt::GbdtConfig cfg;
    cfg.learning_rate = 0.3;
    cfg.max_depth = 1;
    cfg.n_estimators = 1;
    cfg.min_child_weight = 0.25;
    cfg.subsample = 1.0;
    cfg.l1_alpha = 0.05;
    cfg.l2_lambda = 1.0;
    cfg.seed = 5;
    return cfg;
}

}  // namespace

TEST_CASE("config validation rejects out-of-range values") {
    gbdt::GbdtConfig cfg;
    cfg.validate();
    cfg.subsample = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.max_depth = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.l2_lambda = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("missing encoder maps NaN to the sentinel and nothing else") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto out = gbdt::encode_missing({1.5, nan, -2.0, nan, 0.0});
    CHECK(out == std::vector<double>{1.5, gbdt::kMissingSentinel, -2.0, gbdt::kMissingSentinel,
                                     0.0});
}

TEST_CASE("a single stump reproduces the Newton-step oracle") {
    // one informative feature, one constant noise feature
    std::vector<double> x;
    std::vector<int> y;
    const double f0[] = {1, 2, 3, 4, 10, 11, 12, 13};
    for (int i = 0; i < 8; ++i) {
        x.push_back(f0[i]);
        x.push_back(7.0);  // constant: never splittable
        y.push_back(i >= 4 ? 1 : 0);
    }
    const auto cfg = test_config();
    const auto model = gbdt::fit(x, 2, y, cfg);
    const auto want = stump_oracle(x, 2, y, cfg);

    REQUIRE(want.split);
    CHECK(want.feature == 0);
    CHECK(want.threshold == doctest::Approx(7.0));

    REQUIRE(model.trees.size() == 1);
    const auto& root = model.trees[0].nodes[0];
    REQUIRE(root.feature == 0);
    CHECK(root.threshold == doctest::Approx(want.threshold));
    CHECK(model.base_score == doctest::Approx(want.base));
    const auto& left = model.trees[0].nodes[root.left];
    const auto& right = model.trees[0].nodes[root.right];
    REQUIRE(left.feature == -1);
    REQUIRE(right.feature == -1);
    CHECK(left.leaf_weight == doctest::Approx(want.left_weight).epsilon(1e-12));
    CHECK(right.leaf_weight == doctest::Approx(want.right_weight).epsilon(1e-12));

    // learning rate applies at prediction time
    const double row_lo[] = {2.0, 7.0};
    CHECK(model.predict_margin(std::span<const double>(row_lo, 2)) ==
          doctest::Approx(want.base + cfg.learning_rate * want.left_weight));
    const double row_hi[] = {12.0, 7.0};
    CHECK(model.predict_proba(std::span<const double>(row_hi, 2)) ==
          doctest::Approx(gbdt::sigmoid(want.base + cfg.learning_rate * want.right_weight)));
}

TEST_CASE("stump oracle agrees when missing values carry the signal") {
    // missing rows are mostly positive: the learned default direction must
    // send the sentinel toward the positive leaf
    std::vector<double> x;
    std::vector<int> y;
    const struct {
        double v;
        int label;
    } rows[] = {{1, 0}, {2, 0}, {3, 0}, {4, 0},
                {10, 1}, {11, 1},
                {gbdt::kMissingSentinel, 1}, {gbdt::kMissingSentinel, 1},
                {gbdt::kMissingSentinel, 1}, {gbdt::kMissingSentinel, 0}};
    for (const auto& r : rows) {
        x.push_back(r.v);
        y.push_back(r.label);
    }
    const auto cfg = test_config();
    const auto model = gbdt::fit(x, 1, y, cfg);
    const auto want = stump_oracle(x, 1, y, cfg);

    REQUIRE(want.split);
    const auto& root = model.trees[0].nodes[0];
    CHECK(root.threshold == doctest::Approx(want.threshold));
    CHECK(root.missing_goes_left == want.missing_left);
    CHECK_FALSE(want.missing_left);  // positives sit on the right of the cut

    const double miss_row[] = {gbdt::kMissingSentinel};
    const double lo_row[] = {2.0};
    CHECK(model.predict_margin(std::span<const double>(miss_row, 1)) >
          model.predict_margin(std::span<const double>(lo_row, 1)));
}

TEST_CASE("input validation") {
    const auto cfg = test_config();
    CHECK_THROWS_AS(gbdt::fit({}, 2, {}, cfg), std::invalid_argument);

    std::vector<double> x{1.0, std::numeric_limits<double>::quiet_NaN(), 2.0, 3.0};
    std::vector<int> y{0, 1};
    CHECK_THROWS_AS(gbdt::fit(x, 2, y, cfg), std::invalid_argument);  // NaN rejected

    std::vector<double> ok{1.0, 2.0, 3.0, 4.0};
    std::vector<int> ones{1, 1};
    CHECK_THROWS_AS(gbdt::fit(ok, 2, ones, cfg), std::invalid_argument);  // single-class
    std::vector<int> wide{0, 1};
    CHECK_THROWS_AS(gbdt::fit(ok, 3, wide, cfg), std::invalid_argument);  // width mismatch
}

TEST_CASE("depth-2 trees capture the XOR interaction a stump cannot") {
    // one extra row in a single quadrant: on perfectly balanced XOR every
    // axis split has zero gain, so greedy trees would never split at all
    std::vector<double> x;
    std::vector<int> y;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const int reps = (a == 1 && b == 1) ? 9 : 8;
            for (int rep = 0; rep < reps; ++rep) {
                x.push_back(a + 0.01 * rep);
                x.push_back(b + 0.013 * rep);
                y.push_back(a ^ b);
            }
        }
    }
    gbdt::GbdtConfig cfg = test_config();
    cfg.max_depth = 2;
    cfg.n_estimators = 40;
    cfg.learning_rate = 0.3;
    const auto deep = gbdt::fit(x, 2, y, cfg);

    auto accuracy = [&](const gbdt::TreeEnsemble& m) {
        std::size_t hit = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double p = m.predict_proba(std::span<const double>(x.data() + 2 * i, 2));
            hit += ((p >= 0.5) == (y[i] == 1));
        }
        return static_cast<double>(hit) / static_cast<double>(y.size());
    };
    CHECK(accuracy(deep) == doctest::Approx(1.0));

    cfg.max_depth = 1;
    const auto shallow = gbdt::fit(x, 2, y, cfg);
    CHECK(accuracy(shallow) <= 0.76);  // additive stumps top out at 25/33 on XOR
    for (const auto& t : shallow.trees) CHECK(t.max_depth() <= 1);
    for (const auto& t : deep.trees) CHECK(t.max_depth() <= 2);
}

TEST_CASE("training loss decreases and diagnostics audit the node structure") {
    std::vector<double> x;
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) {
        x.push_back(static_cast<double>(i));
        y.push_back(i >= 20 ? 1 : 0);
    }
    gbdt::GbdtConfig cfg = test_config();
    cfg.n_estimators = 10;
    gbdt::FitDiagnostics diag;
    diag.record_nodes = true;
    const auto model = gbdt::fit(x, 1, y, cfg, &diag);

    REQUIRE(diag.train_loss.size() == 10);
    CHECK(diag.train_loss.front() > diag.train_loss.back());
    for (std::size_t i = 1; i < diag.train_loss.size(); ++i)
        CHECK(diag.train_loss[i] <= diag.train_loss[i - 1] + 1e-12);

    REQUIRE_FALSE(diag.nodes.empty());
    const auto& root = diag.nodes.front();
    CHECK(root.tree == 0);
    CHECK(root.depth == 0);
    CHECK(root.rows.size() == 40);  // subsample 1.0 keeps every row
    double h = 0.0;
    for (std::uint32_t r : root.rows) {
        (void)r;
        h += 0.25;  // first round: p = sigmoid(0) = 0.5
    }
    CHECK(root.hessian_sum == doctest::Approx(h));
    CHECK(model.trees.size() == 10);
}

TEST_CASE("row subsampling is seed-deterministic") {
    std::vector<double> x;
    std::vector<int> y;
    for (int i = 0; i < 60; ++i) {
        x.push_back(static_cast<double>(i % 30));
        x.push_back(static_cast<double>((i * 7) % 13));
        y.push_back(i % 30 >= 15 ? 1 : 0);
    }
    gbdt::GbdtConfig cfg = test_config();
    cfg.n_estimators = 8;
    cfg.subsample = 0.5;

    const auto a = gbdt::fit(x, 2, y, cfg);
    const auto b = gbdt::fit(x, 2, y, cfg);
    cfg.seed = 6;
    const auto c = gbdt::fit(x, 2, y, cfg);

    bool differs = false;
    for (std::size_t i = 0; i < y.size(); ++i) {
        std::span<const double> row(x.data() + 2 * i, 2);
        CHECK(a.predict_margin(row) == b.predict_margin(row));
        if (a.predict_margin(row) != c.predict_margin(row)) differs = true;
    }
    CHECK(differs);
}

TEST_CASE("ensembles round-trip through JSON") {
    std::vector<double> x;
    std::vector<int> y;
    for (int i = 0; i < 30; ++i) {
        x.push_back(static_cast<double>(i));
        x.push_back(i % 2 == 0 ? gbdt::kMissingSentinel : static_cast<double>(i % 5));
        y.push_back(i >= 15 ? 1 : 0);
    }
    gbdt::GbdtConfig cfg = test_config();
    cfg.n_estimators = 5;
    cfg.max_depth = 3;
    const auto model = gbdt::fit(x, 2, y, cfg);

    const auto dir = fs::temp_directory_path() / "nncomp_test_gbdt";
    fs::create_directories(dir);
    const auto path = dir / "model.json";
    model.save_json(path);
    const auto loaded = gbdt::TreeEnsemble::load_json(path);

    CHECK(loaded.base_score == model.base_score);
    CHECK(loaded.n_features == model.n_features);
    CHECK(loaded.config.learning_rate == model.config.learning_rate);
    REQUIRE(loaded.trees.size() == model.trees.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        std::span<const double> row(x.data() + 2 * i, 2);
        CHECK(loaded.predict_margin(row) == model.predict_margin(row));
    }
}
