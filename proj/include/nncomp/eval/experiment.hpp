#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nncomp/dfm/features.hpp"
#include "nncomp/eval/artifacts.hpp"
#include "nncomp/gbdt/gbdt.hpp"
#include "nncomp/neural/train.hpp"
#include "nncomp/sampling/candidates.hpp"

namespace nncomp::eval {

enum class Model : std::uint8_t { Dfm, Dsm, Nnm };

std::string_view model_name(Model m);
Model model_from_name(std::string_view name);

struct GridCell {
    Model model = Model::Nnm;
    vs::ContextAspect context = vs::ContextAspect::CompoundCentric;
    vs::TimeAspect time = vs::TimeAspect::DecadeCentric;
    sampling::Corruption corruption = sampling::Corruption::CorruptHead;

    bool operator==(const GridCell&) const = default;
};

// All 24 cells in report order: time block, then model, context, corruption.
std::vector<GridCell> full_grid();

struct HarnessConfig {
    corpus::DecadeConfig decades;
    std::size_t n_seeds = 10;
    std::uint64_t base_seed = 7;    // negative-sampling seeds are base_seed + i
    std::uint64_t model_seed = 11;  // mixed per cell and per seed for training
    bool frequency_weighted_negatives = false;

    gbdt::GbdtConfig gbdt;                              // DFM and DSM classifier
    neural::NnmOptions nnm_arch;                        // hidden widths
    neural::TrainConfig nnm_train;                      // epochs, batch, loss
    std::vector<double> lr_grid = {0.1, 0.03, 0.01, 0.003};  // tuned on validation
    bool dfm_include_std = false;
};

// The three balanced datasets of one sampling seed. Positives are the
// split compounds; negatives are drawn per split from the training pools.
struct SeedDatasets {
    sampling::LabeledDataset train;
    sampling::LabeledDataset validation;
    sampling::LabeledDataset test;
};

// Datasets for seeds base_seed .. base_seed + n_seeds - 1. Throws if any
// dataset comes out unbalanced or collides with an attested compound.
std::vector<SeedDatasets> build_datasets(const corpus::CompoundTable& table,
                                         const corpus::CompoundSplits& splits,
                                         sampling::Corruption corruption,
                                         const HarnessConfig& config);

// Accuracy of the always-plausible classifier; exactly 0.5 on a balanced
// dataset. The harness runs this self-test on every test set.
double constant_classifier_accuracy(const sampling::LabeledDataset& dataset);

// Verifies that nothing later than the training decades can reach a model:
// matrix and embedding slices stay inside the training era, test compounds
// are unattested before the test decade, and every test constituent is
// already active in training. Throws std::logic_error on any violation.
void assert_temporal_hygiene(ArtifactProvider& artifacts, const GridCell& cell);

struct SeedResult {
    std::uint64_t seed = 0;   // sampling seed of the dataset triple
    double accuracy = 0.0;    // abstentions count as errors
    std::size_t n_test = 0;
    std::size_t n_abstained = 0;
    double chosen_lr = 0.0;   // NNM only; 0 for the tree models
};

struct CellResult {
    GridCell cell;
    std::vector<SeedResult> seeds;
    double mean = 0.0;
    double stddev = 0.0;  // population
};

double mean_of(const std::vector<double>& xs);
double population_stddev(const std::vector<double>& xs);

// Embedding inputs for one (modifier, head) pair: the kAllDecades vectors
// under DecadeAgnostic, the per-training-decade sequences (zero-filled
// where absent) under DecadeCentric. nullopt when an embedding is missing
// entirely; label is left 0 for the caller.
std::optional<neural::TrainExample> nnm_input(ArtifactProvider& artifacts,
                                              vs::ContextAspect context, vs::TimeAspect time,
                                              const std::string& modifier,
                                              const std::string& head);

// Runs the full grid (or a subset) with shared dataset, feature and
// encoder caches. Deterministic: results depend only on artifacts and
// config, never on cell order.
class GridRunner {
public:
    GridRunner(ArtifactProvider& artifacts, HarnessConfig config);

    // Trains (or reuses) everything the cell needs, applies the hygiene
    // assertion and the balanced-set self-test, and returns one accuracy
    // per sampling seed.
    CellResult run_cell(const GridCell& cell);

    std::vector<CellResult> run(const std::vector<GridCell>& cells);

    const std::vector<SeedDatasets>& datasets(sampling::Corruption corruption);

    // NNM trained for one (context, time, corruption, seed) slot; the
    // learning rate comes from the validation grid. Cached so the DSM
    // DecadeCentric cells reuse the very same encoder.
    const neural::NnmParams<float>& trained_nnm(vs::ContextAspect context, vs::TimeAspect time,
                                                sampling::Corruption corruption,
                                                std::size_t seed_index, double* chosen_lr = nullptr);

    const HarnessConfig& config() const { return config_; }

private:
    struct TrainedNnm {
        neural::NnmParams<float> params;
        double lr = 0.0;
    };

    ArtifactProvider& artifacts_;
    HarnessConfig config_;
    std::map<int, std::vector<SeedDatasets>> datasets_;          // by corruption
    std::map<std::pair<int, int>, dfm::DfmFeatureBuilder> dfm_;  // by (context, time)
    std::map<std::pair<int, int>, std::map<std::string, std::vector<double>>> dfm_rows_;
    std::map<std::tuple<int, int, int, std::size_t>, TrainedNnm> nnm_;

    const dfm::DfmFeatureBuilder& dfm_builder(vs::ContextAspect context, vs::TimeAspect time);
    const std::vector<double>& dfm_row(vs::ContextAspect context, vs::TimeAspect time,
                                       const std::string& modifier, const std::string& head);

    SeedResult run_dfm_seed(const GridCell& cell, std::size_t seed_index,
                            const SeedDatasets& data);
    SeedResult run_dsm_seed(const GridCell& cell, std::size_t seed_index,
                            const SeedDatasets& data);
    SeedResult run_nnm_seed(const GridCell& cell, std::size_t seed_index,
                            const SeedDatasets& data);

    // constituent inputs for the neural model; nullopt = embedding missing
    std::optional<neural::TrainExample> nnm_example(const sampling::CandidateTuple& tuple,
                                                    vs::ContextAspect context, vs::TimeAspect time);

    std::uint64_t training_seed(const GridCell& cell, std::size_t seed_index) const;
};

}  // namespace nncomp::eval
