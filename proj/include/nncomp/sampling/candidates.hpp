#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "nncomp/corpus/compounds.hpp"
#include "nncomp/corpus/splits.hpp"
#include "nncomp/util/rng.hpp"

namespace nncomp::sampling {

enum class Corruption : std::uint8_t {
    None,
    CorruptHead,      // (m, h) -> (m, h')
    CorruptModifier,  // (m, h) -> (m', h)
};

std::string_view corruption_name(Corruption c);
Corruption corruption_from_name(std::string_view name);

struct CandidateTuple {
    std::string modifier;
    std::string head;
    bool attested = true;
    Corruption corruption = Corruption::None;
    std::uint64_t source_seed = 0;

    bool operator==(const CandidateTuple&) const = default;
};

struct LabeledDataset {
    std::vector<CandidateTuple> tuples;
    Corruption scenario = Corruption::CorruptHead;
    std::uint64_t seed = 0;
    std::vector<corpus::Compound> dropped_positives;  // sampling budget exhausted

    std::size_t n_attested() const;
    std::size_t n_corrupted() const;

    void save_csv(const std::filesystem::path& path) const;
    static LabeledDataset load_csv(const std::filesystem::path& path);
};

// Replacement pools: distinct constituent types from the training
// positives ("heads are replaced by heads and modifiers by modifiers"),
// sorted so draws are deterministic. Weights are training-era token counts
// for the optional frequency-weighted ablation; the default draw is
// uniform over types.
struct SamplingPools {
    std::vector<std::string> heads;
    std::vector<std::string> modifiers;
    std::vector<std::uint64_t> head_weights;
    std::vector<std::uint64_t> modifier_weights;
};

SamplingPools pools_from_training(const corpus::CompoundTable& table,
                                  const std::vector<corpus::Compound>& train_positives);

// Every attested compound of any decade, keyed "modifier head". Corrupted
// tuples must never land in this set.
std::unordered_set<std::string> forbidden_set(const corpus::CompoundTable& table);

inline constexpr int kRetryBudget = 1000;

// One corrupted counterpart of `positive`. nullopt when the retry budget
// runs out (e.g. the pool has no distinct replacement that avoids the
// forbidden set and `used`).  `used` holds "modifier head" keys of
// already-emitted negatives so a dataset never contains duplicates.
std::optional<CandidateTuple> corrupt(const corpus::Compound& positive, Corruption scenario,
                                      const SamplingPools& pools,
                                      const std::unordered_set<std::string>& forbidden,
                                      std::unordered_set<std::string>& used, util::Rng& rng,
                                      bool frequency_weighted = false);

// Balanced dataset for one seed: every positive paired with one fresh
// negative, then deterministically shuffled. Positives whose negative
// cannot be drawn are dropped (and recorded) to keep the balance exact.
LabeledDataset make_dataset(const std::vector<corpus::Compound>& positives, Corruption scenario,
                            const SamplingPools& pools,
                            const std::unordered_set<std::string>& forbidden, std::uint64_t seed,
                            bool frequency_weighted = false);

// n_datasets datasets with identical positives and independently seeded
// negatives (seed = base_seed + index).
std::vector<LabeledDataset> assemble_datasets(const std::vector<corpus::Compound>& positives,
                                              Corruption scenario, const SamplingPools& pools,
                                              const std::unordered_set<std::string>& forbidden,
                                              std::size_t n_datasets, std::uint64_t base_seed,
                                              bool frequency_weighted = false);

}  // namespace nncomp::sampling
