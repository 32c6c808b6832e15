#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "nncomp/corpus/compounds.hpp"

namespace nncomp::corpus {

// Temporal holdout by first attestation decade. Splits are pairwise
// disjoint by construction (every compound has exactly one first decade).
struct CompoundSplits {
    std::vector<Compound> train;       // first attested in a training decade,
                                       // total training count >= min_train_count
    std::vector<Compound> validation;  // first attested in the validation decade
    std::vector<Compound> test;        // first attested in the test decade,
                                       // test-decade count >= min_novel_count

    std::uint64_t dropped_new_constituent = 0;  // a constituent occurs only in the test decade
    std::uint64_t dropped_below_threshold = 0;

    void save_json(const std::filesystem::path& path) const;
    static CompoundSplits load_json(const std::filesystem::path& path);
};

struct SplitThresholds {
    std::uint64_t min_train_count = 3;
    std::uint64_t min_novel_count = 3;
};

CompoundSplits split_compounds_by_first_attestation(const CompoundTable& table,
                                                    const SplitThresholds& thresholds = {});

// First decade in which a lexeme appears as a constituent (either role) of
// any attested compound. Used both by the split rule above and by the
// negative-sampling pools.
std::unordered_map<std::string, int> constituent_first_decades(const CompoundTable& table);

}  // namespace nncomp::corpus
