#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nncomp/corpus/compounds.hpp"
#include "nncomp/corpus/splits.hpp"

namespace nncomp::eval {

struct GeneratedCandidate {
    std::string modifier;
    std::string head;
    double score = 0.0;
};

// nullopt = the model cannot score the pair (missing embedding)
using PairScorer = std::function<std::optional<double>(const std::string& modifier,
                                                       const std::string& head)>;

struct GenerationOptions {
    std::size_t budget = 2'000'000;  // pairs scored at most
    std::size_t top_n = 250;         // candidates kept
};

// Exhaustively pairs training constituents (most frequent first), skips
// every compound attested in any decade, scores the rest, and keeps the
// top_n by score. Ties break on (modifier, head) so output is stable.
std::vector<GeneratedCandidate> generate_candidates(const corpus::CompoundTable& table,
                                                    const std::vector<corpus::Compound>& train_positives,
                                                    const PairScorer& scorer,
                                                    const GenerationOptions& options);

// "modifier,head,score,rating_0_4" with the rating column left blank for
// the annotators.
void write_annotation_csv(const std::filesystem::path& path,
                          const std::vector<GeneratedCandidate>& candidates);

}  // namespace nncomp::eval
