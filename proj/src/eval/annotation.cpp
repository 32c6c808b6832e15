#include "nncomp/eval/annotation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "nncomp/sampling/candidates.hpp"

namespace nncomp::eval {

namespace {

// constituents ordered by training-era token count (ties lexicographic)
std::vector<std::string> by_frequency(const std::vector<std::string>& lexemes,
                                      const std::vector<std::uint64_t>& weights) {
    std::vector<std::size_t> order(lexemes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (weights[a] != weights[b]) return weights[a] > weights[b];
        return lexemes[a] < lexemes[b];
    });
    std::vector<std::string> out;
    out.reserve(order.size());
    for (std::size_t i : order) out.push_back(lexemes[i]);
    return out;
}

bool better(const GeneratedCandidate& a, const GeneratedCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.modifier != b.modifier) return a.modifier < b.modifier;
    return a.head < b.head;
}

}  // namespace

std::vector<GeneratedCandidate> generate_candidates(
    const corpus::CompoundTable& table, const std::vector<corpus::Compound>& train_positives,
    const PairScorer& scorer, const GenerationOptions& options) {
    if (options.top_n == 0) return {};
    const auto pools = sampling::pools_from_training(table, train_positives);
    const auto modifiers = by_frequency(pools.modifiers, pools.modifier_weights);
    const auto heads = by_frequency(pools.heads, pools.head_weights);

    std::vector<GeneratedCandidate> kept;
    kept.reserve(options.top_n * 4 + 1);
    std::size_t scored = 0;
    for (const auto& m : modifiers) {
        if (scored >= options.budget) break;
        for (const auto& h : heads) {
            if (scored >= options.budget) break;
            if (m == h || table.attested(m, h)) continue;
            ++scored;  // abstentions spend budget too: the call is the cost
            const auto score = scorer(m, h);
            if (!score) continue;
            kept.push_back({m, h, *score});
            if (kept.size() > options.top_n * 4) {
                std::nth_element(kept.begin(), kept.begin() + options.top_n - 1, kept.end(),
                                 better);
                kept.resize(options.top_n);
            }
        }
    }
    std::sort(kept.begin(), kept.end(), better);
    if (kept.size() > options.top_n) kept.resize(options.top_n);
    return kept;
}

void write_annotation_csv(const std::filesystem::path& path,
                          const std::vector<GeneratedCandidate>& candidates) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "modifier,head,score,rating_0_4\n";
    char buf[64];
    for (const auto& c : candidates) {
        std::snprintf(buf, sizeof(buf), "%.6f", c.score);
        out << c.modifier << ',' << c.head << ',' << buf << ",\n";
    }
}

}  // namespace nncomp::eval
