#include "nncomp/sampling/candidates.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "nncomp/util/io.hpp"

namespace nncomp::sampling {

std::string_view corruption_name(Corruption c) {
    switch (c) {
        case Corruption::None: return "none";
        case Corruption::CorruptHead: return "corrupt-head";
        case Corruption::CorruptModifier: return "corrupt-modifier";
    }
    throw std::logic_error("corruption_name: bad corruption");
}

Corruption corruption_from_name(std::string_view name) {
    if (name == "none") return Corruption::None;
    if (name == "corrupt-head") return Corruption::CorruptHead;
    if (name == "corrupt-modifier") return Corruption::CorruptModifier;
    throw std::invalid_argument("unknown corruption: " + std::string(name));
}

std::size_t LabeledDataset::n_attested() const {
    return static_cast<std::size_t>(
        std::count_if(tuples.begin(), tuples.end(), [](const auto& t) { return t.attested; }));
}

std::size_t LabeledDataset::n_corrupted() const { return tuples.size() - n_attested(); }

void LabeledDataset::save_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "modifier,head,label,corruption,seed\n";
    for (const CandidateTuple& t : tuples) {
        out << t.modifier << ',' << t.head << ',' << (t.attested ? "attested" : "corrupted") << ','
            << corruption_name(t.corruption) << ',' << t.source_seed << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

LabeledDataset LabeledDataset::load_csv(const std::filesystem::path& path) {
    LabeledDataset ds;
    util::LineReader reader(path);
    std::string line;
    bool header = true;
    while (reader.next(line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                fields.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        if (fields.size() != 5) throw std::runtime_error("malformed dataset row: " + line);
        CandidateTuple t;
        t.modifier = fields[0];
        t.head = fields[1];
        if (fields[2] == "attested") {
            t.attested = true;
        } else if (fields[2] == "corrupted") {
            t.attested = false;
        } else {
            throw std::runtime_error("bad label: " + fields[2]);
        }
        t.corruption = corruption_from_name(fields[3]);
        t.source_seed = std::stoull(fields[4]);
        if ((t.attested) != (t.corruption == Corruption::None))
            throw std::runtime_error("label/corruption mismatch: " + line);
        ds.tuples.push_back(std::move(t));
    }
    for (const CandidateTuple& t : ds.tuples) {
        if (t.corruption != Corruption::None) {
            ds.scenario = t.corruption;
            break;
        }
    }
    if (!ds.tuples.empty()) ds.seed = ds.tuples.front().source_seed;
    return ds;
}

SamplingPools pools_from_training(const corpus::CompoundTable& table,
                                  const std::vector<corpus::Compound>& train_positives) {
    std::unordered_map<std::string, std::uint64_t> head_counts, mod_counts;
    const auto training = table.decades().training_decades();
    for (const corpus::Compound& c : train_positives) {
        std::uint64_t total = 0;
        for (int d : training) total += table.count(c.modifier, c.head, d);
        head_counts[c.head] += total;
        mod_counts[c.modifier] += total;
    }
    SamplingPools pools;
    pools.heads.reserve(head_counts.size());
    for (const auto& [h, n] : head_counts) pools.heads.push_back(h);
    std::sort(pools.heads.begin(), pools.heads.end());
    pools.head_weights.reserve(pools.heads.size());
    for (const std::string& h : pools.heads) pools.head_weights.push_back(head_counts.at(h));
    pools.modifiers.reserve(mod_counts.size());
    for (const auto& [m, n] : mod_counts) pools.modifiers.push_back(m);
    std::sort(pools.modifiers.begin(), pools.modifiers.end());
    pools.modifier_weights.reserve(pools.modifiers.size());
    for (const std::string& m : pools.modifiers) pools.modifier_weights.push_back(mod_counts.at(m));
    return pools;
}

std::unordered_set<std::string> forbidden_set(const corpus::CompoundTable& table) {
    std::unordered_set<std::string> out;
    out.reserve(table.n_pairs());
    for (const auto* entry : table.sorted_entries()) out.insert(entry->compound.joined());
    return out;
}

namespace {

std::size_t draw_index(const std::vector<std::uint64_t>& weights, util::Rng& rng) {
    std::uint64_t total = 0;
    for (std::uint64_t w : weights) total += w;
    if (total == 0) throw std::invalid_argument("frequency-weighted draw from zero-weight pool");
    std::uint64_t r = rng.below(total);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (r < weights[i]) return i;
        r -= weights[i];
    }
    return weights.size() - 1;  // unreachable
}

}  // namespace

std::optional<CandidateTuple> corrupt(const corpus::Compound& positive, Corruption scenario,
                                      const SamplingPools& pools,
                                      const std::unordered_set<std::string>& forbidden,
                                      std::unordered_set<std::string>& used, util::Rng& rng,
                                      bool frequency_weighted) {
    if (scenario == Corruption::None) throw std::invalid_argument("corrupt: scenario must corrupt");
    const bool corrupt_head = scenario == Corruption::CorruptHead;
    const auto& pool = corrupt_head ? pools.heads : pools.modifiers;
    const auto& weights = corrupt_head ? pools.head_weights : pools.modifier_weights;
    if (pool.empty()) return std::nullopt;

    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        const std::size_t idx = frequency_weighted
                                    ? draw_index(weights, rng)
                                    : static_cast<std::size_t>(rng.below(pool.size()));
        const std::string& replacement = pool[idx];
        if (replacement == (corrupt_head ? positive.head : positive.modifier)) continue;
        CandidateTuple t;
        t.modifier = corrupt_head ? positive.modifier : replacement;
        t.head = corrupt_head ? replacement : positive.head;
        t.attested = false;
        t.corruption = scenario;
        const std::string key = t.modifier + ' ' + t.head;
        if (forbidden.contains(key) || used.contains(key)) continue;
        used.insert(key);
        return t;
    }
    return std::nullopt;
}

LabeledDataset make_dataset(const std::vector<corpus::Compound>& positives, Corruption scenario,
                            const SamplingPools& pools,
                            const std::unordered_set<std::string>& forbidden, std::uint64_t seed,
                            bool frequency_weighted) {
    LabeledDataset ds;
    ds.scenario = scenario;
    ds.seed = seed;
    util::Rng rng(util::mix_seed(seed, 0x4e454753u));  // "NEGS"

    std::unordered_set<std::string> seen_positives;
    std::unordered_set<std::string> used;
    std::vector<CandidateTuple> kept, negatives;
    for (const corpus::Compound& pos : positives) {
        if (!seen_positives.insert(pos.joined()).second) continue;
        auto neg = corrupt(pos, scenario, pools, forbidden, used, rng, frequency_weighted);
        if (!neg) {
            ds.dropped_positives.push_back(pos);
            continue;
        }
        neg->source_seed = seed;
        kept.push_back({pos.modifier, pos.head, true, Corruption::None, seed});
        negatives.push_back(std::move(*neg));
    }
    ds.tuples = std::move(kept);
    ds.tuples.insert(ds.tuples.end(), std::make_move_iterator(negatives.begin()),
                     std::make_move_iterator(negatives.end()));
    rng.shuffle(ds.tuples);
    return ds;
}

std::vector<LabeledDataset> assemble_datasets(const std::vector<corpus::Compound>& positives,
                                              Corruption scenario, const SamplingPools& pools,
                                              const std::unordered_set<std::string>& forbidden,
                                              std::size_t n_datasets, std::uint64_t base_seed,
                                              bool frequency_weighted) {
    if (positives.empty()) throw std::invalid_argument("assemble_datasets: no positives");
    std::vector<LabeledDataset> out;
    out.reserve(n_datasets);
    for (std::size_t i = 0; i < n_datasets; ++i)
        out.push_back(make_dataset(positives, scenario, pools, forbidden, base_seed + i,
                                   frequency_weighted));
    return out;
}

}  // namespace nncomp::sampling
