#include "nncomp/eval/artifacts.hpp"

#include <stdexcept>
#include <string>

namespace nncomp::eval {

namespace {

std::string pair_dirname(vs::ContextAspect c, vs::TimeAspect t) {
    return std::string(vs::context_aspect_name(c)) + "-" + std::string(vs::time_aspect_name(t));
}

std::pair<int, int> pair_key(vs::ContextAspect c, vs::TimeAspect t) {
    return {static_cast<int>(c), static_cast<int>(t)};
}

}  // namespace

std::filesystem::path ArtifactLayout::matrices_dir(vs::ContextAspect c, vs::TimeAspect t) const {
    return root / "matrices" / pair_dirname(c, t);
}

std::filesystem::path ArtifactLayout::matrix_bin(vs::ContextAspect c, vs::TimeAspect t,
                                                 int decade) const {
    const std::string stem =
        decade == vs::kAllDecades ? std::string("all") : std::to_string(decade);
    return matrices_dir(c, t) / ("matrix_" + stem + ".bin");
}

std::filesystem::path ArtifactLayout::embeddings_dir(vs::ContextAspect c, vs::TimeAspect t) const {
    return root / "embeddings" / pair_dirname(c, t);
}

std::filesystem::path ArtifactLayout::dataset_csv(std::string_view corruption,
                                                  std::uint64_t seed_index,
                                                  std::string_view split) const {
    return datasets_dir() / std::string(corruption) /
           ("seed" + std::to_string(seed_index) + "_" + std::string(split) + ".csv");
}

std::vector<int> expected_slices(const corpus::DecadeConfig& decades, vs::TimeAspect t) {
    if (t == vs::TimeAspect::DecadeCentric) return decades.training_decades();
    return {vs::kAllDecades};
}

DiskArtifacts::DiskArtifacts(ArtifactLayout layout, corpus::DecadeConfig decades)
    : layout_(std::move(layout)), decades_(decades) {
    decades_.validate();
}

const corpus::CompoundTable& DiskArtifacts::table() {
    if (!table_) {
        table_ = std::make_unique<corpus::CompoundTable>(
            corpus::CompoundTable::load_tsv(layout_.compounds_tsv(), decades_));
    }
    return *table_;
}

const corpus::CompoundSplits& DiskArtifacts::splits() {
    if (!splits_) {
        splits_ = std::make_unique<corpus::CompoundSplits>(
            corpus::CompoundSplits::load_json(layout_.splits_json()));
    }
    return *splits_;
}

const std::vector<vs::CooccurrenceMatrix>& DiskArtifacts::matrices(vs::ContextAspect c,
                                                                   vs::TimeAspect t) {
    const auto key = pair_key(c, t);
    auto it = matrices_.find(key);
    if (it == matrices_.end()) {
        std::vector<vs::CooccurrenceMatrix> mats;
        for (int decade : expected_slices(decades_, t)) {
            const auto path = layout_.matrix_bin(c, t, decade);
            if (!std::filesystem::exists(path)) {
                throw std::runtime_error("missing matrix artifact: " + path.string() +
                                         " (run the vectors stage first)");
            }
            mats.push_back(vs::CooccurrenceMatrix::load(path));
        }
        it = matrices_.emplace(key, std::move(mats)).first;
    }
    return it->second;
}

const vs::EmbeddingStore& DiskArtifacts::embeddings(vs::ContextAspect c, vs::TimeAspect t) {
    const auto key = pair_key(c, t);
    auto it = embeddings_.find(key);
    if (it == embeddings_.end()) {
        const auto dir = layout_.embeddings_dir(c, t);
        if (!std::filesystem::exists(dir / "manifest.json")) {
            throw std::runtime_error("missing embedding artifact: " + dir.string() +
                                     " (run the vectors stage first)");
        }
        it = embeddings_.emplace(key, vs::EmbeddingStore::load(dir)).first;
    }
    return it->second;
}

void InMemoryArtifacts::set_table(corpus::CompoundTable table) {
    table_ = std::make_unique<corpus::CompoundTable>(std::move(table));
}

void InMemoryArtifacts::set_splits(corpus::CompoundSplits splits) {
    splits_ = std::make_unique<corpus::CompoundSplits>(std::move(splits));
}

void InMemoryArtifacts::set_matrices(vs::ContextAspect c, vs::TimeAspect t,
                                     std::vector<vs::CooccurrenceMatrix> mats) {
    matrices_[pair_key(c, t)] = std::move(mats);
}

void InMemoryArtifacts::set_embeddings(vs::ContextAspect c, vs::TimeAspect t,
                                       vs::EmbeddingStore store) {
    embeddings_.erase(pair_key(c, t));
    embeddings_.emplace(pair_key(c, t), std::move(store));
}

const corpus::CompoundTable& InMemoryArtifacts::table() {
    if (!table_) throw std::logic_error("InMemoryArtifacts: table not set");
    return *table_;
}

const corpus::CompoundSplits& InMemoryArtifacts::splits() {
    if (!splits_) throw std::logic_error("InMemoryArtifacts: splits not set");
    return *splits_;
}

const std::vector<vs::CooccurrenceMatrix>& InMemoryArtifacts::matrices(vs::ContextAspect c,
                                                                       vs::TimeAspect t) {
    auto it = matrices_.find(pair_key(c, t));
    if (it == matrices_.end()) throw std::logic_error("InMemoryArtifacts: matrices not set");
    return it->second;
}

const vs::EmbeddingStore& InMemoryArtifacts::embeddings(vs::ContextAspect c, vs::TimeAspect t) {
    auto it = embeddings_.find(pair_key(c, t));
    if (it == embeddings_.end()) throw std::logic_error("InMemoryArtifacts: embeddings not set");
    return it->second;
}

}  // namespace nncomp::eval
