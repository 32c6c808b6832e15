#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nncomp/corpus/compounds.hpp"
#include "nncomp/corpus/decades.hpp"
#include "nncomp/corpus/splits.hpp"
#include "nncomp/corpus/vocabulary.hpp"
#include "nncomp/vectorspace/cooccurrence.hpp"
#include "nncomp/vectorspace/embedding_store.hpp"

namespace nncomp::eval {

// Canonical on-disk layout under one output root. Every stage writes into
// its own subdirectory so reruns are idempotent and diffable.
struct ArtifactLayout {
    std::filesystem::path root;

    std::filesystem::path corpus_dir() const { return root / "corpus"; }
    std::filesystem::path compounds_tsv() const { return corpus_dir() / "compounds.tsv"; }
    std::filesystem::path vocabulary_tsv() const { return corpus_dir() / "vocabulary.tsv"; }
    std::filesystem::path splits_json() const { return corpus_dir() / "splits.json"; }

    // one directory per (context, time) pair, e.g. "compound-centric-decade-centric"
    std::filesystem::path matrices_dir(vs::ContextAspect c, vs::TimeAspect t) const;
    std::filesystem::path matrix_bin(vs::ContextAspect c, vs::TimeAspect t, int decade) const;
    std::filesystem::path embeddings_dir(vs::ContextAspect c, vs::TimeAspect t) const;

    std::filesystem::path datasets_dir() const { return root / "datasets"; }
    std::filesystem::path dataset_csv(std::string_view corruption, std::uint64_t seed_index,
                                      std::string_view split) const;

    std::filesystem::path reports_dir() const { return root / "reports"; }
    std::filesystem::path report_csv() const { return reports_dir() / "report.csv"; }
    std::filesystem::path summary_csv() const { return reports_dir() / "summary.csv"; }
    std::filesystem::path summary_txt() const { return reports_dir() / "summary.txt"; }
    std::filesystem::path annotations_csv() const { return reports_dir() / "annotations.csv"; }

    std::filesystem::path config_snapshot() const { return root / "config.resolved"; }
};

// Read access to the pipeline artifacts a grid run needs. Matrices and
// embeddings are keyed by the (context, time) pair they were built under.
class ArtifactProvider {
public:
    virtual ~ArtifactProvider() = default;

    virtual const corpus::DecadeConfig& decades() const = 0;
    virtual const corpus::CompoundTable& table() = 0;
    virtual const corpus::CompoundSplits& splits() = 0;

    // decade order: one matrix per training decade (DecadeCentric) or a
    // single kAllDecades matrix (DecadeAgnostic)
    virtual const std::vector<vs::CooccurrenceMatrix>& matrices(vs::ContextAspect c,
                                                                vs::TimeAspect t) = 0;
    virtual const vs::EmbeddingStore& embeddings(vs::ContextAspect c, vs::TimeAspect t) = 0;
};

// Lazily loads artifacts from an ArtifactLayout, caching each piece.
class DiskArtifacts final : public ArtifactProvider {
public:
    DiskArtifacts(ArtifactLayout layout, corpus::DecadeConfig decades);

    const corpus::DecadeConfig& decades() const override { return decades_; }
    const corpus::CompoundTable& table() override;
    const corpus::CompoundSplits& splits() override;
    const std::vector<vs::CooccurrenceMatrix>& matrices(vs::ContextAspect c,
                                                        vs::TimeAspect t) override;
    const vs::EmbeddingStore& embeddings(vs::ContextAspect c, vs::TimeAspect t) override;

    const ArtifactLayout& layout() const { return layout_; }

private:
    ArtifactLayout layout_;
    corpus::DecadeConfig decades_;
    std::unique_ptr<corpus::CompoundTable> table_;
    std::unique_ptr<corpus::CompoundSplits> splits_;
    std::map<std::pair<int, int>, std::vector<vs::CooccurrenceMatrix>> matrices_;
    std::map<std::pair<int, int>, vs::EmbeddingStore> embeddings_;
};

// Holds everything in memory; used by tests and by single-process runs
// that build artifacts and evaluate without touching disk.
class InMemoryArtifacts final : public ArtifactProvider {
public:
    explicit InMemoryArtifacts(corpus::DecadeConfig decades) : decades_(decades) {}

    void set_table(corpus::CompoundTable table);
    void set_splits(corpus::CompoundSplits splits);
    void set_matrices(vs::ContextAspect c, vs::TimeAspect t,
                      std::vector<vs::CooccurrenceMatrix> mats);
    void set_embeddings(vs::ContextAspect c, vs::TimeAspect t, vs::EmbeddingStore store);

    const corpus::DecadeConfig& decades() const override { return decades_; }
    const corpus::CompoundTable& table() override;
    const corpus::CompoundSplits& splits() override;
    const std::vector<vs::CooccurrenceMatrix>& matrices(vs::ContextAspect c,
                                                        vs::TimeAspect t) override;
    const vs::EmbeddingStore& embeddings(vs::ContextAspect c, vs::TimeAspect t) override;

private:
    corpus::DecadeConfig decades_;
    std::unique_ptr<corpus::CompoundTable> table_;
    std::unique_ptr<corpus::CompoundSplits> splits_;
    std::map<std::pair<int, int>, std::vector<vs::CooccurrenceMatrix>> matrices_;
    std::map<std::pair<int, int>, vs::EmbeddingStore> embeddings_;
};

// Expected matrix slice decades for a time aspect: the training decades,
// or the single pooled pseudo-decade.
std::vector<int> expected_slices(const corpus::DecadeConfig& decades, vs::TimeAspect t);

}  // namespace nncomp::eval
