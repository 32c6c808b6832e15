#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nncomp/corpus/decades.hpp"
#include "nncomp/corpus/ngram.hpp"
#include "nncomp/corpus/vocabulary.hpp"
#include "nncomp/vectorspace/contexts.hpp"
#include "nncomp/vectorspace/roles.hpp"

namespace nncomp::vs {

// Decade id of the single pooled matrix built under DecadeAgnostic.
inline constexpr int kAllDecades = -1;

struct RowKey {
    std::string lexeme;
    Role role = Role::StandaloneWord;

    auto operator<=>(const RowKey&) const = default;
};

// Finalized sparse target-by-context count matrix in CSR form. Rows are
// sorted by (role, lexeme); columns within a row are sorted ascending.
// Construction goes through CooccurrenceBuilder, so layout is identical
// regardless of accumulation order.
class CooccurrenceMatrix {
public:
    CooccurrenceMatrix() = default;

    int decade() const { return decade_; }
    std::size_t n_rows() const { return rows_.size(); }
    std::uint32_t n_cols() const { return n_cols_; }
    std::size_t nnz() const { return col_.size(); }

    const std::vector<RowKey>& rows() const { return rows_; }
    std::optional<std::uint32_t> row_of(const std::string& lexeme, Role role) const;

    std::span<const std::uint32_t> row_cols(std::uint32_t r) const;
    std::span<const double> row_vals(std::uint32_t r) const;

    // 0 when the cell (or the whole row) is absent
    double cell(const std::string& lexeme, Role role, std::uint32_t col) const;

    std::vector<double> row_sums() const;
    std::vector<double> col_sums() const;
    double total() const;

    void save(const std::filesystem::path& path) const;
    static CooccurrenceMatrix load(const std::filesystem::path& path);

private:
    friend class CooccurrenceBuilder;

    int decade_ = kAllDecades;
    std::uint32_t n_cols_ = 0;
    std::vector<RowKey> rows_;
    std::unordered_map<std::string, std::uint32_t> row_index_;  // key: role byte + lexeme
    std::vector<std::uint64_t> row_ptr_;
    std::vector<std::uint32_t> col_;
    std::vector<double> val_;

    void rebuild_index();
};

// Accumulates (target, context) counts for one matrix slice; mergeable
// across shards.
class CooccurrenceBuilder {
public:
    void add(const std::string& lexeme, Role role, std::uint32_t column, std::uint64_t weight);
    void add(const ContextEvent& ev) { add(ev.lexeme, ev.role, ev.column, ev.weight); }
    void merge(const CooccurrenceBuilder& other);

    bool empty() const { return rows_.empty(); }

    CooccurrenceMatrix finalize(std::uint32_t n_cols, int decade) const;

private:
    struct RowCells {
        RowKey key;
        std::unordered_map<std::uint32_t, std::uint64_t> cells;
    };
    std::unordered_map<std::string, RowCells> rows_;  // key: role byte + lexeme
};

// Streams records into the per-decade (DecadeCentric) or pooled
// (DecadeAgnostic) matrix slices for one context aspect.  Only records in
// training decades contribute; later material is counted and dropped, so
// the matrices cannot leak validation- or test-era evidence.
class MatrixSetBuilder {
public:
    MatrixSetBuilder(ContextAspect context, TimeAspect time, const corpus::DecadeConfig& decades,
                     const corpus::ContextVocabulary& vocab);

    void add_record(const corpus::NgramRecord& rec);

    std::uint64_t records_outside_training() const { return outside_training_; }

    // DecadeCentric: one matrix per training decade (every decade present,
    // possibly empty). DecadeAgnostic: a single kAllDecades matrix.
    std::vector<CooccurrenceMatrix> finalize() const;

private:
    ContextAspect context_;
    TimeAspect time_;
    corpus::DecadeConfig decades_;
    const corpus::ContextVocabulary* vocab_;
    std::map<int, CooccurrenceBuilder> builders_;
    std::uint64_t outside_training_ = 0;
};

}  // namespace nncomp::vs
