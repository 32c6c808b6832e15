#include "nncomp/vectorspace/cooccurrence.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nncomp::vs {

namespace {

std::string row_hash_key(const std::string& lexeme, Role role) {
    std::string key;
    key.reserve(lexeme.size() + 1);
    key.push_back(static_cast<char>(role));
    key.append(lexeme);
    return key;
}

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
}

constexpr std::uint32_t kMagic = 0x4d434e4eu;  // "NNCM"

}  // namespace

std::optional<std::uint32_t> CooccurrenceMatrix::row_of(const std::string& lexeme,
                                                        Role role) const {
    auto it = row_index_.find(row_hash_key(lexeme, role));
    if (it == row_index_.end()) return std::nullopt;
    return it->second;
}

std::span<const std::uint32_t> CooccurrenceMatrix::row_cols(std::uint32_t r) const {
    return {col_.data() + row_ptr_[r], col_.data() + row_ptr_[r + 1]};
}

std::span<const double> CooccurrenceMatrix::row_vals(std::uint32_t r) const {
    return {val_.data() + row_ptr_[r], val_.data() + row_ptr_[r + 1]};
}

double CooccurrenceMatrix::cell(const std::string& lexeme, Role role, std::uint32_t col) const {
    auto r = row_of(lexeme, role);
    if (!r) return 0.0;
    auto cols = row_cols(*r);
    auto it = std::lower_bound(cols.begin(), cols.end(), col);
    if (it == cols.end() || *it != col) return 0.0;
    return row_vals(*r)[static_cast<std::size_t>(it - cols.begin())];
}

std::vector<double> CooccurrenceMatrix::row_sums() const {
    std::vector<double> sums(n_rows(), 0.0);
    for (std::uint32_t r = 0; r < n_rows(); ++r) {
        double s = 0.0;
        for (double v : row_vals(r)) s += v;
        sums[r] = s;
    }
    return sums;
}

std::vector<double> CooccurrenceMatrix::col_sums() const {
    std::vector<double> sums(n_cols_, 0.0);
    for (std::size_t i = 0; i < col_.size(); ++i) sums[col_[i]] += val_[i];
    return sums;
}

double CooccurrenceMatrix::total() const {
    double s = 0.0;
    for (double v : val_) s += v;
    return s;
}

void CooccurrenceMatrix::rebuild_index() {
    row_index_.clear();
    row_index_.reserve(rows_.size());
    for (std::uint32_t r = 0; r < rows_.size(); ++r)
        row_index_.emplace(row_hash_key(rows_[r].lexeme, rows_[r].role), r);
}

void CooccurrenceMatrix::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    write_pod(out, kMagic);
    write_pod(out, decade_);
    write_pod(out, n_cols_);
    write_pod(out, static_cast<std::uint64_t>(rows_.size()));
    write_pod(out, static_cast<std::uint64_t>(col_.size()));
    for (const RowKey& k : rows_) {
        write_pod(out, static_cast<std::uint8_t>(k.role));
        write_pod(out, static_cast<std::uint32_t>(k.lexeme.size()));
        out.write(k.lexeme.data(), static_cast<std::streamsize>(k.lexeme.size()));
    }
    out.write(reinterpret_cast<const char*>(row_ptr_.data()),
              static_cast<std::streamsize>(row_ptr_.size() * sizeof(std::uint64_t)));
    out.write(reinterpret_cast<const char*>(col_.data()),
              static_cast<std::streamsize>(col_.size() * sizeof(std::uint32_t)));
    out.write(reinterpret_cast<const char*>(val_.data()),
              static_cast<std::streamsize>(val_.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

CooccurrenceMatrix CooccurrenceMatrix::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::uint32_t magic = 0;
    read_pod(in, magic);
    if (magic != kMagic) throw std::runtime_error("not a co-occurrence matrix: " + path.string());
    CooccurrenceMatrix m;
    std::uint64_t n_rows = 0, nnz = 0;
    read_pod(in, m.decade_);
    read_pod(in, m.n_cols_);
    read_pod(in, n_rows);
    read_pod(in, nnz);
    m.rows_.resize(n_rows);
    for (RowKey& k : m.rows_) {
        std::uint8_t role = 0;
        std::uint32_t len = 0;
        read_pod(in, role);
        read_pod(in, len);
        k.role = static_cast<Role>(role);
        k.lexeme.resize(len);
        in.read(k.lexeme.data(), len);
    }
    m.row_ptr_.resize(n_rows + 1);
    m.col_.resize(nnz);
    m.val_.resize(nnz);
    in.read(reinterpret_cast<char*>(m.row_ptr_.data()),
            static_cast<std::streamsize>(m.row_ptr_.size() * sizeof(std::uint64_t)));
    in.read(reinterpret_cast<char*>(m.col_.data()),
            static_cast<std::streamsize>(m.col_.size() * sizeof(std::uint32_t)));
    in.read(reinterpret_cast<char*>(m.val_.data()),
            static_cast<std::streamsize>(m.val_.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated co-occurrence matrix: " + path.string());
    m.rebuild_index();
    return m;
}

void CooccurrenceBuilder::add(const std::string& lexeme, Role role, std::uint32_t column,
                              std::uint64_t weight) {
    auto [it, inserted] = rows_.try_emplace(row_hash_key(lexeme, role));
    if (inserted) it->second.key = {lexeme, role};
    it->second.cells[column] += weight;
}

void CooccurrenceBuilder::merge(const CooccurrenceBuilder& other) {
    for (const auto& [hash, row] : other.rows_) {
        auto [it, inserted] = rows_.try_emplace(hash);
        if (inserted) it->second.key = row.key;
        for (const auto& [col, w] : row.cells) it->second.cells[col] += w;
    }
}

CooccurrenceMatrix CooccurrenceBuilder::finalize(std::uint32_t n_cols, int decade) const {
    CooccurrenceMatrix m;
    m.decade_ = decade;
    m.n_cols_ = n_cols;
    std::vector<const RowCells*> ordered;
    ordered.reserve(rows_.size());
    for (const auto& [hash, row] : rows_) ordered.push_back(&row);
    std::sort(ordered.begin(), ordered.end(),
              [](const RowCells* a, const RowCells* b) { return a->key < b->key; });

    m.rows_.reserve(ordered.size());
    m.row_ptr_.reserve(ordered.size() + 1);
    m.row_ptr_.push_back(0);
    std::vector<std::pair<std::uint32_t, std::uint64_t>> cells;
    for (const RowCells* row : ordered) {
        m.rows_.push_back(row->key);
        cells.assign(row->cells.begin(), row->cells.end());
        std::sort(cells.begin(), cells.end());
        for (const auto& [col, w] : cells) {
            if (col >= n_cols) throw std::logic_error("context column out of range");
            m.col_.push_back(col);
            m.val_.push_back(static_cast<double>(w));
        }
        m.row_ptr_.push_back(m.col_.size());
    }
    m.rebuild_index();
    return m;
}

MatrixSetBuilder::MatrixSetBuilder(ContextAspect context, TimeAspect time,
                                   const corpus::DecadeConfig& decades,
                                   const corpus::ContextVocabulary& vocab)
    : context_(context), time_(time), decades_(decades), vocab_(&vocab) {
    decades_.validate();
    if (time_ == TimeAspect::DecadeCentric) {
        for (int d : decades_.training_decades()) builders_[d];
    } else {
        builders_[kAllDecades];
    }
}

void MatrixSetBuilder::add_record(const corpus::NgramRecord& rec) {
    if (!decades_.year_in_range(rec.year)) {
        ++outside_training_;
        return;
    }
    const int decade = corpus::DecadeConfig::decade_of_year(rec.year);
    if (!decades_.is_training_decade(decade)) {
        ++outside_training_;
        return;
    }
    const int slot = time_ == TimeAspect::DecadeCentric ? decade : kAllDecades;
    CooccurrenceBuilder& b = builders_.at(slot);
    for (const ContextEvent& ev : collect_contexts(rec, *vocab_, context_)) b.add(ev);
}

std::vector<CooccurrenceMatrix> MatrixSetBuilder::finalize() const {
    std::vector<CooccurrenceMatrix> out;
    out.reserve(builders_.size());
    const auto n_cols = static_cast<std::uint32_t>(vocab_->size());
    for (const auto& [decade, builder] : builders_) out.push_back(builder.finalize(n_cols, decade));
    return out;
}

}  // namespace nncomp::vs
