#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "nncomp/vectorspace/cooccurrence.hpp"
#include "nncomp/vectorspace/svd.hpp"

namespace nncomp::vs {

struct EmbeddingStoreMeta {
    ContextAspect context = ContextAspect::CompoundCentric;
    TimeAspect time = TimeAspect::DecadeCentric;
    std::size_t dims = 300;
    Weighting weighting = Weighting::Log1p;
    std::uint64_t svd_seed = 0;
};

// Dense target embeddings per matrix slice (one slice per training decade
// under DecadeCentric, a single kAllDecades slice otherwise). Rows keep the
// (lexeme, role) keys of the source matrix; data is row-major float32, the
// same layout as the on-disk files.
class EmbeddingStore {
public:
    EmbeddingStore() = default;
    explicit EmbeddingStore(EmbeddingStoreMeta meta) : meta_(meta) {}

    void add_slice(int decade, std::vector<RowKey> keys, std::vector<float> data);

    const EmbeddingStoreMeta& meta() const { return meta_; }
    std::size_t dims() const { return meta_.dims; }

    // slice decades in ascending order ({kAllDecades} for pooled stores)
    std::vector<int> decades() const;
    bool has_slice(int decade) const { return slices_.contains(decade); }
    const std::vector<RowKey>& slice_keys(int decade) const;

    // nullptr when the slice lacks that (lexeme, role) row; throws when the
    // slice itself does not exist (absent row and absent slice are different
    // conditions and callers must not confuse them).
    const float* find(const std::string& lexeme, Role role, int decade) const;

    void save(const std::filesystem::path& dir) const;
    static EmbeddingStore load(const std::filesystem::path& dir);

private:
    struct Slice {
        std::vector<RowKey> keys;
        std::unordered_map<std::string, std::uint32_t> index;  // role byte + lexeme
        std::vector<float> data;                               // keys.size() x dims
    };

    EmbeddingStoreMeta meta_;
    std::unordered_map<int, Slice> slices_;
};

// Fixed-length per-decade input sequence for one target: dims floats per
// requested decade, zero-filled where the row is absent.
struct EmbeddingSequence {
    std::vector<float> flat;   // decades.size() * dims
    std::vector<bool> absent;  // parallel to decades
    bool all_absent = true;
};

EmbeddingSequence embedding_sequence(const EmbeddingStore& store, const std::string& lexeme,
                                     Role role, const std::vector<int>& decades);

}  // namespace nncomp::vs
