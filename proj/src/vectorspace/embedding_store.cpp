#include "nncomp/vectorspace/embedding_store.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "nncomp/util/io.hpp"

namespace nncomp::vs {

namespace {

std::string slice_key(const std::string& lexeme, Role role) {
    std::string key;
    key.reserve(lexeme.size() + 1);
    key.push_back(static_cast<char>(role));
    key.append(lexeme);
    return key;
}

std::string slice_file_name(int decade) {
    return decade == kAllDecades ? "emb_all.f32" : "emb_" + std::to_string(decade) + ".f32";
}

}  // namespace

void EmbeddingStore::add_slice(int decade, std::vector<RowKey> keys, std::vector<float> data) {
    if (data.size() != keys.size() * meta_.dims)
        throw std::invalid_argument("embedding slice: data size mismatch");
    Slice slice;
    slice.index.reserve(keys.size());
    for (std::uint32_t i = 0; i < keys.size(); ++i)
        if (!slice.index.emplace(slice_key(keys[i].lexeme, keys[i].role), i).second)
            throw std::invalid_argument("embedding slice: duplicate row key");
    slice.keys = std::move(keys);
    slice.data = std::move(data);
    if (!slices_.emplace(decade, std::move(slice)).second)
        throw std::invalid_argument("embedding slice: duplicate decade");
}

std::vector<int> EmbeddingStore::decades() const {
    std::vector<int> out;
    out.reserve(slices_.size());
    for (const auto& [d, s] : slices_) out.push_back(d);
    std::sort(out.begin(), out.end());
    return out;
}

const std::vector<RowKey>& EmbeddingStore::slice_keys(int decade) const {
    auto it = slices_.find(decade);
    if (it == slices_.end())
        throw std::out_of_range("embedding store: no slice for decade " + std::to_string(decade));
    return it->second.keys;
}

const float* EmbeddingStore::find(const std::string& lexeme, Role role, int decade) const {
    auto it = slices_.find(decade);
    if (it == slices_.end())
        throw std::out_of_range("embedding store: no slice for decade " + std::to_string(decade));
    auto row = it->second.index.find(slice_key(lexeme, role));
    if (row == it->second.index.end()) return nullptr;
    return it->second.data.data() + static_cast<std::size_t>(row->second) * meta_.dims;
}

void EmbeddingStore::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    nlohmann::json manifest;
    manifest["format"] = "nncomp-embeddings-v1";
    manifest["context_aspect"] = context_aspect_name(meta_.context);
    manifest["time_aspect"] = time_aspect_name(meta_.time);
    manifest["dims"] = meta_.dims;
    manifest["weighting"] = weighting_name(meta_.weighting);
    manifest["svd_seed"] = meta_.svd_seed;
    manifest["slices"] = nlohmann::json::array();
    for (int d : decades()) {
        const Slice& slice = slices_.at(d);
        nlohmann::json js;
        js["decade"] = d;
        js["file"] = slice_file_name(d);
        auto rows = nlohmann::json::array();
        for (const RowKey& k : slice.keys)
            rows.push_back(nlohmann::json::array({k.lexeme, role_name(k.role)}));
        js["rows"] = std::move(rows);
        manifest["slices"].push_back(std::move(js));
        util::write_f32_file(dir / slice_file_name(d), slice.data);
    }
    util::write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

EmbeddingStore EmbeddingStore::load(const std::filesystem::path& dir) {
    const auto manifest = nlohmann::json::parse(util::read_text_file(dir / "manifest.json"));
    if (manifest.at("format").get<std::string>() != "nncomp-embeddings-v1")
        throw std::runtime_error("unrecognized embedding store format in " + dir.string());
    EmbeddingStoreMeta meta;
    meta.context = context_aspect_from_name(manifest.at("context_aspect").get<std::string>());
    meta.time = time_aspect_from_name(manifest.at("time_aspect").get<std::string>());
    meta.dims = manifest.at("dims").get<std::size_t>();
    meta.weighting = weighting_from_name(manifest.at("weighting").get<std::string>());
    meta.svd_seed = manifest.at("svd_seed").get<std::uint64_t>();
    EmbeddingStore store(meta);
    for (const auto& js : manifest.at("slices")) {
        std::vector<RowKey> keys;
        for (const auto& row : js.at("rows"))
            keys.push_back({row.at(0).get<std::string>(),
                            role_from_name(row.at(1).get<std::string>())});
        std::vector<float> data = util::read_f32_file(dir / js.at("file").get<std::string>());
        store.add_slice(js.at("decade").get<int>(), std::move(keys), std::move(data));
    }
    return store;
}

EmbeddingSequence embedding_sequence(const EmbeddingStore& store, const std::string& lexeme,
                                     Role role, const std::vector<int>& decades) {
    EmbeddingSequence seq;
    const std::size_t dims = store.dims();
    seq.flat.assign(decades.size() * dims, 0.0f);
    seq.absent.assign(decades.size(), true);
    for (std::size_t i = 0; i < decades.size(); ++i) {
        const float* row = store.find(lexeme, role, decades[i]);
        if (!row) continue;
        std::copy(row, row + dims, seq.flat.begin() + static_cast<std::ptrdiff_t>(i * dims));
        seq.absent[i] = false;
        seq.all_absent = false;
    }
    return seq;
}

}  // namespace nncomp::vs
