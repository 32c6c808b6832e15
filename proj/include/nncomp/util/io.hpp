#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace nncomp::util {

static_assert(std::endian::native == std::endian::little,
              "binary matrix files are little-endian; big-endian hosts are unsupported");

// Row-major float32 blobs (the on-disk embedding/parameter format).
void write_f32_file(const std::filesystem::path& path, std::span<const float> data);
std::vector<float> read_f32_file(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

// Reads lines from a plain or gzip-compressed file (zlib handles both
// transparently). Strips a trailing '\r' if present.
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path);
    ~LineReader();
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    // false at end of input
    bool next(std::string& line);

private:
    void* gz_ = nullptr;  // gzFile
    std::vector<char> buf_;
    std::size_t pos_ = 0;
    std::size_t len_ = 0;
    bool eof_ = false;
};

}  // namespace nncomp::util
