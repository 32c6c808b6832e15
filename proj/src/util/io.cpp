#include "nncomp/util/io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nncomp::util {

void write_f32_file(const std::filesystem::path& path, std::span<const float> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(float)));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<float> read_f32_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes % sizeof(float) != 0)
        throw std::runtime_error("file size not a multiple of 4: " + path.string());
    std::vector<float> data(bytes / sizeof(float));
    in.seekg(0);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw std::runtime_error("read failed: " + path.string());
    return data;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

LineReader::LineReader(const std::filesystem::path& path) : buf_(1 << 16) {
    gz_ = gzopen(path.string().c_str(), "rb");
    if (!gz_) throw std::runtime_error("cannot open: " + path.string());
}

LineReader::~LineReader() {
    if (gz_) gzclose(static_cast<gzFile>(gz_));
}

bool LineReader::next(std::string& line) {
    line.clear();
    for (;;) {
        if (pos_ == len_) {
            if (eof_) break;
            int n = gzread(static_cast<gzFile>(gz_), buf_.data(), static_cast<unsigned>(buf_.size()));
            if (n < 0) throw std::runtime_error("gzread failed");
            if (n == 0) {
                eof_ = true;
                break;
            }
            pos_ = 0;
            len_ = static_cast<std::size_t>(n);
        }
        const char* start = buf_.data() + pos_;
        const char* nl = static_cast<const char*>(std::memchr(start, '\n', len_ - pos_));
        if (nl) {
            line.append(start, static_cast<std::size_t>(nl - start));
            pos_ += static_cast<std::size_t>(nl - start) + 1;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return true;
        }
        line.append(start, len_ - pos_);
        pos_ = len_;
    }
    if (line.empty()) return false;
    if (line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace nncomp::util
