#include "nncomp/neural/model.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "nncomp/util/io.hpp"

namespace nncomp::neural {

std::vector<float> encode_constituent(const NnmParams<float>& p, const float* seq) {
    if (!p.uses_lstm()) throw std::logic_error("encode_constituent: model has no encoder");
    LstmCache<float> cache;
    lstm_forward(p.lstm, seq, p.steps, cache);
    return cache.out;
}

void save_nnm(const NnmParams<float>& p, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::json js;
    js["format"] = "nncomp-nnm-v1";
    js["time_aspect"] = vs::time_aspect_name(p.time);
    js["k"] = p.k;
    js["steps"] = p.steps;
    js["hidden"] = p.ffn.hidden;
    js["lstm_hidden"] = p.lstm.hidden;
    util::write_text_file(dir / "manifest.json", js.dump(2) + "\n");
    util::write_f32_file(dir / "ffn_w1.f32", p.ffn.w1);
    util::write_f32_file(dir / "ffn_b1.f32", p.ffn.b1);
    util::write_f32_file(dir / "ffn_w2.f32", p.ffn.w2);
    if (p.uses_lstm()) {
        util::write_f32_file(dir / "lstm_w.f32", p.lstm.w);
        util::write_f32_file(dir / "lstm_b.f32", p.lstm.b);
        util::write_f32_file(dir / "lstm_proj.f32", p.lstm.proj);
    }
}

NnmParams<float> load_nnm(const std::filesystem::path& dir) {
    const auto js = nlohmann::json::parse(util::read_text_file(dir / "manifest.json"));
    if (js.at("format").get<std::string>() != "nncomp-nnm-v1")
        throw std::runtime_error("unrecognized nnm model format in " + dir.string());
    NnmParams<float> p;
    p.time = vs::time_aspect_from_name(js.at("time_aspect").get<std::string>());
    p.k = js.at("k").get<std::size_t>();
    p.steps = js.at("steps").get<std::size_t>();
    p.ffn.resize(2 * p.k, js.at("hidden").get<std::size_t>());
    p.ffn.w1 = util::read_f32_file(dir / "ffn_w1.f32");
    p.ffn.b1 = util::read_f32_file(dir / "ffn_b1.f32");
    p.ffn.w2 = util::read_f32_file(dir / "ffn_w2.f32");
    if (p.ffn.w1.size() != 2 * p.k * p.ffn.hidden || p.ffn.b1.size() != p.ffn.hidden ||
        p.ffn.w2.size() != p.ffn.hidden)
        throw std::runtime_error("nnm model blob shape mismatch in " + dir.string());
    if (p.uses_lstm()) {
        p.lstm.resize(p.k, js.at("lstm_hidden").get<std::size_t>(), p.k);
        p.lstm.w = util::read_f32_file(dir / "lstm_w.f32");
        p.lstm.b = util::read_f32_file(dir / "lstm_b.f32");
        p.lstm.proj = util::read_f32_file(dir / "lstm_proj.f32");
        if (p.lstm.w.size() != 4 * p.lstm.hidden * (p.k + p.lstm.hidden) ||
            p.lstm.b.size() != 4 * p.lstm.hidden || p.lstm.proj.size() != p.k * p.lstm.hidden)
            throw std::runtime_error("nnm encoder blob shape mismatch in " + dir.string());
    }
    return p;
}

}  // namespace nncomp::neural
