#include "nncomp/eval/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nncomp::eval {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

const CellResult* find_cell(const std::vector<CellResult>& results, Model m, vs::ContextAspect c,
                            vs::TimeAspect t, sampling::Corruption cor) {
    for (const auto& r : results) {
        if (r.cell.model == m && r.cell.context == c && r.cell.time == t &&
            r.cell.corruption == cor) {
            return &r;
        }
    }
    return nullptr;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);  // fixed newlines on every platform
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace

std::string format_mean_std(double mean, double stddev) {
    return fmt("%.2f", mean * 100.0) + " ± " + fmt("%.2f", stddev * 100.0);
}

void write_report_csv(const std::filesystem::path& path, const std::vector<CellResult>& results) {
    auto out = open_out(path);
    out << "model,context,time,corruption,seed,accuracy\n";
    for (const auto& cell : results) {
        for (const auto& s : cell.seeds) {
            out << model_name(cell.cell.model) << ',' << vs::context_aspect_name(cell.cell.context)
                << ',' << vs::time_aspect_name(cell.cell.time) << ','
                << sampling::corruption_name(cell.cell.corruption) << ',' << s.seed << ','
                << fmt("%.17g", s.accuracy) << '\n';
        }
    }
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<CellResult>& results) {
    auto out = open_out(path);
    out << "model,context,time,corruption,mean,std\n";
    for (const auto& cell : results) {
        out << model_name(cell.cell.model) << ',' << vs::context_aspect_name(cell.cell.context)
            << ',' << vs::time_aspect_name(cell.cell.time) << ','
            << sampling::corruption_name(cell.cell.corruption) << ',' << fmt("%.2f", cell.mean * 100.0)
            << ',' << fmt("%.2f", cell.stddev * 100.0) << '\n';
    }
}

std::string render_summary_table(const std::vector<CellResult>& results) {
    std::ostringstream out;
    const auto pad = [](const std::string& s, std::size_t w) {
        std::string r = s;
        // the ± glyph is two bytes but one column
        std::size_t cols = r.size() - (r.find("±") != std::string::npos ? 1 : 0);
        while (cols++ < w) r += ' ';
        return r;
    };
    for (auto time : {vs::TimeAspect::DecadeCentric, vs::TimeAspect::DecadeAgnostic}) {
        out << "== " << vs::time_aspect_name(time) << " ==\n";
        out << pad("Model", 8);
        for (auto context :
             {vs::ContextAspect::CompoundCentric, vs::ContextAspect::CompoundAgnostic}) {
            for (auto cor :
                 {sampling::Corruption::CorruptHead, sampling::Corruption::CorruptModifier}) {
                out << pad(std::string(vs::context_aspect_name(context)) + "/" +
                               std::string(sampling::corruption_name(cor)),
                           34);
            }
        }
        out << '\n';
        for (auto model : {Model::Dfm, Model::Dsm, Model::Nnm}) {
            out << pad(std::string(model_name(model)), 8);
            for (auto context :
                 {vs::ContextAspect::CompoundCentric, vs::ContextAspect::CompoundAgnostic}) {
                for (auto cor :
                     {sampling::Corruption::CorruptHead, sampling::Corruption::CorruptModifier}) {
                    const auto* cell = find_cell(results, model, context, time, cor);
                    out << pad(cell ? format_mean_std(cell->mean, cell->stddev) : "-", 34);
                }
            }
            out << '\n';
        }
        out << '\n';
    }
    return out.str();
}

std::vector<ReportRow> load_report_rows(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "model,context,time,corruption,seed,accuracy") {
        throw std::runtime_error("bad report header in " + path.string());
    }
    std::vector<ReportRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        ReportRow r;
        std::string seed, acc;
        if (!std::getline(ss, r.model, ',') || !std::getline(ss, r.context, ',') ||
            !std::getline(ss, r.time, ',') || !std::getline(ss, r.corruption, ',') ||
            !std::getline(ss, seed, ',') || !std::getline(ss, acc)) {
            throw std::runtime_error("bad report row: " + line);
        }
        r.seed = std::stoull(seed);
        r.accuracy = std::stod(acc);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace nncomp::eval
