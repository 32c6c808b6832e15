// nncomp: diachronic noun-compound plausibility pipeline.
//
// Subcommands run one stage each over a shared output root:
//   synth-corpus -> ingest -> vectors -> evaluate -> generate -> export-annotations
//
// Defaults follow the reference setup (50k context vocabulary, 300-dim
// SVD, count thresholds of 3, 10 sampling seeds). A flat key=value config
// file provides site defaults; command-line flags override it.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "nncomp/corpus/ngram.hpp"
#include "nncomp/corpus/vocabulary.hpp"
#include "nncomp/eval/annotation.hpp"
#include "nncomp/eval/artifacts.hpp"
#include "nncomp/eval/experiment.hpp"
#include "nncomp/eval/report.hpp"
#include "nncomp/synth/generator.hpp"
#include "nncomp/util/io.hpp"
#include "nncomp/util/rng.hpp"
#include "nncomp/vectorspace/svd.hpp"

namespace fs = std::filesystem;
using namespace nncomp;

namespace {

struct Settings {
    std::string out;  // output root: --out > config > $NNCOMP_OUT > ./out
    std::string unigrams, fivegrams;

    int first_year = 1800, last_year = 2009;
    int first_train_decade = 1800, last_train_decade = 1980;
    int validation_decade = 1990, test_decade = 2000;

    std::size_t vocab_cap = 50000;
    std::uint64_t min_train_count = 3, min_novel_count = 3;

    std::size_t svd_k = 300;
    std::string svd_weighting = "log1p";
    std::uint64_t svd_seed = 97;
    std::size_t svd_oversampling = 10;
    int svd_power_iterations = 2;

    std::size_t n_seeds = 10;
    std::uint64_t base_seed = 7, model_seed = 11;
    bool frequency_weighted = false;

    double gbdt_learning_rate = 0.1;
    int gbdt_max_depth = 3, gbdt_n_estimators = 100;
    double gbdt_min_child_weight = 6.0, gbdt_subsample = 0.5;
    double gbdt_gamma = 0.0, gbdt_l1_alpha = 0.05, gbdt_l2_lambda = 1.0;
    bool dfm_include_std = false;

    std::size_t nnm_hidden = 300, lstm_hidden = 300;
    int nnm_epochs = 50;
    std::size_t nnm_batch_size = 100;
    std::string lr_grid = "0.1,0.03,0.01,0.003";
    bool margin_loss = false;

    std::size_t top_n = 250;
    std::size_t budget = 2'000'000;
    std::size_t jobs = 0;  // 0 = available cores

    corpus::DecadeConfig decades() const {
        corpus::DecadeConfig d;
        d.first_year = first_year;
        d.last_year = last_year;
        d.first_train_decade = first_train_decade;
        d.last_train_decade = last_train_decade;
        d.validation_decade = validation_decade;
        d.test_decade = test_decade;
        d.validate();
        return d;
    }

    eval::HarnessConfig harness() const {
        eval::HarnessConfig h;
        h.decades = decades();
        h.n_seeds = n_seeds;
        h.base_seed = base_seed;
        h.model_seed = model_seed;
        h.frequency_weighted_negatives = frequency_weighted;
        h.gbdt.learning_rate = gbdt_learning_rate;
        h.gbdt.max_depth = gbdt_max_depth;
        h.gbdt.n_estimators = gbdt_n_estimators;
        h.gbdt.min_child_weight = gbdt_min_child_weight;
        h.gbdt.subsample = gbdt_subsample;
        h.gbdt.gamma = gbdt_gamma;
        h.gbdt.l1_alpha = gbdt_l1_alpha;
        h.gbdt.l2_lambda = gbdt_l2_lambda;
        h.nnm_arch.hidden = nnm_hidden;
        h.nnm_arch.lstm_hidden = lstm_hidden;
        h.nnm_train.epochs = nnm_epochs;
        h.nnm_train.batch_size = nnm_batch_size;
        h.nnm_train.margin_loss = margin_loss;
        h.lr_grid.clear();
        std::stringstream ss(lr_grid);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) h.lr_grid.push_back(std::stod(item));
        }
        if (h.lr_grid.empty()) throw std::invalid_argument("empty lr-grid");
        h.dfm_include_std = dfm_include_std;
        return h;
    }

    std::map<std::string, std::string> snapshot() const {
        std::map<std::string, std::string> kv;
        kv["out"] = out;
        kv["unigrams"] = unigrams;
        kv["fivegrams"] = fivegrams;
        kv["first-year"] = std::to_string(first_year);
        kv["last-year"] = std::to_string(last_year);
        kv["first-train-decade"] = std::to_string(first_train_decade);
        kv["last-train-decade"] = std::to_string(last_train_decade);
        kv["validation-decade"] = std::to_string(validation_decade);
        kv["test-decade"] = std::to_string(test_decade);
        kv["vocab-cap"] = std::to_string(vocab_cap);
        kv["min-train-count"] = std::to_string(min_train_count);
        kv["min-novel-count"] = std::to_string(min_novel_count);
        kv["svd-k"] = std::to_string(svd_k);
        kv["svd-weighting"] = svd_weighting;
        kv["svd-seed"] = std::to_string(svd_seed);
        kv["svd-oversampling"] = std::to_string(svd_oversampling);
        kv["svd-power-iterations"] = std::to_string(svd_power_iterations);
        kv["n-seeds"] = std::to_string(n_seeds);
        kv["base-seed"] = std::to_string(base_seed);
        kv["model-seed"] = std::to_string(model_seed);
        kv["frequency-weighted"] = frequency_weighted ? "1" : "0";
        kv["gbdt-learning-rate"] = std::to_string(gbdt_learning_rate);
        kv["gbdt-max-depth"] = std::to_string(gbdt_max_depth);
        kv["gbdt-n-estimators"] = std::to_string(gbdt_n_estimators);
        kv["gbdt-min-child-weight"] = std::to_string(gbdt_min_child_weight);
        kv["gbdt-subsample"] = std::to_string(gbdt_subsample);
        kv["gbdt-gamma"] = std::to_string(gbdt_gamma);
        kv["gbdt-l1-alpha"] = std::to_string(gbdt_l1_alpha);
        kv["gbdt-l2-lambda"] = std::to_string(gbdt_l2_lambda);
        kv["dfm-include-std"] = dfm_include_std ? "1" : "0";
        kv["nnm-hidden"] = std::to_string(nnm_hidden);
        kv["lstm-hidden"] = std::to_string(lstm_hidden);
        kv["nnm-epochs"] = std::to_string(nnm_epochs);
        kv["nnm-batch-size"] = std::to_string(nnm_batch_size);
        kv["lr-grid"] = lr_grid;
        kv["margin-loss"] = margin_loss ? "1" : "0";
        kv["top"] = std::to_string(top_n);
        kv["budget"] = std::to_string(budget);
        kv["jobs"] = std::to_string(jobs);
        return kv;
    }
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config line is not key = value: " + line);
        }
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

void apply_config(Settings& s, const std::map<std::string, std::string>& kv) {
    auto str = [&](const char* key, std::string& field) {
        if (auto it = kv.find(key); it != kv.end()) field = it->second;
    };
    auto num = [&](const char* key, auto& field) {
        if (auto it = kv.find(key); it != kv.end()) {
            field = static_cast<std::decay_t<decltype(field)>>(std::stod(it->second));
        }
    };
    auto flag = [&](const char* key, bool& field) {
        if (auto it = kv.find(key); it != kv.end()) {
            field = it->second == "1" || it->second == "true" || it->second == "yes";
        }
    };
    str("out", s.out);
    str("unigrams", s.unigrams);
    str("fivegrams", s.fivegrams);
    num("first-year", s.first_year);
    num("last-year", s.last_year);
    num("first-train-decade", s.first_train_decade);
    num("last-train-decade", s.last_train_decade);
    num("validation-decade", s.validation_decade);
    num("test-decade", s.test_decade);
    num("vocab-cap", s.vocab_cap);
    num("min-train-count", s.min_train_count);
    num("min-novel-count", s.min_novel_count);
    num("svd-k", s.svd_k);
    str("svd-weighting", s.svd_weighting);
    num("svd-seed", s.svd_seed);
    num("svd-oversampling", s.svd_oversampling);
    num("svd-power-iterations", s.svd_power_iterations);
    num("n-seeds", s.n_seeds);
    num("base-seed", s.base_seed);
    num("model-seed", s.model_seed);
    flag("frequency-weighted", s.frequency_weighted);
    num("gbdt-learning-rate", s.gbdt_learning_rate);
    num("gbdt-max-depth", s.gbdt_max_depth);
    num("gbdt-n-estimators", s.gbdt_n_estimators);
    num("gbdt-min-child-weight", s.gbdt_min_child_weight);
    num("gbdt-subsample", s.gbdt_subsample);
    num("gbdt-gamma", s.gbdt_gamma);
    num("gbdt-l1-alpha", s.gbdt_l1_alpha);
    num("gbdt-l2-lambda", s.gbdt_l2_lambda);
    flag("dfm-include-std", s.dfm_include_std);
    num("nnm-hidden", s.nnm_hidden);
    num("lstm-hidden", s.lstm_hidden);
    num("nnm-epochs", s.nnm_epochs);
    num("nnm-batch-size", s.nnm_batch_size);
    str("lr-grid", s.lr_grid);
    flag("margin-loss", s.margin_loss);
    num("top", s.top_n);
    num("budget", s.budget);
    num("jobs", s.jobs);
}

void write_snapshot(const Settings& s) {
    const fs::path root(s.out);
    fs::create_directories(root);
    const eval::ArtifactLayout layout{root};
    std::ofstream out(layout.config_snapshot(), std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + layout.config_snapshot().string());
    for (const auto& [k, v] : s.snapshot()) out << k << " = " << v << '\n';
}

std::vector<fs::path> shard_files(const std::string& spec, const char* what) {
    if (spec.empty()) throw std::runtime_error(std::string("no ") + what + " path configured");
    const fs::path p(spec);
    if (fs::is_regular_file(p)) return {p};
    if (!fs::is_directory(p)) {
        throw std::runtime_error(std::string("unreadable ") + what + " path: " + spec);
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(p)) {
        if (!e.is_regular_file()) continue;
        const auto ext = e.path().extension().string();
        if (ext == ".txt" || ext == ".gz" || ext == ".tsv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error(std::string("no ") + what + " shards in " + spec);
    return files;
}

std::vector<std::pair<vs::ContextAspect, vs::TimeAspect>> aspect_selection(
    const std::string& context, const std::string& time) {
    std::vector<vs::ContextAspect> cs;
    std::vector<vs::TimeAspect> ts;
    if (context == "all") {
        cs = {vs::ContextAspect::CompoundCentric, vs::ContextAspect::CompoundAgnostic};
    } else {
        cs = {vs::context_aspect_from_name(context)};
    }
    if (time == "all") {
        ts = {vs::TimeAspect::DecadeCentric, vs::TimeAspect::DecadeAgnostic};
    } else {
        ts = {vs::time_aspect_from_name(time)};
    }
    std::vector<std::pair<vs::ContextAspect, vs::TimeAspect>> out;
    for (auto c : cs)
        for (auto t : ts) out.emplace_back(c, t);
    return out;
}

sampling::Corruption corruption_from_flag(const std::string& name) {
    if (name == "head") return sampling::Corruption::CorruptHead;
    if (name == "modifier") return sampling::Corruption::CorruptModifier;
    return sampling::corruption_from_name(name);
}

void require_artifact(const fs::path& p, const char* stage) {
    if (!fs::exists(p)) {
        throw std::runtime_error("missing artifact " + p.string() + ": run the " +
                                 std::string(stage) + " stage first");
    }
}

int cmd_synth_corpus(const Settings& s, std::uint64_t seed, std::size_t noise_lines) {
    synth::SynthOptions opt;
    opt.seed = seed;
    opt.noise_lines_per_decade = noise_lines;
    const fs::path root(s.out);
    const auto five = root / "corpus_raw" / "fivegrams.txt";
    const auto uni = root / "corpus_raw" / "unigrams.txt";
    const auto stats = synth::generate_corpus(opt, five, uni);
    write_snapshot(s);
    std::cout << "synth-corpus: " << stats.fivegram_lines << " 5-gram lines, "
              << stats.unigram_lines << " unigram lines\n"
              << "  planted pairs: train " << stats.world.train_pairs.size() << ", validation "
              << stats.world.validation_pairs.size() << ", test " << stats.world.test_pairs.size()
              << ", reserved " << stats.world.reserved_pairs.size() << '\n'
              << "  fivegrams: " << five.string() << '\n'
              << "  unigrams:  " << uni.string() << '\n';
    return 0;
}

int cmd_ingest(const Settings& s) {
    const auto dc = s.decades();
    const auto uni_files = shard_files(s.unigrams, "unigram");
    const auto five_files = shard_files(s.fivegrams, "fivegram");

    // context vocabulary from training-era unigrams only, so later usage
    // shifts cannot influence the column set
    corpus::VocabularyBuilder vb;
    corpus::ParseTally uni_tally;
    for (const auto& f : uni_files) {
        util::LineReader reader(f);
        std::string line;
        while (reader.next(line)) {
            ++uni_tally.lines;
            corpus::ParseError err;
            auto rec = corpus::parse_ngram_line(line, 1, &err);
            if (!rec) {
                ++uni_tally.skipped;
                continue;
            }
            ++uni_tally.parsed;
            const int decade = corpus::DecadeConfig::decade_of_year(rec->year);
            if (rec->year < dc.first_year || rec->year > dc.last_year ||
                decade > dc.last_train_decade) {
                ++uni_tally.out_of_range;
                continue;
            }
            vb.add(*rec);
        }
    }

    corpus::CompoundTable table(dc);
    corpus::ParseTally five_tally;
    for (const auto& f : five_files) {
        util::LineReader reader(f);
        std::string line;
        while (reader.next(line)) {
            ++five_tally.lines;
            auto rec = corpus::parse_ngram_line(line, 5);
            if (!rec) {
                ++five_tally.skipped;
                continue;
            }
            ++five_tally.parsed;
            for (const auto& occ : corpus::extract_compounds(*rec, dc)) table.add(occ);
        }
    }
    if (table.n_pairs() == 0) {
        throw std::runtime_error("no N-N compounds extracted from " + s.fivegrams);
    }

    const auto vocab = vb.finish(s.vocab_cap);
    corpus::SplitThresholds thresholds{s.min_train_count, s.min_novel_count};
    const auto splits = corpus::split_compounds_by_first_attestation(table, thresholds);
    if (splits.train.empty() || splits.validation.empty() || splits.test.empty()) {
        throw std::runtime_error("degenerate temporal splits (train " +
                                 std::to_string(splits.train.size()) + ", validation " +
                                 std::to_string(splits.validation.size()) + ", test " +
                                 std::to_string(splits.test.size()) + ")");
    }

    const eval::ArtifactLayout layout{fs::path(s.out)};
    fs::create_directories(layout.corpus_dir());
    table.save_tsv(layout.compounds_tsv());
    vocab.save_tsv(layout.vocabulary_tsv());
    splits.save_json(layout.splits_json());
    write_snapshot(s);

    std::cout << "ingest: " << five_tally.parsed << "/" << five_tally.lines
              << " 5-gram lines parsed, " << uni_tally.parsed << "/" << uni_tally.lines
              << " unigram lines parsed\n"
              << "  compounds: " << table.n_pairs() << " types\n"
              << "  vocabulary: " << vocab.size() << " context words\n"
              << "  splits: train " << splits.train.size() << ", validation "
              << splits.validation.size() << ", test " << splits.test.size()
              << " (dropped: new-constituent " << splits.dropped_new_constituent
              << ", below-threshold " << splits.dropped_below_threshold << ")\n";
    return 0;
}

int cmd_vectors(const Settings& s, const std::string& context, const std::string& time) {
    const auto dc = s.decades();
    const eval::ArtifactLayout layout{fs::path(s.out)};
    require_artifact(layout.vocabulary_tsv(), "ingest");
    require_artifact(layout.compounds_tsv(), "ingest");
    const auto vocab = corpus::ContextVocabulary::load_tsv(layout.vocabulary_tsv());
    const auto five_files = shard_files(s.fivegrams, "fivegram");
    const auto combos = aspect_selection(context, time);

    // one streaming pass feeds every requested builder
    std::vector<vs::MatrixSetBuilder> builders;
    builders.reserve(combos.size());
    for (const auto& [c, t] : combos) builders.emplace_back(c, t, dc, vocab);
    for (const auto& f : five_files) {
        util::LineReader reader(f);
        std::string line;
        while (reader.next(line)) {
            auto rec = corpus::parse_ngram_line(line, 5);
            if (!rec) continue;
            for (auto& b : builders) b.add_record(*rec);
        }
    }

    for (std::size_t i = 0; i < combos.size(); ++i) {
        const auto [c, t] = combos[i];
        const auto mats = builders[i].finalize();
        fs::create_directories(layout.matrices_dir(c, t));
        vs::EmbeddingStoreMeta meta;
        meta.context = c;
        meta.time = t;
        meta.dims = s.svd_k;
        meta.weighting = vs::weighting_from_name(s.svd_weighting);
        meta.svd_seed = s.svd_seed;
        vs::EmbeddingStore store(meta);
        for (const auto& m : mats) {
            m.save(layout.matrix_bin(c, t, m.decade()));
            if (m.n_rows() == 0 || m.nnz() == 0) {
                store.add_slice(m.decade(), {}, {});  // everything abstains here
                continue;
            }
            vs::SvdOptions so;
            // thin slices (sparse early decades) cap the usable rank; pad
            // the stored embeddings with zeros up to the common width
            so.rank = std::min(s.svd_k, std::min<std::size_t>(m.n_rows(), m.n_cols()));
            so.weighting = meta.weighting;
            so.oversampling = s.svd_oversampling;
            so.power_iterations = s.svd_power_iterations;
            so.seed = util::mix_seed(s.svd_seed, static_cast<std::uint64_t>(m.decade() + 16));
            const auto svd = vs::truncated_svd(m, so);
            std::vector<float> data(svd.n_rows * s.svd_k, 0.0f);
            for (std::size_t r = 0; r < svd.n_rows; ++r) {
                for (std::size_t t = 0; t < svd.rank; ++t) {
                    data[r * s.svd_k + t] = static_cast<float>(svd.row_embeddings[r * svd.rank + t]);
                }
            }
            store.add_slice(m.decade(), m.rows(), std::move(data));
        }
        store.save(layout.embeddings_dir(c, t));
        std::cout << "vectors: " << vs::context_aspect_name(c) << " / " << vs::time_aspect_name(t)
                  << ": " << mats.size() << " slice(s), k=" << s.svd_k << ", weighting "
                  << s.svd_weighting << "\n";
    }
    write_snapshot(s);
    return 0;
}

std::vector<eval::GridCell> cell_selection(const Settings&, bool all, const std::string& model,
                                           const std::string& context, const std::string& time,
                                           const std::string& corruption) {
    std::vector<eval::GridCell> cells = eval::full_grid();
    if (all) return cells;
    auto keep = [&](const eval::GridCell& c) {
        if (!model.empty()) {
            std::string m(model);
            std::transform(m.begin(), m.end(), m.begin(), ::toupper);
            if (eval::model_from_name(m) != c.model) return false;
        }
        if (!context.empty() && context != "all" &&
            vs::context_aspect_from_name(context) != c.context) {
            return false;
        }
        if (!time.empty() && time != "all" && vs::time_aspect_from_name(time) != c.time) {
            return false;
        }
        if (!corruption.empty() && corruption != "all" &&
            corruption_from_flag(corruption) != c.corruption) {
            return false;
        }
        return true;
    };
    std::erase_if(cells, [&](const eval::GridCell& c) { return !keep(c); });
    if (cells.empty()) throw std::runtime_error("grid selection matches no cells");
    return cells;
}

int cmd_evaluate(const Settings& s, const std::vector<eval::GridCell>& cells) {
    const eval::ArtifactLayout layout{fs::path(s.out)};
    require_artifact(layout.compounds_tsv(), "ingest");
    require_artifact(layout.splits_json(), "ingest");
    eval::DiskArtifacts artifacts(layout, s.decades());
    const auto config = s.harness();

    // pre-load shared artifacts once, then cells can run on worker threads
    artifacts.table();
    artifacts.splits();
    for (const auto& cell : cells) {
        artifacts.matrices(cell.context, cell.time);
        if (cell.model != eval::Model::Dfm) artifacts.embeddings(cell.context, cell.time);
    }

    // dataset artifacts per corruption scenario present in the selection
    std::vector<sampling::Corruption> corruptions;
    for (const auto& cell : cells) {
        if (std::find(corruptions.begin(), corruptions.end(), cell.corruption) ==
            corruptions.end()) {
            corruptions.push_back(cell.corruption);
        }
    }
    for (auto cor : corruptions) {
        const auto datasets =
            eval::build_datasets(artifacts.table(), artifacts.splits(), cor, config);
        for (std::size_t i = 0; i < datasets.size(); ++i) {
            const auto name = sampling::corruption_name(cor);
            fs::create_directories(layout.dataset_csv(name, i, "train").parent_path());
            datasets[i].train.save_csv(layout.dataset_csv(name, i, "train"));
            datasets[i].validation.save_csv(layout.dataset_csv(name, i, "validation"));
            datasets[i].test.save_csv(layout.dataset_csv(name, i, "test"));
        }
    }

    std::size_t jobs = s.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : s.jobs;
    jobs = std::min(jobs, cells.size());
    std::vector<eval::CellResult> results(cells.size());
    if (jobs <= 1) {
        eval::GridRunner runner(artifacts, config);
        for (std::size_t i = 0; i < cells.size(); ++i) results[i] = runner.run_cell(cells[i]);
    } else {
        // independent jobs, deterministic per cell; report assembly keeps
        // the fixed grid order
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(jobs);
        for (std::size_t j = 0; j < jobs; ++j) {
            pool.emplace_back([&, j] {
                try {
                    eval::GridRunner runner(artifacts, config);
                    for (std::size_t i = next.fetch_add(1); i < cells.size();
                         i = next.fetch_add(1)) {
                        results[i] = runner.run_cell(cells[i]);
                    }
                } catch (...) {
                    errors[j] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    fs::create_directories(layout.reports_dir());
    eval::write_report_csv(layout.report_csv(), results);
    eval::write_summary_csv(layout.summary_csv(), results);
    const auto table = eval::render_summary_table(results);
    {
        std::ofstream out(layout.summary_txt(), std::ios::binary | std::ios::trunc);
        out << table;
    }
    write_snapshot(s);
    std::cout << table << "report:  " << layout.report_csv().string() << '\n'
              << "summary: " << layout.summary_csv().string() << '\n';
    return 0;
}

int cmd_generate(const Settings& s, const std::string& context, const std::string& time,
                 const std::string& corruption) {
    const eval::ArtifactLayout layout{fs::path(s.out)};
    require_artifact(layout.compounds_tsv(), "ingest");
    require_artifact(layout.splits_json(), "ingest");
    eval::DiskArtifacts artifacts(layout, s.decades());
    const auto c = vs::context_aspect_from_name(context);
    const auto t = vs::time_aspect_from_name(time);
    const auto cor = corruption_from_flag(corruption);

    eval::GridRunner runner(artifacts, s.harness());
    // score with the first sampling seed's trained network
    const auto& params = runner.trained_nnm(c, t, cor, 0);
    eval::PairScorer scorer = [&](const std::string& m,
                                  const std::string& h) -> std::optional<double> {
        const auto ex = eval::nnm_input(artifacts, c, t, m, h);
        if (!ex) return std::nullopt;
        return neural::nnm_predict(params, ex->mod.data(), ex->head.data()).score;
    };
    eval::GenerationOptions opt;
    opt.budget = s.budget;
    opt.top_n = s.top_n;
    const auto candidates =
        eval::generate_candidates(artifacts.table(), artifacts.splits().train, scorer, opt);

    fs::create_directories(layout.reports_dir());
    const auto path = layout.reports_dir() / "candidates.csv";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "modifier,head,score\n";
    char buf[64];
    for (const auto& cand : candidates) {
        std::snprintf(buf, sizeof(buf), "%.6f", cand.score);
        out << cand.modifier << ',' << cand.head << ',' << buf << '\n';
    }
    write_snapshot(s);
    std::cout << "generate: " << candidates.size() << " unattested candidates -> " << path.string()
              << '\n';
    return 0;
}

int cmd_export_annotations(const Settings& s) {
    const eval::ArtifactLayout layout{fs::path(s.out)};
    const auto cand_path = layout.reports_dir() / "candidates.csv";
    require_artifact(cand_path, "generate");
    std::ifstream in(cand_path, std::ios::binary);
    std::string line;
    if (!std::getline(in, line) || line != "modifier,head,score") {
        throw std::runtime_error("bad candidates file: " + cand_path.string());
    }
    std::vector<eval::GeneratedCandidate> candidates;
    while (std::getline(in, line) && candidates.size() < s.top_n) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        eval::GeneratedCandidate c;
        std::string score;
        if (!std::getline(ss, c.modifier, ',') || !std::getline(ss, c.head, ',') ||
            !std::getline(ss, score)) {
            throw std::runtime_error("bad candidate row: " + line);
        }
        c.score = std::stod(score);
        candidates.push_back(std::move(c));
    }
    eval::write_annotation_csv(layout.annotations_csv(), candidates);
    std::cout << "export-annotations: " << candidates.size() << " rows -> "
              << layout.annotations_csv().string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        Settings s;
        if (const char* env = std::getenv("NNCOMP_OUT")) s.out = env;
        if (s.out.empty()) s.out = "./out";

        // config file first (if any), so flags can override its values
        for (int i = 1; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg == "--config" && i + 1 < argc) {
                apply_config(s, read_config_file(argv[i + 1]));
            } else if (arg.rfind("--config=", 0) == 0) {
                apply_config(s, read_config_file(arg.substr(9)));
            }
        }

        CLI::App app{"diachronic noun-compound plausibility pipeline"};
        app.require_subcommand(1);
        std::string config_path;
        app.add_option("--config", config_path, "flat key = value config file (flags override)");

        auto add_common = [&](CLI::App* cmd) {
            cmd->add_option("--out", s.out, "output root (or $NNCOMP_OUT)")
                ->capture_default_str();
            cmd->add_option("--first-year", s.first_year, "first corpus year")
                ->capture_default_str();
            cmd->add_option("--last-year", s.last_year, "last corpus year")->capture_default_str();
            cmd->add_option("--first-train-decade", s.first_train_decade, "first training decade")
                ->capture_default_str();
            cmd->add_option("--last-train-decade", s.last_train_decade, "last training decade")
                ->capture_default_str();
            cmd->add_option("--validation-decade", s.validation_decade, "validation decade")
                ->capture_default_str();
            cmd->add_option("--test-decade", s.test_decade, "test decade")->capture_default_str();
        };

        auto* synth = app.add_subcommand("synth-corpus",
                                         "write a synthetic planted-rule corpus for pipeline tests");
        std::uint64_t synth_seed = 42;
        std::size_t synth_noise = 7000;
        synth->add_option("--seed", synth_seed, "generator seed")->capture_default_str();
        synth->add_option("--noise-lines", synth_noise, "filler lines per decade")
            ->capture_default_str();
        synth->add_option("--out", s.out, "output root (or $NNCOMP_OUT)")->capture_default_str();

        auto* ingest = app.add_subcommand("ingest", "extract compounds, vocabulary and splits");
        add_common(ingest);
        ingest->add_option("--unigrams", s.unigrams, "unigram shard file or directory")
            ->capture_default_str();
        ingest->add_option("--fivegrams", s.fivegrams, "5-gram shard file or directory")
            ->capture_default_str();
        ingest->add_option("--vocab-cap", s.vocab_cap, "context vocabulary size")
            ->capture_default_str();
        ingest->add_option("--min-train-count", s.min_train_count, "training count threshold")
            ->capture_default_str();
        ingest->add_option("--min-novel-count", s.min_novel_count, "novel-compound count threshold")
            ->capture_default_str();

        auto* vectors =
            app.add_subcommand("vectors", "build co-occurrence matrices and SVD embeddings");
        add_common(vectors);
        std::string vec_context = "all", vec_time = "all";
        vectors->add_option("--fivegrams", s.fivegrams, "5-gram shard file or directory")
            ->capture_default_str();
        vectors->add_option("--context", vec_context, "compound-centric|compound-agnostic|all")
            ->capture_default_str();
        vectors->add_option("--time", vec_time, "decade-centric|decade-agnostic|all")
            ->capture_default_str();
        vectors->add_option("--svd-k", s.svd_k, "embedding dimensions")->capture_default_str();
        vectors->add_option("--svd-weighting", s.svd_weighting, "raw|log1p|ppmi")
            ->capture_default_str();
        vectors->add_option("--svd-seed", s.svd_seed, "SVD sampling seed")->capture_default_str();
        vectors->add_option("--svd-oversampling", s.svd_oversampling, "range-finder oversampling")
            ->capture_default_str();
        vectors->add_option("--svd-power-iterations", s.svd_power_iterations, "power iterations")
            ->capture_default_str();

        auto* evaluate = app.add_subcommand("evaluate", "run grid cells and write the report");
        add_common(evaluate);
        bool all_cells = false;
        std::string ev_model, ev_context, ev_time, ev_corruption;
        evaluate->add_flag("--all", all_cells, "run the full 24-cell grid");
        evaluate->add_option("--model", ev_model, "dfm|dsm|nnm");
        evaluate->add_option("--context", ev_context, "compound-centric|compound-agnostic");
        evaluate->add_option("--time", ev_time, "decade-centric|decade-agnostic");
        evaluate->add_option("--corruption", ev_corruption, "head|modifier");
        evaluate->add_option("--n-seeds", s.n_seeds, "sampling seeds per cell")
            ->capture_default_str();
        evaluate->add_option("--base-seed", s.base_seed, "first sampling seed")
            ->capture_default_str();
        evaluate->add_option("--model-seed", s.model_seed, "training seed mix")
            ->capture_default_str();
        evaluate->add_flag("--frequency-weighted", s.frequency_weighted,
                           "frequency-weighted negative sampling");
        evaluate->add_option("--gbdt-learning-rate", s.gbdt_learning_rate, "GBDT shrinkage")
            ->capture_default_str();
        evaluate->add_option("--gbdt-max-depth", s.gbdt_max_depth, "GBDT tree depth")
            ->capture_default_str();
        evaluate->add_option("--gbdt-n-estimators", s.gbdt_n_estimators, "GBDT rounds")
            ->capture_default_str();
        evaluate->add_option("--gbdt-min-child-weight", s.gbdt_min_child_weight,
                             "GBDT hessian floor")
            ->capture_default_str();
        evaluate->add_option("--gbdt-subsample", s.gbdt_subsample, "GBDT row subsample")
            ->capture_default_str();
        evaluate->add_option("--gbdt-gamma", s.gbdt_gamma, "GBDT split penalty")
            ->capture_default_str();
        evaluate->add_option("--gbdt-l1-alpha", s.gbdt_l1_alpha, "GBDT L1")->capture_default_str();
        evaluate->add_option("--gbdt-l2-lambda", s.gbdt_l2_lambda, "GBDT L2")
            ->capture_default_str();
        evaluate->add_flag("--dfm-include-std", s.dfm_include_std,
                           "add per-slice standard deviations to DFM features");
        evaluate->add_option("--nnm-hidden", s.nnm_hidden, "NNM hidden width")
            ->capture_default_str();
        evaluate->add_option("--lstm-hidden", s.lstm_hidden, "encoder state size")
            ->capture_default_str();
        evaluate->add_option("--nnm-epochs", s.nnm_epochs, "NNM training epochs")
            ->capture_default_str();
        evaluate->add_option("--nnm-batch-size", s.nnm_batch_size, "NNM batch size")
            ->capture_default_str();
        evaluate->add_option("--lr-grid", s.lr_grid, "NNM learning rates tuned on validation")
            ->capture_default_str();
        evaluate->add_flag("--margin-loss", s.margin_loss, "margin objective instead of CE");
        evaluate->add_option("--jobs", s.jobs, "worker pool size (0 = cores)")
            ->capture_default_str();

        auto* generate = app.add_subcommand("generate", "score unattested candidate compounds");
        add_common(generate);
        std::string gen_context = "compound-centric", gen_time = "decade-centric",
                    gen_corruption = "head";
        generate->add_option("--context", gen_context, "aspect of the scoring model")
            ->capture_default_str();
        generate->add_option("--time", gen_time, "aspect of the scoring model")
            ->capture_default_str();
        generate->add_option("--corruption", gen_corruption, "training scenario")
            ->capture_default_str();
        generate->add_option("--top", s.top_n, "candidates kept")->capture_default_str();
        generate->add_option("--budget", s.budget, "pairs scored at most")->capture_default_str();
        generate->add_option("--nnm-hidden", s.nnm_hidden, "NNM hidden width")
            ->capture_default_str();
        generate->add_option("--lstm-hidden", s.lstm_hidden, "encoder state size")
            ->capture_default_str();
        generate->add_option("--nnm-epochs", s.nnm_epochs, "NNM training epochs")
            ->capture_default_str();
        generate->add_option("--nnm-batch-size", s.nnm_batch_size, "NNM batch size")
            ->capture_default_str();
        generate->add_option("--lr-grid", s.lr_grid, "NNM learning rates tuned on validation")
            ->capture_default_str();

        auto* export_ann =
            app.add_subcommand("export-annotations", "write the blank-rating annotation sheet");
        export_ann->add_option("--out", s.out, "output root (or $NNCOMP_OUT)")
            ->capture_default_str();
        export_ann->add_option("--top", s.top_n, "rows exported")->capture_default_str();

        CLI11_PARSE(app, argc, argv);

        if (synth->parsed()) return cmd_synth_corpus(s, synth_seed, synth_noise);
        if (ingest->parsed()) return cmd_ingest(s);
        if (vectors->parsed()) return cmd_vectors(s, vec_context, vec_time);
        if (evaluate->parsed()) {
            const bool filtered =
                !ev_model.empty() || !ev_context.empty() || !ev_time.empty() ||
                !ev_corruption.empty();
            const auto cells = cell_selection(s, all_cells || !filtered, ev_model, ev_context,
                                              ev_time, ev_corruption);
            return cmd_evaluate(s, cells);
        }
        if (generate->parsed()) return cmd_generate(s, gen_context, gen_time, gen_corruption);
        if (export_ann->parsed()) return cmd_export_annotations(s);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
