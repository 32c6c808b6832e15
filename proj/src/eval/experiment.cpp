#include "nncomp/eval/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "nncomp/util/rng.hpp"

namespace nncomp::eval {

namespace {

// split-specific sampling streams, so the three datasets of one seed draw
// independent negatives
constexpr std::uint64_t kValSplitTag = 0x56414c53;   // "VALS"
constexpr std::uint64_t kTestSplitTag = 0x54455354;  // "TEST"

// code without the model, shared by the NNM cell and the DSM cell that
// reuses its encoder
std::uint64_t nnm_slot_code(vs::ContextAspect c, vs::TimeAspect t, sampling::Corruption cor) {
    return 0x4e4e4d00ull | (static_cast<std::uint64_t>(c) << 16) |
           (static_cast<std::uint64_t>(t) << 8) | static_cast<std::uint64_t>(cor);
}

std::string pair_key_str(const std::string& modifier, const std::string& head) {
    return modifier + " " + head;
}

void verify_dataset(const sampling::LabeledDataset& ds, const corpus::CompoundTable& table,
                    const char* which) {
    if (ds.tuples.empty()) {
        throw std::runtime_error(std::string("empty ") + which + " dataset");
    }
    if (ds.n_attested() != ds.n_corrupted()) {
        throw std::logic_error(std::string(which) + " dataset is unbalanced");
    }
    for (const auto& t : ds.tuples) {
        if (!t.attested && table.attested(t.modifier, t.head)) {
            throw std::logic_error(std::string("attested compound sampled as negative in ") +
                                   which + ": " + pair_key_str(t.modifier, t.head));
        }
    }
}

}  // namespace

std::string_view model_name(Model m) {
    switch (m) {
        case Model::Dfm: return "DFM";
        case Model::Dsm: return "DSM";
        case Model::Nnm: return "NNM";
    }
    throw std::logic_error("bad model");
}

Model model_from_name(std::string_view name) {
    if (name == "DFM") return Model::Dfm;
    if (name == "DSM") return Model::Dsm;
    if (name == "NNM") return Model::Nnm;
    throw std::invalid_argument("unknown model: " + std::string(name));
}

std::vector<GridCell> full_grid() {
    std::vector<GridCell> cells;
    for (auto time : {vs::TimeAspect::DecadeCentric, vs::TimeAspect::DecadeAgnostic}) {
        for (auto model : {Model::Dfm, Model::Dsm, Model::Nnm}) {
            for (auto context :
                 {vs::ContextAspect::CompoundCentric, vs::ContextAspect::CompoundAgnostic}) {
                for (auto corruption :
                     {sampling::Corruption::CorruptHead, sampling::Corruption::CorruptModifier}) {
                    cells.push_back({model, context, time, corruption});
                }
            }
        }
    }
    return cells;
}

std::vector<SeedDatasets> build_datasets(const corpus::CompoundTable& table,
                                         const corpus::CompoundSplits& splits,
                                         sampling::Corruption corruption,
                                         const HarnessConfig& config) {
    if (splits.train.empty() || splits.validation.empty() || splits.test.empty()) {
        throw std::runtime_error("cannot build datasets: a compound split is empty");
    }
    const auto pools = sampling::pools_from_training(table, splits.train);
    const auto forbidden = sampling::forbidden_set(table);

    std::vector<SeedDatasets> out;
    out.reserve(config.n_seeds);
    for (std::size_t i = 0; i < config.n_seeds; ++i) {
        const std::uint64_t seed = config.base_seed + i;
        SeedDatasets d;
        d.train = sampling::make_dataset(splits.train, corruption, pools, forbidden, seed,
                                         config.frequency_weighted_negatives);
        d.validation =
            sampling::make_dataset(splits.validation, corruption, pools, forbidden,
                                   util::mix_seed(seed, kValSplitTag),
                                   config.frequency_weighted_negatives);
        d.test = sampling::make_dataset(splits.test, corruption, pools, forbidden,
                                        util::mix_seed(seed, kTestSplitTag),
                                        config.frequency_weighted_negatives);
        verify_dataset(d.train, table, "train");
        verify_dataset(d.validation, table, "validation");
        verify_dataset(d.test, table, "test");
        out.push_back(std::move(d));
    }
    return out;
}

double constant_classifier_accuracy(const sampling::LabeledDataset& dataset) {
    if (dataset.tuples.empty()) return 0.0;
    return static_cast<double>(dataset.n_attested()) / static_cast<double>(dataset.tuples.size());
}

void assert_temporal_hygiene(ArtifactProvider& artifacts, const GridCell& cell) {
    const auto& decades = artifacts.decades();
    const auto expected = expected_slices(decades, cell.time);

    // matrix slices never leave the training era
    const auto& mats = artifacts.matrices(cell.context, cell.time);
    if (mats.size() != expected.size()) {
        throw std::logic_error("matrix slice count does not match the training decades");
    }
    for (std::size_t i = 0; i < mats.size(); ++i) {
        const int d = mats[i].decade();
        if (d != expected[i]) throw std::logic_error("matrix slices out of order");
        if (d != vs::kAllDecades && !decades.is_training_decade(d)) {
            throw std::logic_error("matrix slice outside the training decades: " +
                                   std::to_string(d));
        }
    }

    // embedding slices likewise (only when the cell consumes embeddings)
    if (cell.model != Model::Dfm) {
        const auto& store = artifacts.embeddings(cell.context, cell.time);
        for (int d : store.decades()) {
            if (d != vs::kAllDecades && !decades.is_training_decade(d)) {
                throw std::logic_error("embedding slice outside the training decades: " +
                                       std::to_string(d));
            }
        }
    }

    // split discipline: test compounds are unattested before the test
    // decade, validation compounds before the validation decade
    const auto& table = artifacts.table();
    const auto& splits = artifacts.splits();
    for (const auto& c : splits.test) {
        for (int d = decades.first_train_decade; d <= decades.validation_decade; d += 10) {
            if (table.count(c.modifier, c.head, d) != 0) {
                throw std::logic_error("test compound attested before the test decade: " +
                                       c.joined());
            }
        }
    }
    for (const auto& c : splits.validation) {
        for (int d : decades.training_decades()) {
            if (table.count(c.modifier, c.head, d) != 0) {
                throw std::logic_error("validation compound attested in a training decade: " +
                                       c.joined());
            }
        }
    }

    // every test constituent is already active before the test decade
    const auto first = corpus::constituent_first_decades(table);
    for (const auto& c : splits.test) {
        for (const auto* lex : {&c.modifier, &c.head}) {
            auto it = first.find(*lex);
            if (it == first.end() || it->second >= decades.test_decade) {
                throw std::logic_error("test constituent first active in the test decade: " +
                                       *lex);
            }
        }
    }
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double population_stddev(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size()));
}

GridRunner::GridRunner(ArtifactProvider& artifacts, HarnessConfig config)
    : artifacts_(artifacts), config_(std::move(config)) {
    config_.decades.validate();
    config_.gbdt.validate();
    if (config_.n_seeds == 0) throw std::invalid_argument("n_seeds must be positive");
    if (config_.lr_grid.empty()) throw std::invalid_argument("empty learning-rate grid");
}

const std::vector<SeedDatasets>& GridRunner::datasets(sampling::Corruption corruption) {
    const int key = static_cast<int>(corruption);
    auto it = datasets_.find(key);
    if (it == datasets_.end()) {
        it = datasets_
                 .emplace(key, build_datasets(artifacts_.table(), artifacts_.splits(), corruption,
                                              config_))
                 .first;
    }
    return it->second;
}

const dfm::DfmFeatureBuilder& GridRunner::dfm_builder(vs::ContextAspect context,
                                                      vs::TimeAspect time) {
    const auto key = std::make_pair(static_cast<int>(context), static_cast<int>(time));
    auto it = dfm_.find(key);
    if (it == dfm_.end()) {
        const auto& mats = artifacts_.matrices(context, time);
        std::vector<const vs::CooccurrenceMatrix*> ptrs;
        ptrs.reserve(mats.size());
        for (const auto& m : mats) ptrs.push_back(&m);
        it = dfm_
                 .emplace(key, dfm::DfmFeatureBuilder(artifacts_.table(), ptrs, context, time,
                                                      artifacts_.splits().train,
                                                      config_.dfm_include_std))
                 .first;
    }
    return it->second;
}

const std::vector<double>& GridRunner::dfm_row(vs::ContextAspect context, vs::TimeAspect time,
                                               const std::string& modifier,
                                               const std::string& head) {
    const auto key = std::make_pair(static_cast<int>(context), static_cast<int>(time));
    auto& cache = dfm_rows_[key];
    const std::string pk = pair_key_str(modifier, head);
    auto it = cache.find(pk);
    if (it == cache.end()) {
        const auto& builder = dfm_builder(context, time);
        it = cache.emplace(pk, gbdt::encode_missing(builder.features(modifier, head))).first;
    }
    return it->second;
}

std::uint64_t GridRunner::training_seed(const GridCell& cell, std::size_t seed_index) const {
    const std::uint64_t cell_code = (static_cast<std::uint64_t>(cell.model) << 24) |
                                    (static_cast<std::uint64_t>(cell.context) << 16) |
                                    (static_cast<std::uint64_t>(cell.time) << 8) |
                                    static_cast<std::uint64_t>(cell.corruption);
    return util::mix_seed(config_.model_seed, cell_code, seed_index);
}

std::optional<neural::TrainExample> nnm_input(ArtifactProvider& artifacts,
                                              vs::ContextAspect context, vs::TimeAspect time,
                                              const std::string& modifier,
                                              const std::string& head) {
    const auto& store = artifacts.embeddings(context, time);
    const std::size_t k = store.dims();
    neural::TrainExample ex;
    if (time == vs::TimeAspect::DecadeAgnostic) {
        const float* m = store.find(modifier, vs::modifier_role(context), vs::kAllDecades);
        const float* h = store.find(head, vs::head_role(context), vs::kAllDecades);
        if (m == nullptr || h == nullptr) return std::nullopt;
        ex.mod.assign(m, m + k);
        ex.head.assign(h, h + k);
        return ex;
    }
    const auto train_decades = artifacts.decades().training_decades();
    auto mod_seq = vs::embedding_sequence(store, modifier, vs::modifier_role(context), train_decades);
    if (mod_seq.all_absent) return std::nullopt;
    auto head_seq = vs::embedding_sequence(store, head, vs::head_role(context), train_decades);
    if (head_seq.all_absent) return std::nullopt;
    ex.mod = std::move(mod_seq.flat);
    ex.head = std::move(head_seq.flat);
    return ex;
}

std::optional<neural::TrainExample> GridRunner::nnm_example(const sampling::CandidateTuple& tuple,
                                                            vs::ContextAspect context,
                                                            vs::TimeAspect time) {
    auto ex = nnm_input(artifacts_, context, time, tuple.modifier, tuple.head);
    if (ex) ex->label = tuple.attested ? 1 : 0;
    return ex;
}

const neural::NnmParams<float>& GridRunner::trained_nnm(vs::ContextAspect context,
                                                        vs::TimeAspect time,
                                                        sampling::Corruption corruption,
                                                        std::size_t seed_index,
                                                        double* chosen_lr) {
    const auto key = std::make_tuple(static_cast<int>(context), static_cast<int>(time),
                                     static_cast<int>(corruption), seed_index);
    auto it = nnm_.find(key);
    if (it == nnm_.end()) {
        const auto& data = datasets(corruption)[seed_index];
        std::vector<neural::TrainExample> train, validation;
        for (const auto& t : data.train.tuples) {
            if (auto ex = nnm_example(t, context, time)) train.push_back(std::move(*ex));
        }
        for (const auto& t : data.validation.tuples) {
            if (auto ex = nnm_example(t, context, time)) validation.push_back(std::move(*ex));
        }
        if (train.empty()) {
            throw std::runtime_error("no trainable neural examples (all embeddings missing)");
        }

        const auto& store = artifacts_.embeddings(context, time);
        const std::size_t k = store.dims();
        const std::size_t steps = time == vs::TimeAspect::DecadeCentric
                                      ? artifacts_.decades().training_decades().size()
                                      : 1;
        neural::TrainConfig cfg = config_.nnm_train;
        cfg.seed = util::mix_seed(config_.model_seed, nnm_slot_code(context, time, corruption),
                                  config_.base_seed + seed_index);

        TrainedNnm best;
        double best_acc = -1.0;
        for (double lr : config_.lr_grid) {
            cfg.learning_rate = lr;
            auto result = neural::train_nnm(train, {}, time, k, steps, config_.nnm_arch, cfg);
            double acc;
            if (config_.lr_grid.size() == 1) {
                acc = 0.0;  // nothing to select
            } else {
                std::size_t correct = 0;
                for (const auto& ex : validation) {
                    const auto pred =
                        neural::nnm_predict(result.params, ex.mod.data(), ex.head.data());
                    if (pred.plausible == (ex.label == 1)) ++correct;
                }
                acc = validation.empty()
                          ? 0.0
                          : static_cast<double>(correct) / static_cast<double>(validation.size());
            }
            if (acc > best_acc) {
                best_acc = acc;
                best.params = std::move(result.params);
                best.lr = lr;
            }
        }
        it = nnm_.emplace(key, std::move(best)).first;
    }
    if (chosen_lr != nullptr) *chosen_lr = it->second.lr;
    return it->second.params;
}

SeedResult GridRunner::run_dfm_seed(const GridCell& cell, std::size_t seed_index,
                                    const SeedDatasets& data) {
    const auto& builder = dfm_builder(cell.context, cell.time);
    const std::size_t dim = builder.dim();

    std::vector<double> x;
    std::vector<int> y;
    x.reserve(data.train.tuples.size() * dim);
    for (const auto& t : data.train.tuples) {
        const auto& row = dfm_row(cell.context, cell.time, t.modifier, t.head);
        x.insert(x.end(), row.begin(), row.end());
        y.push_back(t.attested ? 1 : 0);
    }
    gbdt::GbdtConfig cfg = config_.gbdt;
    cfg.seed = training_seed(cell, seed_index);
    const auto model = gbdt::fit(x, dim, y, cfg);

    SeedResult res;
    res.seed = data.train.seed;
    res.n_test = data.test.tuples.size();
    std::size_t correct = 0;
    for (const auto& t : data.test.tuples) {
        const auto& row = dfm_row(cell.context, cell.time, t.modifier, t.head);
        const bool plausible = model.predict_proba(row) >= 0.5;
        if (plausible == t.attested) ++correct;
    }
    res.accuracy = static_cast<double>(correct) / static_cast<double>(res.n_test);
    return res;
}

SeedResult GridRunner::run_dsm_seed(const GridCell& cell, std::size_t seed_index,
                                    const SeedDatasets& data) {
    const auto& store = artifacts_.embeddings(cell.context, cell.time);
    const std::size_t k = store.dims();

    // DecadeCentric constituents pass through the frozen trained encoder;
    // memoised per constituent within the seed
    const neural::NnmParams<float>* encoder = nullptr;
    if (cell.time == vs::TimeAspect::DecadeCentric) {
        encoder = &trained_nnm(cell.context, cell.time, cell.corruption, seed_index);
    }
    const auto train_decades = artifacts_.decades().training_decades();
    std::unordered_map<std::string, std::optional<std::vector<float>>> encoded;
    auto constituent_vec = [&](const std::string& lexeme,
                               vs::Role role) -> const std::optional<std::vector<float>>& {
        std::string key = std::string(1, static_cast<char>(role)) + lexeme;
        auto it = encoded.find(key);
        if (it == encoded.end()) {
            std::optional<std::vector<float>> value;
            if (cell.time == vs::TimeAspect::DecadeAgnostic) {
                const float* v = store.find(lexeme, role, vs::kAllDecades);
                if (v != nullptr) value = std::vector<float>(v, v + k);
            } else {
                auto seq = vs::embedding_sequence(store, lexeme, role, train_decades);
                if (!seq.all_absent) value = neural::encode_constituent(*encoder, seq.flat.data());
            }
            it = encoded.emplace(std::move(key), std::move(value)).first;
        }
        return it->second;
    };
    auto tuple_row = [&](const sampling::CandidateTuple& t) -> std::optional<std::vector<double>> {
        const auto& m = constituent_vec(t.modifier, vs::modifier_role(cell.context));
        if (!m) return std::nullopt;
        const auto& h = constituent_vec(t.head, vs::head_role(cell.context));
        if (!h) return std::nullopt;
        std::vector<double> row;
        row.reserve(2 * k);
        row.insert(row.end(), m->begin(), m->end());
        row.insert(row.end(), h->begin(), h->end());
        return row;
    };

    std::vector<double> x;
    std::vector<int> y;
    for (const auto& t : data.train.tuples) {
        if (auto row = tuple_row(t)) {
            x.insert(x.end(), row->begin(), row->end());
            y.push_back(t.attested ? 1 : 0);
        }
    }
    if (y.empty()) throw std::runtime_error("no trainable DSM rows (all embeddings missing)");
    gbdt::GbdtConfig cfg = config_.gbdt;
    cfg.seed = training_seed(cell, seed_index);
    const auto model = gbdt::fit(x, 2 * k, y, cfg);

    SeedResult res;
    res.seed = data.train.seed;
    res.n_test = data.test.tuples.size();
    std::size_t correct = 0;
    for (const auto& t : data.test.tuples) {
        const auto row = tuple_row(t);
        if (!row) {
            ++res.n_abstained;  // abstention counts as an error
            continue;
        }
        const bool plausible = model.predict_proba(*row) >= 0.5;
        if (plausible == t.attested) ++correct;
    }
    res.accuracy = static_cast<double>(correct) / static_cast<double>(res.n_test);
    return res;
}

SeedResult GridRunner::run_nnm_seed(const GridCell& cell, std::size_t seed_index,
                                    const SeedDatasets& data) {
    double lr = 0.0;
    const auto& params =
        trained_nnm(cell.context, cell.time, cell.corruption, seed_index, &lr);

    SeedResult res;
    res.seed = data.train.seed;
    res.n_test = data.test.tuples.size();
    res.chosen_lr = lr;
    std::size_t correct = 0;
    for (const auto& t : data.test.tuples) {
        const auto ex = nnm_example(t, cell.context, cell.time);
        if (!ex) {
            ++res.n_abstained;
            continue;
        }
        const auto pred = neural::nnm_predict(params, ex->mod.data(), ex->head.data());
        if (pred.plausible == t.attested) ++correct;
    }
    res.accuracy = static_cast<double>(correct) / static_cast<double>(res.n_test);
    return res;
}

CellResult GridRunner::run_cell(const GridCell& cell) {
    assert_temporal_hygiene(artifacts_, cell);
    const auto& seeds = datasets(cell.corruption);

    CellResult out;
    out.cell = cell;
    std::vector<double> accs;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const auto& data = seeds[i];
        if (constant_classifier_accuracy(data.test) != 0.5) {
            throw std::logic_error("balanced-set self-test failed: constant classifier != 0.5");
        }
        SeedResult r;
        switch (cell.model) {
            case Model::Dfm: r = run_dfm_seed(cell, i, data); break;
            case Model::Dsm: r = run_dsm_seed(cell, i, data); break;
            case Model::Nnm: r = run_nnm_seed(cell, i, data); break;
        }
        accs.push_back(r.accuracy);
        out.seeds.push_back(std::move(r));
    }
    out.mean = mean_of(accs);
    out.stddev = population_stddev(accs);
    return out;
}

std::vector<CellResult> GridRunner::run(const std::vector<GridCell>& cells) {
    std::vector<CellResult> results;
    results.reserve(cells.size());
    for (const auto& cell : cells) results.push_back(run_cell(cell));
    return results;
}

}  // namespace nncomp::eval
