#include "nncomp/corpus/splits.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "nncomp/util/io.hpp"

namespace nncomp::corpus {

std::unordered_map<std::string, int> constituent_first_decades(const CompoundTable& table) {
    const auto decades = table.decades().all_decades();
    std::unordered_map<std::string, int> first;
    auto note = [&](const std::string& lexeme, int decade) {
        auto [it, inserted] = first.try_emplace(lexeme, decade);
        if (!inserted && decade < it->second) it->second = decade;
    };
    for (const auto* entry : table.sorted_entries()) {
        for (std::size_t d = 0; d < entry->counts_by_decade.size(); ++d) {
            if (entry->counts_by_decade[d] == 0) continue;
            note(entry->compound.modifier, decades[d]);
            note(entry->compound.head, decades[d]);
            break;  // counts are scanned oldest decade first
        }
    }
    return first;
}

CompoundSplits split_compounds_by_first_attestation(const CompoundTable& table,
                                                    const SplitThresholds& thresholds) {
    const DecadeConfig& cfg = table.decades();
    cfg.validate();
    const auto decades = cfg.all_decades();
    const auto first_constituent = constituent_first_decades(table);

    CompoundSplits splits;
    for (const auto* entry : table.sorted_entries()) {
        int first_decade = -1;
        std::uint64_t train_total = 0;
        std::uint64_t test_total = 0;
        for (std::size_t d = 0; d < entry->counts_by_decade.size(); ++d) {
            const std::uint64_t c = entry->counts_by_decade[d];
            if (c == 0) continue;
            if (first_decade < 0) first_decade = decades[d];
            if (cfg.is_training_decade(decades[d])) train_total += c;
            if (decades[d] == cfg.test_decade) test_total += c;
        }
        if (first_decade < 0) continue;

        const Compound& comp = entry->compound;
        const int mod_first = first_constituent.at(comp.modifier);
        const int head_first = first_constituent.at(comp.head);
        if (mod_first >= cfg.test_decade || head_first >= cfg.test_decade) {
            splits.dropped_new_constituent++;
            continue;
        }

        if (cfg.is_training_decade(first_decade)) {
            if (train_total >= thresholds.min_train_count) {
                splits.train.push_back(comp);
            } else {
                splits.dropped_below_threshold++;
            }
        } else if (first_decade == cfg.validation_decade) {
            splits.validation.push_back(comp);
        } else if (first_decade == cfg.test_decade) {
            if (test_total >= thresholds.min_novel_count) {
                splits.test.push_back(comp);
            } else {
                splits.dropped_below_threshold++;
            }
        }
        // decades between the training range and the validation decade (if the
        // configuration leaves a gap) contribute nothing
    }
    return splits;
}

namespace {

nlohmann::json compounds_to_json(const std::vector<Compound>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : v) arr.push_back({c.modifier, c.head});
    return arr;
}

std::vector<Compound> compounds_from_json(const nlohmann::json& arr) {
    std::vector<Compound> v;
    for (const auto& item : arr) v.push_back({item.at(0), item.at(1)});
    return v;
}

}  // namespace

void CompoundSplits::save_json(const std::filesystem::path& path) const {
    nlohmann::json j;
    j["train"] = compounds_to_json(train);
    j["validation"] = compounds_to_json(validation);
    j["test"] = compounds_to_json(test);
    j["dropped_new_constituent"] = dropped_new_constituent;
    j["dropped_below_threshold"] = dropped_below_threshold;
    util::write_text_file(path, j.dump(2) + "\n");
}

CompoundSplits CompoundSplits::load_json(const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::parse(util::read_text_file(path));
    CompoundSplits s;
    s.train = compounds_from_json(j.at("train"));
    s.validation = compounds_from_json(j.at("validation"));
    s.test = compounds_from_json(j.at("test"));
    s.dropped_new_constituent = j.value("dropped_new_constituent", 0);
    s.dropped_below_threshold = j.value("dropped_below_threshold", 0);
    return s;
}

}  // namespace nncomp::corpus
