#include "nncomp/corpus/compounds.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "nncomp/util/io.hpp"

namespace nncomp::corpus {

void DecadeConfig::validate() const {
    if (first_year > last_year) throw std::invalid_argument("decade config: empty year range");
    if (first_train_decade > last_train_decade)
        throw std::invalid_argument("decade config: empty training range");
    for (int d : {first_train_decade, last_train_decade, validation_decade, test_decade}) {
        if (d % 10 != 0) throw std::invalid_argument("decade config: decade ids must be multiples of 10");
        if (!decade_in_range(d)) throw std::invalid_argument("decade config: split decade outside corpus range");
    }
    if (last_train_decade >= validation_decade)
        throw std::invalid_argument("decade config: training decades overlap validation decade");
    if (validation_decade >= test_decade)
        throw std::invalid_argument("decade config: validation decade overlaps test decade");
}

bool is_alphabetic(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))) return false;
    }
    return true;
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

namespace {

const std::unordered_map<std::string_view, std::string_view>& irregular_plurals() {
    static const std::unordered_map<std::string_view, std::string_view> table = {
        {"men", "man"},           {"women", "woman"},       {"children", "child"},
        {"feet", "foot"},         {"teeth", "tooth"},       {"geese", "goose"},
        {"mice", "mouse"},        {"lice", "louse"},        {"oxen", "ox"},
        {"people", "person"},     {"dice", "die"},          {"pence", "penny"},
        {"brethren", "brother"},  {"indices", "index"},     {"appendices", "appendix"},
        {"matrices", "matrix"},   {"vertices", "vertex"},   {"crises", "crisis"},
        {"analyses", "analysis"}, {"theses", "thesis"},     {"hypotheses", "hypothesis"},
        {"diagnoses", "diagnosis"}, {"oases", "oasis"},     {"axes", "axis"},
        {"phenomena", "phenomenon"}, {"criteria", "criterion"}, {"data", "datum"},
        {"larvae", "larva"},      {"fungi", "fungus"},      {"nuclei", "nucleus"},
        {"radii", "radius"},      {"stimuli", "stimulus"},  {"alumni", "alumnus"},
        {"cacti", "cactus"},      {"foci", "focus"},        {"wolves", "wolf"},
        {"wives", "wife"},        {"knives", "knife"},      {"lives", "life"},
        {"leaves", "leaf"},       {"loaves", "loaf"},       {"halves", "half"},
        {"calves", "calf"},       {"shelves", "shelf"},     {"thieves", "thief"},
        {"scarves", "scarf"},     {"elves", "elf"},         {"hooves", "hoof"},
        {"selves", "self"},       {"sheaves", "sheaf"},     {"buses", "bus"},
        {"gases", "gas"},         {"lenses", "lens"},       {"viruses", "virus"},
        {"bonuses", "bonus"},     {"censuses", "census"},   {"campuses", "campus"},
        {"choruses", "chorus"},   {"circuses", "circus"},   {"statuses", "status"},
        {"surpluses", "surplus"}, {"atlases", "atlas"},     {"aliases", "alias"},
        {"biases", "bias"},       {"canvases", "canvas"},   {"aches", "ache"},
        {"headaches", "headache"}, {"niches", "niche"},     {"caches", "cache"},
        {"mustaches", "mustache"}, {"avalanches", "avalanche"},
        {"firemen", "fireman"},   {"policemen", "policeman"}, {"chairmen", "chairman"},
        {"gentlemen", "gentleman"}, {"businessmen", "businessman"},
        {"fishermen", "fisherman"}, {"craftsmen", "craftsman"}, {"salesmen", "salesman"},
        {"spokesmen", "spokesman"}, {"workmen", "workman"}, {"freshmen", "freshman"},
        {"statesmen", "statesman"},
    };
    return table;
}

// Singulars the suffix rules would otherwise mangle.
const std::unordered_set<std::string_view>& keep_as_is() {
    static const std::unordered_set<std::string_view> table = {
        "species", "series", "lens", "atlas", "alias", "bias", "canvas",
        "news", "means", "chaos", "cosmos", "molasses",
        "physics", "mathematics", "economics", "politics", "ethics",
        "measles", "diabetes", "scissors", "trousers",
    };
    return table;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Guarded suffix rules. Outputs never end in a bare plural "s", which keeps
// the full lemmatiser idempotent.
std::string strip_plural_suffix(const std::string& w) {
    const std::size_t n = w.size();
    if (n >= 5 && ends_with(w, "ies")) return w.substr(0, n - 3) + 'y';
    if (n >= 5 && ends_with(w, "sses")) return w.substr(0, n - 2);
    if (ends_with(w, "xes") || ends_with(w, "zes") || ends_with(w, "ches") || ends_with(w, "shes"))
        return w.substr(0, n - 2);
    if (n >= 4 && w.back() == 's' && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is"))
        return w.substr(0, n - 1);
    return w;
}

}  // namespace

std::string lemmatise_head(std::string_view surface) {
    std::string w = lower_ascii(surface);
    const auto& irregular = irregular_plurals();
    if (auto it = irregular.find(w); it != irregular.end()) return std::string(it->second);
    if (keep_as_is().contains(w)) return w;
    std::string stripped = strip_plural_suffix(w);
    if (auto it = irregular.find(stripped); it != irregular.end()) return std::string(it->second);
    return stripped;
}

std::vector<std::size_t> compound_pair_positions(const NgramRecord& record) {
    std::vector<std::size_t> out;
    const auto& toks = record.tokens;
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
        if (toks[i].pos != Pos::Noun || toks[i + 1].pos != Pos::Noun) continue;
        // "not surrounded by nouns": neighbours inside the window must not be
        // nouns; window edges count as non-noun.
        if (i > 0 && toks[i - 1].pos == Pos::Noun) continue;
        if (i + 2 < toks.size() && toks[i + 2].pos == Pos::Noun) continue;
        if (!is_alphabetic(toks[i].surface) || !is_alphabetic(toks[i + 1].surface)) continue;
        out.push_back(i);
    }
    return out;
}

std::vector<CompoundOccurrence> extract_compounds(const NgramRecord& record,
                                                  const DecadeConfig& decades) {
    std::vector<CompoundOccurrence> out;
    if (!decades.year_in_range(record.year)) return out;
    const auto& toks = record.tokens;
    const int decade = DecadeConfig::decade_of_year(record.year);
    for (std::size_t i : compound_pair_positions(record)) {
        out.push_back({lower_ascii(toks[i].surface), lemmatise_head(toks[i + 1].surface), decade,
                       record.match_count});
    }
    return out;
}

CompoundTable::CompoundTable(const DecadeConfig& decades) : decades_(decades) {
    decades_.validate();
}

void CompoundTable::add(const CompoundOccurrence& occ) {
    if (!decades_.decade_in_range(occ.decade)) throw std::invalid_argument("occurrence decade out of range");
    std::string key = occ.modifier + ' ' + occ.head;
    auto [it, inserted] = pairs_.try_emplace(std::move(key));
    if (inserted) {
        it->second.compound = {occ.modifier, occ.head};
        it->second.counts_by_decade.assign(static_cast<std::size_t>(decades_.n_decades()), 0);
    }
    it->second.counts_by_decade[static_cast<std::size_t>(decades_.decade_index(occ.decade))] += occ.count;
}

void CompoundTable::merge(const CompoundTable& other) {
    for (const auto& [key, entry] : other.pairs_) {
        auto [it, inserted] = pairs_.try_emplace(key);
        if (inserted) {
            it->second.compound = entry.compound;
            it->second.counts_by_decade.assign(static_cast<std::size_t>(decades_.n_decades()), 0);
        }
        for (std::size_t d = 0; d < entry.counts_by_decade.size(); ++d)
            it->second.counts_by_decade[d] += entry.counts_by_decade[d];
    }
}

bool CompoundTable::attested(const std::string& modifier, const std::string& head) const {
    return pairs_.contains(modifier + ' ' + head);
}

std::uint64_t CompoundTable::count(const std::string& modifier, const std::string& head,
                                   int decade) const {
    auto it = pairs_.find(modifier + ' ' + head);
    if (it == pairs_.end()) return 0;
    if (!decades_.decade_in_range(decade)) return 0;
    return it->second.counts_by_decade[static_cast<std::size_t>(decades_.decade_index(decade))];
}

std::vector<const CompoundTable::PairEntry*> CompoundTable::sorted_entries() const {
    std::vector<const PairEntry*> out;
    out.reserve(pairs_.size());
    for (const auto& [key, entry] : pairs_) out.push_back(&entry);
    std::sort(out.begin(), out.end(),
              [](const PairEntry* a, const PairEntry* b) { return a->compound < b->compound; });
    return out;
}

void CompoundTable::save_tsv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    for (const PairEntry* e : sorted_entries()) {
        for (std::size_t d = 0; d < e->counts_by_decade.size(); ++d) {
            if (e->counts_by_decade[d] == 0) continue;
            out << e->compound.modifier << '\t' << e->compound.head << '\t'
                << decades_.all_decades()[d] << '\t' << e->counts_by_decade[d] << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

CompoundTable CompoundTable::load_tsv(const std::filesystem::path& path,
                                      const DecadeConfig& decades) {
    CompoundTable table(decades);
    util::LineReader reader(path);
    std::string line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = line.find('\t', t1 + 1);
        std::size_t t3 = line.find('\t', t2 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos || t3 == std::string::npos)
            throw std::runtime_error("malformed compound table line: " + line);
        CompoundOccurrence occ;
        occ.modifier = line.substr(0, t1);
        occ.head = line.substr(t1 + 1, t2 - t1 - 1);
        occ.decade = std::stoi(line.substr(t2 + 1, t3 - t2 - 1));
        occ.count = std::stoull(line.substr(t3 + 1));
        table.add(occ);
    }
    return table;
}

}  // namespace nncomp::corpus
