#pragma once

#include <vector>

namespace nncomp::corpus {

// Temporal layout of the corpus: which decades exist, which train, which
// validate, which decade supplies the novel test compounds.
struct DecadeConfig {
    int first_year = 1800;
    int last_year = 2009;
    int first_train_decade = 1800;
    int last_train_decade = 1980;  // 19 training decades
    int validation_decade = 1990;
    int test_decade = 2000;

    static int decade_of_year(int year) { return year / 10 * 10; }

    bool year_in_range(int year) const { return year >= first_year && year <= last_year; }
    bool decade_in_range(int decade) const {
        return decade >= decade_of_year(first_year) && decade <= decade_of_year(last_year);
    }
    bool is_training_decade(int decade) const {
        return decade >= first_train_decade && decade <= last_train_decade;
    }

    std::vector<int> training_decades() const {
        std::vector<int> out;
        for (int d = first_train_decade; d <= last_train_decade; d += 10) out.push_back(d);
        return out;
    }

    std::vector<int> all_decades() const {
        std::vector<int> out;
        for (int d = decade_of_year(first_year); d <= decade_of_year(last_year); d += 10)
            out.push_back(d);
        return out;
    }

    int decade_index(int decade) const { return (decade - decade_of_year(first_year)) / 10; }
    int n_decades() const { return static_cast<int>(all_decades().size()); }

    // Throws std::invalid_argument on overlapping or out-of-range splits.
    void validate() const;
};

}  // namespace nncomp::corpus
