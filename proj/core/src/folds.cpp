#include "ids/folds.hpp"

#include <string>

#include "ids/error.hpp"
#include "ids/rng.hpp"

namespace ids {

std::vector<FoldSplit> stratified_kfold(std::span<const int> labels,
                                        std::size_t n_classes, std::size_t k,
                                        std::uint64_t seed) {
    if (k < 2) throw ConfigError("k-fold requires k >= 2, got " + std::to_string(k));

    std::vector<std::vector<std::size_t>> by_class(n_classes);
    for (std::size_t r = 0; r < labels.size(); ++r) {
        const int c = labels[r];
        if (c < 0 || static_cast<std::size_t>(c) >= n_classes) {
            throw DataError("label code " + std::to_string(c) + " out of range");
        }
        by_class[static_cast<std::size_t>(c)].push_back(r);
    }

    std::vector<std::size_t> fold_of(labels.size());
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::vector<std::size_t>& rows = by_class[c];
        if (rows.size() < k) {
            throw DataError("class code " + std::to_string(c) + " has " +
                            std::to_string(rows.size()) + " rows, fewer than k=" +
                            std::to_string(k));
        }
        Rng rng(mix_seed(seed, seedstream::kFoldClass, c));
        rng.shuffle(rows);
        const std::size_t base = rows.size() / k;
        const std::size_t rem = rows.size() % k;
        std::size_t next = 0;
        for (std::size_t f = 0; f < k; ++f) {
            // Folds (c) ... (c + rem - 1) mod k absorb this class's remainder.
            const bool extra = ((f + k - c % k) % k) < rem;
            const std::size_t take = base + (extra ? 1 : 0);
            for (std::size_t i = 0; i < take; ++i) fold_of[rows[next++]] = f;
        }
    }

    std::vector<FoldSplit> folds(k);
    for (std::size_t r = 0; r < labels.size(); ++r) {
        for (std::size_t f = 0; f < k; ++f) {
            (fold_of[r] == f ? folds[f].test : folds[f].train).push_back(r);
        }
    }
    return folds;
}

}  // namespace ids
