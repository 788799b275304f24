#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ids {

struct FoldSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// Stratified k-fold assignment. Each class's rows are shuffled with a
// class-derived stream and dealt so per-class test counts differ by at most
// one across folds; which folds take the remainder rotates with the class
// code so no fold is systematically larger. Outputs are ascending.
// Requires k >= 2 and at least k rows of every class.
std::vector<FoldSplit> stratified_kfold(std::span<const int> labels,
                                        std::size_t n_classes, std::size_t k,
                                        std::uint64_t seed);

}  // namespace ids
