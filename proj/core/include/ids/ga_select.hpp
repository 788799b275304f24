#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "ids/data_table.hpp"
#include "ids/rng.hpp"

namespace ids {

// Binary feature mask: bit i set means feature i is selected. Repair keeps
// at least one bit set everywhere downstream of creation.
struct Chromosome {
    std::vector<std::uint8_t> bits;

    std::size_t size() const { return bits.size(); }
    std::size_t popcount() const;
    // "0101..." string, the fitness-cache key.
    std::string key() const;
    std::vector<std::size_t> selected() const;

    bool operator==(const Chromosome&) const = default;
};

struct GaConfig {
    std::size_t population_size = 50;
    std::size_t generations = 30;
    double crossover_prob = 0.8;
    // Unset means 1/n_features, resolved when the run starts.
    std::optional<double> mutation_bit_prob;
    std::size_t tournament_size = 3;
    std::size_t elitism = 1;
    std::size_t fitness_folds = 5;
    std::uint64_t seed = 0;

    void validate() const;
    nlohmann::json to_json() const;
    static GaConfig from_json(const nlohmann::json& doc);
};

// Fitness memo keyed by Chromosome::key(); a hit must return the exact
// double stored by the first evaluation.
class FitnessCache {
  public:
    const double* find(const std::string& key) const;
    void insert(const std::string& key, double fitness);
    std::size_t size() const { return entries_.size(); }

  private:
    std::unordered_map<std::string, double> entries_;
};

struct GaHistoryEntry {
    std::size_t generation = 0;
    double best = 0.0;
    double mean = 0.0;
};

struct GaRunResult {
    Chromosome best_chromosome;
    double best_fitness = 0.0;
    std::vector<std::string> selected_features;
    std::vector<GaHistoryEntry> history;  // generations + 1 entries
    std::size_t evaluations = 0;          // NB trainings actually run

    nlohmann::json to_json() const;
};

// Random initial population: each bit Bernoulli(0.5), all-zero individuals
// repaired by setting one uniformly random bit.
std::vector<Chromosome> init_population(std::size_t n_features,
                                        std::size_t population_size,
                                        std::uint64_t seed);

// Mean pooled accuracy of Gaussian NB over a stratified `folds`-fold CV of
// the masked table; 0.0 for the all-zero mask without fitting anything.
// The seed fixes the fold split so every chromosome is scored on the same
// folds. A cache, when given, memoizes by bit-string key.
double fitness(const Chromosome& chrom, const DataTable& table, std::size_t folds,
               std::uint64_t seed, FitnessCache* cache = nullptr);

// Draws tournament_size population indices uniformly with replacement and
// returns the best one: highest fitness, ties to the lowest drawn index.
std::size_t tournament_select(const std::vector<double>& fitnesses,
                              std::size_t tournament_size, Rng& rng);

// Swaps the segment [a, b) between copies of the parents.
std::pair<Chromosome, Chromosome> two_point_crossover_at(const Chromosome& p1,
                                                         const Chromosome& p2,
                                                         std::size_t a, std::size_t b);

// Draws cut points 0 <= a < b <= length uniformly, then swaps [a, b).
std::pair<Chromosome, Chromosome> two_point_crossover(const Chromosome& p1,
                                                      const Chromosome& p2, Rng& rng);

// Flips each bit independently with the given probability; an all-zero
// result is repaired by setting one uniformly random bit.
Chromosome flip_bit_mutation(const Chromosome& chrom, double mutation_bit_prob,
                             Rng& rng);

// The full wrapper loop: evaluate, carry over the elite unchanged, breed the
// rest by tournament -> crossover (with crossover_prob, else clones) ->
// mutation. Fitness ties break toward fewer selected features. Deterministic
// under config.seed regardless of IDS_THREADS.
GaRunResult run_ga(const DataTable& table, const GaConfig& config);

// Table restricted to the mask's selected feature columns, order preserved.
DataTable apply_mask(const DataTable& table, const Chromosome& chrom);

}  // namespace ids
