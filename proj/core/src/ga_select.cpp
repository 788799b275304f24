#include "ids/ga_select.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "ids/error.hpp"
#include "ids/folds.hpp"
#include "ids/metrics.hpp"
#include "ids/naive_bayes.hpp"
#include "ids/parallel.hpp"

namespace ids {

std::size_t Chromosome::popcount() const {
    std::size_t n = 0;
    for (std::uint8_t b : bits) n += b;
    return n;
}

std::string Chromosome::key() const {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0) s[i] = '1';
    }
    return s;
}

std::vector<std::size_t> Chromosome::selected() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0) out.push_back(i);
    }
    return out;
}

void GaConfig::validate() const {
    if (population_size < 2) throw ConfigError("ga population_size must be >= 2");
    if (elitism >= population_size) {
        throw ConfigError("ga elitism must be below population_size");
    }
    if (crossover_prob < 0.0 || crossover_prob > 1.0) {
        throw ConfigError("ga crossover_prob must be in [0, 1]");
    }
    if (mutation_bit_prob.has_value() &&
        (*mutation_bit_prob < 0.0 || *mutation_bit_prob > 1.0)) {
        throw ConfigError("ga mutation_bit_prob must be in [0, 1]");
    }
    if (tournament_size < 1) throw ConfigError("ga tournament_size must be >= 1");
    if (fitness_folds < 2) throw ConfigError("ga fitness_folds must be >= 2");
}

nlohmann::json GaConfig::to_json() const {
    nlohmann::json doc = {{"population_size", population_size},
                          {"generations", generations},
                          {"crossover_prob", crossover_prob},
                          {"tournament_size", tournament_size},
                          {"elitism", elitism},
                          {"fitness_folds", fitness_folds},
                          {"seed", seed}};
    doc["mutation_bit_prob"] = mutation_bit_prob.has_value()
                                   ? nlohmann::json(*mutation_bit_prob)
                                   : nlohmann::json(nullptr);
    return doc;
}

GaConfig GaConfig::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("ga config must be a JSON object");
    GaConfig config;
    for (const auto& [key, value] : doc.items()) {
        if (key == "population_size") {
            config.population_size = value.get<std::size_t>();
        } else if (key == "generations") {
            config.generations = value.get<std::size_t>();
        } else if (key == "crossover_prob") {
            config.crossover_prob = value.get<double>();
        } else if (key == "mutation_bit_prob") {
            if (!value.is_null()) config.mutation_bit_prob = value.get<double>();
        } else if (key == "tournament_size") {
            config.tournament_size = value.get<std::size_t>();
        } else if (key == "elitism") {
            config.elitism = value.get<std::size_t>();
        } else if (key == "fitness_folds") {
            config.fitness_folds = value.get<std::size_t>();
        } else if (key == "seed") {
            config.seed = value.get<std::uint64_t>();
        } else {
            throw ConfigError("unknown ga config key '" + key + "'");
        }
    }
    config.validate();
    return config;
}

const double* FitnessCache::find(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

void FitnessCache::insert(const std::string& key, double fitness) {
    entries_.emplace(key, fitness);
}

nlohmann::json GaRunResult::to_json() const {
    nlohmann::json hist = nlohmann::json::array();
    for (const GaHistoryEntry& h : history) {
        hist.push_back(
            {{"generation", h.generation}, {"best", h.best}, {"mean", h.mean}});
    }
    return {{"best_mask", best_chromosome.key()},
            {"selected_features", selected_features},
            {"best_fitness", best_fitness},
            {"history", std::move(hist)},
            {"evaluations", evaluations}};
}

std::vector<Chromosome> init_population(std::size_t n_features,
                                        std::size_t population_size,
                                        std::uint64_t seed) {
    if (n_features < 1) throw ConfigError("init_population needs n_features >= 1");
    Rng rng(seed);
    std::vector<Chromosome> population(population_size);
    for (Chromosome& chrom : population) {
        chrom.bits.resize(n_features);
        for (std::uint8_t& b : chrom.bits) b = rng.bernoulli(0.5) ? 1 : 0;
        if (chrom.popcount() == 0) chrom.bits[rng.below(n_features)] = 1;
    }
    return population;
}

namespace {

// NB accuracy over precomputed folds, counts pooled across folds.
double nb_cv_accuracy(const DataTable& masked, const std::vector<FoldSplit>& folds) {
    ConfusionMatrix pooled(masked.n_classes(), masked.label_names());
    for (const FoldSplit& fold : folds) {
        const GaussianNB model = GaussianNB::fit(masked.select_rows(fold.train));
        const DataTable test = masked.select_rows(fold.test);
        const std::vector<int> y_pred = predict_all(model, test);
        pooled += confusion(test.labels(), y_pred, masked.n_classes(),
                            masked.label_names());
    }
    return accuracy(pooled);
}

}  // namespace

double fitness(const Chromosome& chrom, const DataTable& table, std::size_t folds,
               std::uint64_t seed, FitnessCache* cache) {
    if (chrom.size() != table.n_features()) {
        throw DataError("chromosome length " + std::to_string(chrom.size()) +
                        " does not match feature count " +
                        std::to_string(table.n_features()));
    }
    if (chrom.popcount() == 0) return 0.0;
    const std::string key = chrom.key();
    if (cache != nullptr) {
        if (const double* hit = cache->find(key)) return *hit;
    }
    const std::vector<FoldSplit> splits =
        stratified_kfold(table.labels(), table.n_classes(), folds, seed);
    const double value = nb_cv_accuracy(apply_mask(table, chrom), splits);
    if (cache != nullptr) cache->insert(key, value);
    return value;
}

std::size_t tournament_select(const std::vector<double>& fitnesses,
                              std::size_t tournament_size, Rng& rng) {
    if (fitnesses.empty()) throw ConfigError("tournament over an empty population");
    if (tournament_size < 1 || tournament_size > fitnesses.size()) {
        throw ConfigError("tournament_size must be in [1, population_size]");
    }
    std::size_t winner = rng.below(fitnesses.size());
    for (std::size_t t = 1; t < tournament_size; ++t) {
        const std::size_t drawn = rng.below(fitnesses.size());
        if (fitnesses[drawn] > fitnesses[winner] ||
            (fitnesses[drawn] == fitnesses[winner] && drawn < winner)) {
            winner = drawn;
        }
    }
    return winner;
}

std::pair<Chromosome, Chromosome> two_point_crossover_at(const Chromosome& p1,
                                                         const Chromosome& p2,
                                                         std::size_t a, std::size_t b) {
    if (p1.size() != p2.size()) throw DataError("crossover parents differ in length");
    if (a >= b || b > p1.size()) throw ConfigError("crossover cuts must satisfy a < b <= length");
    Chromosome c1 = p1;
    Chromosome c2 = p2;
    for (std::size_t i = a; i < b; ++i) std::swap(c1.bits[i], c2.bits[i]);
    return {std::move(c1), std::move(c2)};
}

std::pair<Chromosome, Chromosome> two_point_crossover(const Chromosome& p1,
                                                      const Chromosome& p2, Rng& rng) {
    if (p1.size() != p2.size()) throw DataError("crossover parents differ in length");
    if (p1.size() < 2) throw DataError("crossover needs length >= 2");
    // Uniform over distinct cut pairs 0 <= a < b <= length.
    std::size_t a = rng.below(p1.size() + 1);
    std::size_t b = rng.below(p1.size() + 1);
    while (a == b) {
        a = rng.below(p1.size() + 1);
        b = rng.below(p1.size() + 1);
    }
    if (a > b) std::swap(a, b);
    return two_point_crossover_at(p1, p2, a, b);
}

Chromosome flip_bit_mutation(const Chromosome& chrom, double mutation_bit_prob,
                             Rng& rng) {
    if (mutation_bit_prob < 0.0 || mutation_bit_prob > 1.0) {
        throw ConfigError("mutation_bit_prob must be in [0, 1]");
    }
    Chromosome out = chrom;
    for (std::uint8_t& b : out.bits) {
        if (rng.uniform() < mutation_bit_prob) b ^= 1;
    }
    if (out.popcount() == 0 && !out.bits.empty()) {
        out.bits[rng.below(out.bits.size())] = 1;
    }
    return out;
}

namespace {

// Evaluates every chromosome through the cache, running the genuinely new
// keys in parallel. Deduplicating first keeps the evaluation count and the
// cached values independent of thread scheduling.
std::vector<double> evaluate_population(const std::vector<Chromosome>& population,
                                        const DataTable& table,
                                        const std::vector<FoldSplit>& folds,
                                        FitnessCache& cache, std::size_t& evaluations) {
    std::vector<std::string> keys(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) keys[i] = population[i].key();

    std::vector<std::size_t> fresh;  // first index of each uncached unique key
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (population[i].popcount() == 0 || cache.find(keys[i]) != nullptr) continue;
        bool seen = false;
        for (std::size_t j : fresh) {
            if (keys[j] == keys[i]) {
                seen = true;
                break;
            }
        }
        if (!seen) fresh.push_back(i);
    }

    std::vector<double> fresh_values(fresh.size());
    parallel_for(fresh.size(), [&](std::size_t s) {
        fresh_values[s] =
            nb_cv_accuracy(apply_mask(table, population[fresh[s]]), folds);
    });
    for (std::size_t s = 0; s < fresh.size(); ++s) {
        cache.insert(keys[fresh[s]], fresh_values[s]);
    }
    evaluations += fresh.size();

    std::vector<double> fitnesses(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (population[i].popcount() == 0) {
            fitnesses[i] = 0.0;
            continue;
        }
        fitnesses[i] = *cache.find(keys[i]);
    }
    return fitnesses;
}

GaHistoryEntry history_entry(std::size_t generation,
                             const std::vector<double>& fitnesses) {
    GaHistoryEntry entry;
    entry.generation = generation;
    entry.best = *std::max_element(fitnesses.begin(), fitnesses.end());
    entry.mean = std::accumulate(fitnesses.begin(), fitnesses.end(), 0.0) /
                 static_cast<double>(fitnesses.size());
    return entry;
}

// Population indices ordered best-first: fitness desc, then fewer selected
// features, then lower index.
std::vector<std::size_t> ranked(const std::vector<Chromosome>& population,
                                const std::vector<double>& fitnesses) {
    std::vector<std::size_t> order(population.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (fitnesses[a] != fitnesses[b]) return fitnesses[a] > fitnesses[b];
        const std::size_t pa = population[a].popcount();
        const std::size_t pb = population[b].popcount();
        if (pa != pb) return pa < pb;
        return a < b;
    });
    return order;
}

}  // namespace

GaRunResult run_ga(const DataTable& table, const GaConfig& config) {
    config.validate();
    const std::size_t n_features = table.n_features();
    if (n_features < 2) throw DataError("feature selection needs at least 2 features");
    const double mutation_prob =
        config.mutation_bit_prob.value_or(1.0 / static_cast<double>(n_features));

    const std::vector<FoldSplit> folds =
        stratified_kfold(table.labels(), table.n_classes(), config.fitness_folds,
                         mix_seed(config.seed, seedstream::kGaFitnessFolds));

    FitnessCache cache;
    GaRunResult result;
    std::vector<Chromosome> population = init_population(
        n_features, config.population_size, mix_seed(config.seed, seedstream::kGaInit));
    std::vector<double> fitnesses =
        evaluate_population(population, table, folds, cache, result.evaluations);
    result.history.push_back(history_entry(0, fitnesses));

    auto track_best = [&](const Chromosome& chrom, double fit) {
        const bool better =
            fit > result.best_fitness ||
            (fit == result.best_fitness &&
             chrom.popcount() < result.best_chromosome.popcount());
        if (result.best_chromosome.bits.empty() || better) {
            result.best_chromosome = chrom;
            result.best_fitness = fit;
        }
    };
    for (std::size_t i = 0; i < population.size(); ++i) {
        track_best(population[i], fitnesses[i]);
    }

    for (std::size_t g = 1; g <= config.generations; ++g) {
        std::vector<Chromosome> next;
        next.reserve(config.population_size);
        const std::vector<std::size_t> order = ranked(population, fitnesses);
        for (std::size_t e = 0; e < config.elitism; ++e) {
            next.push_back(population[order[e]]);
        }

        std::size_t pair_index = 0;
        while (next.size() < config.population_size) {
            Rng rng(mix_seed(config.seed, seedstream::kGaBreed, g, pair_index++));
            const std::size_t i1 =
                tournament_select(fitnesses, config.tournament_size, rng);
            const std::size_t i2 =
                tournament_select(fitnesses, config.tournament_size, rng);
            Chromosome c1 = population[i1];
            Chromosome c2 = population[i2];
            if (rng.uniform() < config.crossover_prob) {
                std::tie(c1, c2) = two_point_crossover(c1, c2, rng);
            }
            next.push_back(flip_bit_mutation(c1, mutation_prob, rng));
            if (next.size() < config.population_size) {
                next.push_back(flip_bit_mutation(c2, mutation_prob, rng));
            }
        }

        population = std::move(next);
        fitnesses =
            evaluate_population(population, table, folds, cache, result.evaluations);
        result.history.push_back(history_entry(g, fitnesses));
        for (std::size_t i = 0; i < population.size(); ++i) {
            track_best(population[i], fitnesses[i]);
        }
    }

    const std::vector<std::string> names = table.feature_names();
    for (std::size_t f : result.best_chromosome.selected()) {
        result.selected_features.push_back(names[f]);
    }
    return result;
}

DataTable apply_mask(const DataTable& table, const Chromosome& chrom) {
    if (chrom.size() != table.n_features()) {
        throw DataError("mask length " + std::to_string(chrom.size()) +
                        " does not match feature count " +
                        std::to_string(table.n_features()));
    }
    return table.select_features(chrom.selected());
}

}  // namespace ids
