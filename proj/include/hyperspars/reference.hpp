#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperspars/hypergraph.hpp"

namespace hyperspars {

constexpr int kBruteForceMaxN = 24;

class TooLarge : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExactCut {
    Subset subset;
    Rational value;
};

// Minimum sparsity over all proper subsets. Ties go to the lexicographically
// smallest sorted index list.
ExactCut brute_force_sparsest(const DirectedHypergraph& h);
// Minimum expansion over subsets with omega(S) <= omega(V) / 2, omega being the
// weighted degree. Throws UndefinedExpansion if no such subset has positive weight.
ExactCut brute_force_expansion(const DirectedHypergraph& h);

enum class GenModel { UniformRandom, PlantedCut, ExpanderLike };

struct GeneratorSpec {
    int n = 8;
    int m = 10;
    int r_max = 3;  // max |T(e)| + |H(e)|
    int kappa = 1;
    double w_lo = 1, w_hi = 4;  // integer weights drawn from [w_lo, w_hi]
    GenModel model = GenModel::UniformRandom;
    double balance = 0.5;   // planted side holds ceil(balance n) vertices
    double inside_w = 4;    // weight of edges not leaving the planted side
    double crossing_w = 0;  // weight of edges leaving the planted side
    std::uint64_t seed = 0;
};

GenModel parse_model(const std::string& s);
const char* model_name(GenModel m);

// Deterministic in the spec. Throws std::invalid_argument for infeasible specs.
DirectedHypergraph generate(const GeneratorSpec& spec);

}  // namespace hyperspars
