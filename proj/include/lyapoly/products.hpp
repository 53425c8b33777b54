#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lyapoly/family.hpp"
#include "lyapoly/matrix.hpp"
#include "lyapoly/polytope.hpp"

namespace lyapoly {

/// A word over matrix indices in application order: word[0] acts first, so
/// the product is B[word[n-1]] ... B[word[0]].
using Word = std::vector<std::size_t>;

struct ProductCandidate {
    Word word;
    double log_rho = 0.0;           // ln rho(product); may be -inf
    double rho = 0.0;               // may overflow to +inf for long words
    double averaged_rho = 0.0;      // rho^(1/n)

    [[nodiscard]] std::size_t length() const noexcept { return word.size(); }
    [[nodiscard]] double log_averaged_rho() const noexcept { return log_rho / static_cast<double>(word.size()); }
};

enum class SearchMode { Max, Min };
enum class SearchStrategy { Exhaustive, BranchBound, TwoBlock };

struct SearchOptions {
    std::size_t max_length = 8;
    SearchMode mode = SearchMode::Max;
    SearchStrategy strategy = SearchStrategy::Exhaustive;
    std::size_t max_products = 5'000'000;
    double prune_gap = 0.0;
};

struct SearchStats {
    std::size_t evaluated = 0;  // words whose spectral radius was computed
    std::size_t visited = 0;    // prefix nodes in the enumeration tree
    std::size_t pruned = 0;     // subtrees cut by the norm bound
};

/// Best word of length <= max_length: ties within 1e-12 in ln(averaged rho)
/// go to the shorter word, then the lexicographically smaller one. Only
/// aperiodic words in least-rotation form are evaluated.
ProductCandidate search_candidate(const std::vector<Matrix>& family_exp, const SearchOptions& options,
                                  SearchStats* stats = nullptr);

/// Number of aperiodic necklaces of length 1..max_length over k letters,
/// saturating at SIZE_MAX.
std::size_t lyndon_word_count(std::size_t letters, std::size_t max_length);

/// Evaluates one word.
ProductCandidate evaluate_word(const std::vector<Matrix>& family_exp, const Word& word);

/// Least rotation of a word.
Word least_rotation(const Word& word);

/// Product-order rendering in least-rotation form, e.g. "B1^2 B2 B1^3 B2".
std::string render_word(const Word& word, const std::string& prefix = "B");

struct InitialVertices {
    std::vector<Vector> vertices;
    std::vector<std::size_t> prefix_lengths;  // prefix of the word mapping v1 to the vertex
};

/// v1 = real leading vector of the candidate product, v_{i+1} = B[word[i-1]] v_i.
/// Near-duplicates are collapsed (and +/- pairs for symmetric hulls); for
/// the cone hulls tiny negative roundoff is clipped to zero.
InitialVertices initial_vertices(const Word& word, const std::vector<Matrix>& family_exp, HullKind hull);

/// {A - shift I : A in family}.
MatrixFamily normalize_family(const MatrixFamily& family, double shift);

/// {e^{tau A} : A in family}.
std::vector<Matrix> exponentiate(const MatrixFamily& family, double tau);

}  // namespace lyapoly
