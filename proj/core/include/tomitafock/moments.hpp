#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tomitafock/bimodule.hpp"

namespace tomitafock {

/// Non-crossing pair partition of {0,...,2n-1}: pairs (i,j) with i < j, no
/// i_k < i_l < j_k < j_l, listed sorted by first element.
using PairPartition = std::vector<std::pair<int, int>>;

/// All non-crossing pair partitions, generated by recursive first-element
/// pairing (interval splitting), so every emitted partition is non-crossing by
/// construction. Deterministic order; |result| = Catalan(n).
std::vector<PairPartition> enumerate_nc2(int n, int cap = 12);

long long catalan(int n);

/// One generator of a word: a scalar multiple of a basis vector.
struct WordFactor {
    BasisVector vec;
    Complex coeff = 1.0;
};

/// Word read right-to-left: factors[0] acts first, the word is
/// Γ(f_{L-1})···Γ(f_0). The β-chain is src(f_0), dst(f_0)=src(f_1), ...;
/// closed words return to src(f_0).
struct WordSpec {
    std::vector<WordFactor> factors;

    int length() const { return static_cast<int>(factors.size()); }
    bool composable() const;
    bool closed() const;
    std::vector<BimoduleVector> as_vectors() const;

    static WordSpec gamma(const BasisVector& v, Complex c = 1.0);
    WordSpec& append(const BasisVector& v, Complex c = 1.0);
    /// Appends the factor Γ(S(ξ)) = Γ(ξ)* for the basis vector ξ.
    WordSpec& append_star(const Model& m, const BasisVector& v, Complex c = 1.0);
    WordSpec repeat(int k) const;
};

/// τ∘E of the word via the non-crossing pairing sum
///   d_{β1} Σ_{NC2(2n)} Π_k (√λ_{α_{j_k}} / d_{β_{i_k}}) <ξ̄_{j_k}, ξ_{i_k}>.
/// Odd or non-closed words return 0; a non-composable chain is an error,
/// distinct from the value 0.
Complex moment_nc(const Model& m, const WordSpec& w);

/// First K moments of the Marchenko-Pastur law MP(λ), 0 < λ <= 1, computed
/// analytically (Narayana sums m_k = Σ_r N(k,r) λ^{r-1}) and cross-checked
/// against adaptive quadrature of the density
/// √(4λ-(t-(1+λ))²)/(2πλt) on ((1-√λ)², (1+√λ)²). Disagreement beyond 1e-9
/// throws (it signals an implementation bug). Returns the analytic values.
std::vector<double> mp_moments(double lambda, int K);

double narayana_moment(double lambda, int k);

struct GammaMomentsReport {
    double lambda_eff = 1.0;  // λ_α d_src / d_dst after any role swap
    bool swapped = false;     // true when ξ̄ was used because λ_eff exceeded 1
    std::vector<double> normalized; // m_k = τ∘E((Γ*Γ)^k) / d_src
};

/// Normalized moments of Γ(ξ)*Γ(ξ) via moment_nc; contract: equals
/// mp_moments(λ_eff, K).
GammaMomentsReport gamma_star_gamma_moments(const Model& m, const BasisVector& xi, int K);

/// Partition of the basis cells by the underlying object of their letter;
/// each group is closed under conjugation, hence spans a Tomita sub-bimodule.
std::vector<std::vector<BasisVector>> letter_pair_groups(const Model& m);

struct FreenessOptions {
    int trials = 100;
    std::uint64_t seed = 42;
    bool centered = true;  // false gives the negative control
    int max_factors = 4;
};

struct FreenessReport {
    double max_residual = 0;
    int words_checked = 0;
};

/// Samples alternating words with factors drawn from the given orthogonal
/// sub-bimodule groups, centers each factor by subtracting its conditional
/// expectation, and reports sup_b |E(word)_b| evaluated on the Fock model.
FreenessReport freeness_check(const Model& m,
                              const std::vector<std::vector<BasisVector>>& groups,
                              const FreenessOptions& opt);

/// Formal element of the *-algebra generated by the base algebra and the
/// Γ(v): Γ-words plus a diagonal algebra part. A word [g0,...,gk] denotes
/// Γ(g_k)···Γ(g_0) (index 0 acts first).
struct GammaPoly {
    std::map<std::vector<BasisVector>, Complex> words;
    AlgebraElement diag;

    static GammaPoly gamma(const BasisVector& v, Complex c = 1.0);
    static GammaPoly algebra(const AlgebraElement& a);
    GammaPoly& add_word(std::vector<BasisVector> w, Complex c);
    GammaPoly& operator+=(const GammaPoly& o);
};

/// Operator product p·q (p acts last).
GammaPoly poly_product(const GammaPoly& p, const GammaPoly& q);
GammaPoly poly_left_mul(const AlgebraElement& a, const GammaPoly& p);
GammaPoly poly_right_mul(const GammaPoly& p, const AlgebraElement& a);

/// E of a pure Γ-word, supplied by the caller.
using WordExpectation = std::function<AlgebraElement(const std::vector<BasisVector>&)>;

/// NC2-formula expectation of a single word (0 for odd, non-closed or
/// non-composable chains); keeps the recursion independent of the Fock route.
WordExpectation oracle_expectation(const Model& m);

AlgebraElement poly_expectation(const GammaPoly& p, const WordExpectation& e);

/// E(T_1···T_l) for alternating factors via the freeness expansion: each
/// factor splits into centered part plus expectation, expectations fold into
/// neighbours (merging same-group neighbours), and fully centered alternating
/// products vanish. Non-alternating input is an error.
AlgebraElement amalgamated_moment_recursion(const Model& m,
                                            const std::vector<std::pair<int, GammaPoly>>& factors,
                                            const WordExpectation& e);

/// Deterministic random closed composable word of the given length
/// (rejection-sampled walk on the nonzero fusion channels).
WordSpec random_closed_word(const Model& m, int length, std::uint64_t& state, int max_tries = 500);
/// Random composable (not necessarily closed) word.
WordSpec random_word(const Model& m, int length, std::uint64_t& state);

} // namespace tomitafock
