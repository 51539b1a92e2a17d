#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tomitafock/bimodule.hpp"

namespace tomitafock {

/// Basis path of the truncated Fock space ⊕_{n<=N} H^{⊗n}. Degree 0 is the
/// vacuum vector I_base; degree n >= 1 is a composable chain of basis vectors,
/// chain[0] outermost, with src(chain[k]) == dst(chain[k+1]) and
/// src(chain.back()) == base. Squared norm is d_base.
struct FockPath {
    int base = 0;
    std::vector<BasisVector> chain;

    int degree() const { return static_cast<int>(chain.size()); }
    int src_label() const { return base; }
    int dst_label() const { return chain.empty() ? base : chain.front().dst; }
    auto operator<=>(const FockPath&) const = default;

    static FockPath vacuum(int label) { return FockPath{label, {}}; }
};

bool path_composable(const FockPath& p);

/// Deterministically ordered truncated Fock basis (degree-major, lexicographic
/// within each degree).
struct FockBasis {
    int depth = 0;
    std::vector<FockPath> paths;
    std::map<FockPath, int> index;
    std::vector<double> weight; // ||p||² = d_{src label}
    std::vector<int> count_per_degree;

    int size() const { return static_cast<int>(paths.size()); }
    int find(const FockPath& p) const; // -1 when absent
    int degree_of(int i) const { return paths[i].degree(); }
};

/// Enumerates every composable path of degree <= depth. Throws InputError when
/// the count exceeds the cap.
FockBasis enumerate_fock_basis(const Model& m, int depth, std::size_t cap = 2'000'000);

/// Coordinate-form operator on a FockBasis. The adjoint is taken with respect
/// to the weighted inner product: (T*)_{pq} = conj(T_{qp}) w_q / w_p.
struct SparseOperator {
    const FockBasis* basis = nullptr;
    std::map<std::pair<int, int>, Complex> entries;

    explicit SparseOperator(const FockBasis& b) : basis(&b) {}
    void add(int row, int col, Complex v);
    Complex at(int row, int col) const;
    SparseOperator adjoint() const;
    SparseOperator compose(const SparseOperator& o) const; // (*this) ∘ o
    SparseOperator& operator+=(const SparseOperator& o);
    SparseOperator& scale(Complex c);
    std::vector<Complex> apply(const std::vector<Complex>& v) const;
    double max_entry_diff(const SparseOperator& o) const;
    double max_abs() const;
};

/// L(ξ): creation. Output beyond the basis depth is dropped (truncation).
SparseOperator creation_matrix(const Model& m, const BimoduleVector& xi, const FockBasis& b);
/// L*(ξ): annihilation (adjoint of creation in the weighted inner product).
SparseOperator annihilation_matrix(const Model& m, const BimoduleVector& xi, const FockBasis& b);
/// Γ(ξ) = L(ξ) + L*(S(ξ)).
SparseOperator gamma_matrix(const Model& m, const BimoduleVector& xi, const FockBasis& b);
/// Left action of an algebra element (diagonal).
SparseOperator algebra_left_matrix(const Model& m, const AlgebraElement& a, const FockBasis& b);
/// Orthogonal projection e_A onto degree 0.
SparseOperator vacuum_projection(const FockBasis& b);

/// E(T) = Σ_b (<I_b, T I_b>/d_b) I_b, read off the degree-0 diagonal.
AlgebraElement conditional_expectation(const Model& m, const SparseOperator& t);
Complex tau_E(const Model& m, const SparseOperator& t);
/// τ_K ∘ E with K = Σ k_b I_b: Σ_b k_b d_b E(T)_b.
Complex tau_weighted(const Model& m, const AlgebraElement& e, const std::vector<double>& k);

/// Diagonal modular data: Δ eigenvalue ∏_k λ_{α_k} per path (1 in degree 0)
/// and the antilinear basis map J (reversed barred path with telescoped scale).
struct ModularData {
    std::vector<double> delta;
    std::vector<int> j_perm;
    std::vector<double> j_scale;
};
ModularData modular_data(const Model& m, const FockBasis& b);

/// Max-entry residual of Δ^{it} Γ(ξ) Δ^{-it} - λ_α^{it} Γ(ξ) over columns of
/// degree <= depth-1 (the truncation-safe region).
double modular_flow_check(const Model& m, const BasisVector& xi, double t, const FockBasis& b);

struct VacuumCheckReport {
    double sandwich_residual = 0;   // e T e vs E(T) e over sampled Γ-words
    double projection_residual = 0; // e² = e = e*
};
VacuumCheckReport vacuum_projection_check(const Model& m, const FockBasis& b, int samples,
                                          std::uint64_t seed);

/// Sparse vector on Fock paths; the scalable evaluation route for word
/// moments (operators applied lazily, no materialized matrices).
using PathVector = std::map<FockPath, Complex>;

PathVector apply_gamma(const Model& m, const BimoduleVector& xi, const PathVector& v, int depth);
PathVector apply_algebra_left(const AlgebraElement& a, const PathVector& v);

/// τ∘E(Γ(word[L-1])···Γ(word[0])). Exact: a length-L word never leaves degree
/// <= L starting from degree 0, so depth >= L is required (hard error, no
/// silent approximation) and the value is then independent of depth.
Complex word_moment_matrix(const Model& m, const std::vector<BimoduleVector>& word, int depth);

/// E(Γ(word[L-1])···Γ(word[0])) as an algebra element, same exactness rule.
AlgebraElement word_expectation(const Model& m, const std::vector<BimoduleVector>& word, int depth);

} // namespace tomitafock
