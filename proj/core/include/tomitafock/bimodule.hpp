#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "tomitafock/fusion.hpp"

namespace tomitafock {

using Complex = std::complex<double>;

/// Element sum_b c_b I_b of the base algebra A = ⊕_b C I_b. Product and
/// involution are componentwise; the trace weights I_b by d_b.
struct AlgebraElement {
    std::map<int, Complex> coeffs; // label id -> coefficient, zeros pruned

    Complex at(int label) const;
    void add(int label, Complex c);
    AlgebraElement& operator+=(const AlgebraElement& o);
    AlgebraElement& operator-=(const AlgebraElement& o);
    AlgebraElement operator*(const AlgebraElement& o) const; // componentwise
    AlgebraElement adjoint() const;                          // componentwise conjugate
    AlgebraElement& scale(Complex c);
    double sup_norm() const; // max_b |c_b|
    bool positive(double tol = 1e-12) const;
};

AlgebraElement algebra_unit(const FusionData& f);
Complex trace(const FusionData& f, const AlgebraElement& a); // sum c_b d_b

/// Basis vector of H(1): the index-th element of the fixed orthonormal basis
/// of isometries of Hom(src, dst (x) letter). Valid iff
/// 0 <= index < hom_dim(src, dst, letter).
struct BasisVector {
    int src = 0;
    int dst = 0;
    Letter letter;
    int index = 0;
    auto operator<=>(const BasisVector&) const = default;
};

/// Throws InputError unless v is a valid basis vector of the model.
void check_basis_vector(const Model& m, const BasisVector& v);

struct ScaledVector {
    BasisVector vec;
    double coeff = 1.0;
};

/// Finite linear combination of basis vectors.
struct BimoduleVector {
    std::map<BasisVector, Complex> terms;

    static BimoduleVector basis(const BasisVector& v, Complex c = 1.0);
    BimoduleVector& add(const BasisVector& v, Complex c);
    BimoduleVector& operator+=(const BimoduleVector& o);
    BimoduleVector operator-(const BimoduleVector& o) const;
    BimoduleVector& scale(Complex c);
    bool empty() const { return terms.empty(); }
};

/// Conjugation v -> sqrt(d_src/d_dst) * (dst, src, bar(letter), index).
/// Involutive: the two scales multiply to one exactly.
ScaledVector bar(const Model& m, const BasisVector& v);

/// S: conjugate-linear extension of xi -> sqrt(λ_letter) bar(xi).
BimoduleVector apply_S(const Model& m, const BimoduleVector& v);

/// U(z): multiplies every letter-α term by λ_α^{iz}; U(z)U(w) = U(z+w).
BimoduleVector apply_U(const Model& m, Complex z, const BimoduleVector& v);

/// Two-sided action A · v · B of algebra elements.
BimoduleVector act(const AlgebraElement& a, const BimoduleVector& v, const AlgebraElement& b);

/// A-valued inner product, conjugate-linear in the first slot; for basis
/// vectors <v,w>_A = δ_{v=w} I_src.
AlgebraElement inner_product_A(const BimoduleVector& v, const BimoduleVector& w);

/// Scalar inner product τ ∘ <.,.>_A.
Complex inner_product(const Model& m, const BimoduleVector& v, const BimoduleVector& w);

/// Nested A-valued inner product of two tensor chains of equal length.
/// Chains must be composable (src of factor k equals dst of factor k+1);
/// non-composable input is an error, distinct from the value 0.
/// Length 0 takes algebra elements and returns a* b.
AlgebraElement tensor_inner_product(const Model& m,
                                    std::span<const BasisVector> u,
                                    std::span<const BasisVector> w);
AlgebraElement tensor_inner_product(const AlgebraElement& a, const AlgebraElement& b);

bool chain_composable(std::span<const BasisVector> chain);

/// Residuals of the Tomita-bimodule axioms evaluated on random vectors:
/// S(A·v·B) = B*·S(v)·A*, S² = id, <v, U(z)w> = <U(-z̄)v, w>, and
/// <S(v), S(w)> = <w, U(-i)v>. Failures are reported, not thrown.
struct TomitaAxiomReport {
    double s_bimodule = 0;
    double s_involutive = 0;
    double u_adjoint = 0;
    double s_density = 0; // axiom (3)(d)
    double max_residual = 0;
};

TomitaAxiomReport check_tomita_axioms(const Model& m, int samples, std::uint64_t seed);

/// All valid basis vectors of the model, in deterministic order.
std::vector<BasisVector> all_basis_vectors(const Model& m);

/// Deterministic random sampling helpers shared by the test drivers.
BimoduleVector random_bimodule_vector(const Model& m, std::uint64_t& state, int max_terms = 3);
std::uint64_t split_mix(std::uint64_t& state);
double uniform_unit(std::uint64_t& state);

} // namespace tomitafock
