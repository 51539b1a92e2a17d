#include "tomitafock/bimodule.hpp"

#include <cmath>

namespace tomitafock {

namespace {
constexpr double kPruneTol = 0.0; // exact zeros only
}

Complex AlgebraElement::at(int label) const {
    auto it = coeffs.find(label);
    return it == coeffs.end() ? Complex(0) : it->second;
}

void AlgebraElement::add(int label, Complex c) {
    if (c == Complex(0)) return;
    auto [it, inserted] = coeffs.try_emplace(label, c);
    if (!inserted) {
        it->second += c;
        if (std::abs(it->second) <= kPruneTol) coeffs.erase(it);
    }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
    for (const auto& [l, c] : o.coeffs) add(l, c);
    return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
    for (const auto& [l, c] : o.coeffs) add(l, -c);
    return *this;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
    AlgebraElement out;
    for (const auto& [l, c] : coeffs) {
        Complex rhs = o.at(l);
        if (rhs != Complex(0)) out.add(l, c * rhs);
    }
    return out;
}

AlgebraElement AlgebraElement::adjoint() const {
    AlgebraElement out;
    for (const auto& [l, c] : coeffs) out.coeffs[l] = std::conj(c);
    return out;
}

AlgebraElement& AlgebraElement::scale(Complex c) {
    if (c == Complex(0)) {
        coeffs.clear();
        return *this;
    }
    for (auto& [l, v] : coeffs) v *= c;
    return *this;
}

double AlgebraElement::sup_norm() const {
    double s = 0;
    for (const auto& [l, c] : coeffs) s = std::max(s, std::abs(c));
    return s;
}

bool AlgebraElement::positive(double tol) const {
    for (const auto& [l, c] : coeffs) {
        if (std::abs(c.imag()) > tol) return false;
        if (c.real() < -tol) return false;
    }
    return true;
}

AlgebraElement algebra_unit(const FusionData& f) {
    AlgebraElement a;
    for (int b = 0; b < f.size(); ++b) a.coeffs[b] = 1.0;
    return a;
}

Complex trace(const FusionData& f, const AlgebraElement& a) {
    Complex s = 0;
    for (const auto& [l, c] : a.coeffs) s += c * f.dims[l];
    return s;
}

void check_basis_vector(const Model& m, const BasisVector& v) {
    int d = m.hom_dim(v.src, v.dst, v.letter);
    if (v.index < 0 || v.index >= d)
        throw InputError("basis vector index " + std::to_string(v.index) +
                         " out of range (hom dim " + std::to_string(d) + ")");
}

BimoduleVector BimoduleVector::basis(const BasisVector& v, Complex c) {
    BimoduleVector out;
    out.add(v, c);
    return out;
}

BimoduleVector& BimoduleVector::add(const BasisVector& v, Complex c) {
    if (c == Complex(0)) return *this;
    auto [it, inserted] = terms.try_emplace(v, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Complex(0)) terms.erase(it);
    }
    return *this;
}

BimoduleVector& BimoduleVector::operator+=(const BimoduleVector& o) {
    for (const auto& [v, c] : o.terms) add(v, c);
    return *this;
}

BimoduleVector BimoduleVector::operator-(const BimoduleVector& o) const {
    BimoduleVector out = *this;
    for (const auto& [v, c] : o.terms) out.add(v, -c);
    return out;
}

BimoduleVector& BimoduleVector::scale(Complex c) {
    if (c == Complex(0)) {
        terms.clear();
        return *this;
    }
    for (auto& [v, x] : terms) x *= c;
    return *this;
}

ScaledVector bar(const Model& m, const BasisVector& v) {
    // The scale sqrt(d_src/d_dst) is forced by anti-unitarity together with
    // the τ-normalization of the orthonormal isometry bases.
    ScaledVector out;
    out.vec = BasisVector{v.dst, v.src, bar(v.letter), v.index};
    out.coeff = std::sqrt(m.dim(v.src) / m.dim(v.dst));
    return out;
}

BimoduleVector apply_S(const Model& m, const BimoduleVector& v) {
    BimoduleVector out;
    for (const auto& [b, c] : v.terms) {
        ScaledVector w = bar(m, b);
        out.add(w.vec, std::conj(c) * std::sqrt(m.lam(b.letter)) * w.coeff);
    }
    return out;
}

BimoduleVector apply_U(const Model& m, Complex z, const BimoduleVector& v) {
    BimoduleVector out;
    for (const auto& [b, c] : v.terms) {
        // λ^{iz} = exp(iz log λ)
        Complex factor = std::exp(Complex(0, 1) * z * std::log(m.lam(b.letter)));
        out.add(b, c * factor);
    }
    return out;
}

BimoduleVector act(const AlgebraElement& a, const BimoduleVector& v, const AlgebraElement& b) {
    BimoduleVector out;
    for (const auto& [w, c] : v.terms) {
        Complex f = a.at(w.dst) * b.at(w.src);
        if (f != Complex(0)) out.add(w, c * f);
    }
    return out;
}

AlgebraElement inner_product_A(const BimoduleVector& v, const BimoduleVector& w) {
    AlgebraElement out;
    for (const auto& [b, c] : v.terms) {
        auto it = w.terms.find(b);
        if (it != w.terms.end()) out.add(b.src, std::conj(c) * it->second);
    }
    return out;
}

Complex inner_product(const Model& m, const BimoduleVector& v, const BimoduleVector& w) {
    return trace(m.fusion, inner_product_A(v, w));
}

bool chain_composable(std::span<const BasisVector> chain) {
    for (std::size_t k = 0; k + 1 < chain.size(); ++k)
        if (chain[k].src != chain[k + 1].dst) return false;
    return true;
}

AlgebraElement tensor_inner_product(const AlgebraElement& a, const AlgebraElement& b) {
    return a.adjoint() * b;
}

AlgebraElement tensor_inner_product(const Model& m,
                                    std::span<const BasisVector> u,
                                    std::span<const BasisVector> w) {
    if (u.size() != w.size()) throw InputError("tensor chains of different lengths");
    if (!chain_composable(u) || !chain_composable(w))
        throw InputError("non-composable tensor chain");
    if (u.empty()) return algebra_unit(m.fusion);
    // Nested evaluation <u_n, < ... <u_1, w_1>_A w_2 ...>_A w_n>_A.
    AlgebraElement acc;
    for (std::size_t k = 0; k < u.size(); ++k) {
        Complex carried = k == 0 ? Complex(1) : acc.at(w[k].dst);
        acc = AlgebraElement{};
        if (carried != Complex(0) && u[k] == w[k]) acc.add(u[k].src, carried);
    }
    return acc;
}

std::vector<BasisVector> all_basis_vectors(const Model& m) {
    std::vector<BasisVector> out;
    const int n = m.fusion.size();
    for (int src = 0; src < n; ++src)
        for (int dst = 0; dst < n; ++dst)
            for (int obj = 0; obj < n; ++obj)
                for (bool barred : {false, true}) {
                    Letter a{obj, barred};
                    int h = m.hom_dim(src, dst, a);
                    for (int i = 0; i < h; ++i)
                        out.push_back(BasisVector{src, dst, a, i});
                }
    return out;
}

std::uint64_t split_mix(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform_unit(std::uint64_t& state) {
    return static_cast<double>(split_mix(state) >> 11) * 0x1.0p-53;
}

BimoduleVector random_bimodule_vector(const Model& m, std::uint64_t& state, int max_terms) {
    std::vector<BasisVector> basis = all_basis_vectors(m);
    BimoduleVector out;
    int k = 1 + static_cast<int>(split_mix(state) % static_cast<std::uint64_t>(max_terms));
    for (int i = 0; i < k; ++i) {
        const BasisVector& v = basis[split_mix(state) % basis.size()];
        Complex c(uniform_unit(state) * 2 - 1, uniform_unit(state) * 2 - 1);
        out.add(v, c);
    }
    return out;
}

namespace {

double max_term_diff(const BimoduleVector& a, const BimoduleVector& b) {
    double r = 0;
    for (const auto& [v, c] : a.terms) {
        auto it = b.terms.find(v);
        r = std::max(r, std::abs(c - (it == b.terms.end() ? Complex(0) : it->second)));
    }
    for (const auto& [v, c] : b.terms)
        if (!a.terms.count(v)) r = std::max(r, std::abs(c));
    return r;
}

AlgebraElement random_algebra_element(const Model& m, std::uint64_t& state) {
    AlgebraElement a;
    for (int b = 0; b < m.fusion.size(); ++b)
        a.coeffs[b] = Complex(uniform_unit(state) * 2 - 1, uniform_unit(state) * 2 - 1);
    return a;
}

} // namespace

TomitaAxiomReport check_tomita_axioms(const Model& m, int samples, std::uint64_t seed) {
    TomitaAxiomReport rep;
    std::uint64_t state = seed;
    for (int s = 0; s < samples; ++s) {
        BimoduleVector xi = random_bimodule_vector(m, state);
        BimoduleVector beta = random_bimodule_vector(m, state);
        AlgebraElement a = random_algebra_element(m, state);
        AlgebraElement b = random_algebra_element(m, state);
        Complex z(uniform_unit(state) * 4 - 2, uniform_unit(state) * 2 - 1);

        // S(A·v·B) = B*·S(v)·A*
        BimoduleVector lhs = apply_S(m, act(a, xi, b));
        BimoduleVector rhs = act(b.adjoint(), apply_S(m, xi), a.adjoint());
        rep.s_bimodule = std::max(rep.s_bimodule, max_term_diff(lhs, rhs));

        // S² = id
        rep.s_involutive =
            std::max(rep.s_involutive, max_term_diff(apply_S(m, apply_S(m, xi)), xi));

        // <v, U(z)w> = <U(-z̄)v, w>
        Complex c1 = inner_product(m, xi, apply_U(m, z, beta));
        Complex c2 = inner_product(m, apply_U(m, -std::conj(z), xi), beta);
        rep.u_adjoint = std::max(rep.u_adjoint, std::abs(c1 - c2));

        // <S(v), S(w)> = <w, U(-i)v>
        Complex c3 = inner_product(m, apply_S(m, xi), apply_S(m, beta));
        Complex c4 = inner_product(m, beta, apply_U(m, Complex(0, -1), xi));
        rep.s_density = std::max(rep.s_density, std::abs(c3 - c4));
    }
    rep.max_residual = std::max({rep.s_bimodule, rep.s_involutive, rep.u_adjoint, rep.s_density});
    return rep;
}

} // namespace tomitafock
