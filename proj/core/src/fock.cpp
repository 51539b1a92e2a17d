#include "tomitafock/fock.hpp"

#include <algorithm>
#include <cmath>

namespace tomitafock {

bool path_composable(const FockPath& p) {
    if (p.chain.empty()) return true;
    if (p.chain.back().src != p.base) return false;
    return chain_composable(p.chain);
}

int FockBasis::find(const FockPath& p) const {
    auto it = index.find(p);
    return it == index.end() ? -1 : it->second;
}

FockBasis enumerate_fock_basis(const Model& m, int depth, std::size_t cap) {
    if (depth < 0) throw InputError("negative Fock depth");
    FockBasis b;
    b.depth = depth;
    std::vector<BasisVector> cells = all_basis_vectors(m);
    // cells reachable from a given dst label, for the prepend step
    std::map<int, std::vector<BasisVector>> by_src;
    for (const auto& v : cells) by_src[v.src].push_back(v);

    std::vector<FockPath> current;
    for (int label = 0; label < m.fusion.size(); ++label)
        current.push_back(FockPath::vacuum(label));

    std::size_t total = 0;
    for (int n = 0; n <= depth; ++n) {
        std::sort(current.begin(), current.end());
        b.count_per_degree.push_back(static_cast<int>(current.size()));
        total += current.size();
        if (total > cap)
            throw InputError("Fock basis exceeds cap of " + std::to_string(cap) + " paths");
        for (auto& p : current) b.paths.push_back(p);
        if (n == depth) break;
        std::vector<FockPath> next;
        for (const auto& p : current) {
            auto it = by_src.find(p.dst_label());
            if (it == by_src.end()) continue;
            for (const auto& v : it->second) {
                FockPath q;
                q.base = p.base;
                q.chain.reserve(p.chain.size() + 1);
                q.chain.push_back(v);
                q.chain.insert(q.chain.end(), p.chain.begin(), p.chain.end());
                next.push_back(std::move(q));
            }
        }
        current.swap(next);
    }
    for (int i = 0; i < b.size(); ++i) b.index[b.paths[i]] = i;
    b.weight.resize(b.size());
    for (int i = 0; i < b.size(); ++i) b.weight[i] = m.dim(b.paths[i].src_label());
    return b;
}

void SparseOperator::add(int row, int col, Complex v) {
    if (v == Complex(0)) return;
    auto key = std::make_pair(row, col);
    auto [it, inserted] = entries.try_emplace(key, v);
    if (!inserted) {
        it->second += v;
        if (it->second == Complex(0)) entries.erase(it);
    }
}

Complex SparseOperator::at(int row, int col) const {
    auto it = entries.find({row, col});
    return it == entries.end() ? Complex(0) : it->second;
}

SparseOperator SparseOperator::adjoint() const {
    SparseOperator out(*basis);
    for (const auto& [rc, v] : entries) {
        auto [r, c] = rc;
        out.add(c, r, std::conj(v) * basis->weight[r] / basis->weight[c]);
    }
    return out;
}

SparseOperator SparseOperator::compose(const SparseOperator& o) const {
    // column map of *this for cache-friendly contraction
    std::map<int, std::vector<std::pair<int, Complex>>> by_col;
    for (const auto& [rc, v] : entries) by_col[rc.second].push_back({rc.first, v});
    SparseOperator out(*basis);
    for (const auto& [rc, v] : o.entries) {
        auto [mid, col] = rc;
        auto it = by_col.find(mid);
        if (it == by_col.end()) continue;
        for (const auto& [row, w] : it->second) out.add(row, col, w * v);
    }
    return out;
}

SparseOperator& SparseOperator::operator+=(const SparseOperator& o) {
    for (const auto& [rc, v] : o.entries) add(rc.first, rc.second, v);
    return *this;
}

SparseOperator& SparseOperator::scale(Complex c) {
    if (c == Complex(0)) {
        entries.clear();
        return *this;
    }
    for (auto& [rc, v] : entries) v *= c;
    return *this;
}

std::vector<Complex> SparseOperator::apply(const std::vector<Complex>& v) const {
    std::vector<Complex> out(basis->size(), Complex(0));
    for (const auto& [rc, x] : entries) out[rc.first] += x * v[rc.second];
    return out;
}

double SparseOperator::max_entry_diff(const SparseOperator& o) const {
    double r = 0;
    for (const auto& [rc, v] : entries) r = std::max(r, std::abs(v - o.at(rc.first, rc.second)));
    for (const auto& [rc, v] : o.entries)
        if (!entries.count(rc)) r = std::max(r, std::abs(v));
    return r;
}

double SparseOperator::max_abs() const {
    double r = 0;
    for (const auto& [rc, v] : entries) r = std::max(r, std::abs(v));
    return r;
}

SparseOperator creation_matrix(const Model& m, const BimoduleVector& xi, const FockBasis& b) {
    for (const auto& [v, c] : xi.terms) check_basis_vector(m, v);
    SparseOperator out(b);
    for (int col = 0; col < b.size(); ++col) {
        const FockPath& q = b.paths[col];
        if (q.degree() + 1 > b.depth) continue; // truncation
        for (const auto& [v, c] : xi.terms) {
            if (v.src != q.dst_label()) continue;
            FockPath p;
            p.base = q.base;
            p.chain.reserve(q.chain.size() + 1);
            p.chain.push_back(v);
            p.chain.insert(p.chain.end(), q.chain.begin(), q.chain.end());
            int row = b.find(p);
            if (row >= 0) out.add(row, col, c);
        }
    }
    return out;
}

SparseOperator annihilation_matrix(const Model& m, const BimoduleVector& xi, const FockBasis& b) {
    for (const auto& [v, c] : xi.terms) check_basis_vector(m, v);
    SparseOperator out(b);
    for (int col = 0; col < b.size(); ++col) {
        const FockPath& q = b.paths[col];
        if (q.degree() == 0) continue; // L*(ξ) A = 0
        auto it = xi.terms.find(q.chain.front());
        if (it == xi.terms.end()) continue;
        FockPath p;
        p.base = q.base;
        p.chain.assign(q.chain.begin() + 1, q.chain.end());
        int row = b.find(p);
        if (row >= 0) out.add(row, col, std::conj(it->second));
    }
    return out;
}

SparseOperator gamma_matrix(const Model& m, const BimoduleVector& xi, const FockBasis& b) {
    SparseOperator out = creation_matrix(m, xi, b);
    out += annihilation_matrix(m, apply_S(m, xi), b);
    return out;
}

SparseOperator algebra_left_matrix(const Model& m, const AlgebraElement& a, const FockBasis& b) {
    SparseOperator out(b);
    for (int i = 0; i < b.size(); ++i) {
        Complex c = a.at(b.paths[i].dst_label());
        if (c != Complex(0)) out.add(i, i, c);
    }
    return out;
}

SparseOperator vacuum_projection(const FockBasis& b) {
    SparseOperator out(b);
    for (int i = 0; i < b.size(); ++i)
        if (b.paths[i].degree() == 0) out.add(i, i, 1.0);
    return out;
}

AlgebraElement conditional_expectation(const Model& m, const SparseOperator& t) {
    AlgebraElement e;
    const FockBasis& b = *t.basis;
    for (int i = 0; i < b.size(); ++i) {
        if (b.paths[i].degree() != 0) continue;
        Complex c = t.at(i, i);
        if (c != Complex(0)) e.add(b.paths[i].base, c);
    }
    return e;
}

Complex tau_E(const Model& m, const SparseOperator& t) {
    return trace(m.fusion, conditional_expectation(m, t));
}

Complex tau_weighted(const Model& m, const AlgebraElement& e, const std::vector<double>& k) {
    Complex s = 0;
    for (const auto& [label, c] : e.coeffs) s += c * k.at(label) * m.dim(label);
    return s;
}

ModularData modular_data(const Model& m, const FockBasis& b) {
    ModularData d;
    d.delta.resize(b.size());
    d.j_perm.resize(b.size());
    d.j_scale.resize(b.size());
    for (int i = 0; i < b.size(); ++i) {
        const FockPath& p = b.paths[i];
        double eig = 1.0;
        for (const auto& v : p.chain) eig *= m.lam(v.letter);
        d.delta[i] = eig;

        FockPath q;
        double scale = 1.0;
        q.base = p.dst_label();
        for (auto it = p.chain.rbegin(); it != p.chain.rend(); ++it) {
            ScaledVector w = bar(m, *it);
            q.chain.push_back(w.vec);
            scale *= w.coeff;
        }
        int j = b.find(q);
        if (j < 0) throw InputError("basis not closed under J");
        d.j_perm[i] = j;
        d.j_scale[i] = scale;
    }
    return d;
}

double modular_flow_check(const Model& m, const BasisVector& xi, double t, const FockBasis& b) {
    SparseOperator g = gamma_matrix(m, BimoduleVector::basis(xi), b);
    ModularData md = modular_data(m, b);
    Complex target = std::exp(Complex(0, t * std::log(m.lam(xi.letter))));
    double r = 0;
    for (const auto& [rc, v] : g.entries) {
        auto [row, col] = rc;
        if (b.paths[col].degree() > b.depth - 1) continue; // truncation-safe region
        Complex conjugated =
            std::exp(Complex(0, t * (std::log(md.delta[row]) - std::log(md.delta[col])))) * v;
        r = std::max(r, std::abs(conjugated - target * v));
    }
    return r;
}

VacuumCheckReport vacuum_projection_check(const Model& m, const FockBasis& b, int samples,
                                          std::uint64_t seed) {
    VacuumCheckReport rep;
    SparseOperator e = vacuum_projection(b);
    rep.projection_residual =
        std::max(e.compose(e).max_entry_diff(e), e.adjoint().max_entry_diff(e));

    std::uint64_t state = seed;
    std::vector<BasisVector> cells = all_basis_vectors(m);
    for (int s = 0; s < samples; ++s) {
        int len = 1 + static_cast<int>(split_mix(state) % 3);
        len = std::min(len, b.depth);
        SparseOperator word(b);
        for (int i = 0; i < b.size(); ++i) word.add(i, i, 1.0);
        for (int k = 0; k < len; ++k) {
            const BasisVector& v = cells[split_mix(state) % cells.size()];
            Complex c(uniform_unit(state) * 2 - 1, uniform_unit(state) * 2 - 1);
            word = word.compose(gamma_matrix(m, BimoduleVector::basis(v, c), b));
        }
        SparseOperator lhs = e.compose(word).compose(e);
        SparseOperator rhs =
            algebra_left_matrix(m, conditional_expectation(m, word), b).compose(e);
        rep.sandwich_residual = std::max(rep.sandwich_residual, lhs.max_entry_diff(rhs));
    }
    return rep;
}

PathVector apply_algebra_left(const AlgebraElement& a, const PathVector& v) {
    PathVector out;
    for (const auto& [p, x] : v) {
        Complex c = a.at(p.dst_label());
        if (c != Complex(0)) out[p] = c * x;
    }
    return out;
}

PathVector apply_gamma(const Model& m, const BimoduleVector& xi, const PathVector& v, int depth) {
    PathVector out;
    auto accumulate = [&out](FockPath&& p, Complex c) {
        if (c == Complex(0)) return;
        auto [it, inserted] = out.try_emplace(std::move(p), c);
        if (!inserted) it->second += c;
    };
    for (const auto& [p, x] : v) {
        // L(ξ)
        if (p.degree() + 1 <= depth) {
            for (const auto& [w, c] : xi.terms) {
                if (w.src != p.dst_label()) continue;
                FockPath q;
                q.base = p.base;
                q.chain.reserve(p.chain.size() + 1);
                q.chain.push_back(w);
                q.chain.insert(q.chain.end(), p.chain.begin(), p.chain.end());
                accumulate(std::move(q), c * x);
            }
        }
        // L*(S(ξ)): annihilates heads matching bar(w), with the S scale folded in
        if (p.degree() >= 1) {
            for (const auto& [w, c] : xi.terms) {
                ScaledVector bw = bar(m, w);
                if (!(bw.vec == p.chain.front())) continue;
                FockPath q;
                q.base = p.base;
                q.chain.assign(p.chain.begin() + 1, p.chain.end());
                accumulate(std::move(q), c * std::sqrt(m.lam(w.letter)) * bw.coeff * x);
            }
        }
    }
    return out;
}

Complex word_moment_matrix(const Model& m, const std::vector<BimoduleVector>& word, int depth) {
    AlgebraElement e = word_expectation(m, word, depth);
    return trace(m.fusion, e);
}

AlgebraElement word_expectation(const Model& m, const std::vector<BimoduleVector>& word, int depth) {
    const int len = static_cast<int>(word.size());
    if (depth < len)
        throw InputError("depth " + std::to_string(depth) + " too small for word length " +
                         std::to_string(len) + " (exactness requires depth >= length)");
    for (const auto& xi : word)
        for (const auto& [v, c] : xi.terms) check_basis_vector(m, v);
    AlgebraElement e;
    for (int label = 0; label < m.fusion.size(); ++label) {
        PathVector v{{FockPath::vacuum(label), Complex(1)}};
        for (const auto& xi : word) v = apply_gamma(m, xi, v, depth);
        auto it = v.find(FockPath::vacuum(label));
        if (it != v.end()) e.add(label, it->second);
    }
    return e;
}

} // namespace tomitafock
