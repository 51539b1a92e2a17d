#include "tomitafock/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "tomitafock/fock.hpp"

namespace tomitafock {

long long catalan(int n) {
    if (n < 0) throw InputError("catalan of negative index");
    std::vector<long long> c(n + 1, 0);
    c[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int k = 0; k < i; ++k) c[i] += c[k] * c[i - 1 - k];
    return c[n];
}

namespace {

std::vector<PairPartition> nc2_of(const std::vector<int>& pos) {
    std::vector<PairPartition> out;
    if (pos.empty()) {
        out.push_back({});
        return out;
    }
    for (std::size_t k = 1; k < pos.size(); k += 2) {
        auto inside = nc2_of({pos.begin() + 1, pos.begin() + k});
        auto outside = nc2_of({pos.begin() + k + 1, pos.end()});
        for (const auto& a : inside)
            for (const auto& b : outside) {
                PairPartition p;
                p.reserve(pos.size() / 2);
                p.emplace_back(pos[0], pos[k]);
                p.insert(p.end(), a.begin(), a.end());
                p.insert(p.end(), b.begin(), b.end());
                std::sort(p.begin(), p.end());
                out.push_back(std::move(p));
            }
    }
    return out;
}

} // namespace

std::vector<PairPartition> enumerate_nc2(int n, int cap) {
    if (n < 0) throw InputError("enumerate_nc2: negative n");
    if (n > cap)
        throw InputError("enumerate_nc2: n = " + std::to_string(n) + " exceeds cap " +
                         std::to_string(cap));
    std::vector<int> pos(2 * n);
    for (int i = 0; i < 2 * n; ++i) pos[i] = i;
    return nc2_of(pos);
}

bool WordSpec::composable() const {
    for (std::size_t k = 0; k + 1 < factors.size(); ++k)
        if (factors[k].vec.dst != factors[k + 1].vec.src) return false;
    return true;
}

bool WordSpec::closed() const {
    if (factors.empty()) return true;
    return composable() && factors.back().vec.dst == factors.front().vec.src;
}

std::vector<BimoduleVector> WordSpec::as_vectors() const {
    std::vector<BimoduleVector> out;
    out.reserve(factors.size());
    for (const auto& f : factors) out.push_back(BimoduleVector::basis(f.vec, f.coeff));
    return out;
}

WordSpec WordSpec::gamma(const BasisVector& v, Complex c) {
    WordSpec w;
    w.factors.push_back(WordFactor{v, c});
    return w;
}

WordSpec& WordSpec::append(const BasisVector& v, Complex c) {
    factors.push_back(WordFactor{v, c});
    return *this;
}

WordSpec& WordSpec::append_star(const Model& m, const BasisVector& v, Complex c) {
    ScaledVector b = bar(m, v);
    factors.push_back(WordFactor{b.vec, std::conj(c) * std::sqrt(m.lam(v.letter)) * b.coeff});
    return *this;
}

WordSpec WordSpec::repeat(int k) const {
    WordSpec out;
    for (int i = 0; i < k; ++i)
        out.factors.insert(out.factors.end(), factors.begin(), factors.end());
    return out;
}

Complex moment_nc(const Model& m, const WordSpec& w) {
    for (const auto& f : w.factors) check_basis_vector(m, f.vec);
    if (!w.composable()) throw InputError("word chain is not composable");
    const int len = w.length();
    if (len == 0) return trace(m.fusion, algebra_unit(m.fusion));
    if (len % 2 == 1 || !w.closed()) return 0;

    const int n = len / 2;
    Complex total = 0;
    for (const auto& part : enumerate_nc2(n)) {
        Complex prod = 1;
        for (const auto& [i, j] : part) {
            const WordFactor& fi = w.factors[i];
            const WordFactor& fj = w.factors[j];
            ScaledVector bj = bar(m, fj.vec);
            if (!(bj.vec == fi.vec)) {
                prod = 0;
                break;
            }
            // (√λ_{α_j}/d_{β_i}) <ξ̄_j, ξ_i>; the d_{β_i} cancels against the
            // trace of <.,.>_A on the matched basis vector.
            prod *= std::sqrt(m.lam(fj.vec.letter)) * bj.coeff * fi.coeff * fj.coeff;
        }
        total += prod;
    }
    return m.dim(w.factors[0].vec.src) * total;
}

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fb,
               double fm, double tol, int depth, int force) {
    double mid = (a + b) / 2;
    double lm = (a + mid) / 2, rm = (mid + b) / 2;
    double flm = f(lm), frm = f(rm);
    double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    double left = (mid - a) / 6 * (fa + 4 * flm + fm);
    double right = (b - mid) / 6 * (fm + 4 * frm + fb);
    // force the first splits: periodic integrands can alias the error
    // estimate to zero on the coarsest uniform grids
    if (depth <= 0 || (force <= 0 && std::abs(left + right - whole) < 15 * tol))
        return left + right + (left + right - whole) / 15;
    return simpson(f, a, mid, fa, fm, flm, tol / 2, depth - 1, force - 1) +
           simpson(f, mid, b, fm, fb, frm, tol / 2, depth - 1, force - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    return simpson(f, a, b, f(a), f(b), f((a + b) / 2), tol, 40, 4);
}

} // namespace

double narayana_moment(double lambda, int k) {
    double s = 0, pow_l = 1;
    for (int r = 1; r <= k; ++r) {
        s += binom(k, r) * binom(k, r - 1) / k * pow_l;
        pow_l *= lambda;
    }
    return s;
}

std::vector<double> mp_moments(double lambda, int K) {
    if (!(lambda > 0) || lambda > 1) throw InputError("mp_moments requires 0 < λ <= 1");
    if (K < 0) throw InputError("mp_moments: negative moment order");
    std::vector<double> out;
    out.reserve(K);
    const double half_pi = std::numbers::pi / 2;
    for (int k = 1; k <= K; ++k) {
        double analytic = narayana_moment(lambda, k);
        // substitution t = 1 + λ + 2√λ sin u turns the density integral into
        // (2/π) ∫ t^{k-1} cos²u du over [-π/2, π/2], removing the edge
        // singularities of √(4λ-(t-(1+λ))²)/(2πλt).
        auto f = [&](double u) {
            double t = 1 + lambda + 2 * std::sqrt(lambda) * std::sin(u);
            double c = std::cos(u);
            return 2 / std::numbers::pi * std::pow(t, k - 1) * c * c;
        };
        double numeric = integrate(f, -half_pi, half_pi, 1e-13);
        if (std::abs(analytic - numeric) > 1e-9)
            throw ToleranceError("MP moment cross-check failed at k=" + std::to_string(k) +
                                 " (analytic " + std::to_string(analytic) + ", quadrature " +
                                 std::to_string(numeric) + ")");
        out.push_back(analytic);
    }
    return out;
}

GammaMomentsReport gamma_star_gamma_moments(const Model& m, const BasisVector& xi, int K) {
    check_basis_vector(m, xi);
    GammaMomentsReport rep;
    BasisVector v = xi;
    rep.lambda_eff = m.lam(v.letter) * m.dim(v.src) / m.dim(v.dst);
    if (rep.lambda_eff > 1 + 1e-12) {
        v = bar(m, v).vec;
        rep.lambda_eff = 1.0 / rep.lambda_eff;
        rep.swapped = true;
    }
    WordSpec unit = WordSpec::gamma(v).append_star(m, v); // Γ(S(ξ))Γ(ξ) = Γ*Γ
    for (int k = 1; k <= K; ++k) {
        Complex v_k = moment_nc(m, unit.repeat(k));
        rep.normalized.push_back(v_k.real() / m.dim(v.src));
    }
    return rep;
}

std::vector<std::vector<BasisVector>> letter_pair_groups(const Model& m) {
    std::map<int, std::vector<BasisVector>> by_object;
    for (const auto& v : all_basis_vectors(m)) by_object[v.letter.object].push_back(v);
    std::vector<std::vector<BasisVector>> out;
    for (auto& [obj, cells] : by_object) out.push_back(std::move(cells));
    return out;
}

GammaPoly GammaPoly::gamma(const BasisVector& v, Complex c) {
    GammaPoly p;
    p.words[{v}] = c;
    return p;
}

GammaPoly GammaPoly::algebra(const AlgebraElement& a) {
    GammaPoly p;
    p.diag = a;
    return p;
}

GammaPoly& GammaPoly::add_word(std::vector<BasisVector> w, Complex c) {
    if (c == Complex(0)) return *this;
    if (w.empty()) throw InputError("empty Γ-word; use the diag part for algebra elements");
    auto [it, inserted] = words.try_emplace(std::move(w), c);
    if (!inserted) {
        it->second += c;
        if (it->second == Complex(0)) words.erase(it);
    }
    return *this;
}

GammaPoly& GammaPoly::operator+=(const GammaPoly& o) {
    for (const auto& [w, c] : o.words) add_word(w, c);
    diag += o.diag;
    return *this;
}

GammaPoly poly_product(const GammaPoly& p, const GammaPoly& q) {
    GammaPoly out;
    // word·word: q acts first, so its generators come first in the list
    for (const auto& [wp, cp] : p.words)
        for (const auto& [wq, cq] : q.words) {
            std::vector<BasisVector> w = wq;
            w.insert(w.end(), wp.begin(), wp.end());
            out.add_word(std::move(w), cp * cq);
        }
    // p.diag on the left of q's words picks the dst of the leftmost generator
    for (const auto& [wq, cq] : q.words) {
        Complex f = p.diag.at(wq.back().dst);
        if (f != Complex(0)) out.add_word(wq, f * cq);
    }
    // q.diag on the right of p's words picks the src of the first generator
    for (const auto& [wp, cp] : p.words) {
        Complex f = q.diag.at(wp.front().src);
        if (f != Complex(0)) out.add_word(wp, f * cp);
    }
    out.diag += p.diag * q.diag;
    return out;
}

GammaPoly poly_left_mul(const AlgebraElement& a, const GammaPoly& p) {
    GammaPoly out;
    for (const auto& [w, c] : p.words) {
        Complex f = a.at(w.back().dst);
        if (f != Complex(0)) out.add_word(w, f * c);
    }
    out.diag = a * p.diag;
    return out;
}

GammaPoly poly_right_mul(const GammaPoly& p, const AlgebraElement& a) {
    GammaPoly out;
    for (const auto& [w, c] : p.words) {
        Complex f = a.at(w.front().src);
        if (f != Complex(0)) out.add_word(w, f * c);
    }
    out.diag = p.diag * a;
    return out;
}

WordExpectation oracle_expectation(const Model& m) {
    return [&m](const std::vector<BasisVector>& w) -> AlgebraElement {
        AlgebraElement e;
        if (w.empty()) return algebra_unit(m.fusion);
        WordSpec spec;
        for (const auto& v : w) spec.append(v);
        if (!spec.composable() || !spec.closed() || spec.length() % 2 == 1) return e;
        Complex c = moment_nc(m, spec);
        if (c != Complex(0)) e.add(w.front().src, c / m.dim(w.front().src));
        return e;
    };
}

AlgebraElement poly_expectation(const GammaPoly& p, const WordExpectation& e) {
    AlgebraElement out = p.diag;
    for (const auto& [w, c] : p.words) {
        AlgebraElement ew = e(w);
        ew.scale(c);
        out += ew;
    }
    return out;
}

namespace {

struct AmalgItem {
    int group;
    GammaPoly poly;
    bool centered;
};

AlgebraElement amalg_rec(const Model& m, std::vector<AmalgItem> items, const WordExpectation& ew) {
    // merge adjacent same-group factors; merged products lose centering
    for (std::size_t i = 0; i + 1 < items.size();) {
        if (items[i].group == items[i + 1].group) {
            items[i].poly = poly_product(items[i].poly, items[i + 1].poly);
            items[i].centered = false;
            items.erase(items.begin() + i + 1);
            if (i > 0) --i;
        } else {
            ++i;
        }
    }
    if (items.empty()) return {};
    if (items.size() == 1)
        return items[0].centered ? AlgebraElement{} : poly_expectation(items[0].poly, ew);

    std::size_t k = 0;
    while (k < items.size() && items[k].centered) ++k;
    if (k == items.size()) return {}; // fully centered alternating word: freeness kills it

    AlgebraElement ek = poly_expectation(items[k].poly, ew);

    std::vector<AmalgItem> centered_branch = items;
    centered_branch[k].poly.diag -= ek;
    centered_branch[k].centered = true;
    AlgebraElement result = amalg_rec(m, std::move(centered_branch), ew);

    std::vector<AmalgItem> folded = std::move(items);
    folded.erase(folded.begin() + k);
    if (k < folded.size()) {
        folded[k].poly = poly_left_mul(ek, folded[k].poly);
        folded[k].centered = false;
    } else {
        folded[k - 1].poly = poly_right_mul(folded[k - 1].poly, ek);
        folded[k - 1].centered = false;
    }
    result += amalg_rec(m, std::move(folded), ew);
    return result;
}

} // namespace

AlgebraElement amalgamated_moment_recursion(const Model& m,
                                            const std::vector<std::pair<int, GammaPoly>>& factors,
                                            const WordExpectation& e) {
    for (std::size_t i = 0; i + 1 < factors.size(); ++i)
        if (factors[i].first == factors[i + 1].first)
            throw InputError("amalgamated_moment_recursion needs alternating group labels");
    if (factors.empty()) return {};
    std::vector<AmalgItem> items;
    items.reserve(factors.size());
    for (const auto& [g, p] : factors) items.push_back(AmalgItem{g, p, false});
    return amalg_rec(m, std::move(items), e);
}

namespace {

PathVector apply_poly(const Model& m, const GammaPoly& p, const PathVector& v, int depth) {
    PathVector out = apply_algebra_left(p.diag, v);
    for (const auto& [w, c] : p.words) {
        PathVector tmp = v;
        for (const auto& g : w) tmp = apply_gamma(m, BimoduleVector::basis(g), tmp, depth);
        for (const auto& [path, x] : tmp) out[path] += c * x;
    }
    return out;
}

int poly_degree(const GammaPoly& p) {
    std::size_t d = 0;
    for (const auto& [w, c] : p.words) d = std::max(d, w.size());
    return static_cast<int>(d);
}

} // namespace

FreenessReport freeness_check(const Model& m,
                              const std::vector<std::vector<BasisVector>>& groups,
                              const FreenessOptions& opt) {
    if (groups.size() < 2) throw InputError("freeness_check needs at least two groups");
    std::set<BasisVector> seen;
    for (const auto& g : groups) {
        if (g.empty()) throw InputError("empty group");
        std::set<BasisVector> gs(g.begin(), g.end());
        for (const auto& v : g) {
            check_basis_vector(m, v);
            if (seen.count(v)) throw InputError("groups overlap");
            if (!gs.count(bar(m, v).vec))
                throw InputError("group is not closed under conjugation, so it does not span "
                                 "a Tomita sub-bimodule");
        }
        seen.insert(g.begin(), g.end());
    }

    FreenessReport rep;
    std::uint64_t state = opt.seed;
    for (int trial = 0; trial < opt.trials; ++trial) {
        int l = 2 + static_cast<int>(split_mix(state) %
                                     static_cast<std::uint64_t>(std::max(1, opt.max_factors - 1)));
        std::vector<std::pair<int, GammaPoly>> factors;
        int prev = -1;
        for (int k = 0; k < l; ++k) {
            int gi;
            do {
                gi = static_cast<int>(split_mix(state) % groups.size());
            } while (gi == prev);
            prev = gi;
            const auto& cells = groups[gi];
            GammaPoly poly;
            int nwords = 1 + static_cast<int>(split_mix(state) % 2);
            for (int wi = 0; wi < nwords; ++wi) {
                int wl = 1 + static_cast<int>(split_mix(state) % 2);
                std::vector<BasisVector> w;
                for (int p = 0; p < wl; ++p)
                    w.push_back(cells[split_mix(state) % cells.size()]);
                Complex c(uniform_unit(state) * 2 - 1, uniform_unit(state) * 2 - 1);
                poly.add_word(std::move(w), c);
            }
            factors.emplace_back(gi, std::move(poly));
        }

        int depth = 0;
        for (const auto& [g, p] : factors) depth += poly_degree(p);
        depth = std::max(depth, 1);

        if (opt.centered) {
            for (auto& [g, p] : factors) {
                AlgebraElement e = p.diag;
                for (const auto& [w, c] : p.words) {
                    std::vector<BimoduleVector> word;
                    for (const auto& v : w) word.push_back(BimoduleVector::basis(v));
                    AlgebraElement ew = word_expectation(m, word, depth);
                    ew.scale(c);
                    e += ew;
                }
                p.diag -= e;
            }
        }

        AlgebraElement value;
        for (int label = 0; label < m.fusion.size(); ++label) {
            PathVector v{{FockPath::vacuum(label), Complex(1)}};
            for (int k = l - 1; k >= 0; --k) v = apply_poly(m, factors[k].second, v, depth);
            auto it = v.find(FockPath::vacuum(label));
            if (it != v.end()) value.add(label, it->second);
        }
        rep.max_residual = std::max(rep.max_residual, value.sup_norm());
        ++rep.words_checked;
    }
    return rep;
}

WordSpec random_word(const Model& m, int length, std::uint64_t& state) {
    std::map<int, std::vector<BasisVector>> by_src;
    for (const auto& v : all_basis_vectors(m)) by_src[v.src].push_back(v);
    WordSpec w;
    int current = static_cast<int>(split_mix(state) % m.fusion.size());
    for (int k = 0; k < length; ++k) {
        const auto& opts = by_src.at(current);
        const BasisVector& v = opts[split_mix(state) % opts.size()];
        w.append(v);
        current = v.dst;
    }
    return w;
}

WordSpec random_closed_word(const Model& m, int length, std::uint64_t& state, int max_tries) {
    for (int t = 0; t < max_tries; ++t) {
        WordSpec w = random_word(m, length, state);
        if (w.closed()) return w;
    }
    throw InputError("failed to sample a closed word of length " + std::to_string(length));
}

} // namespace tomitafock
