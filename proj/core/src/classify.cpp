#include "tomitafock/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tomitafock/bimodule.hpp"

namespace tomitafock {

GeneratorSet channel_generators(const Model& m) {
    const FusionData& f = m.fusion;
    bool exact_mode = m.lambda.all_exact();
    std::set<Rational> exact_set;
    std::vector<double> float_vals;

    for (int obj = 0; obj < f.size(); ++obj)
        for (bool barred : {false, true}) {
            Letter a{obj, barred};
            for (int b1 = 0; b1 < f.size(); ++b1)
                for (int b2 = 0; b2 < f.size(); ++b2) {
                    if (hom_dim(f, b1, b2, a) == 0) continue;
                    if (exact_mode) {
                        Rational r = *m.lambda.exact(a) * *m.lambda.label_lambda(b2).exact /
                                     *m.lambda.label_lambda(b1).exact;
                        exact_set.insert(r);
                    } else {
                        float_vals.push_back(m.lam(a) * m.lambda.label_value(b2) /
                                             m.lambda.label_value(b1));
                    }
                }
        }

    GeneratorSet g;
    if (exact_mode) {
        g.exact = std::vector<Rational>(exact_set.begin(), exact_set.end());
        for (const auto& r : *g.exact) g.values.push_back(to_double(r));
    } else {
        std::sort(float_vals.begin(), float_vals.end());
        for (double v : float_vals) {
            if (g.values.empty() || std::abs(v - g.values.back()) > 1e-12 * std::max(1.0, v))
                g.values.push_back(v);
        }
    }
    return g;
}

bool is_semifinite(const Model& m) {
    GeneratorSet g = channel_generators(m);
    if (g.exact_mode()) {
        for (const auto& r : *g.exact)
            if (r != Rational(1)) return false;
        return true;
    }
    for (double v : g.values)
        if (std::abs(v - 1.0) > 1e-12) return false;
    return true;
}

namespace {

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

// Coprime base of a set of integers > 1: pairwise coprime atoms over which
// every input factors by repeated division.
std::vector<long long> coprime_base(std::vector<long long> values) {
    std::vector<long long> base;
    auto insert = [&](long long v, auto&& self) -> void {
        if (v <= 1) return;
        for (std::size_t i = 0; i < base.size(); ++i) {
            long long g = gcd_ll(v, base[i]);
            if (g == 1) continue;
            if (g == base[i]) {
                while (v % base[i] == 0) v /= base[i];
                if (v == 1) return;
                continue;
            }
            // split the atom and start over with all pieces
            long long a = base[i];
            base.erase(base.begin() + i);
            self(g, self);
            self(a / g, self);
            self(v, self);
            return;
        }
        base.push_back(v);
    };
    for (long long v : values) insert(v, insert);
    std::sort(base.begin(), base.end());
    return base;
}

std::vector<long long> exponents_over(const std::vector<long long>& base, const Rational& r) {
    std::vector<long long> e(base.size(), 0);
    long long num = r.numerator(), den = r.denominator();
    for (std::size_t i = 0; i < base.size(); ++i) {
        while (num % base[i] == 0) {
            num /= base[i];
            ++e[i];
        }
        while (den % base[i] == 0) {
            den /= base[i];
            --e[i];
        }
    }
    if (num != 1 || den != 1)
        throw InputError("rational does not factor over its coprime base");
    return e;
}

// Rank of an integer matrix by fraction-free elimination.
int integer_rank(std::vector<std::vector<long long>> rows) {
    int rank = 0;
    std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            while (rows[r][c] != 0) {
                // euclidean step keeps entries bounded by the inputs
                long long q = rows[r][c] / rows[rank][c];
                for (std::size_t k = c; k < cols; ++k) rows[r][k] -= q * rows[rank][k];
                if (rows[r][c] != 0) std::swap(rows[r], rows[rank]);
            }
        }
        ++rank;
    }
    return rank;
}

Rational rational_pow(const std::vector<long long>& base, const std::vector<long long>& expo) {
    Rational r(1);
    for (std::size_t i = 0; i < base.size(); ++i) {
        long long e = expo[i];
        for (long long k = 0; k < std::abs(e); ++k) {
            if (e > 0) r *= Rational(base[i]);
            else r /= Rational(base[i]);
        }
    }
    return r;
}

GroupDescriptor connes_group_exact(const std::vector<Rational>& gens) {
    std::vector<Rational> nontrivial;
    for (const auto& r : gens)
        if (r != Rational(1)) nontrivial.push_back(r);
    GroupDescriptor d;
    if (nontrivial.empty()) {
        d.kind = GroupKind::trivial;
        return d;
    }
    std::vector<long long> vals;
    for (const auto& r : nontrivial) {
        if (r.numerator() > 1) vals.push_back(r.numerator());
        if (r.denominator() > 1) vals.push_back(r.denominator());
    }
    std::vector<long long> base = coprime_base(vals);
    std::vector<std::vector<long long>> rows;
    for (const auto& r : nontrivial) rows.push_back(exponents_over(base, r));

    int rank = integer_rank(rows);
    if (rank >= 2) {
        d.kind = GroupKind::dense;
        return d;
    }
    // rank 1: all rows are integer multiples of a primitive direction v
    std::vector<long long> v = rows.front();
    long long g = 0;
    for (long long x : v) g = gcd_ll(g, std::abs(x));
    for (auto& x : v) x /= g;
    std::size_t lead = 0;
    while (v[lead] == 0) ++lead;
    long long mult_gcd = 0;
    for (const auto& row : rows) {
        long long mult = row[lead] / v[lead];
        for (std::size_t i = 0; i < v.size(); ++i)
            if (row[i] != mult * v[i]) {
                d.kind = GroupKind::dense;
                return d;
            }
        mult_gcd = gcd_ll(mult_gcd, std::abs(mult));
    }
    std::vector<long long> expo(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) expo[i] = mult_gcd * v[i];
    Rational r0 = rational_pow(base, expo);
    if (r0 > Rational(1)) r0 = Rational(r0.denominator(), r0.numerator());
    d.kind = GroupKind::cyclic;
    d.lambda0_exact = r0;
    d.lambda0 = to_double(r0);
    return d;
}

GroupDescriptor connes_group_float(const std::vector<double>& gens, double tol) {
    std::vector<double> logs;
    for (double v : gens) {
        double l = std::log(v);
        if (std::abs(l) > tol) logs.push_back(std::abs(l));
    }
    GroupDescriptor d;
    if (logs.empty()) {
        d.kind = GroupKind::trivial;
        return d;
    }
    // one-dimensional lattice reduction (real gcd) on the logs
    double g = logs[0];
    bool degenerate = false;
    for (std::size_t i = 1; i < logs.size(); ++i) {
        double a = std::max(g, logs[i]), b = std::min(g, logs[i]);
        for (int it = 0; it < 256 && b > tol; ++it) {
            double r = std::fmod(a, b);
            if (r > b - tol) r = 0; // treat near-multiples as exact
            a = b;
            b = r;
        }
        g = a;
        if (g < tol) {
            degenerate = true;
            break;
        }
    }
    if (!degenerate) {
        for (double l : logs) {
            double k = std::round(l / g);
            if (std::abs(l - k * g) > tol * std::max(1.0, l)) {
                degenerate = true;
                break;
            }
        }
    }
    if (degenerate) {
        d.kind = GroupKind::dense;
        d.warning = true; // finite float evidence cannot certify incommensurability
        return d;
    }
    d.kind = GroupKind::cyclic;
    d.lambda0 = std::exp(-g);
    return d;
}

} // namespace

GroupDescriptor connes_group(const GeneratorSet& g, double tol) {
    if (g.size() == 0) throw InputError("connes_group: empty generator set");
    if (g.exact_mode()) return connes_group_exact(*g.exact);
    return connes_group_float(g.values, tol);
}

std::string to_string(FactorType t) {
    switch (t) {
        case FactorType::II_1: return "II_1";
        case FactorType::II_inf: return "II_inf";
        case FactorType::III_lambda: return "III_lambda";
        case FactorType::III_1: return "III_1";
    }
    return "?";
}

std::string TypeReport::verdict() const {
    switch (type) {
        case FactorType::II_1: return "II_1";
        case FactorType::II_inf: return "II_inf";
        case FactorType::III_1: return "III_1";
        case FactorType::III_lambda: {
            if (group.lambda0_exact) return "III_{" + tomitafock::to_string(*group.lambda0_exact) + "}";
            std::ostringstream os;
            os << "III_{" << group.lambda0 << "}";
            return os.str();
        }
    }
    return "?";
}

std::string TypeReport::to_json() const {
    nlohmann::json j;
    j["semifinite"] = semifinite;
    j["exact_mode"] = exact_mode;
    nlohmann::json gens = nlohmann::json::array();
    for (int i = 0; i < generators.size(); ++i) {
        if (generators.exact_mode()) gens.push_back(tomitafock::to_string((*generators.exact)[i]));
        else gens.push_back(generators.values[i]);
    }
    j["generators"] = gens;
    switch (group.kind) {
        case GroupKind::trivial: j["group"]["kind"] = "trivial"; break;
        case GroupKind::cyclic:
            j["group"]["kind"] = "cyclic";
            j["group"]["lambda0"] =
                group.lambda0_exact ? nlohmann::json(tomitafock::to_string(*group.lambda0_exact))
                                    : nlohmann::json(group.lambda0);
            break;
        case GroupKind::dense: j["group"]["kind"] = "dense"; break;
    }
    if (group.warning) j["group"]["warning"] = "borderline float verdict";
    j["type"] = tomitafock::to_string(type);
    j["verdict"] = verdict();
    if (!trace_weight.empty()) j["trace_weight"] = trace_weight;
    j["notes"] = notes;
    return j.dump(2);
}

TypeReport classify(const Model& m) {
    TypeReport r;
    r.generators = channel_generators(m);
    r.exact_mode = r.generators.exact_mode();
    r.semifinite = is_semifinite(m);
    r.group = r.semifinite ? GroupDescriptor{} : connes_group(r.generators);

    if (r.semifinite) {
        // implied by generators == {1}: λ_1 = 1 and λ_α = 1 for self-conjugate α
        if (std::abs(m.lambda.label_value(m.fusion.unit) - 1.0) > 1e-9)
            throw std::logic_error("semifinite verdict with λ_1 != 1");
        for (int b = 0; b < m.fusion.size(); ++b)
            if (m.fusion.conj[b] == b && std::abs(m.lambda.label_value(b) - 1.0) > 1e-9)
                throw std::logic_error("semifinite verdict with self-conjugate λ != 1");
        if (!m.fusion.truncated) {
            r.type = FactorType::II_1;
        } else {
            r.type = FactorType::II_inf;
            r.notes.push_back("window of an infinite spectrum: the trace weight is infinite, "
                              "sum_b λ_b d_b diverges over the full spectrum");
        }
        for (int b = 0; b < m.fusion.size(); ++b) {
            const LambdaValue& v = m.lambda.label_lambda(b);
            r.trace_weight[m.fusion.labels[b]] =
                v.exact ? tomitafock::to_string(*v.exact) : std::to_string(v.value);
        }
    } else {
        if (r.group.kind == GroupKind::cyclic) {
            r.type = FactorType::III_lambda;
        } else {
            r.type = FactorType::III_1;
            r.notes.push_back("dense verdict is finite-evidence: only finitely many channel "
                              "generators can be exhibited from finite data");
        }
    }
    if (m.fusion.truncated)
        r.notes.push_back("verdict refers to the intended infinite category behind the window");
    return r;
}

namespace {

bool generator_sets_equal(const GeneratorSet& a, const GeneratorSet& b) {
    if (a.exact_mode() && b.exact_mode()) return *a.exact == *b.exact;
    if (a.size() != b.size()) return false;
    for (int i = 0; i < a.size(); ++i)
        if (std::abs(a.values[i] - b.values[i]) > 1e-9 * std::max(1.0, a.values[i])) return false;
    return true;
}

} // namespace

TypeReport classify_with_stabilization(const Model& window_n, const Model& window_n1) {
    TypeReport r = classify(window_n);
    GeneratorSet next = channel_generators(window_n1);
    if (generator_sets_equal(r.generators, next)) {
        r.notes.push_back("channel generator set stabilized between consecutive windows");
    } else {
        r.notes.push_back("WARNING: generator set did not stabilize between consecutive "
                          "windows; verdict is provisional");
    }
    return r;
}

} // namespace tomitafock
