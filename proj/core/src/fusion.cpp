#include "tomitafock/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace tomitafock {

int FusionData::label_id(std::string_view name) const {
    for (int i = 0; i < size(); ++i)
        if (labels[i] == name) return i;
    throw InputError("unknown label '" + std::string(name) + "'");
}

bool FusionData::has_label(std::string_view name) const {
    return std::find(labels.begin(), labels.end(), name) != labels.end();
}

int hom_dim(const FusionData& f, int src, int dst, Letter letter) {
    if (src < 0 || src >= f.size() || dst < 0 || dst >= f.size() ||
        letter.object < 0 || letter.object >= f.size())
        throw InputError("hom_dim: label id out of range");
    return f.mult[src][dst][underlying_object(f, letter)];
}

namespace {

std::string triple(const FusionData& f, int g, int b, int a) {
    return "(" + f.labels[g] + "," + f.labels[b] + "," + f.labels[a] + ")";
}

// Dimension identity d_b*d_a = sum_g N[g][b][a]*d_g certifies that no fusion
// channel of b(x)a escaped a truncated window.
bool channels_complete(const FusionData& f, int b, int a, double tol) {
    double s = 0;
    for (int g = 0; g < f.size(); ++g) s += f.mult[g][b][a] * f.dims[g];
    return std::abs(s - f.dims[b] * f.dims[a]) <= tol * std::max(1.0, f.dims[b] * f.dims[a]);
}

} // namespace

void validate(const FusionData& f, double tol) {
    const int n = f.size();
    if (n == 0) throw InputError("empty label set");
    if (f.labels[f.unit] != "1") throw InputError("label set must contain \"1\"");
    {
        std::set<std::string> seen(f.labels.begin(), f.labels.end());
        if (static_cast<int>(seen.size()) != n) throw InputError("duplicate labels");
    }
    if (static_cast<int>(f.conj.size()) != n ||
        static_cast<int>(f.mult.size()) != n)
        throw InputError("inconsistent tensor sizes");

    for (int x = 0; x < n; ++x) {
        if (f.conj[x] < 0 || f.conj[x] >= n || f.conj[f.conj[x]] != x)
            throw InputError("conj is not an involution at label '" + f.labels[x] + "'");
    }
    if (f.conj[f.unit] != f.unit) throw InputError("conj(\"1\") must be \"1\"");

    for (int g = 0; g < n; ++g)
        for (int b = 0; b < n; ++b)
            for (int a = 0; a < n; ++a)
                if (f.mult[g][b][a] < 0)
                    throw InputError("negative multiplicity at " + triple(f, g, b, a));

    // Unit constraints.
    for (int g = 0; g < n; ++g)
        for (int b = 0; b < n; ++b) {
            if (f.mult[g][b][f.unit] != (g == b ? 1 : 0))
                throw InputError("unit-constraint violation at N" + triple(f, g, b, f.unit));
            if (f.mult[g][f.unit][b] != (g == b ? 1 : 0))
                throw InputError("unit-constraint violation at N" + triple(f, g, f.unit, b));
        }

    // Frobenius reciprocity. All three labels are in the window, so this is
    // checked in the truncated case as well.
    for (int g = 0; g < n; ++g)
        for (int b = 0; b < n; ++b)
            for (int a = 0; a < n; ++a) {
                if (f.mult[g][b][a] != f.mult[b][g][f.conj[a]] ||
                    f.mult[g][b][a] != f.mult[f.conj[a]][f.conj[g]][b])
                    throw InputError("Frobenius reciprocity violated at N" + triple(f, g, b, a));
            }

    if (static_cast<int>(f.dims.size()) != n)
        throw InputError("dimension vector missing or wrong size");
    for (int b = 0; b < n; ++b)
        if (!(f.dims[b] >= 1.0 - tol))
            throw InputError("dimension of '" + f.labels[b] + "' below 1");
    if (std::abs(f.dims[f.unit] - 1.0) > tol)
        throw InputError("dimension of the unit must be 1");

    // Associativity: sum_e N[e][a][b] N[g][e][c] = sum_f N[f][b][c] N[g][a][f].
    // Exact integer identity when untruncated; for windows only certified
    // quadruples are checked (see channels_complete).
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (f.truncated && !channels_complete(f, a, b, tol)) continue;
            for (int c = 0; c < n; ++c) {
                if (f.truncated && !channels_complete(f, b, c, tol)) continue;
                for (int g = 0; g < n; ++g) {
                    long long lhs = 0, rhs = 0;
                    for (int e = 0; e < n; ++e)
                        lhs += static_cast<long long>(f.mult[e][a][b]) * f.mult[g][e][c];
                    for (int h = 0; h < n; ++h)
                        rhs += static_cast<long long>(f.mult[h][b][c]) * f.mult[g][a][h];
                    if (lhs != rhs)
                        throw InputError("fusion associativity violated at " + triple(f, g, a, b) +
                                         " * " + f.labels[c]);
                }
            }
        }

    // Dimension consistency; skipped for windows where it is exactly the
    // channel-escape detector.
    if (!f.truncated) {
        for (int b = 0; b < n; ++b)
            for (int a = 0; a < n; ++a) {
                double s = 0;
                for (int g = 0; g < n; ++g) s += f.mult[g][b][a] * f.dims[g];
                if (std::abs(s - f.dims[b] * f.dims[a]) > tol)
                    throw InputError("dimension identity violated at d_" + f.labels[b] +
                                     " * d_" + f.labels[a]);
            }
    }
}

std::vector<double> compute_dimensions(const FusionData& f, double tol) {
    if (f.truncated)
        throw InputError("dimensions of truncated data must be user-supplied");
    const int n = f.size();
    // Total fusion matrix M[b][g] = sum_a N[g][b][a]; the dimension vector is
    // its unique strictly positive eigenvector (Perron-Frobenius).
    std::vector<std::vector<long long>> m(n, std::vector<long long>(n, 0));
    for (int b = 0; b < n; ++b)
        for (int g = 0; g < n; ++g)
            for (int a = 0; a < n; ++a) m[b][g] += f.mult[g][b][a];

    std::vector<double> v(n, 1.0), w(n, 0.0);
    for (int iter = 0; iter < 200000; ++iter) {
        double sup = 0;
        for (int b = 0; b < n; ++b) {
            double s = 0;
            for (int g = 0; g < n; ++g) s += static_cast<double>(m[b][g]) * v[g];
            w[b] = s;
            sup = std::max(sup, std::abs(s));
        }
        if (sup == 0) throw InputError("no consistent dimension vector (fusion matrix degenerate)");
        double diff = 0;
        for (int b = 0; b < n; ++b) {
            w[b] /= sup;
            diff = std::max(diff, std::abs(w[b] - v[b]));
        }
        v.swap(w);
        if (diff < 1e-16) break;
    }
    if (v[f.unit] <= 0) throw InputError("no consistent dimension vector");
    std::vector<double> d(n);
    for (int b = 0; b < n; ++b) d[b] = v[b] / v[f.unit];

    for (int b = 0; b < n; ++b)
        if (!(d[b] >= 1.0 - tol))
            throw InputError("no consistent dimension vector (d_" + f.labels[b] + " < 1)");
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a) {
            double s = 0;
            for (int g = 0; g < n; ++g) s += f.mult[g][b][a] * d[g];
            if (std::abs(s - d[b] * d[a]) > tol)
                throw InputError("no consistent dimension vector within tolerance");
        }
    return d;
}

namespace {

FusionData from_parsed(std::vector<std::string> labels, std::vector<int> conj,
                       std::vector<std::vector<std::vector<int>>> mult,
                       std::vector<double> dims, bool truncated) {
    FusionData f;
    f.labels = std::move(labels);
    auto it = std::find(f.labels.begin(), f.labels.end(), "1");
    if (it == f.labels.end()) throw InputError("label set must contain \"1\"");
    f.unit = static_cast<int>(it - f.labels.begin());
    f.conj = std::move(conj);
    f.mult = std::move(mult);
    f.truncated = truncated;
    // Fill implied unit entries that the document left out.
    const int n = f.size();
    for (int g = 0; g < n; ++g)
        for (int b = 0; b < n; ++b) {
            if (g == b) {
                if (f.mult[g][b][f.unit] == 0) f.mult[g][b][f.unit] = 1;
                if (f.mult[g][f.unit][b] == 0) f.mult[g][f.unit][b] = 1;
            }
        }
    if (dims.empty()) f.dims = compute_dimensions(f);
    else f.dims = std::move(dims);
    validate(f);
    return f;
}

} // namespace

FusionData load_category(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("category JSON parse error: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("category document must be a JSON object");
    if (!doc.contains("labels") || !doc["labels"].is_array())
        throw InputError("category document needs a \"labels\" array");

    std::vector<std::string> labels;
    for (const auto& l : doc["labels"]) {
        if (!l.is_string()) throw InputError("labels must be strings");
        labels.push_back(l.get<std::string>());
    }
    const int n = static_cast<int>(labels.size());
    auto id_of = [&](const std::string& name) -> int {
        auto it = std::find(labels.begin(), labels.end(), name);
        if (it == labels.end()) throw InputError("unknown label '" + name + "' in category document");
        return static_cast<int>(it - labels.begin());
    };

    std::vector<int> conj(n);
    for (int i = 0; i < n; ++i) conj[i] = i;
    if (doc.contains("conj")) {
        if (!doc["conj"].is_object()) throw InputError("\"conj\" must be an object");
        for (auto it = doc["conj"].begin(); it != doc["conj"].end(); ++it)
            conj[id_of(it.key())] = id_of(it.value().get<std::string>());
        for (int i = 0; i < n; ++i)
            if (conj[conj[i]] != i)
                throw InputError("conj is not an involution at label '" + labels[i] + "'");
    }

    std::vector mult(n, std::vector(n, std::vector<int>(n, 0)));
    if (doc.contains("fusion")) {
        if (!doc["fusion"].is_array()) throw InputError("\"fusion\" must be an array");
        for (const auto& e : doc["fusion"]) {
            if (!e.is_object() || !e.contains("gamma") || !e.contains("beta") ||
                !e.contains("alpha") || !e.contains("mult"))
                throw InputError("fusion entries need gamma/beta/alpha/mult");
            int g = id_of(e["gamma"].get<std::string>());
            int b = id_of(e["beta"].get<std::string>());
            int a = id_of(e["alpha"].get<std::string>());
            int m = e["mult"].get<int>();
            if (m < 0) throw InputError("negative multiplicity in fusion entry");
            mult[g][b][a] = m;
        }
    }

    std::vector<double> dims;
    if (doc.contains("dims")) {
        if (!doc["dims"].is_object()) throw InputError("\"dims\" must be an object");
        dims.assign(n, 0.0);
        std::vector<bool> have(n, false);
        for (auto it = doc["dims"].begin(); it != doc["dims"].end(); ++it) {
            int i = id_of(it.key());
            dims[i] = it.value().get<double>();
            have[i] = true;
        }
        for (int i = 0; i < n; ++i)
            if (!have[i]) throw InputError("dims must cover every label (missing '" + labels[i] + "')");
    }
    bool truncated = doc.value("truncated", false);
    return from_parsed(std::move(labels), std::move(conj), std::move(mult),
                       std::move(dims), truncated);
}

FusionData load_category_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open category file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_category(ss.str());
}

namespace {

int parse_catalog_int(const std::string& name, std::size_t colon) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(name.substr(colon + 1), &pos);
        if (pos != name.size() - colon - 1) throw InputError("");
        return v;
    } catch (const std::exception&) {
        throw InputError("malformed catalog name '" + name + "'");
    }
}

FusionData make_group_like(std::vector<std::string> labels, std::vector<int> conj,
                           const std::vector<std::vector<int>>& product, bool truncated) {
    const int n = static_cast<int>(labels.size());
    std::vector mult(n, std::vector(n, std::vector<int>(n, 0)));
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a)
            if (product[b][a] >= 0) mult[product[b][a]][b][a] = 1;
    return from_parsed(std::move(labels), std::move(conj), std::move(mult),
                       std::vector<double>(n, 1.0), truncated);
}

} // namespace

bool is_catalog_name(const std::string& name) {
    if (name == "trivial" || name == "fib" || name == "ising") return true;
    return name.rfind("zmod:", 0) == 0 || name.rfind("zwindow:", 0) == 0;
}

FusionData catalog_category(const std::string& name) {
    if (name == "trivial") {
        std::vector mult(1, std::vector(1, std::vector<int>(1, 1)));
        return from_parsed({"1"}, {0}, std::move(mult), {1.0}, false);
    }
    if (name == "fib") {
        std::vector mult(2, std::vector(2, std::vector<int>(2, 0)));
        // t(x)t = 1 + t
        mult[0][1][1] = 1;
        mult[1][1][1] = 1;
        return from_parsed({"1", "t"}, {0, 1}, std::move(mult), {}, false);
    }
    if (name == "ising") {
        // labels 1, e, s with e(x)e = 1, e(x)s = s(x)e = s, s(x)s = 1 + e
        std::vector mult(3, std::vector(3, std::vector<int>(3, 0)));
        mult[0][1][1] = 1; // 1 in e(x)e
        mult[2][1][2] = 1; // s in e(x)s
        mult[2][2][1] = 1; // s in s(x)e
        mult[0][2][2] = 1; // 1 in s(x)s
        mult[1][2][2] = 1; // e in s(x)s
        return from_parsed({"1", "e", "s"}, {0, 1, 2}, std::move(mult), {}, false);
    }
    if (name.rfind("zmod:", 0) == 0) {
        int n = parse_catalog_int(name, 4);
        if (n < 1) throw InputError("zmod:n needs n >= 1");
        std::vector<std::string> labels;
        std::vector<int> conj;
        for (int k = 0; k < n; ++k) {
            labels.push_back(k == 0 ? "1" : (k == 1 ? "g" : "g" + std::to_string(k)));
            conj.push_back((n - k) % n);
        }
        std::vector product(n, std::vector<int>(n));
        for (int b = 0; b < n; ++b)
            for (int a = 0; a < n; ++a) product[b][a] = (b + a) % n;
        return make_group_like(std::move(labels), std::move(conj), product, false);
    }
    if (name.rfind("zwindow:", 0) == 0) {
        int n = parse_catalog_int(name, 7);
        if (n < 1) throw InputError("zwindow:n needs n >= 1");
        // window {-n..n} of Z, enumerated 0, +1, -1, +2, -2, ...
        std::vector<int> ks{0};
        for (int k = 1; k <= n; ++k) {
            ks.push_back(k);
            ks.push_back(-k);
        }
        const int m = static_cast<int>(ks.size());
        auto slot = [&](int k) -> int {
            if (k == 0) return 0;
            return k > 0 ? 2 * k - 1 : -2 * k;
        };
        std::vector<std::string> labels;
        std::vector<int> conj;
        for (int k : ks) {
            labels.push_back(k == 0 ? "1" : "z" + std::to_string(k));
            conj.push_back(slot(-k));
        }
        std::vector product(m, std::vector<int>(m, -1));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                int s = ks[i] + ks[j];
                if (std::abs(s) <= n) product[i][j] = slot(s);
            }
        return make_group_like(std::move(labels), std::move(conj), product, true);
    }
    throw InputError("unknown catalog category '" + name + "'");
}

FusionData category_from_source(const std::string& source) {
    if (is_catalog_name(source)) return catalog_category(source);
    return load_category_file(source);
}

namespace {

// "1" -> 0, "z3" -> 3, "z-2" -> -2; used by geometric λ assignments.
int window_index(const std::string& label) {
    if (label == "1") return 0;
    if (label.size() >= 2 && label[0] == 'z') {
        try {
            std::size_t pos = 0;
            int v = std::stoi(label.substr(1), &pos);
            if (pos == label.size() - 1) return v;
        } catch (const std::exception&) {
        }
    }
    throw InputError("geometric λ assignment needs integer-indexed labels, got '" + label + "'");
}

} // namespace

LambdaAssignment::LambdaAssignment(const FusionData& f,
                                   const std::map<std::string, LambdaValue>& per_label) {
    values_.assign(f.size(), LambdaValue::one());
    for (const auto& [name, v] : per_label) {
        int id = f.label_id(name);
        if (!(v.value > 0) || (v.exact && *v.exact <= Rational(0)))
            throw InputError("λ must be positive for label '" + name + "'");
        values_[id] = v;
    }
}

LambdaAssignment LambdaAssignment::uniform(const FusionData& f, LambdaValue v) {
    std::map<std::string, LambdaValue> m;
    for (const auto& l : f.labels) m[l] = v;
    return LambdaAssignment(f, m);
}

LambdaAssignment LambdaAssignment::geometric(const FusionData& f, LambdaValue base) {
    std::map<std::string, LambdaValue> m;
    for (const auto& l : f.labels) m[l] = base.pow(window_index(l));
    return LambdaAssignment(f, m);
}

double LambdaAssignment::value(Letter a) const {
    const LambdaValue& v = values_.at(a.object);
    return a.barred ? 1.0 / v.value : v.value;
}

std::optional<Rational> LambdaAssignment::exact(Letter a) const {
    const LambdaValue& v = values_.at(a.object);
    if (!v.exact) return std::nullopt;
    return a.barred ? Rational(v.exact->denominator(), v.exact->numerator()) : *v.exact;
}

bool LambdaAssignment::all_exact() const {
    for (const auto& v : values_)
        if (!v.exact) return false;
    return true;
}

std::vector<LetterLambda> letters(const FusionData& f, const LambdaAssignment& lambda) {
    if (lambda.size() != f.size()) throw InputError("λ assignment does not match label set");
    std::vector<LetterLambda> out;
    out.reserve(2 * f.size());
    for (int b = 0; b < f.size(); ++b) {
        for (bool barred : {false, true}) {
            Letter a{b, barred};
            out.push_back(LetterLambda{a, lambda.value(a), lambda.exact(a)});
        }
    }
    return out;
}

} // namespace tomitafock
