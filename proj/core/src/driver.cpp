#include "tomitafock/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <Eigen/Dense>
#include <json.hpp>

#include "tomitafock/fock.hpp"
#include "tomitafock/io_json.hpp"
#include "tomitafock/wordlang.hpp"

namespace tomitafock {

LambdaAssignment parse_lambda_spec(const FusionData& f, const std::string& spec) {
    if (spec.rfind("uniform:", 0) == 0)
        return LambdaAssignment::uniform(f, LambdaValue::from_string(spec.substr(8)));
    if (spec.rfind("geometric:", 0) == 0)
        return LambdaAssignment::geometric(f, LambdaValue::from_string(spec.substr(10)));
    std::map<std::string, LambdaValue> per_label;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t comma = spec.find(',', pos);
        std::string item = spec.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos);
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw InputError("malformed λ assignment '" + item + "' (want label=value)");
        per_label[item.substr(0, eq)] = LambdaValue::from_string(item.substr(eq + 1));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (per_label.empty()) throw InputError("empty λ assignment");
    return LambdaAssignment(f, per_label);
}

Model build_model(const std::string& category, const std::string& lambda_spec) {
    Model m;
    m.fusion = category_from_source(category);
    m.lambda = parse_lambda_spec(m.fusion, lambda_spec);
    return m;
}

Model build_model(const RunConfig& cfg) { return build_model(cfg.category, cfg.lambda_spec); }

int thread_budget(int configured) {
    int n = configured > 0 ? configured
                           : static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("TOMITA_FOCK_THREADS")) {
        try {
            int cap = std::stoi(env);
            if (cap >= 1) n = std::min(n, cap);
        } catch (const std::exception&) {
        }
    }
    return std::max(1, std::min(n, 16));
}

std::vector<NamedModel> test_catalog() {
    std::vector<NamedModel> out;
    for (const std::string& cat : {"trivial", "fib", "ising", "zmod:3", "zwindow:4"}) {
        FusionData f = catalog_category(cat);
        out.push_back(NamedModel{cat + "/uniform:1", build_model(cat, "uniform:1")});
        // λ = 2 on the first non-unit label (the unit itself for "trivial")
        std::string designated = f.size() > 1 ? f.labels[1] : f.labels[0];
        out.push_back(
            NamedModel{cat + "/" + designated + "=2", build_model(cat, designated + "=2")});
    }
    return out;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t s = seed ^ (salt * 0x9e3779b97f4a7c15ULL);
    split_mix(s);
    return s;
}

SuiteResult suite_tomita_axioms(const RunConfig& cfg, const std::vector<NamedModel>& catalog) {
    SuiteResult r{"tomita_axioms", false, 0, cfg.tol_structural, ""};
    std::string worst;
    for (const auto& nm : catalog) {
        TomitaAxiomReport rep =
            check_tomita_axioms(nm.model, 100, mix_seed(cfg.seed, 0xA1));
        if (rep.max_residual >= r.residual) {
            r.residual = rep.max_residual;
            worst = nm.name;
        }
    }
    r.pass = r.residual < r.tolerance;
    r.details = "100 random vector pairs per model; worst " + worst;
    return r;
}

SuiteResult suite_modular_flow(const RunConfig& cfg, const std::vector<NamedModel>& catalog) {
    SuiteResult r{"modular_flow", false, 0, cfg.tol_structural, ""};
    const double ts[] = {0.3, 1.0, std::numbers::pi};
    std::string worst;
    for (const auto& nm : catalog) {
        FockBasis basis = enumerate_fock_basis(nm.model, 3, cfg.basis_cap);
        std::vector<BasisVector> cells = all_basis_vectors(nm.model);
        std::uint64_t state = mix_seed(cfg.seed, 0xB2);
        int n_cells = std::min<std::size_t>(6, cells.size());
        for (int c = 0; c < n_cells; ++c) {
            const BasisVector& xi = cells[split_mix(state) % cells.size()];
            for (double t : ts) {
                double res = modular_flow_check(nm.model, xi, t, basis);
                if (res >= r.residual) {
                    r.residual = res;
                    worst = nm.name;
                }
            }
        }
    }
    r.pass = r.residual < r.tolerance;
    r.details = "t in {0.3, 1, pi}, columns of degree <= 2; worst " + worst;
    return r;
}

SuiteResult suite_vacuum_projection(const RunConfig& cfg, const std::vector<NamedModel>& catalog) {
    SuiteResult r{"vacuum_projection", false, 0, cfg.tol_structural, ""};
    std::string worst;
    for (const auto& nm : catalog) {
        FockBasis basis = enumerate_fock_basis(nm.model, 3, cfg.basis_cap);
        VacuumCheckReport rep =
            vacuum_projection_check(nm.model, basis, 5, mix_seed(cfg.seed, 0xC3));
        double res = std::max(rep.sandwich_residual, rep.projection_residual);
        if (res >= r.residual) {
            r.residual = res;
            worst = nm.name;
        }
    }
    r.pass = r.residual < r.tolerance;
    r.details = "e T e = E(T) e on sampled words, e idempotent self-adjoint; worst " + worst;
    return r;
}

SuiteResult suite_oracle_equivalence(const RunConfig& cfg, const std::vector<NamedModel>& catalog) {
    SuiteResult r{"oracle_equivalence", false, 0, cfg.tol_moments, ""};
    std::string worst;
    long long words = 0;
    for (const auto& nm : catalog) {
        std::uint64_t state = mix_seed(cfg.seed, 0xD4);
        for (int w = 0; w < cfg.words_per_model; ++w) {
            int len = 2 * (1 + static_cast<int>(split_mix(state) % 4)); // 2,4,6,8
            if (split_mix(state) % 8 == 0) --len;                       // occasional odd word
            WordSpec spec = random_closed_word(nm.model, len, state);
            for (auto& f : spec.factors)
                if (split_mix(state) % 4 == 0)
                    f.coeff = Complex(uniform_unit(state) + 0.5, uniform_unit(state) - 0.5);
            Complex oracle = moment_nc(nm.model, spec);
            Complex matrix = word_moment_matrix(nm.model, spec.as_vectors(), spec.length());
            double res = std::abs(oracle - matrix);
            ++words;
            if (res >= r.residual) {
                r.residual = res;
                worst = nm.name;
            }
        }
    }
    r.pass = r.residual < r.tolerance;
    r.details = std::to_string(words) + " random closed words of length <= 8; worst " + worst;
    return r;
}

SuiteResult suite_freeness(const RunConfig& cfg, const std::vector<NamedModel>& catalog) {
    SuiteResult r{"freeness", false, 0, 1e-10, ""};
    bool control_ok = true;
    int checked = 0;
    std::string worst;
    for (const auto& nm : catalog) {
        auto groups = letter_pair_groups(nm.model);
        if (groups.size() < 2) continue;
        FreenessOptions opt;
        opt.trials = 15;
        opt.seed = mix_seed(cfg.seed, 0xE5);
        FreenessReport rep = freeness_check(nm.model, groups, opt);
        checked += rep.words_checked;
        if (rep.max_residual >= r.residual) {
            r.residual = rep.max_residual;
            worst = nm.name;
        }
        FreenessOptions control = opt;
        control.centered = false;
        control.trials = 10;
        if (freeness_check(nm.model, groups, control).max_residual <= 1e-3)
            control_ok = false;
    }
    r.pass = r.residual < r.tolerance && control_ok && checked >= 100;
    r.details = std::to_string(checked) + " centered alternating words; non-centered control " +
                (control_ok ? "separates" : "FAILED to separate") + "; worst " + worst;
    return r;
}

SuiteResult suite_mp_law(const RunConfig& cfg, const std::vector<NamedModel>& catalog) {
    SuiteResult r{"mp_law", false, 0, 1e-9, ""};
    // analytic vs quadrature across the λ grid (throws on disagreement)
    for (double lam : {0.1, 0.25, 0.5, 1.0}) mp_moments(lam, 6);

    // catalan moments of Γ*Γ on the trivial category, matrix route
    Model triv = build_model("trivial", "uniform:1");
    BasisVector xi{0, 0, Letter{0, false}, 0};
    WordSpec unit = WordSpec::gamma(xi).append_star(triv, xi);
    std::vector<double> cat = mp_moments(1.0, 6);
    for (int k = 1; k <= 6; ++k) {
        Complex v = word_moment_matrix(triv, unit.repeat(k).as_vectors(), 2 * k);
        r.residual = std::max(r.residual, std::abs(v.real() - cat[k - 1]));
    }

    // λ = 1/4 on the trivial category: m1 = 1, m2 = 1.25
    Model quarter = build_model("trivial", "uniform:1/4");
    WordSpec unit_q = WordSpec::gamma(xi).append_star(quarter, xi);
    std::vector<double> mp_q = mp_moments(0.25, 2);
    for (int k = 1; k <= 2; ++k) {
        Complex v = word_moment_matrix(quarter, unit_q.repeat(k).as_vectors(), 2 * k);
        r.residual = std::max(r.residual, std::abs(v.real() - mp_q[k - 1]));
    }
    r.pass = r.residual < r.tolerance;
    r.details = "quadrature grid λ in {0.1,0.25,0.5,1}; trivial-category moments k <= 6";
    return r;
}

} // namespace

std::vector<SuiteResult> run_proptest(const RunConfig& cfg) {
    std::vector<NamedModel> catalog = test_catalog();
    using SuiteFn = SuiteResult (*)(const RunConfig&, const std::vector<NamedModel>&);
    std::vector<SuiteFn> suites = {suite_freeness,         suite_modular_flow,
                                   suite_mp_law,           suite_oracle_equivalence,
                                   suite_tomita_axioms,    suite_vacuum_projection};

    int budget = thread_budget(cfg.threads);
    std::vector<SuiteResult> results(suites.size());
    if (budget <= 1) {
        for (std::size_t i = 0; i < suites.size(); ++i) results[i] = suites[i](cfg, catalog);
    } else {
        std::vector<std::future<SuiteResult>> futs;
        futs.reserve(suites.size());
        std::size_t next = 0;
        while (next < suites.size()) {
            std::size_t batch = std::min<std::size_t>(budget, suites.size() - next);
            for (std::size_t i = 0; i < batch; ++i)
                futs.push_back(std::async(std::launch::async, suites[next + i], std::cref(cfg),
                                          std::cref(catalog)));
            for (std::size_t i = 0; i < batch; ++i) results[next + i] = futs[i].get();
            futs.clear();
            next += batch;
        }
    }
    std::sort(results.begin(), results.end(),
              [](const SuiteResult& a, const SuiteResult& b) { return a.name < b.name; });
    return results;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    Model m = build_model(cfg);
    nlohmann::json j;
    j["category"] = cfg.category;
    j["status"] = "ok";
    j["labels"] = m.fusion.labels;
    nlohmann::json dims;
    for (int b = 0; b < m.fusion.size(); ++b) dims[m.fusion.labels[b]] = m.fusion.dims[b];
    j["dims"] = dims;
    j["truncated"] = m.fusion.truncated;
    nlohmann::json lam;
    for (int b = 0; b < m.fusion.size(); ++b)
        lam[m.fusion.labels[b]] = m.lambda.label_value(b);
    j["lambda"] = lam;
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_moments(const RunConfig& cfg, const std::string& word_text, std::ostream& out) {
    Model m = build_model(cfg);
    WordSpec w = parse_word(m, word_text);
    if (cfg.depth < w.length())
        throw InputError("configured depth " + std::to_string(cfg.depth) +
                         " is smaller than the word length " + std::to_string(w.length()));
    Complex oracle = moment_nc(m, w);
    Complex matrix = word_moment_matrix(m, w.as_vectors(), cfg.depth);
    double diff = std::abs(oracle - matrix);
    if (cfg.format == "csv") {
        out << "word,matrix_re,matrix_im,oracle_re,oracle_im,difference\n";
        out.precision(17);
        out << '"' << word_text << "\"," << matrix.real() << "," << matrix.imag() << ","
            << oracle.real() << "," << oracle.imag() << "," << diff << "\n";
    } else {
        nlohmann::json j;
        j["word"] = word_text;
        j["length"] = w.length();
        j["matrix"] = {{"re", matrix.real()}, {"im", matrix.imag()}};
        j["oracle"] = {{"re", oracle.real()}, {"im", oracle.imag()}};
        j["difference"] = diff;
        j["tolerance"] = cfg.tol_moments;
        j["pass"] = diff <= cfg.tol_moments;
        out << j.dump(2) << "\n";
    }
    return diff <= cfg.tol_moments ? 0 : 1;
}

namespace {

struct Histogram {
    std::vector<double> edges;
    std::vector<double> masses;
    double min_eig = 0, max_eig = 0;
};

Histogram spectrum_histogram(const Model& m, const BasisVector& xi, const RunConfig& cfg,
                             double lambda_eff) {
    // compress Γ*Γ to paths with the source label of ξ; grow the degree until
    // the dimension cap is hit
    std::vector<BasisVector> cells = all_basis_vectors(m);
    std::map<int, std::vector<BasisVector>> by_src;
    for (const auto& v : cells) by_src[v.src].push_back(v);

    std::vector<FockPath> sub;
    std::vector<FockPath> frontier{FockPath::vacuum(xi.src)};
    sub.push_back(frontier.front());
    int depth = 0;
    while (depth < cfg.depth) {
        std::vector<FockPath> next;
        for (const auto& p : frontier) {
            auto it = by_src.find(p.dst_label());
            if (it == by_src.end()) continue;
            for (const auto& v : it->second) {
                FockPath q;
                q.base = p.base;
                q.chain.push_back(v);
                q.chain.insert(q.chain.end(), p.chain.begin(), p.chain.end());
                next.push_back(std::move(q));
            }
        }
        if (sub.size() + next.size() > static_cast<std::size_t>(cfg.hist_dim_cap)) break;
        sub.insert(sub.end(), next.begin(), next.end());
        frontier.swap(next);
        ++depth;
    }
    std::sort(sub.begin(), sub.end());
    std::map<FockPath, int> idx;
    for (std::size_t i = 0; i < sub.size(); ++i) idx[sub[i]] = static_cast<int>(i);

    const int n = static_cast<int>(sub.size());
    BimoduleVector xv = BimoduleVector::basis(xi);
    BimoduleVector sxv = apply_S(m, xv);
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(n, n);
    for (int col = 0; col < n; ++col) {
        PathVector v{{sub[col], Complex(1)}};
        v = apply_gamma(m, xv, v, depth);
        // Γ(ξ)* = Γ(S(ξ))
        v = apply_gamma(m, sxv, v, depth);
        for (const auto& [p, c] : v) {
            auto it = idx.find(p);
            if (it != idx.end()) mat(it->second, col) = c.real();
        }
    }
    // symmetrize w.r.t. the weighted inner product: H = D^{1/2} M D^{-1/2}
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w(i) = std::sqrt(m.dim(sub[i].src_label()));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) mat(r, c) *= w(r) / w(c);
    Eigen::MatrixXd sym = 0.5 * (mat + mat.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);

    int vac = idx.at(FockPath::vacuum(xi.src));
    Histogram h;
    h.min_eig = es.eigenvalues().minCoeff();
    h.max_eig = es.eigenvalues().maxCoeff();
    double hi = std::max(h.max_eig, (1 + std::sqrt(lambda_eff)) * (1 + std::sqrt(lambda_eff)));
    hi *= 1.0 + 1e-9;
    double lo = std::min(0.0, h.min_eig);
    h.edges.resize(cfg.hist_bins + 1);
    for (int i = 0; i <= cfg.hist_bins; ++i)
        h.edges[i] = lo + (hi - lo) * i / cfg.hist_bins;
    h.masses.assign(cfg.hist_bins, 0.0);
    for (int i = 0; i < n; ++i) {
        double mass = es.eigenvectors()(vac, i) * es.eigenvectors()(vac, i);
        double x = es.eigenvalues()(i);
        int bin = std::min(cfg.hist_bins - 1,
                           std::max(0, static_cast<int>((x - lo) / (hi - lo) * cfg.hist_bins)));
        h.masses[bin] += mass;
    }
    return h;
}

} // namespace

int cmd_spectrum(const RunConfig& cfg, const std::string& xi_text, std::ostream& out) {
    Model m = build_model(cfg);
    BasisVector xi = parse_basis_vector(m, xi_text);
    const int K = cfg.moment_order;

    GammaMomentsReport oracle = gamma_star_gamma_moments(m, xi, K);
    std::vector<double> analytic = mp_moments(oracle.lambda_eff, K);

    BasisVector v = oracle.swapped ? bar(m, xi).vec : xi;
    WordSpec unit = WordSpec::gamma(v).append_star(m, v);
    double max_diff = 0;
    std::vector<double> matrix_m(K);
    for (int k = 1; k <= K; ++k) {
        Complex val = word_moment_matrix(m, unit.repeat(k).as_vectors(), 2 * k);
        matrix_m[k - 1] = val.real() / m.dim(v.src);
        max_diff = std::max(max_diff, std::abs(matrix_m[k - 1] - analytic[k - 1]));
    }

    Histogram h = spectrum_histogram(m, v, cfg, oracle.lambda_eff);

    if (cfg.format == "csv") {
        out.precision(17);
        out << "k,matrix,analytic,difference\n";
        for (int k = 1; k <= K; ++k)
            out << k << "," << matrix_m[k - 1] << "," << analytic[k - 1] << ","
                << std::abs(matrix_m[k - 1] - analytic[k - 1]) << "\n";
        out << "histogram,APPROXIMATE\n";
        out << "bin_lo,bin_hi,mass\n";
        for (std::size_t b = 0; b + 1 < h.edges.size(); ++b)
            out << h.edges[b] << "," << h.edges[b + 1] << "," << h.masses[b] << "\n";
    } else {
        nlohmann::json j;
        j["xi"] = xi_text;
        j["lambda_eff"] = oracle.lambda_eff;
        j["swapped"] = oracle.swapped;
        nlohmann::json rows = nlohmann::json::array();
        for (int k = 1; k <= K; ++k) {
            nlohmann::json row;
            row["k"] = k;
            row["matrix"] = matrix_m[k - 1];
            row["analytic"] = analytic[k - 1];
            row["difference"] = std::abs(matrix_m[k - 1] - analytic[k - 1]);
            rows.push_back(row);
        }
        j["moments"] = rows;
        j["histogram"] = {{"label", "APPROXIMATE"},
                          {"edges", h.edges},
                          {"masses", h.masses},
                          {"min_eig", h.min_eig},
                          {"max_eig", h.max_eig}};
        j["tolerance"] = cfg.tol_spectrum;
        j["pass"] = max_diff <= cfg.tol_spectrum;
        out << j.dump(2) << "\n";
    }
    return max_diff <= cfg.tol_spectrum ? 0 : 1;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
    Model m = build_model(cfg);
    TypeReport rep;
    if (m.fusion.truncated && cfg.category.rfind("zwindow:", 0) == 0) {
        int n = std::stoi(cfg.category.substr(8));
        Model grown = build_model("zwindow:" + std::to_string(n + 1), cfg.lambda_spec);
        rep = classify_with_stabilization(m, grown);
    } else {
        rep = classify(m);
        if (m.fusion.truncated)
            rep.notes.push_back("stabilization unverified: user-supplied window cannot be grown");
    }
    out << rep.to_json() << "\n";
    return 0;
}

int cmd_proptest(const RunConfig& cfg, std::ostream& out) {
    std::vector<SuiteResult> results = run_proptest(cfg);
    bool all_pass = true;
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        std::ostringstream line;
        line.precision(3);
        line << "suite " << r.name << ": " << (r.pass ? "PASS" : "FAIL") << " (residual "
             << std::scientific << r.residual << ", tol " << r.tolerance << ") " << r.details;
        out << line.str() << "\n";
        nlohmann::json e;
        e["suite"] = r.name;
        e["pass"] = r.pass;
        e["residual"] = r.residual;
        e["tolerance"] = r.tolerance;
        e["details"] = r.details;
        j.push_back(e);
    }
    out << j.dump(2) << "\n";
    return all_pass ? 0 : 1;
}

} // namespace tomitafock
