#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tomitafock/errors.hpp"
#include "tomitafock/rational.hpp"

namespace tomitafock {

/// Fusion data of a rigid C*-tensor category with simple unit: simple-object
/// labels, the conjugation involution, the fusion multiplicity tensor and the
/// quantum dimension vector. Immutable after validation; safe to share
/// read-only across threads.
struct FusionData {
    // Labels in order of appearance; every downstream basis inherits this order.
    std::vector<std::string> labels;
    int unit = 0; // index of the label "1"
    std::vector<int> conj; // involutive self-map on label ids
    // mult[gamma][beta][alpha] = dim Hom(gamma, beta (x) alpha)
    std::vector<std::vector<std::vector<int>>> mult;
    std::vector<double> dims;
    // True when the labels are a finite window of an infinite spectrum;
    // validation then relaxes to in-window checks and dims must be supplied.
    bool truncated = false;

    int size() const { return static_cast<int>(labels.size()); }
    int n(int gamma, int beta, int alpha) const { return mult[gamma][beta][alpha]; }
    int label_id(std::string_view name) const; // throws InputError if unknown
    bool has_label(std::string_view name) const;
    double dim(int label) const { return dims[label]; }
};

/// A letter of Lambda = S ⊔ S̄. A label and its barred twin are distinct
/// letters even when the underlying object is self-conjugate.
struct Letter {
    int object = 0;
    bool barred = false;
    auto operator<=>(const Letter&) const = default;
};

inline Letter bar(Letter a) { return Letter{a.object, !a.barred}; }

/// Underlying object of a letter: barred letters resolve through conj.
inline int underlying_object(const FusionData& f, Letter a) {
    return a.barred ? f.conj[a.object] : a.object;
}

/// dim Hom(src, dst (x) iota(letter)).
int hom_dim(const FusionData& f, int src, int dst, Letter letter);

/// Per-label λ values; barred letters carry the exact reciprocal.
class LambdaAssignment {
public:
    LambdaAssignment() = default;
    LambdaAssignment(const FusionData& f, const std::map<std::string, LambdaValue>& per_label);
    static LambdaAssignment uniform(const FusionData& f, LambdaValue v);
    /// λ(z^k) = base^k for integer-indexed window/cyclic labels ("z3" -> base^3).
    static LambdaAssignment geometric(const FusionData& f, LambdaValue base);

    double value(Letter a) const;
    std::optional<Rational> exact(Letter a) const;
    double label_value(int label) const { return values_[label].value; }
    const LambdaValue& label_lambda(int label) const { return values_[label]; }
    bool all_exact() const;
    int size() const { return static_cast<int>(values_.size()); }

private:
    std::vector<LambdaValue> values_;
};

struct LetterLambda {
    Letter letter;
    double lambda = 1.0;
    std::optional<Rational> exact;
};

/// All 2|S| letters in deterministic order (per label: unbarred, then barred).
std::vector<LetterLambda> letters(const FusionData& f, const LambdaAssignment& lambda);

/// Validates every FusionData invariant (unit constraints, Frobenius
/// reciprocity, fusion-ring associativity, conj involutivity, dimension
/// consistency). For truncated data the checks relax to in-window statements;
/// associativity quadruples are checked only when the dimension identity
/// certifies that no fusion channel escaped the window.
void validate(const FusionData& f, double tol = 1e-9);

/// Unique dimension vector with d_1 = 1, d >= 1, computed as the
/// Perron-Frobenius eigenvector of the total fusion matrix.
/// Requires truncated == false.
std::vector<double> compute_dimensions(const FusionData& f, double tol = 1e-9);

/// Parses the JSON category document (schema: labels/conj/fusion/dims/truncated),
/// fills missing unit fusion entries, computes dims when absent, validates.
FusionData load_category(const std::string& json_text);
FusionData load_category_file(const std::string& path);

/// Built-in catalog: "trivial", "fib", "ising", "zmod:n", "zwindow:n".
FusionData catalog_category(const std::string& name);
bool is_catalog_name(const std::string& name);
/// Category from a catalog name or a JSON file path.
FusionData category_from_source(const std::string& source);

/// Bundle used by every downstream module: validated fusion data plus a λ
/// assignment. Immutable; operations on it are pure.
struct Model {
    FusionData fusion;
    LambdaAssignment lambda;

    int hom_dim(int src, int dst, Letter letter) const {
        return tomitafock::hom_dim(fusion, src, dst, letter);
    }
    double dim(int label) const { return fusion.dims[label]; }
    double lam(Letter a) const { return lambda.value(a); }
};

} // namespace tomitafock
