#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tomitafock/fusion.hpp"

namespace tomitafock {

/// Deduplicated channel ratios {λ_α λ_{β2}/λ_{β1} : Hom(β1, β2 α) ≠ 0};
/// carries exact rationals whenever every λ was given exactly.
struct GeneratorSet {
    std::vector<double> values;                 // sorted ascending
    std::optional<std::vector<Rational>> exact; // parallel to values when present

    bool exact_mode() const { return exact.has_value(); }
    int size() const { return static_cast<int>(values.size()); }
};

GeneratorSet channel_generators(const Model& m);

/// True iff λ_{β1} = λ_{β2} λ_α for every nonzero channel (all generators 1).
bool is_semifinite(const Model& m);

enum class GroupKind { trivial, cyclic, dense };

struct GroupDescriptor {
    GroupKind kind = GroupKind::trivial;
    double lambda0 = 0; // cyclic generator in (0,1)
    std::optional<Rational> lambda0_exact;
    bool warning = false; // borderline float verdict reported as dense
};

/// Closed multiplicative subgroup of R+* generated by the set: {1} -> trivial;
/// exact mode decides cyclic vs dense by the rank of the prime-exponent
/// lattice (coprime-base factorization); float mode runs a real-gcd reduction
/// on logs with the given tolerance.
GroupDescriptor connes_group(const GeneratorSet& g, double tol = 1e-9);

enum class FactorType { II_1, II_inf, III_lambda, III_1 };

std::string to_string(FactorType t);

struct TypeReport {
    bool semifinite = false;
    bool exact_mode = false;
    GeneratorSet generators;
    GroupDescriptor group;
    FactorType type = FactorType::II_1;
    // K = Σ λ_β I_β, present for semifinite verdicts
    std::map<std::string, std::string> trace_weight;
    std::vector<std::string> notes;

    std::string verdict() const;  // "II_1" | "II_inf" | "III_{λ0}" | "III_1"
    std::string to_json() const;  // deterministic serialization
};

TypeReport classify(const Model& m);

/// classify() for a window truncation, verifying that the generator set has
/// stabilized between window n and window n+1 before asserting the verdict.
TypeReport classify_with_stabilization(const Model& window_n, const Model& window_n1);

} // namespace tomitafock
