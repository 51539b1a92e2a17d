#pragma once

#include <string>

#include "tomitafock/fock.hpp"

namespace tomitafock {

/// Term-list serialization {src,dst,letter,index,re,im} for CLI debugging.
std::string vector_to_json(const Model& m, const BimoduleVector& v);

std::string path_name(const FusionData& f, const FockPath& p);

/// Coordinate-list dumps of an operator for inspection.
std::string operator_to_json(const Model& m, const SparseOperator& t);
std::string operator_to_csv(const Model& m, const SparseOperator& t);

} // namespace tomitafock
