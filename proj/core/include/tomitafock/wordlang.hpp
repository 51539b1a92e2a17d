#pragma once

#include <string>

#include "tomitafock/moments.hpp"

namespace tomitafock {

/// Word mini-language, the experiment unit of the CLI.
///
///   word      := item+                     (whitespace separated)
///   item      := generator | 's(' item ')' | '(' word ')' ['^' k]
///   generator := 'g' [':' src ',' dst ',' letter ',' index] ['*' coeff]
///   letter    := label | label '~'         ('~' marks the barred letter)
///
/// Bare 'g' abbreviates 'g:1,1,1,0'. 's(...)' wraps one generator ξ into the
/// factor S(ξ), i.e. Γ(s(ξ-token)) = Γ(ξ)*. Items are listed in application
/// order: the first item acts first.
WordSpec parse_word(const Model& m, const std::string& text);

/// "src,dst,letter,index" with the same letter syntax.
BasisVector parse_basis_vector(const Model& m, const std::string& text);

Letter parse_letter(const FusionData& f, const std::string& text);
std::string letter_name(const FusionData& f, Letter a);

} // namespace tomitafock
