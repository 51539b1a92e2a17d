#pragma once

#include <boost/rational.hpp>
#include <optional>
#include <string>

namespace tomitafock {

using Rational = boost::rational<long long>;

// Parses "p" or "p/q" with optional sign. Throws InputError on malformed text
// or zero denominator.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& r);
double to_double(const Rational& r);

// A strictly positive scale parameter. Always carries a double; additionally
// carries the exact rational when the input was an integer or "p/q" literal.
// Exactness propagates through products and reciprocals so that the type
// classifier can run in exact-rational mode whenever every input was exact.
struct LambdaValue {
    double value = 1.0;
    std::optional<Rational> exact = Rational(1);

    static LambdaValue one() { return LambdaValue{}; }
    static LambdaValue from_double(double v);
    static LambdaValue from_rational(const Rational& r);
    // Decides between exact and float form: texts containing '.', 'e' or 'E'
    // parse as doubles, everything else as exact rationals.
    static LambdaValue from_string(const std::string& text);

    LambdaValue reciprocal() const;
    LambdaValue times(const LambdaValue& other) const;
    LambdaValue pow(int k) const;
};

} // namespace tomitafock
