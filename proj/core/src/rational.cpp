#include "tomitafock/rational.hpp"

#include <cmath>
#include <cstdlib>

#include "tomitafock/errors.hpp"

namespace tomitafock {

Rational parse_rational(const std::string& text) {
    auto parse_ll = [&](const std::string& part) -> long long {
        if (part.empty()) throw InputError("empty rational component in '" + text + "'");
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(part, &pos);
        } catch (const std::exception&) {
            throw InputError("malformed rational '" + text + "'");
        }
        if (pos != part.size()) throw InputError("malformed rational '" + text + "'");
        return v;
    };
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(parse_ll(text));
    long long num = parse_ll(text.substr(0, slash));
    long long den = parse_ll(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + text + "'");
    return Rational(num, den);
}

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

LambdaValue LambdaValue::from_double(double v) {
    LambdaValue out;
    out.value = v;
    out.exact.reset();
    return out;
}

LambdaValue LambdaValue::from_rational(const Rational& r) {
    LambdaValue out;
    out.value = to_double(r);
    out.exact = r;
    return out;
}

LambdaValue LambdaValue::from_string(const std::string& text) {
    if (text.find_first_of(".eE") != std::string::npos) {
        std::size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(text, &pos);
        } catch (const std::exception&) {
            throw InputError("malformed number '" + text + "'");
        }
        if (pos != text.size()) throw InputError("malformed number '" + text + "'");
        return from_double(v);
    }
    return from_rational(parse_rational(text));
}

LambdaValue LambdaValue::reciprocal() const {
    LambdaValue out;
    out.value = 1.0 / value;
    if (exact) out.exact = Rational(exact->denominator(), exact->numerator());
    else out.exact.reset();
    return out;
}

LambdaValue LambdaValue::times(const LambdaValue& other) const {
    LambdaValue out;
    out.value = value * other.value;
    if (exact && other.exact) out.exact = *exact * *other.exact;
    else out.exact.reset();
    return out;
}

LambdaValue LambdaValue::pow(int k) const {
    LambdaValue out = LambdaValue::one();
    LambdaValue base = k >= 0 ? *this : reciprocal();
    for (int i = 0; i < std::abs(k); ++i) out = out.times(base);
    return out;
}

} // namespace tomitafock
