#include "tomitafock/wordlang.hpp"

#include <cctype>
#include <cmath>

namespace tomitafock {

Letter parse_letter(const FusionData& f, const std::string& text) {
    if (text.empty()) throw InputError("empty letter");
    Letter a;
    std::string name = text;
    if (name.back() == '~') {
        a.barred = true;
        name.pop_back();
    }
    a.object = f.label_id(name);
    return a;
}

std::string letter_name(const FusionData& f, Letter a) {
    return f.labels[a.object] + (a.barred ? "~" : "");
}

namespace {

struct Parser {
    const Model& m;
    const std::string& s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    void expect(char c) {
        if (peek() != c)
            throw InputError(std::string("expected '") + c + "' at position " +
                             std::to_string(i) + " in word");
        ++i;
    }

    std::string until_delim() {
        skip_ws();
        std::size_t start = i;
        while (i < s.size() && s[i] != ',' && s[i] != ')' && s[i] != '(' && s[i] != '^' &&
               s[i] != '*' && !std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
        if (i == start) throw InputError("empty field at position " + std::to_string(i));
        return s.substr(start, i - start);
    }

    int parse_int() {
        std::string t = until_delim();
        try {
            std::size_t pos = 0;
            int v = std::stoi(t, &pos);
            if (pos != t.size()) throw InputError("");
            return v;
        } catch (const std::exception&) {
            throw InputError("malformed integer '" + t + "' in word");
        }
    }

    double parse_number() {
        std::string t = until_delim();
        try {
            std::size_t pos = 0;
            double v = std::stod(t, &pos);
            if (pos != t.size()) throw InputError("");
            return v;
        } catch (const std::exception&) {
            throw InputError("malformed number '" + t + "' in word");
        }
    }

    WordFactor parse_generator() {
        expect('g');
        BasisVector v{m.fusion.unit, m.fusion.unit, Letter{m.fusion.unit, false}, 0};
        if (i < s.size() && s[i] == ':') {
            ++i;
            v.src = m.fusion.label_id(until_delim());
            expect(',');
            v.dst = m.fusion.label_id(until_delim());
            expect(',');
            v.letter = parse_letter(m.fusion, until_delim());
            expect(',');
            v.index = parse_int();
        }
        check_basis_vector(m, v);
        Complex coeff = 1.0;
        if (i < s.size() && s[i] == '*') {
            ++i;
            coeff = parse_number();
        }
        return WordFactor{v, coeff};
    }

    void parse_item(WordSpec& out) {
        char c = peek();
        if (c == 'g') {
            out.factors.push_back(parse_generator());
            return;
        }
        if (c == 's') {
            ++i;
            expect('(');
            WordSpec inner;
            parse_item(inner);
            expect(')');
            if (inner.length() != 1)
                throw InputError("s(...) wraps exactly one generator");
            // Γ(S(c ξ)) with S conjugate-linear
            const WordFactor& f = inner.factors.front();
            ScaledVector b = bar(m, f.vec);
            out.factors.push_back(WordFactor{
                b.vec, std::conj(f.coeff) * std::sqrt(m.lam(f.vec.letter)) * b.coeff});
            return;
        }
        if (c == '(') {
            ++i;
            WordSpec inner = parse_word_until(')');
            expect(')');
            int k = 1;
            if (peek() == '^') {
                ++i;
                k = parse_int();
                if (k < 0) throw InputError("negative repetition in word");
            }
            WordSpec rep = inner.repeat(k);
            out.factors.insert(out.factors.end(), rep.factors.begin(), rep.factors.end());
            return;
        }
        throw InputError(std::string("unexpected character '") + c + "' in word at position " +
                         std::to_string(i));
    }

    WordSpec parse_word_until(char terminator) {
        WordSpec out;
        while (!eof() && peek() != terminator) parse_item(out);
        return out;
    }
};

} // namespace

WordSpec parse_word(const Model& m, const std::string& text) {
    Parser p{m, text};
    WordSpec w = p.parse_word_until('\0');
    if (!p.eof()) throw InputError("trailing characters in word");
    if (w.length() == 0) throw InputError("empty word");
    if (!w.composable())
        throw InputError("malformed word: generator chain is not composable");
    return w;
}

BasisVector parse_basis_vector(const Model& m, const std::string& text) {
    Parser p{m, text};
    BasisVector v;
    v.src = m.fusion.label_id(p.until_delim());
    p.expect(',');
    v.dst = m.fusion.label_id(p.until_delim());
    p.expect(',');
    v.letter = parse_letter(m.fusion, p.until_delim());
    p.expect(',');
    v.index = p.parse_int();
    if (!p.eof()) throw InputError("trailing characters in generator spec");
    check_basis_vector(m, v);
    return v;
}

} // namespace tomitafock
