#include "forge/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace forge {

namespace {

Rational pow10(long exponent) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent >= 0) return Rational(p);
    Rational r(mpz_class(1), p);
    r.canonicalize();
    return r;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    auto bad = [&]() { return std::invalid_argument("malformed rational literal '" + std::string(text) + "'"); };

    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        std::string_view digits = num;
        if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits.remove_prefix(1);
        if (!all_digits(digits) || !all_digits(den)) throw bad();
        if (num[0] == '+') num.erase(0, 1);
        Rational r;
        if (r.set_str(num + "/" + den, 10) != 0) throw bad();
        if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        r.canonicalize();
        return r;
    }

    bool negative = false;
    std::size_t pos = 0;
    if (s[pos] == '-' || s[pos] == '+') {
        negative = s[pos] == '-';
        ++pos;
    }
    long exponent = 0;
    std::string mantissa = s.substr(pos);
    if (auto e = mantissa.find_first_of("eE"); e != std::string::npos) {
        std::string exp_text = mantissa.substr(e + 1);
        mantissa.resize(e);
        std::string_view ev = exp_text;
        bool exp_negative = false;
        if (!ev.empty() && (ev[0] == '-' || ev[0] == '+')) {
            exp_negative = ev[0] == '-';
            ev.remove_prefix(1);
        }
        if (!all_digits(ev) || ev.size() > 6) throw bad();
        exponent = std::stol(std::string(ev)) * (exp_negative ? -1 : 1);
    }
    std::string int_part = mantissa;
    std::string frac_part;
    if (auto dot_pos = mantissa.find('.'); dot_pos != std::string::npos) {
        int_part = mantissa.substr(0, dot_pos);
        frac_part = mantissa.substr(dot_pos + 1);
    }
    if (int_part.empty() && frac_part.empty()) throw bad();
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part))) throw bad();

    Rational r{mpz_class(int_part + frac_part, 10)};
    r *= pow10(exponent - static_cast<long>(frac_part.size()));
    r.canonicalize();
    if (negative) r = -r;
    return r;
}

std::string to_string(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_string(const Vec& values, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        out += to_string(values[i]);
    }
    return out;
}

double to_double(const Rational& value) { return value.get_d(); }

Rational dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
    }
    return s;
}

Vec add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("add: dimension mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sub: dimension mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec scale(const Vec& a, const Rational& s) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

Vec zeros(std::size_t n) { return Vec(n, Rational(0)); }

Vec unit(std::size_t n, std::size_t i) {
    Vec r = zeros(n);
    r.at(i) = 1;
    return r;
}

bool lex_less(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Rational norm_l1(const Vec& v) {
    Rational s = 0;
    for (const auto& x : v) s += abs(x);
    return s;
}

Rational norm_linf(const Vec& v) {
    Rational m = 0;
    for (const auto& x : v) {
        Rational a = abs(x);
        if (a > m) m = a;
    }
    return m;
}

}  // namespace forge
