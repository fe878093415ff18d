#include "gpca/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace gpca {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// the string constructor reads a leading 0 as octal
Integer decimal_integer(std::string_view digits) {
    auto nz = digits.find_first_not_of('0');
    return nz == std::string_view::npos ? Integer(0) : Integer(std::string(digits.substr(nz)));
}

Integer pow10(long e) {
    Integer r = 1;
    for (long i = 0; i < e; ++i) r *= 10;
    return r;
}

[[noreturn]] void reject(std::string_view text) {
    throw std::invalid_argument("not an exact rational: '" + std::string(text) +
                                "' (use a/b or a finite decimal)");
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
    long exponent = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string_view::npos) {
        auto es = s.substr(epos + 1);
        bool eneg = false;
        if (!es.empty() && (es[0] == '+' || es[0] == '-')) {
            eneg = es[0] == '-';
            es.remove_prefix(1);
        }
        if (!all_digits(es) || es.size() > 6) reject(whole);
        exponent = std::stol(std::string(es));
        if (eneg) exponent = -exponent;
        s = s.substr(0, epos);
    }
    std::string digits;
    auto dot = s.find('.');
    if (dot == std::string_view::npos) {
        if (!all_digits(s)) reject(whole);
        digits = s;
    } else {
        auto ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty() && fp.empty()) reject(whole);
        if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) reject(whole);
        digits = std::string(ip) + std::string(fp);
        exponent -= static_cast<long>(fp.size());
    }
    Integer mant = decimal_integer(digits);
    if (exponent >= 0) return Rational(mant * pow10(exponent));
    return Rational(mant, pow10(-exponent));
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) reject(text);
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    Rational value;
    auto slash = s.find('/');
    if (slash != std::string_view::npos) {
        auto a = s.substr(0, slash), b = s.substr(slash + 1);
        if (!all_digits(a) || !all_digits(b)) reject(text);
        Integer den = decimal_integer(b);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        value = Rational(decimal_integer(a), den);
    } else {
        value = parse_decimal(s, text);
    }
    return neg ? Rational(-value) : value;
}

std::string to_string(const Rational& x) { return x.str(); }

std::string to_decimal(const Rational& x, int digits) {
    Integer num = boost::multiprecision::numerator(x);
    Integer den = boost::multiprecision::denominator(x);
    bool neg = num < 0;
    if (neg) num = -num;
    Integer scaled = num * pow10(digits) / den;
    std::string s = scaled.str();
    if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
    s.insert(s.size() - digits, ".");
    return neg && scaled != 0 ? "-" + s : s;
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

Rational power(const Rational& x, unsigned n) {
    Rational r = 1, b = x;
    for (; n; n >>= 1, b *= b)
        if (n & 1) r *= b;
    return r;
}

}  // namespace gpca
