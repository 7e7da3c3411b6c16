#include "stabnet/rational.hpp"

#include "stabnet/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace stabnet {

namespace {

bool is_integer_token(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

} // namespace

Rational rat_parse(std::string_view text) {
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    if (!is_integer_token(num))
        throw ParseError("invalid rational: '" + std::string(text) + "'");
    Rational r;
    if (slash == std::string_view::npos) {
        r = Rational(std::string(num));
    } else {
        const std::string_view den = text.substr(slash + 1);
        if (!is_integer_token(den) || den[0] == '-' || den[0] == '+')
            throw ParseError("invalid rational: '" + std::string(text) + "'");
        Integer p{std::string(num)};
        Integer q{std::string(den)};
        if (q == 0)
            throw ParseError("zero denominator: '" + std::string(text) + "'");
        r = Rational(p, q);
    }
    r.canonicalize();
    return r;
}

std::string rat_str(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string rat_decimal(const Rational& r, int significant_digits) {
    if (significant_digits < 1) significant_digits = 1;
    if (r == 0) return "0";
    const bool negative = r < 0;
    Rational a = negative ? Rational(-r) : r;

    // Find exponent e with 10^e <= a < 10^(e+1).
    int e = 0;
    Rational scale = 1;
    if (a >= 1) {
        while (a >= scale * 10) {
            scale *= 10;
            ++e;
        }
    } else {
        while (a < scale) {
            scale /= 10;
            --e;
        }
    }

    // digits = round(a * 10^(significant-1-e)), half away from zero.
    Integer pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(significant_digits - 1 - e)));
    Rational scaled = a;
    if (significant_digits - 1 - e >= 0)
        scaled *= Rational(pow10);
    else
        scaled /= Rational(pow10);
    Integer digits;
    {
        Rational half = scaled + Rational(1, 2);
        mpz_fdiv_q(digits.get_mpz_t(), half.get_num().get_mpz_t(), half.get_den().get_mpz_t());
    }
    std::string ds = digits.get_str();
    if (static_cast<int>(ds.size()) > significant_digits) {
        // rounding carried into an extra digit (e.g. 9.99 -> 10.0)
        ds.pop_back();
        ++e;
    }

    std::string out;
    if (e >= 0 && e < significant_digits) {
        out = ds.substr(0, static_cast<std::size_t>(e) + 1);
        std::string frac = ds.substr(static_cast<std::size_t>(e) + 1);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        if (!frac.empty()) out += "." + frac;
    } else if (e < 0 && e >= -4) {
        out = "0.";
        out.append(static_cast<std::size_t>(-e - 1), '0');
        while (ds.size() > 1 && ds.back() == '0') ds.pop_back();
        out += ds;
    } else {
        out = ds.substr(0, 1);
        std::string frac = ds.substr(1);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        if (!frac.empty()) out += "." + frac;
        out += "e" + std::to_string(e);
    }
    return negative ? "-" + out : out;
}

Rational rat_from_double(double x) {
    if (!std::isfinite(x))
        throw InvalidInput("non-finite double cannot be converted to a rational");
    Rational r(x);
    r.canonicalize();
    return r;
}

Rational rat_parse_decimal(std::string_view text) {
    if (text.empty()) throw ParseError("empty decimal");
    std::string s(text);
    std::size_t epos = s.find_first_of("eE");
    long exp10 = 0;
    std::string mantissa = s;
    if (epos != std::string::npos) {
        const std::string etail = s.substr(epos + 1);
        if (!is_integer_token(etail)) throw ParseError("invalid decimal: '" + s + "'");
        exp10 = std::strtol(etail.c_str(), nullptr, 10);
        mantissa = s.substr(0, epos);
    }
    std::size_t dot = mantissa.find('.');
    std::string digits = mantissa;
    if (dot != std::string::npos) {
        digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
        exp10 -= static_cast<long>(mantissa.size() - dot - 1);
    }
    if (digits == "-" || digits == "+") digits += "0";
    if (!is_integer_token(digits)) throw ParseError("invalid decimal: '" + s + "'");
    Rational r = Rational(Integer(digits));
    Integer pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
    if (exp10 >= 0)
        r *= Rational(pow10);
    else
        r /= Rational(pow10);
    r.canonicalize();
    return r;
}

} // namespace stabnet
