#include "hyperspars/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace hyperspars {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

BigInt parse_int(std::string_view s) {
    BigInt v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto p = text.substr(0, slash), q = text.substr(slash + 1);
        if (!all_digits(p) || !all_digits(q))
            throw std::invalid_argument("bad rational '" + std::string(text) + "'");
        BigInt den = parse_int(q);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        return Rational(parse_int(p), den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto ip = text.substr(0, dot), fp = text.substr(dot + 1);
        if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
            (!fp.empty() && !all_digits(fp)))
            throw std::invalid_argument("bad decimal '" + std::string(text) + "'");
        BigInt scale = 1;
        for (std::size_t k = 0; k < fp.size(); ++k) scale *= 10;
        BigInt whole = ip.empty() ? BigInt(0) : parse_int(ip);
        BigInt frac = fp.empty() ? BigInt(0) : parse_int(fp);
        return Rational(whole * scale + frac, scale);
    }
    if (!all_digits(text)) throw std::invalid_argument("bad number '" + std::string(text) + "'");
    return Rational(parse_int(text));
}

std::string to_string(const Rational& r) {
    auto num = boost::multiprecision::numerator(r);
    auto den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace hyperspars
