#include "pamap/rational.hpp"

#include <cctype>

#include "pamap/errors.hpp"

namespace pamap {

std::string rat_str(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational parse_rational(const std::string& input) {
    std::string s = input;
    // trim
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.empty()) throw ParseError("empty rational literal");

    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = (s[0] == '-');
        s.erase(s.begin());
    }
    if (s.empty()) throw ParseError("sign without digits in rational literal");

    auto slash = s.find('/');
    auto dot = s.find('.');
    Rational q;
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) throw ParseError("bad p/q literal: " + input);
        BigInt n(num, 10), d(den, 10);
        if (d == 0) throw ParseError("zero denominator: " + input);
        q = rat(n, d);
    } else if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (!all_digits(ip) || (!fp.empty() && !all_digits(fp)))
            throw ParseError("bad decimal literal: " + input);
        BigInt scale = 1;
        for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
        BigInt v = BigInt(ip, 10) * scale + (fp.empty() ? BigInt(0) : BigInt(fp, 10));
        q = rat(v, scale);
    } else {
        if (!all_digits(s)) throw ParseError("bad integer literal: " + input);
        q = rat(BigInt(s, 10), BigInt(1));
    }
    if (neg) q = -q;
    return q;
}

BigInt rat_floor(const Rational& q) {
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace pamap
