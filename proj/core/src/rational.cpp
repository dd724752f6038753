#include "fusion/rational.hpp"

#include <cctype>

#include "fusion/errors.hpp"

namespace fusion {

namespace {

bool is_integer_token(const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

Rat rat_from_string(const std::string& s) {
    const auto slash = s.find('/');
    std::string num = (slash == std::string::npos) ? s : s.substr(0, slash);
    std::string den = (slash == std::string::npos) ? "1" : s.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den))
        throw UsageError("not a rational: '" + s + "' (expected p or p/q)");
    Int n(num), d(den);
    if (d == 0) throw UsageError("zero denominator in '" + s + "'");
    Rat r(n, d);
    r.canonicalize();
    return r;
}

std::string rat_to_string(const Rat& r) {
    return r.get_str();
}

Rat binomial(long n, unsigned long m) {
    Int num = 1;
    Int den = 1;
    for (unsigned long i = 0; i < m; ++i) {
        num *= Int(n) - Int(i);
        den *= Int(i) + 1;
    }
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    if (base == 0 && e < 0) throw UsageError("0 raised to a negative power");
    Rat b = base;
    unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
    Rat acc(1);
    while (k) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    if (e < 0) acc = Rat(1) / acc;
    return acc;
}

}  // namespace fusion
