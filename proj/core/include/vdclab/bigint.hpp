#ifndef VDCLAB_BIGINT_HPP
#define VDCLAB_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace vdclab {

// Exact integer and rational types. Box census identities and the
// expansion of f(x+py) must be bit-exact, so no fixed-width shortcuts
// in the symbolic layer; fast paths reduce to machine words explicitly.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline std::string to_decimal(const BigInt& v) { return v.str(); }

inline BigInt bigint_from_decimal(std::string_view s) {
    return BigInt(std::string(s));
}

inline double to_double(const BigInt& v) { return v.convert_to<double>(); }
inline double to_double(const BigRat& v) { return v.convert_to<double>(); }

inline BigInt pow_bigint(const BigInt& base, unsigned exp) {
    BigInt r = 1, b = base;
    unsigned e = exp;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// FNV-1a; used for config/instance digests embedded in reports.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Tolerance-based report fields are rounded to 1e-9 before serialization
// so that reruns (including reassociated parallel sums) serialize
// byte-identically.
inline double round9(double x) {
    if (!std::isfinite(x)) return x;
    return std::nearbyint(x * 1e9) / 1e9;
}

}  // namespace vdclab

#endif
