#pragma once

#include "forge/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>

namespace forge::testing {

inline Rational frac(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

    // Uniform over {a/den : |a| <= range*den, 1 <= den <= max_den}.
    Rational rational(int range, int max_den) {
        int den = integer(1, max_den);
        int num = integer(-range * den, range * den);
        Rational r(num, den);
        r.canonicalize();
        return r;
    }

    Vec vec(std::size_t n, int range, int max_den) {
        Vec v(n);
        for (auto& x : v) x = rational(range, max_den);
        return v;
    }

    // Random distribution with entries of denominator den, possibly with zeros.
    Vec distribution(std::size_t n, int den, bool strictly_positive) {
        while (true) {
            std::vector<int> cuts{0, den};
            for (std::size_t i = 0; i + 1 < n; ++i) cuts.push_back(integer(0, den));
            std::sort(cuts.begin(), cuts.end());
            Vec p(n);
            bool ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                p[i] = Rational(cuts[i + 1] - cuts[i], den);
                p[i].canonicalize();
                if (strictly_positive && sgn(p[i]) == 0) ok = false;
            }
            if (ok) return p;
        }
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace forge::testing
