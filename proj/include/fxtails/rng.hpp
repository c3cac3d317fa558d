#pragma once

#include <cmath>
#include <cstdint>

namespace fxtails {

// Counter-based deterministic random source.
//
// Output k of the stream with a given seed is
//
//     value(seed, k) = mix64(seed + (k + 1) * 0x9E3779B97F4A7C15)
//
// where mix64 is the SplitMix64 finalizer. Any implementation that reproduces
// this mapping (seed, counter) -> uint64 reproduces every derived stream:
//
//     uniform:  u = ((value >> 11) + 0.5) * 2^-53            in (0, 1)
//     gaussian: Box-Muller pair from two consecutive uniforms,
//               z1 = sqrt(-2 ln u1) cos(2 pi u2), z2 = ... sin(2 pi u2);
//               both values are consumed in order
//     student_t(nu): sqrt(nu (u1^(-2/nu) - 1)) cos(2 pi u2)  (Bailey's method)
//     pareto(gamma, x_min): x_min * u^(-1/(gamma - 1))
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t next_u64() {
        ++counter_;
        return mix64(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    // Uniform in the open interval (0, 1); never returns 0 or 1.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller. Consumes two uniforms per pair and
    // caches the second value.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * pi() * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    // Student-t with nu > 0 degrees of freedom (any real nu).
    double next_student_t(double nu) {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(nu * (std::pow(u1, -2.0 / nu) - 1.0)) * std::cos(2.0 * pi() * u2);
    }

    // Pareto magnitude with PDF exponent gamma > 1 and scale x_min > 0.
    double next_pareto(double gamma, double x_min) {
        return x_min * std::pow(next_unit(), -1.0 / (gamma - 1.0));
    }

    std::uint64_t counter() const { return counter_; }

    static constexpr double pi() { return 3.14159265358979323846; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fxtails
