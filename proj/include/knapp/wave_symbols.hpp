#pragma once

// Fourier-side symbols of the half-wave formalism.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "knapp/errors.hpp"
#include "knapp/geometry.hpp"

namespace knapp {

using cplx = std::complex<double>;
using CVec3 = std::array<cplx, 3>;

/// One of the eight half-wave sign combinations (s1, s2, s3).
///
/// Enumeration order is by index 0..7 with bit 2 -> s1, bit 1 -> s2,
/// bit 0 -> s3 and a set bit meaning -1:
///   0 (+,+,+)  1 (+,+,-)  2 (+,-,+)  3 (+,-,-)
///   4 (-,+,+)  5 (-,+,-)  6 (-,-,+)  7 (-,-,-)
/// so the total sign flip of index i is 7 - i.
class SignTriple {
public:
    static constexpr int count = 8;

    constexpr SignTriple() = default;
    constexpr explicit SignTriple(int index) : index_(index) {
        if (index < 0 || index >= count) throw invalid_parameter("SignTriple index out of range");
    }
    constexpr SignTriple(int s1, int s2, int s3)
        : SignTriple((s1 < 0 ? 4 : 0) | (s2 < 0 ? 2 : 0) | (s3 < 0 ? 1 : 0)) {}

    constexpr int index() const { return index_; }
    constexpr int s1() const { return (index_ & 4) ? -1 : 1; }
    constexpr int s2() const { return (index_ & 2) ? -1 : 1; }
    constexpr int s3() const { return (index_ & 1) ? -1 : 1; }
    constexpr SignTriple operator-() const { return SignTriple(7 - index_); }

    /// All three signs equal.
    constexpr bool uniform() const { return index_ == 0 || index_ == 7; }

    /// "+-+" style label.
    std::string str() const {
        std::string s;
        for (int v : {s1(), s2(), s3()}) s += v > 0 ? '+' : '-';
        return s;
    }

    /// Parses "+-+" style labels.
    static SignTriple parse(const std::string& s) {
        if (s.size() != 3) throw invalid_parameter("sign triple must have three characters: " + s);
        std::array<int, 3> v{};
        for (std::size_t i = 0; i < 3; ++i) {
            if (s[i] == '+') v[i] = 1;
            else if (s[i] == '-') v[i] = -1;
            else throw invalid_parameter("sign triple characters must be '+' or '-': " + s);
        }
        return {v[0], v[1], v[2]};
    }

    friend constexpr bool operator==(SignTriple, SignTriple) = default;

private:
    int index_ = 0;
};

/// Bitmask over the eight sign triples.
using SignSet = std::uint8_t;
inline constexpr SignSet kAllSigns = 0xFF;

constexpr bool contains(SignSet set, SignTriple s) { return (set >> s.index()) & 1U; }
constexpr SignSet only(SignTriple s) { return static_cast<SignSet>(1U << s.index()); }

/// omega = s1 |xi| - s2 |xi - eta| - s3 |eta|.
inline double omega(const Vec3& xi, const Vec3& eta, SignTriple s) {
    return s.s1() * norm(xi) - s.s2() * norm(xi - eta) - s.s3() * norm(eta);
}

/// Same, with the three magnitudes precomputed.
inline double omega(double n_xi, double n_diff, double n_eta, SignTriple s) {
    return s.s1() * n_xi - s.s2() * n_diff - s.s3() * n_eta;
}

enum class MultiplierBranch { exact, series };

struct MultiplierValue {
    cplx value;
    MultiplierBranch branch;
};

/// Below this |t omega| the quotient form loses about eight digits.
inline constexpr double kSeriesThreshold = 1e-4;

/// m(t, omega) = (e^{i t omega} - 1) / (i omega) = int_0^t e^{i t' omega} dt'.
///
/// Uses e^{i th} - 1 = -2 sin^2(th/2) + i sin(th) for the quotient, and the
/// Taylor series t sum_n (i th)^n / (n+1)! for |th| < kSeriesThreshold.
inline MultiplierValue duhamel_multiplier(double t, double w) {
    if (!(t >= 0.0)) throw invalid_parameter("duhamel_multiplier: t must be nonnegative");
    const double th = t * w;
    if (std::abs(th) < kSeriesThreshold) {
        // Horner on sum_{n=0}^{6} (i th)^n / (n+1)!
        constexpr int terms = 7;
        cplx acc{1.0, 0.0};
        for (int n = terms - 1; n >= 1; --n) acc = 1.0 + acc * cplx(0.0, th) / static_cast<double>(n + 1);
        return {t * acc, MultiplierBranch::series};
    }
    const double sh = std::sin(0.5 * th);
    return {cplx(std::sin(th) / w, 2.0 * sh * sh / w), MultiplierBranch::exact};
}

/// Composite Simpson evaluation of int_0^t e^{i t' omega} dt' over
/// `n_panels` parabolic panels (2 n_panels subintervals). The relative error
/// is (h omega)^4 / 180 + O(h^6) with h = t / (2 n_panels).
inline cplx duhamel_multiplier_oracle(double t, double w, int n_panels) {
    if (n_panels < 8) throw invalid_parameter("duhamel_multiplier_oracle: need at least 8 panels");
    const int n = 2 * n_panels;
    const double h = t / n;
    auto f = [w](double s) { return std::polar(1.0, w * s); };
    cplx odd{0.0, 0.0};
    cplx even{0.0, 0.0};
    for (int j = 1; j < n; ++j) (j % 2 ? odd : even) += f(j * h);
    return h / 3.0 * (f(0.0) + 4.0 * odd + 2.0 * even + f(t));
}

/// Symbol of D^{-2} curl: (i xi x v) / |xi|^2.
inline CVec3 curl_inv_symbol(const Vec3& xi, const CVec3& v) {
    const double n2 = dot(xi, xi);
    if (n2 == 0.0) throw singular_frequency("curl_inv_symbol: xi = 0");
    const cplx i{0.0, 1.0};
    return {i * (xi[1] * v[2] - xi[2] * v[1]) / n2,
            i * (xi[2] * v[0] - xi[0] * v[2]) / n2,
            i * (xi[0] * v[1] - xi[1] * v[0]) / n2};
}

}  // namespace knapp
