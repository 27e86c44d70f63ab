#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "uedalab/scalar.hpp"

namespace uedalab {

using Float50 = boost::multiprecision::cpp_bin_float_50;

/// Distance on U(1) = R/Z lifted from the Euclidean distance on R.
inline double circle_distance(double t1, double t2) {
    double d = std::fmod(t1 - t2, 1.0);
    if (d < 0) d += 1.0;
    return std::min(d, 1.0 - d);
}

/// A unit-modulus multiplier sigma = e^{2 pi i theta}. Rational kind means
/// theta = p/q exactly (torsion); irrational-sampled kind stores theta either
/// as an exact rational sample (scaled-integer Liouville constructions) or as
/// a 50-digit float.
class Multiplier {
public:
    enum class Kind { rational, irrational_sampled };

    static Multiplier from_rational(long long p, long long q) {
        if (q <= 0) throw std::invalid_argument("Multiplier: q must be positive");
        long long g = std::gcd(p < 0 ? -p : p, q);
        if (g > 0) {
            p /= g;
            q /= g;
        }
        p %= q;
        if (p < 0) p += q;
        Multiplier m;
        m.kind_ = Kind::rational;
        m.theta_q_ = Rational(p, q);
        m.p_ = p;
        m.q_ = q;
        return m;
    }
    static Multiplier from_real(double theta) { return from_real(Float50(theta)); }
    static Multiplier from_real(const Float50& theta) {
        Multiplier m;
        m.kind_ = Kind::irrational_sampled;
        m.theta_f_ = theta;
        m.exact_ = false;
        return m;
    }
    static Multiplier from_exact_sample(const Rational& theta) {
        Multiplier m;
        m.kind_ = Kind::irrational_sampled;
        m.theta_q_ = theta;
        return m;
    }

    /// theta = (sqrt(5)-1)/2, computed at 50 digits.
    static Multiplier golden_mean() {
        return from_real((sqrt(Float50(5)) - 1) / 2);
    }

    /// theta_L(K) = sum_{k=1}^{K} 10^{-k!}, stored exactly as a scaled integer.
    static Multiplier liouville(int K) {
        if (K < 1) throw std::invalid_argument("liouville: K >= 1 required");
        BigInt fact = 1, num = 0, scale = 1;
        long long last = 0;
        for (int k = 1; k <= K; ++k) {
            fact *= k;
            long long f = static_cast<long long>(fact);
            for (long long i = last; i < f; ++i) {
                num *= 10;
                scale *= 10;
            }
            num += 1;
            last = f;
        }
        return from_exact_sample(Rational(num, scale));
    }

    /// theta = sum 10^{-e} over the given exponents, exact. A cheap way to
    /// build multipliers with a prescribed deep rational approximant.
    static Multiplier power_sum(const std::vector<long long>& exponents) {
        BigInt num = 0, scale = 1;
        long long last = 0;
        std::vector<long long> e = exponents;
        std::sort(e.begin(), e.end());
        for (long long exp : e) {
            for (long long i = last; i < exp; ++i) {
                num *= 10;
                scale *= 10;
            }
            num += 1;
            last = exp;
        }
        return from_exact_sample(Rational(num, scale));
    }

    Kind kind() const { return kind_; }
    bool is_torsion() const { return kind_ == Kind::rational; }
    long long p() const { return p_; }
    long long q() const { return q_; }

    double theta() const {
        return exact_ ? static_cast<double>(theta_q_) : static_cast<double>(theta_f_);
    }
    std::complex<double> sigma() const {
        double t = theta();
        return {std::cos(2 * std::numbers::pi * t), std::sin(2 * std::numbers::pi * t)};
    }

    /// Fractional part of m*theta in [0, 1).
    double multiple_mod_one(long long m) const {
        if (exact_) {
            Rational t = theta_q_ * m;
            BigInt fl = static_cast<BigInt>(numerator(t) / denominator(t));
            Rational frac = t - Rational(fl);
            if (frac < 0) frac += 1;
            return static_cast<double>(frac);
        }
        Float50 t = theta_f_ * m;
        Float50 frac = t - floor(t);
        return static_cast<double>(frac);
    }

    /// d(1, sigma^m).
    double divisor(long long m) const {
        double f = multiple_mod_one(m);
        return std::min(f, 1.0 - f);
    }

private:
    Multiplier() = default;
    Kind kind_ = Kind::irrational_sampled;
    bool exact_ = true;
    Rational theta_q_;
    Float50 theta_f_;
    long long p_ = 0, q_ = 1;
};

/// Small-divisor profile d(1, sigma^m) for m = 1..M.
struct DivisorProfile {
    std::vector<double> d;  // d[m-1] = d(1, sigma^m)
    double at(long long m) const { return d.at(m - 1); }
};

inline DivisorProfile divisor_profile(const Multiplier& mult, long long M) {
    if (M < 1) throw std::invalid_argument("divisor_profile: M >= 1 required");
    DivisorProfile out;
    out.d.reserve(M);
    for (long long m = 1; m <= M; ++m) out.d.push_back(mult.divisor(m));
    return out;
}

struct DiophantineReport {
    bool pass = true;
    long long violating_m = 0;  // smallest violating m when !pass
    double d_at_m = 0.0;
    double bound_at_m = 0.0;
};

/// Checks d(1, sigma^m) >= A * m^{-alpha} for m = 1..M; reports the smallest
/// violating m otherwise (rational theta with q <= M always violates).
inline DiophantineReport diophantine_check(const Multiplier& mult, double A, double alpha,
                                           long long M) {
    if (A <= 0 || alpha <= 0) throw std::invalid_argument("diophantine_check: A, alpha > 0");
    if (M < 1) throw std::invalid_argument("diophantine_check: M >= 1 required");
    DiophantineReport rep;
    for (long long m = 1; m <= M; ++m) {
        double d = mult.divisor(m);
        double bound = A * std::pow(static_cast<double>(m), -alpha);
        if (d < bound) {
            rep.pass = false;
            rep.violating_m = m;
            rep.d_at_m = d;
            rep.bound_at_m = bound;
            return rep;
        }
    }
    return rep;
}

/// Closed box around the torsion point zeta_{M0 m}^nu in the xi-plane,
/// mapped to the parameter annulus by xi -> e^{2 pi i xi}.
struct ArcBox {
    long long m = 1;
    long long nu = 0;
    long long M0 = 1;

    double xi_center() const { return static_cast<double>(nu) / static_cast<double>(M0 * m); }
    double re_half() const { return 1.0 / (2.0 * static_cast<double>(M0 * m)); }
    double im_half() const { return 1.0 / (4.0 * static_cast<double>(M0 * m)); }
    long long torsion_order() const { return M0 * m; }
    std::complex<double> torsion_point() const {
        double t = xi_center();
        return {std::cos(2 * std::numbers::pi * t), std::sin(2 * std::numbers::pi * t)};
    }
    /// Membership in the closed box; the Re-coordinate is compared mod 1.
    bool contains_xi(std::complex<double> xi, double tol = 1e-14) const {
        double dre = circle_distance(xi.real(), xi_center());
        return dre <= re_half() + tol && std::abs(xi.imag()) <= im_half() + tol;
    }
    std::complex<double> map_to_annulus(std::complex<double> xi) const {
        std::complex<double> e = 2.0 * std::numbers::pi * std::complex<double>(0, 1) * xi;
        return std::exp(e);
    }
};

/// The M0*m boxes W_{m,nu}; their Re-projections cover [0,1) mod 1 with
/// overlap only on box boundaries.
inline std::vector<ArcBox> arc_partition(long long m, long long M0) {
    if (m < 1 || M0 < 1) throw std::invalid_argument("arc_partition: m, M0 >= 1 required");
    std::vector<ArcBox> out;
    out.reserve(M0 * m);
    for (long long nu = 0; nu < M0 * m; ++nu) out.push_back(ArcBox{m, nu, M0});
    return out;
}

/// The constant eps with eps * d(1, sigma) <= |1 - sigma| on U(1); 4 is sharp
/// (equality at sigma = -1).
inline double epsilon_constant() { return 4.0; }

/// Grid check of the defining inequality; returns the minimal ratio
/// |1 - e^{2 pi i t}| / d(1, e^{2 pi i t}) over t in (0, 1/2].
inline double epsilon_verify(int grid = 20001) {
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= grid; ++i) {
        double t = 0.5 * i / grid;
        double num = std::abs(1.0 - std::polar(1.0, 2 * std::numbers::pi * t));
        min_ratio = std::min(min_ratio, num / t);
    }
    if (min_ratio < epsilon_constant() - 1e-9)
        throw std::logic_error("epsilon_constant verification failed");
    return min_ratio;
}

}  // namespace uedalab
