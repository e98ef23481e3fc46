#include "specgeo/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "bigint_util.hpp"

namespace specgeo {

namespace {

using boost::multiprecision::cpp_int;

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

using detail::binom;

cpp_int level_multiplicity(int n, std::int64_t l) {
    return binom(n + l, n) - binom(n + l - 2, n);
}

std::uint64_t checked_u64(const cpp_int& v, const char* what) {
    if (v < 0 || v > std::numeric_limits<std::uint64_t>::max())
        throw std::overflow_error(std::string(what) + ": value does not fit in 64 bits");
    return static_cast<std::uint64_t>(v);
}

void require_dim(int n, const char* fn) {
    if (n < 1) throw std::domain_error(std::string(fn) + ": n >= 1 required");
}

} // namespace

double unit_ball_volume(int n) {
    require_dim(n, "unit_ball_volume");
    // omega_1 = 2, omega_2 = pi, omega_m = omega_{m-2} * 2pi / m.
    double om = (n % 2) ? 2.0 : pi;
    for (int m = (n % 2) ? 3 : 4; m <= n; m += 2) om = om * two_pi / m;
    return om;
}

double weyl_constant(int n) {
    require_dim(n, "weyl_constant");
    return (two_pi * two_pi) / std::pow(unit_ball_volume(n), 2.0 / n);
}

double sphere_volume(int n) {
    require_dim(n, "sphere_volume");
    return (n + 1) * unit_ball_volume(n + 1);
}

double gamma_constant_log2(int n) {
    require_dim(n, "gamma_constant_log2");
    // log2(omega_{n+1}) by the same recurrence, carried in log space so the
    // result stays finite long after omega underflows / 2^(10n+...) overflows.
    int m0 = ((n + 1) % 2) ? 1 : 2;
    double log2_om = (m0 == 1) ? 1.0 : std::log2(pi);
    for (int m = m0 + 2; m <= n + 1; m += 2) log2_om += std::log2(two_pi) - std::log2(double(m));
    return 10.0 * n + 18.0 + 8.0 / n - std::log2(double(n + 1)) + log2_om / (n + 1);
}

double gamma_constant(int n) {
    // exp2 saturates to +inf once gamma passes the double range (n ~ 90+).
    return std::exp2(gamma_constant_log2(n));
}

DimConstants dim_constants(int n) {
    require_dim(n, "dim_constants");
    DimConstants c;
    c.n = n;
    c.omega_n = unit_ball_volume(n);
    c.weyl_W = weyl_constant(n);
    c.gamma_log2 = gamma_constant_log2(n);
    c.gamma_n = gamma_constant(n);
    c.sphere_vol = sphere_volume(n);
    return c;
}

std::vector<SphereLevel> sphere_levels(int n, std::int64_t lmax) {
    require_dim(n, "sphere_levels");
    if (lmax < 0) throw std::domain_error("sphere_levels: lmax >= 0 required");
    std::vector<SphereLevel> out;
    out.reserve(static_cast<std::size_t>(lmax) + 1);
    cpp_int cum = 0;
    for (std::int64_t l = 0; l <= lmax; ++l) {
        cpp_int mult = level_multiplicity(n, l);
        cum += mult;
        SphereLevel lev;
        lev.l = l;
        lev.value = double(l) * double(l + n - 1);
        lev.mult = checked_u64(mult, "sphere_levels multiplicity");
        lev.cumulative = checked_u64(cum, "sphere_levels cumulative count");
        out.push_back(lev);
    }
    return out;
}

Spectrum sphere_spectrum(int n, std::int64_t count) {
    require_dim(n, "sphere_spectrum");
    if (count < 1) throw std::domain_error("sphere_spectrum: count >= 1 required");
    Spectrum s;
    s.dim = n;
    s.volume = sphere_volume(n);
    s.label = "S^" + std::to_string(n);
    s.values.reserve(static_cast<std::size_t>(count));
    for (std::int64_t l = 0; s.size() < count; ++l) {
        cpp_int mult = level_multiplicity(n, l);
        double value = double(l) * double(l + n - 1);
        cpp_int rem = count - s.size();
        std::int64_t take =
            static_cast<std::int64_t>(mult < rem ? mult : rem);
        for (std::int64_t i = 0; i < take; ++i) s.values.push_back(value);
    }
    return s;
}

Spectrum segment_dirichlet_spectrum(double h, std::int64_t count) {
    if (!(h > 0.0)) throw std::domain_error("segment_dirichlet_spectrum: h > 0 required");
    if (count < 1) throw std::domain_error("segment_dirichlet_spectrum: count >= 1 required");
    Spectrum s;
    s.dim = 1;
    s.volume = 2.0 * h; // length of [-h, h]
    s.label = "dirichlet[-h,h] h=" + std::to_string(h);
    s.values.reserve(static_cast<std::size_t>(count));
    double base = pi / (2.0 * h);
    for (std::int64_t j = 1; j <= count; ++j) {
        double t = double(j) * base;
        s.values.push_back(t * t);
    }
    return s;
}

double weyl_ratio(const Spectrum& s, std::int64_t k) {
    if (s.dim < 1) throw std::domain_error("weyl_ratio: spectrum has no dimension");
    if (k < 1 || k > s.size()) throw std::domain_error("weyl_ratio: k out of range");
    double e = 2.0 / s.dim;
    // Grouped so the sphere case stays exact: for S^2, vol^(2/n)/W(2) is
    // exactly 1 and the quotient lambda_{k-1}/k yields exact rationals at the
    // multiplicity-block boundaries.
    double norm = std::pow(s.volume, e) / weyl_constant(s.dim);
    return (s.values[static_cast<std::size_t>(k - 1)] / std::pow(double(k), e)) * norm;
}

} // namespace specgeo
