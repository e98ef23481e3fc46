#pragma once

#include <cstdint>
#include <vector>

#include "specgeo/spectrum.hpp"

namespace specgeo {

// omega_n, volume of the unit ball in R^n, by the recurrence
// omega_n = omega_{n-2} * 2*pi / n  with omega_1 = 2, omega_2 = pi.
double unit_ball_volume(int n);

// W(n) = (2*pi)^2 / omega_n^(2/n); the constant of lambda_k ~ W(n) (k/Vol)^(2/n).
double weyl_constant(int n);

// Vol(S^n) = (n+1) * omega_{n+1}  (the round unit n-sphere in R^{n+1}).
double sphere_volume(int n);

// gamma(n) = 2^(10n+18+8/n)/(n+1) * omega_{n+1}^(1/(n+1)).
// Exceeds double range near n ~ 102: gamma_constant returns +inf there,
// gamma_constant_log2 is always finite.
double gamma_constant(int n);
double gamma_constant_log2(int n);

struct DimConstants {
    int n = 0;
    double omega_n = 0.0;
    double weyl_W = 0.0;
    double gamma_n = 0.0;    // may be +inf, see gamma_constant_log2
    double gamma_log2 = 0.0;
    double sphere_vol = 0.0; // Vol(S^n)
};
DimConstants dim_constants(int n);

// One eigenvalue level of S^n: value l(l+n-1), multiplicity
// binom(n+l, n) - binom(n+l-2, n). Multiplicities are computed with big
// integers and must fit in 64 bits for the materialized range.
struct SphereLevel {
    std::int64_t l = 0;
    double value = 0.0;
    std::uint64_t mult = 0;
    std::uint64_t cumulative = 0; // total count of eigenvalues through this level
};
std::vector<SphereLevel> sphere_levels(int n, std::int64_t lmax);

// First `count` eigenvalues of the round unit S^n, multiplicity-expanded.
Spectrum sphere_spectrum(int n, std::int64_t count);

// Dirichlet spectrum of the segment [-h, h]: lambda_j = (j*pi/(2h))^2, j >= 1.
Spectrum segment_dirichlet_spectrum(double h, std::int64_t count);

// lambda_{k-1}(s) * volume^(2/n) / (W(n) * k^(2/n)), 1 <= k <= size.
// Grouped as (lambda/k^(2/n)) * (vol^(2/n)/W) so that for S^2 the block
// boundary values l(l+1)/(l^2+1) and l/(l+1) come out as exact rationals.
double weyl_ratio(const Spectrum& s, std::int64_t k);

} // namespace specgeo
