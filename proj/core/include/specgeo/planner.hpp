#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "specgeo/spectrum.hpp"
#include "specgeo/trimesh.hpp"

namespace specgeo {

// Piecewise-linear function on sorted breakpoints. A single breakpoint means
// a constant function defined everywhere; otherwise evaluation is restricted
// to [points.front().x, points.back().x].
struct PiecewiseLinear {
    std::vector<std::array<double, 2>> points; // (x, f(x)), strictly increasing x

    static PiecewiseLinear constant(double c);
    static PiecewiseLinear from_points(std::vector<std::array<double, 2>> pts);

    double operator()(double x) const;
    bool covers(double lo, double hi) const;
    // exact for piecewise-linear: checks breakpoints inside plus both ends
    double max_on(double lo, double hi) const;
};

struct PlanCertificate {
    int n = 0;
    double A = 0.0;
    PiecewiseLinear f_table;
    std::int64_t horizon = 0;

    double sphere_vol = 0.0;  // Vol(S^n)
    double weyl_W = 0.0;      // W(n)
    double vol_target = 0.0;  // 4 A Vol(S^n)^{2/n} / W(n), the normalized Vol^{2/n}
    double iso_low = 0.0;     // I(S^n)
    double iso_high = 0.0;    // ((4A/W)^{n/2} + 1) (n+1)^{n/(n+1)} Vol(S^n)^{1/(n+1)}
    double iso_high_proof_form = 0.0; // alternative grouping ((4A/W) + 1)^{n/2} ...
    double f_max = 0.0;       // max f over [iso_low, iso_high]

    std::int64_t k1 = 0; // least k1: weyl_ratio(S^n, k) > 1/2 for all k in [k1, horizon]
    std::int64_t k2 = 0; // least k2: A k^{2/n} > f_max for all k >= k2
    std::int64_t k0 = 0; // max(k1, k2)
    double lambda1_threshold = 0.0; // lambda_{k0}(S^n) + 1, the glue hypothesis

    bool certified_to_horizon = false; // ratio scan clean on [k1, horizon]
    bool chain_verified = false;       // full chain holds for all k in [k0, horizon]
    bool dips_certified_beyond = false; // exact integer dip checks past the horizon
    std::int64_t dip_levels_checked = 0;
};

// (iso_low, iso_high) for the normalization with coefficient A; the bounds
// every admissible hypersurface's isoperimetric ratio must land in.
std::array<double, 2> iso_interval(int n, double A);
double iso_high_proof_form(int n, double A);

// Exact integer test: the Weyl-ratio dip at the end of level-l's eigenvalue
// block of S^n exceeds 1/2, i.e. 4 (2 lambda)^n > (n! k)^2 with
// lambda = l (l + n - 1) and k the cumulative count through level l.
// Big-integer arithmetic; false means the dip is <= 1/2 (exactly 1/2 happens
// only at n = 2, l = 1).
bool sphere_dip_exceeds_half(int n, std::int64_t l);

// Assemble the Theorem 2/3 certificate: k1 from a full ratio scan over
// [1, horizon] plus exact dip checks beyond, k2 from analytic inversion of
// A k^{2/n} > max f confirmed by scan, and the final inequality chain
// lambda_{k-1}(S^n) vol_target > 2 A k^{2/n} > f_max + A k^{2/n}
// verified literally for every k in [k0, horizon].
PlanCertificate plan_counterexample(int n, double A, const PiecewiseLinear& f,
                                    std::int64_t horizon);

std::string certificate_json(const PlanCertificate& cert);

// Independent re-derivation of k1/k2 and the chain using cumulative level
// counts (counting-function walk) instead of the materialized spectrum.
struct CertificateCheck {
    bool ok = false;
    std::int64_t k1 = 0;
    std::int64_t k2 = 0;
    bool chain_ok = false;
    std::string detail;
};
CertificateCheck verify_certificate(const PlanCertificate& cert, std::int64_t k_hi);

// lambda_k Vol^{2/n} <= gamma(n) I^{1+2/n} k^{2/n} for k = 0..k_max.
struct Theorem1Report {
    bool all_pass = false;
    std::int64_t checked = 0;
    std::int64_t worst_k = 0;
    double max_ratio = 0.0; // attained max of lhs/rhs (expected << 1)
};
Theorem1Report check_theorem1(const Spectrum& s, const IsoReport& iso, std::int64_t k_max);

struct GlueParams {
    double epsilon = 0.0; // spectral/isoperimetric tolerance
    int N = 0;            // eigenvalue count to preserve
    double delta = 0.0;   // neck radius
    double h = 0.0;       // half-gap
};

// Largest h with pi^2/(4 h^2) > lambda_N: the segment's first Dirichlet
// eigenvalue is pushed just above the part of the union spectrum to keep.
double auto_select_h(double lambda_n_value);

} // namespace specgeo
