#include "specgeo/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bigint_util.hpp"
#include "num_format.hpp"
#include "specgeo/closed_forms.hpp"

namespace specgeo {

namespace {

using boost::multiprecision::cpp_int;
using detail::binom;

constexpr double pi = std::numbers::pi;

// cumulative eigenvalue count of S^n through level l
cpp_int cumulative_count(int n, std::int64_t l) {
    if (l < 0) return 0;
    return binom(n + l, n) + binom(n + l - 1, n);
}

} // namespace

PiecewiseLinear PiecewiseLinear::constant(double c) {
    if (!std::isfinite(c)) throw std::domain_error("PiecewiseLinear: value must be finite");
    PiecewiseLinear f;
    f.points = {{0.0, c}};
    return f;
}

PiecewiseLinear PiecewiseLinear::from_points(std::vector<std::array<double, 2>> pts) {
    if (pts.empty()) throw std::domain_error("PiecewiseLinear: at least one point required");
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!std::isfinite(pts[i][0]) || !std::isfinite(pts[i][1]))
            throw std::domain_error("PiecewiseLinear: points must be finite");
        if (i > 0 && !(pts[i][0] > pts[i - 1][0]))
            throw std::domain_error("PiecewiseLinear: breakpoints must be strictly increasing");
    }
    PiecewiseLinear f;
    f.points = std::move(pts);
    return f;
}

double PiecewiseLinear::operator()(double x) const {
    if (points.empty()) throw std::domain_error("PiecewiseLinear: empty table");
    if (points.size() == 1) return points[0][1]; // constant everywhere
    if (x < points.front()[0] || x > points.back()[0])
        throw std::domain_error("PiecewiseLinear: x = " + detail::fmt(x) +
                                " outside the table domain [" + detail::fmt(points.front()[0]) +
                                ", " + detail::fmt(points.back()[0]) + "]");
    auto it = std::lower_bound(points.begin(), points.end(), x,
                               [](const auto& p, double v) { return p[0] < v; });
    if (it == points.begin()) return (*it)[1];
    if ((*it)[0] == x) return (*it)[1];
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    double t = (x - lo[0]) / (hi[0] - lo[0]);
    return lo[1] + t * (hi[1] - lo[1]);
}

bool PiecewiseLinear::covers(double lo, double hi) const {
    if (points.empty()) return false;
    if (points.size() == 1) return true;
    return points.front()[0] <= lo && hi <= points.back()[0];
}

double PiecewiseLinear::max_on(double lo, double hi) const {
    if (!(lo <= hi)) throw std::domain_error("PiecewiseLinear: max_on needs lo <= hi");
    if (!covers(lo, hi))
        throw std::domain_error("PiecewiseLinear: max_on range not covered by the table");
    double best = std::max((*this)(lo), (*this)(hi));
    for (const auto& p : points)
        if (p[0] > lo && p[0] < hi) best = std::max(best, p[1]);
    return best;
}

std::array<double, 2> iso_interval(int n, double A) {
    if (n < 2) throw std::domain_error("iso_interval: n >= 2 required");
    if (!(A > 0.0)) throw std::domain_error("iso_interval: A > 0 required");
    double vol = sphere_volume(n);
    double low = vol / std::pow(unit_ball_volume(n + 1), double(n) / (n + 1));
    double high = (std::pow(4.0 * A / weyl_constant(n), n / 2.0) + 1.0) *
                  std::pow(double(n + 1), double(n) / (n + 1)) *
                  std::pow(vol, 1.0 / (n + 1));
    return {low, high};
}

double iso_high_proof_form(int n, double A) {
    if (n < 2) throw std::domain_error("iso_high_proof_form: n >= 2 required");
    if (!(A > 0.0)) throw std::domain_error("iso_high_proof_form: A > 0 required");
    return std::pow(4.0 * A / weyl_constant(n) + 1.0, n / 2.0) *
           std::pow(double(n + 1), double(n) / (n + 1)) *
           std::pow(sphere_volume(n), 1.0 / (n + 1));
}

bool sphere_dip_exceeds_half(int n, std::int64_t l) {
    if (n < 2) throw std::domain_error("sphere_dip_exceeds_half: n >= 2 required");
    if (l < 1) throw std::domain_error("sphere_dip_exceeds_half: l >= 1 required");
    // ratio at the block end k = cumulative(l) exceeds 1/2 iff
    // 4 (2 lambda)^n > (n! k)^2, an exact integer statement
    cpp_int lambda = cpp_int(l) * (l + n - 1);
    cpp_int k = cumulative_count(n, l);
    cpp_int lhs = 4 * pow(2 * lambda, unsigned(n));
    cpp_int fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    cpp_int rhs = fact * k;
    rhs *= rhs;
    return lhs > rhs;
}

PlanCertificate plan_counterexample(int n, double A, const PiecewiseLinear& f,
                                    std::int64_t horizon) {
    if (n < 2) throw std::domain_error("plan_counterexample: n >= 2 required");
    if (!(A > 0.0)) throw std::domain_error("plan_counterexample: A > 0 required");
    if (horizon < 1) throw std::domain_error("plan_counterexample: horizon >= 1 required");

    PlanCertificate cert;
    cert.n = n;
    cert.A = A;
    cert.f_table = f;
    cert.horizon = horizon;
    cert.sphere_vol = sphere_volume(n);
    cert.weyl_W = weyl_constant(n);
    double e = 2.0 / n;
    cert.vol_target = 4.0 * A * std::pow(cert.sphere_vol, e) / cert.weyl_W;
    auto iso = iso_interval(n, A);
    cert.iso_low = iso[0];
    cert.iso_high = iso[1];
    cert.iso_high_proof_form = specgeo::iso_high_proof_form(n, A);
    if (!f.covers(cert.iso_low, cert.iso_high))
        throw std::domain_error(
            "plan_counterexample: f table must cover the isoperimetric interval [" +
            detail::fmt(cert.iso_low) + ", " + detail::fmt(cert.iso_high) + "]");
    cert.f_max = f.max_on(cert.iso_low, cert.iso_high);

    // k2: least k with A k^{2/n} > max f, analytic inversion confirmed by scan
    if (cert.f_max <= 0.0) {
        cert.k2 = 1;
    } else {
        double est = std::pow(cert.f_max / A, n / 2.0);
        if (!(est < 1e15))
            throw std::domain_error("plan_counterexample: f too large to certify (k2 ~ " +
                                    detail::fmt(est) + ")");
        cert.k2 = static_cast<std::int64_t>(std::floor(est)) + 1;
        while (cert.k2 > 1 && A * std::pow(double(cert.k2 - 1), e) > cert.f_max) --cert.k2;
        while (!(A * std::pow(double(cert.k2), e) > cert.f_max)) ++cert.k2;
    }

    // k1: full ratio scan over [1, horizon], top-down; k = 1 always dips (ratio 0)
    // (+2 so values[k0] exists even when k1 lands at horizon + 1)
    Spectrum sph = sphere_spectrum(n, std::max(horizon, cert.k2) + 2);
    cert.k1 = 1;
    for (std::int64_t k = horizon; k >= 1; --k) {
        if (!(weyl_ratio(sph, k) > 0.5)) {
            cert.k1 = k + 1;
            break;
        }
    }
    cert.certified_to_horizon = cert.k1 <= horizon;
    cert.k0 = std::max(cert.k1, cert.k2);
    cert.lambda1_threshold = sph.values[static_cast<std::size_t>(cert.k0)] + 1.0;

    // exact integer dip checks past the horizon: every block-end dip from the
    // block containing k1 through well past the horizon, then geometric and
    // fixed far samples
    std::int64_t l_start = 1;
    while (cumulative_count(n, l_start) < cert.k1) ++l_start;
    std::int64_t l_horizon = l_start;
    while (cumulative_count(n, l_horizon) < horizon) ++l_horizon;
    bool dips_ok = true;
    std::int64_t checked = 0;
    for (std::int64_t l = l_start; l <= l_horizon + 64; ++l) {
        dips_ok = dips_ok && sphere_dip_exceeds_half(n, l);
        ++checked;
    }
    for (std::int64_t l = 2 * (l_horizon + 64); l < (std::int64_t(1) << 40); l *= 2) {
        dips_ok = dips_ok && sphere_dip_exceeds_half(n, l);
        ++checked;
    }
    for (std::int64_t l : {std::int64_t(10000), std::int64_t(1000000),
                           std::int64_t(1000000000), std::int64_t(1000000000000)}) {
        if (l > l_horizon + 64) {
            dips_ok = dips_ok && sphere_dip_exceeds_half(n, l);
            ++checked;
        }
    }
    cert.dips_certified_beyond = dips_ok;
    cert.dip_levels_checked = checked;

    // the final chain, literally, for every k in [k0, horizon]:
    // lambda_{k-1}(S^n) vol_target > 2 A k^{2/n} > f_max + A k^{2/n}
    bool chain = cert.k0 <= horizon;
    for (std::int64_t k = cert.k0; k <= horizon && chain; ++k) {
        double t = A * std::pow(double(k), e);
        double lhs = sph.values[static_cast<std::size_t>(k - 1)] * cert.vol_target;
        chain = lhs > 2.0 * t && 2.0 * t > cert.f_max + t;
    }
    cert.chain_verified = chain;
    return cert;
}

std::string certificate_json(const PlanCertificate& cert) {
    nlohmann::json j;
    j["A"] = cert.A;
    j["chain_verified"] = cert.chain_verified;
    j["certified_to_horizon"] = cert.certified_to_horizon;
    j["dip_levels_checked"] = cert.dip_levels_checked;
    j["dips_certified_beyond"] = cert.dips_certified_beyond;
    j["f_max"] = cert.f_max;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : cert.f_table.points) pts.push_back({p[0], p[1]});
    j["f_points"] = pts;
    j["horizon"] = cert.horizon;
    j["iso_high"] = cert.iso_high;
    j["iso_high_proof_form"] = cert.iso_high_proof_form;
    j["iso_low"] = cert.iso_low;
    j["k0"] = cert.k0;
    j["k1"] = cert.k1;
    j["k2"] = cert.k2;
    j["lambda1_threshold"] = cert.lambda1_threshold;
    j["n"] = cert.n;
    j["sphere_vol"] = cert.sphere_vol;
    j["vol_target"] = cert.vol_target;
    j["weyl_W"] = cert.weyl_W;
    return j.dump(2);
}

CertificateCheck verify_certificate(const PlanCertificate& cert, std::int64_t k_hi) {
    CertificateCheck chk;
    if (k_hi < 1) throw std::domain_error("verify_certificate: k_hi >= 1 required");
    const int n = cert.n;
    const double e = 2.0 / n;
    // independent constants and ratio grouping
    const double vol = sphere_volume(n);
    const double w = weyl_constant(n);
    const double vol_e = std::pow(vol, e);

    // walk levels via cumulative counts (counting-function route, no
    // materialized spectrum)
    auto ratio_at = [&](std::int64_t k, double lambda) {
        return lambda * vol_e / (w * std::pow(double(k), e));
    };
    std::int64_t last_bad = 0;
    {
        std::int64_t l = 0, block_end = 1; // level 0: k = 1 only, lambda = 0
        double lambda = 0.0;
        for (std::int64_t k = 1; k <= k_hi; ++k) {
            if (k > block_end) {
                ++l;
                block_end = static_cast<std::int64_t>(cumulative_count(n, l));
                lambda = double(l) * double(l + n - 1);
            }
            if (!(ratio_at(k, lambda) > 0.5)) last_bad = k;
        }
    }
    chk.k1 = last_bad + 1;

    std::int64_t k2 = 1;
    if (cert.f_max > 0.0) {
        while (!(cert.A * std::pow(double(k2), e) > cert.f_max)) {
            ++k2;
            if (k2 > (std::int64_t(1) << 52))
                throw std::domain_error("verify_certificate: k2 out of range");
        }
    }
    chk.k2 = k2;

    std::int64_t k0 = std::max(chk.k1, chk.k2);
    bool chain = true;
    {
        std::int64_t l = 0, block_end = 1;
        double lambda = 0.0;
        for (std::int64_t k = 1; k <= k_hi; ++k) {
            if (k > block_end) {
                ++l;
                block_end = static_cast<std::int64_t>(cumulative_count(n, l));
                lambda = double(l) * double(l + n - 1);
            }
            if (k < k0) continue;
            double t = cert.A * std::pow(double(k), e);
            if (!(lambda * cert.vol_target > 2.0 * t && 2.0 * t > cert.f_max + t)) {
                chain = false;
                chk.detail = "chain fails at k = " + std::to_string(k);
                break;
            }
        }
    }
    chk.chain_ok = chain;
    chk.ok = chk.k1 == cert.k1 && chk.k2 == cert.k2 && chk.chain_ok;
    if (chk.ok) {
        chk.detail = "k1, k2 and the inequality chain reproduced independently";
    } else if (chk.detail.empty()) {
        chk.detail = "recomputed k1 = " + std::to_string(chk.k1) + ", k2 = " +
                     std::to_string(chk.k2) + " vs certificate k1 = " +
                     std::to_string(cert.k1) + ", k2 = " + std::to_string(cert.k2);
    }
    return chk;
}

Theorem1Report check_theorem1(const Spectrum& s, const IsoReport& iso, std::int64_t k_max) {
    if (s.dim < 1) throw std::domain_error("check_theorem1: spectrum dimension required");
    if (!(iso.ratio > 0.0)) throw std::domain_error("check_theorem1: positive ratio required");
    Theorem1Report rep;
    rep.all_pass = true;
    const int n = s.dim;
    const double e = 2.0 / n;
    const double glog2 = gamma_constant_log2(n);
    const double vol_log2 = std::log2(s.volume);
    const double iso_log2 = std::log2(iso.ratio);
    double best = -std::numeric_limits<double>::infinity();
    std::int64_t hi = std::min<std::int64_t>(k_max, s.size() - 1);
    for (std::int64_t k = 0; k <= hi; ++k) {
        ++rep.checked;
        double lam = s.values[static_cast<std::size_t>(k)];
        if (lam <= 0.0) continue; // lhs = 0 <= bound
        if (k == 0) {
            rep.all_pass = false; // positive lambda_0 breaks the k = 0 case
            rep.worst_k = 0;
            continue;
        }
        double lhs_log2 = std::log2(lam) + e * vol_log2;
        double rhs_log2 = glog2 + (1.0 + e) * iso_log2 + e * std::log2(double(k));
        double r = lhs_log2 - rhs_log2;
        if (r > 0.0) rep.all_pass = false;
        if (r > best) {
            best = r;
            rep.worst_k = k;
        }
    }
    rep.max_ratio = std::isfinite(best) ? std::exp2(best) : 0.0;
    return rep;
}

double auto_select_h(double lambda_n_value) {
    if (!(lambda_n_value >= 0.0))
        throw std::domain_error("auto_select_h: eigenvalue must be nonnegative");
    return pi / (2.0 * std::sqrt(lambda_n_value + 1.0));
}

} // namespace specgeo
