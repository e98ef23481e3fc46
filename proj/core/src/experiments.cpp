#include "specgeo/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "specgeo/closed_forms.hpp"
#include "specgeo/fem.hpp"
#include "specgeo/meshgen.hpp"
#include "specgeo/spectrum.hpp"
#include "specgeo/trimesh.hpp"
#include "num_format.hpp"

namespace specgeo {

namespace {

std::string utc_now_iso8601() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void compute_row(const DumbbellParams& p, double delta, DumbbellRow& row) {
    row.delta = delta;
    try {
        TriMesh mesh = glue_dumbbell(delta, p.h, p.level);
        Spectrum s = mesh_spectrum(mesh, p.m, p.tol, p.seed);
        IsoReport ir = isoperimetric_ratio(mesh);
        row.values = s.values;
        row.area = ir.area;
        row.enclosed = ir.enclosed;
        row.iso = ir.ratio;
        row.ok = true;
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
    }
}

} // namespace

std::vector<double> dumbbell_limit_values(double h, int m) {
    if (h <= 0.0) throw std::domain_error("h must be positive");
    if (m < 1) throw std::domain_error("m must be at least 1");
    Spectrum sph = sphere_spectrum(2, m);
    Spectrum seg = segment_dirichlet_spectrum(h, m);
    std::vector<double> v;
    v.reserve(3 * static_cast<std::size_t>(m));
    for (double x : sph.values) {
        v.push_back(x); // each sphere value appears once per sphere
        v.push_back(x);
    }
    v.insert(v.end(), seg.values.begin(), seg.values.end());
    std::sort(v.begin(), v.end());
    v.resize(static_cast<std::size_t>(m));
    return v;
}

DumbbellTable run_dumbbell_convergence(const DumbbellParams& params) {
    if (params.deltas.empty()) throw std::domain_error("deltas must be nonempty");
    if (params.h <= 0.0) throw std::domain_error("h must be positive");
    if (params.m < 1) throw std::domain_error("m must be at least 1");

    DumbbellTable t;
    t.params = params;
    t.rows.resize(params.deltas.size());

    int nthreads = std::max(1, params.threads);
    nthreads = std::min<int>(nthreads, static_cast<int>(params.deltas.size()));
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < params.deltas.size(); ++i)
            compute_row(params, params.deltas[i], t.rows[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int w = 0; w < nthreads; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= params.deltas.size()) return;
                    compute_row(params, params.deltas[i], t.rows[i]);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    t.limit_values = dumbbell_limit_values(params.h, params.m);
    t.limit_area = 2.0 * sphere_volume(2);
    t.limit_enclosed = 2.0 * unit_ball_volume(3);
    t.limit_iso = t.limit_area / std::pow(t.limit_enclosed, 2.0 / 3.0);
    return t;
}

void write_dumbbell_csv(std::ostream& os, const DumbbellTable& t, bool timestamp) {
    nlohmann::json meta;
    meta["h"] = t.params.h;
    meta["deltas"] = t.params.deltas;
    meta["level"] = t.params.level;
    meta["m"] = t.params.m;
    meta["tol"] = t.params.tol;
    meta["seed"] = t.params.seed;
    meta["limit_area"] = t.limit_area;
    meta["limit_enclosed"] = t.limit_enclosed;
    meta["limit_iso"] = t.limit_iso;
    nlohmann::json failed = nlohmann::json::array();
    for (const auto& r : t.rows)
        if (!r.ok) failed.push_back({{"delta", r.delta}, {"error", r.error}});
    meta["failed"] = failed;
    if (timestamp) meta["generated"] = utc_now_iso8601();
    os << "# " << meta.dump() << "\n";

    os << "kind,delta";
    for (int j = 0; j < t.params.m; ++j) os << ",lambda" << j;
    os << ",area,enclosed,iso\n";
    using detail::fmt;
    for (const auto& r : t.rows) {
        if (!r.ok) continue; // failures live in the metadata line
        os << "mesh," << fmt(r.delta);
        for (double v : r.values) os << ',' << fmt(v);
        os << ',' << fmt(r.area) << ',' << fmt(r.enclosed) << ',' << fmt(r.iso) << "\n";
    }
    os << "limit,0";
    for (double v : t.limit_values) os << ',' << fmt(v);
    os << ',' << fmt(t.limit_area) << ',' << fmt(t.limit_enclosed) << ',' << fmt(t.limit_iso)
       << "\n";
}

void write_lambda1_vs_delta_csv(std::ostream& os, const DumbbellTable& t) {
    os << "delta,lambda1\n";
    using detail::fmt;
    for (const auto& r : t.rows)
        if (r.ok && r.values.size() >= 2)
            os << fmt(r.delta) << ',' << fmt(r.values[1]) << "\n";
}

void write_iso_vs_delta_csv(std::ostream& os, const DumbbellTable& t) {
    os << "delta,iso\n";
    using detail::fmt;
    for (const auto& r : t.rows)
        if (r.ok) os << fmt(r.delta) << ',' << fmt(r.iso) << "\n";
}

WeylTable run_weyl_experiment(int n, std::int64_t k_max) {
    if (k_max < 1) throw std::domain_error("k_max must be at least 1");
    WeylTable t;
    t.n = n;
    t.k_max = k_max;
    Spectrum s = sphere_spectrum(n, k_max);
    t.rows.reserve(static_cast<std::size_t>(k_max));
    for (std::int64_t k = 1; k <= k_max; ++k)
        t.rows.push_back({k, s.values[static_cast<std::size_t>(k - 1)], weyl_ratio(s, k)});
    t.k1 = 1;
    for (std::int64_t k = k_max; k >= 1; --k) {
        if (!(t.rows[static_cast<std::size_t>(k - 1)].ratio > 0.5)) {
            t.k1 = k + 1;
            break;
        }
    }
    return t;
}

void write_weyl_csv(std::ostream& os, const WeylTable& t, bool timestamp) {
    nlohmann::json meta;
    meta["n"] = t.n;
    meta["k_max"] = t.k_max;
    meta["k1"] = t.k1;
    if (timestamp) meta["generated"] = utc_now_iso8601();
    os << "# " << meta.dump() << "\n";
    os << "k,lambda,ratio\n";
    using detail::fmt;
    for (const auto& r : t.rows)
        os << r.k << ',' << fmt(r.lambda) << ',' << fmt(r.ratio) << "\n";
}

void write_ratio_vs_k_csv(std::ostream& os, const WeylTable& t) {
    os << "k,ratio\n";
    using detail::fmt;
    for (const auto& r : t.rows) os << r.k << ',' << fmt(r.ratio) << "\n";
}

} // namespace specgeo
