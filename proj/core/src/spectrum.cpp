#include "specgeo/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "num_format.hpp"

namespace specgeo {

namespace {

bool close_or_equal(double a, double b) {
    // Shared representable inputs compare exactly; anything else gets the
    // absolute/relative envelope 1e-12 * max(1, |b|).
    if (a == b) return true;
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
}

} // namespace

UnionSpectrum merge_spectra(const Spectrum& a, const Spectrum& b) {
    if (a.dim != b.dim)
        throw std::domain_error("merge_spectra: dimension mismatch (" + std::to_string(a.dim) +
                                " vs " + std::to_string(b.dim) + ")");
    UnionSpectrum u;
    u.parts = {a, b};
    u.merged.dim = a.dim;
    u.merged.volume = a.volume + b.volume;
    u.merged.label = a.label + " + " + b.label;
    u.merged.values.resize(a.values.size() + b.values.size());
    // std::merge is stable: equal values from `a` land first.
    std::merge(a.values.begin(), a.values.end(), b.values.begin(), b.values.end(),
               u.merged.values.begin());
    u.total_volume = u.merged.volume;
    return u;
}

std::int64_t counting_function(const Spectrum& s, double lambda) {
    return std::upper_bound(s.values.begin(), s.values.end(), lambda) - s.values.begin();
}

double spectral_functional(const Spectrum& s, std::int64_t k) {
    if (s.dim < 1) throw std::domain_error("spectral_functional: spectrum has no dimension");
    if (k < 0 || k >= s.size()) throw std::domain_error("spectral_functional: index out of range");
    return s.values[static_cast<std::size_t>(k)] * std::pow(s.volume, 2.0 / s.dim);
}

ShiftLemmaReport verify_shift_lemma(const Spectrum& sigma, const Spectrum& sphere, std::int64_t k) {
    ShiftLemmaReport rep;
    rep.k = k;

    if (k < 1) {
        rep.status = ShiftLemmaStatus::hypothesis_failure;
        rep.detail = "k >= 1 required";
        return rep;
    }
    if (sigma.size() < 2) {
        rep.status = ShiftLemmaStatus::hypothesis_failure;
        rep.detail = "sigma spectrum too short (need lambda_1)";
        return rep;
    }
    if (sphere.size() < k + 1) {
        rep.status = ShiftLemmaStatus::hypothesis_failure;
        rep.detail = "sphere spectrum shorter than k+1 entries";
        return rep;
    }
    if (sigma.values[0] != 0.0 || sphere.values[0] != 0.0) {
        rep.status = ShiftLemmaStatus::hypothesis_failure;
        rep.detail = "spectra must start at the zero eigenvalue";
        return rep;
    }

    // A disconnected sigma (second zero) breaks the shifted identity at index 2
    // no matter what lambda_1 hypothesis one reads off it; report that directly.
    if (sigma.values[1] == 0.0 || sphere.values[1] == 0.0) {
        rep.status = ShiftLemmaStatus::lemma_failure;
        rep.first_bad_index = 2;
        rep.detail = "extra zero at index 2";
        return rep;
    }

    if (!(sigma.values[1] >= sphere.values[static_cast<std::size_t>(k)] + 1.0)) {
        rep.status = ShiftLemmaStatus::hypothesis_failure;
        rep.detail = "lambda_1(sigma) = " + detail::fmt(sigma.values[1]) + " < lambda_k(sphere)+1 = " +
                     detail::fmt(sphere.values[static_cast<std::size_t>(k)] + 1.0);
        return rep;
    }

    const Spectrum merged = merge_spectra(sigma, sphere).merged;
    if (merged.values[0] != 0.0 || merged.values[1] != 0.0) {
        rep.status = ShiftLemmaStatus::lemma_failure;
        rep.first_bad_index = (merged.values[0] != 0.0) ? 0 : 1;
        rep.detail = "union does not start with a double zero";
        return rep;
    }
    for (std::int64_t j = 2; j <= k + 1; ++j) {
        double got = merged.values[static_cast<std::size_t>(j)];
        double want = sphere.values[static_cast<std::size_t>(j - 1)];
        if (!close_or_equal(got, want)) {
            rep.status = ShiftLemmaStatus::lemma_failure;
            rep.first_bad_index = j;
            rep.detail = "lambda_" + detail::fmt(j) + "(union) = " + detail::fmt(got) +
                         " != lambda_" + detail::fmt(j - 1) + "(sphere) = " + detail::fmt(want);
            return rep;
        }
        ++rep.checked;
    }

    rep.status = ShiftLemmaStatus::verified;
    rep.ok = true;
    rep.detail = "union equals sphere shifted by one index for j = 2.." + detail::fmt(k + 1);
    return rep;
}

void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
    os << "index,eigenvalue\n";
    for (std::int64_t i = 0; i < s.size(); ++i)
        os << i << ',' << detail::fmt(s.values[static_cast<std::size_t>(i)]) << '\n';
}

std::string spectrum_sidecar_json(const Spectrum& s) {
    nlohmann::json j;
    j["dim"] = s.dim;
    j["volume"] = s.volume;
    j["label"] = s.label;
    return j.dump();
}

void save_spectrum(const std::filesystem::path& csv_path, const Spectrum& s) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("save_spectrum: cannot open " + csv_path.string());
    write_spectrum_csv(csv, s);
    std::filesystem::path side = csv_path;
    side.replace_extension(".json");
    std::ofstream js(side);
    if (!js) throw std::runtime_error("save_spectrum: cannot open " + side.string());
    js << spectrum_sidecar_json(s) << '\n';
}

Spectrum load_spectrum(const std::filesystem::path& csv_path) {
    std::ifstream csv(csv_path);
    if (!csv) throw std::runtime_error("load_spectrum: cannot open " + csv_path.string());
    Spectrum s;
    std::string line;
    bool first = true;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("index", 0) == 0) continue; // header
        }
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("load_spectrum: malformed row '" + line + "'");
        double v = 0.0;
        if (!detail::parse(std::string_view(line).substr(comma + 1), v))
            throw std::runtime_error("load_spectrum: bad eigenvalue in '" + line + "'");
        s.values.push_back(v);
    }
    if (!std::is_sorted(s.values.begin(), s.values.end()))
        throw std::domain_error("load_spectrum: eigenvalues not nondecreasing in " + csv_path.string());

    std::filesystem::path side = csv_path;
    side.replace_extension(".json");
    std::ifstream js(side);
    if (!js)
        throw std::runtime_error("load_spectrum: missing sidecar " + side.string() +
                                 " (need dim/volume metadata)");
    nlohmann::json j = nlohmann::json::parse(js);
    s.dim = j.at("dim").get<int>();
    s.volume = j.at("volume").get<double>();
    s.label = j.value("label", std::string{});
    return s;
}

} // namespace specgeo
