#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace specgeo {

// Sorted multiset of Laplacian eigenvalues with the metadata needed by the
// scale-invariant functionals: intrinsic dimension and n-volume.
struct Spectrum {
    int dim = 0;
    double volume = 0.0;
    std::vector<double> values; // nondecreasing, values[0] >= 0
    std::string label;

    std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
};

// Disjoint union: eigenvalue multisets merge, volumes add.
struct UnionSpectrum {
    std::vector<Spectrum> parts;
    Spectrum merged;
    double total_volume = 0.0;
};

// Requires a.dim == b.dim. Ties broken stably: equal values from `a` come first.
UnionSpectrum merge_spectra(const Spectrum& a, const Spectrum& b);

// #{ j : values[j] <= lambda }
std::int64_t counting_function(const Spectrum& s, double lambda);

// lambda_k * volume^(2/n), 0-based k. Homothety-invariant.
double spectral_functional(const Spectrum& s, std::int64_t k);

enum class ShiftLemmaStatus {
    verified,           // union spectrum is the sphere spectrum shifted by one index
    hypothesis_failure, // lambda_1(sigma) < lambda_k(sphere) + 1 (or spectra too short)
    lemma_failure,      // hypothesis held (or sigma degenerate) but the shift identity broke
};

struct ShiftLemmaReport {
    ShiftLemmaStatus status = ShiftLemmaStatus::lemma_failure;
    bool ok = false;
    std::int64_t k = 0;
    std::int64_t checked = 0;        // indices j of the merged spectrum that matched
    std::int64_t first_bad_index = -1;
    std::string detail;
};

// Checks, on merge(sigma, sphere):
//   lambda_0 = lambda_1 = 0   and   lambda_j = lambda_{j-1}(sphere) for j = 2..k+1.
// The j range extends to k+1: with lambda_1(sigma) >= lambda_k(sphere) + 1 the
// first k+1 positive slots of the union are all the sphere's.
ShiftLemmaReport verify_shift_lemma(const Spectrum& sigma, const Spectrum& sphere, std::int64_t k);

// CSV schema: header "index,eigenvalue"; JSON sidecar {dim, volume, label}
// stored next to the CSV with extension ".json".
void write_spectrum_csv(std::ostream& os, const Spectrum& s);
std::string spectrum_sidecar_json(const Spectrum& s);
void save_spectrum(const std::filesystem::path& csv_path, const Spectrum& s);
Spectrum load_spectrum(const std::filesystem::path& csv_path);

} // namespace specgeo
