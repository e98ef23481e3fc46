#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace specgeo {

// One dumbbell sweep: fixed half-length h, shrinking neck radius delta.
struct DumbbellParams {
    double h = 0.5;
    std::vector<double> deltas; // e.g. {0.3, 0.15, 0.075}
    int level = 4;              // icosphere subdivision level
    int m = 8;                  // eigenvalues per mesh
    double tol = 1e-9;
    std::uint64_t seed = 1234;
    int threads = 1; // parameter points run concurrently when > 1
};

struct DumbbellRow {
    double delta = 0.0;
    std::vector<double> values; // lowest m eigenvalues (empty when !ok)
    double area = 0.0;
    double enclosed = 0.0;
    double iso = 0.0; // area / enclosed^(2/3)
    bool ok = false;
    std::string error; // diagnostic when !ok
};

struct DumbbellTable {
    DumbbellParams params;
    std::vector<DumbbellRow> rows; // one per delta, input order
    // delta -> 0 targets: two unit spheres plus the Dirichlet segment [-h, h]
    std::vector<double> limit_values;
    double limit_area = 0.0;
    double limit_enclosed = 0.0;
    double limit_iso = 0.0;
};

// Lowest m values of the limit object: two copies of the sphere spectrum
// merged with the segment spectrum (plain value merge; the pieces do not
// share a dimension, so this is not a Spectrum).
std::vector<double> dumbbell_limit_values(double h, int m);

DumbbellTable run_dumbbell_convergence(const DumbbellParams& params);

// CSV with a "# {json}" metadata first line (parameters, limit targets,
// per-point failures, timestamp unless suppressed), then
// kind,delta,lambda0..lambda{m-1},area,enclosed,iso rows and a final
// kind=limit row.
void write_dumbbell_csv(std::ostream& os, const DumbbellTable& t, bool timestamp = true);

// Two-column plot extracts over the successful rows.
void write_lambda1_vs_delta_csv(std::ostream& os, const DumbbellTable& t);
void write_iso_vs_delta_csv(std::ostream& os, const DumbbellTable& t);

struct WeylRow {
    std::int64_t k = 0;
    double lambda = 0.0; // lambda_{k-1} of the round sphere
    double ratio = 0.0;  // normalized Weyl ratio at k
};

struct WeylTable {
    int n = 0;
    std::int64_t k_max = 0;
    std::int64_t k1 = 0; // least k1 with ratio > 1/2 for all k in [k1, k_max]
    std::vector<WeylRow> rows;
};

WeylTable run_weyl_experiment(int n, std::int64_t k_max);

void write_weyl_csv(std::ostream& os, const WeylTable& t, bool timestamp = true);
void write_ratio_vs_k_csv(std::ostream& os, const WeylTable& t);

} // namespace specgeo
