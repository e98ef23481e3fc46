#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "specgeo/closed_forms.hpp"
#include "specgeo/errors.hpp"
#include "specgeo/experiments.hpp"
#include "specgeo/fem.hpp"
#include "specgeo/meshgen.hpp"
#include "specgeo/planner.hpp"
#include "specgeo/spectrum.hpp"
#include "specgeo/trimesh.hpp"

namespace {

namespace fs = std::filesystem;
using namespace specgeo;

// Output resolution: --out wins; otherwise SPECGEO_OUT_DIR/<default>; otherwise stdout.
fs::path resolve_out(const std::string& out, const char* default_name) {
    if (!out.empty()) return out;
    if (const char* dir = std::getenv("SPECGEO_OUT_DIR"); dir && *dir)
        return fs::path(dir) / default_name;
    return {};
}

// Run `fn(ostream)` against the resolved path, or stdout when it is empty.
template <class Fn>
void emit(const fs::path& path, Fn&& fn) {
    if (path.empty()) {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    fn(os);
    os.flush();
    if (!os) throw std::runtime_error("write to " + path.string() + " failed");
    std::cerr << "wrote " << path.string() << "\n";
}

void emit_spectrum(const std::string& out, const char* default_name, const Spectrum& s) {
    fs::path path = resolve_out(out, default_name);
    if (path.empty()) {
        write_spectrum_csv(std::cout, s);
        std::cout.flush();
        return;
    }
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    save_spectrum(path, s); // CSV plus .json sidecar with dim/volume metadata
    std::cerr << "wrote " << path.string() << "\n";
}

PiecewiseLinear load_f_table(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open f table " + path.string());
    std::vector<std::array<double, 2>> pts;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("x,", 0) == 0) continue; // header
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("f table: malformed row '" + line + "'");
        try {
            double x = std::stod(line.substr(0, comma));
            double fx = std::stod(line.substr(comma + 1));
            pts.push_back({x, fx});
        } catch (const std::exception&) {
            throw std::runtime_error("f table: malformed row '" + line + "'");
        }
    }
    if (pts.empty()) throw std::runtime_error("f table " + path.string() + " has no rows");
    return PiecewiseLinear::from_points(pts);
}

struct CommonFlags {
    bool no_timestamp = false;
    int threads = 0; // 0 = machine parallelism
};

int effective_threads(const CommonFlags& c) {
    if (c.threads > 0) return c.threads;
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"specgeo: Laplacian spectra, dumbbell meshes, and Weyl-dip certificates"};
    app.set_help_flag("--help", "print help and exit"); // frees -h; several options are named --h
    app.require_subcommand(1);

    CommonFlags common;
    app.add_flag("--no-timestamp", common.no_timestamp,
                 "omit timestamps from metadata (byte-identical reruns)");
    app.add_option("--threads", common.threads,
                   "worker threads for experiment sweeps (default: machine parallelism)")
        ->check(CLI::PositiveNumber);

    int exit_code = 0;

    // spectrum -------------------------------------------------------------
    auto* spectrum_cmd = app.add_subcommand("spectrum", "closed-form, merged, and mesh spectra");
    spectrum_cmd->require_subcommand(1);

    {
        auto* c = spectrum_cmd->add_subcommand("sphere", "round unit sphere spectrum");
        auto n = std::make_shared<int>(2);
        auto count = std::make_shared<std::int64_t>(0);
        auto out = std::make_shared<std::string>();
        c->add_option("--n", *n, "sphere dimension")->required();
        c->add_option("--count", *count, "number of eigenvalues")->required();
        c->add_option("--out", *out, "output CSV path");
        c->callback([n, count, out] { emit_spectrum(*out, "sphere.csv", sphere_spectrum(*n, *count)); });
    }
    {
        auto* c = spectrum_cmd->add_subcommand("segment", "Dirichlet segment [-h, h] spectrum");
        auto h = std::make_shared<double>(0.0);
        auto count = std::make_shared<std::int64_t>(0);
        auto out = std::make_shared<std::string>();
        c->add_option("--h", *h, "half-length of the segment")->required();
        c->add_option("--count", *count, "number of eigenvalues")->required();
        c->add_option("--out", *out, "output CSV path");
        c->callback(
            [h, count, out] { emit_spectrum(*out, "segment.csv", segment_dirichlet_spectrum(*h, *count)); });
    }
    {
        auto* c = spectrum_cmd->add_subcommand("merge", "disjoint-union merge of two spectrum CSVs");
        auto a = std::make_shared<std::string>();
        auto b = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        c->add_option("a", *a, "first spectrum CSV (with .json sidecar)")->required();
        c->add_option("b", *b, "second spectrum CSV (with .json sidecar)")->required();
        c->add_option("--out", *out, "output CSV path");
        c->callback([a, b, out] {
            UnionSpectrum u = merge_spectra(load_spectrum(*a), load_spectrum(*b));
            emit_spectrum(*out, "merged.csv", u.merged);
        });
    }
    {
        auto* c = spectrum_cmd->add_subcommand("mesh", "lowest eigenvalues of a triangle mesh");
        auto in = std::make_shared<std::string>();
        auto num = std::make_shared<int>(0);
        auto tol = std::make_shared<double>(1e-9);
        auto seed = std::make_shared<std::uint64_t>(1234);
        auto out = std::make_shared<std::string>();
        c->add_option("--in", *in, "input OFF mesh")->required();
        c->add_option("--num", *num, "number of eigenvalues")->required();
        c->add_option("--tol", *tol, "relative residual tolerance");
        c->add_option("--seed", *seed, "random seed for the block solver");
        c->add_option("--out", *out, "output CSV path");
        c->callback([in, num, tol, seed, out] {
            Spectrum s = mesh_spectrum(read_off(fs::path(*in)), *num, *tol, *seed);
            emit_spectrum(*out, "mesh_spectrum.csv", s);
        });
    }

    // mesh -----------------------------------------------------------------
    auto* mesh_cmd = app.add_subcommand("mesh", "mesh generation, measurement, validation");
    mesh_cmd->require_subcommand(1);

    {
        auto* c = mesh_cmd->add_subcommand("icosphere", "subdivided icosahedron sphere mesh");
        auto level = std::make_shared<int>(0);
        auto radius = std::make_shared<double>(1.0);
        auto out = std::make_shared<std::string>();
        c->add_option("--level", *level, "subdivision level (0..8)")->required();
        c->add_option("--radius", *radius, "sphere radius");
        c->add_option("--out", *out, "output OFF path");
        c->callback([level, radius, out] {
            TriMesh m = gen_icosphere(*level, *radius);
            emit(resolve_out(*out, "icosphere.off"), [&](std::ostream& os) { write_off(os, m); });
        });
    }
    {
        auto* c = mesh_cmd->add_subcommand("dumbbell", "two spheres joined by a thin tube");
        auto delta = std::make_shared<double>(0.0);
        auto h = std::make_shared<double>(0.5);
        auto level = std::make_shared<int>(4);
        auto out = std::make_shared<std::string>();
        c->add_option("--delta", *delta, "tube radius, in (0, 0.3]")->required();
        c->add_option("--h", *h, "tube half-length");
        c->add_option("--level", *level, "icosphere subdivision level");
        c->add_option("--out", *out, "output OFF path");
        c->callback([delta, h, level, out] {
            TriMesh m = glue_dumbbell(*delta, *h, *level);
            emit(resolve_out(*out, "dumbbell.off"), [&](std::ostream& os) { write_off(os, m); });
        });
    }
    {
        auto* c = mesh_cmd->add_subcommand("measure", "area, enclosed volume, isoperimetric ratio");
        auto in = std::make_shared<std::string>();
        c->add_option("--in", *in, "input OFF mesh")->required();
        c->callback([in] {
            IsoReport r = isoperimetric_ratio(read_off(fs::path(*in)));
            std::cout << iso_report_json(r) << "\n";
        });
    }
    {
        auto* c = mesh_cmd->add_subcommand("validate", "closedness / orientation / manifold report");
        auto in = std::make_shared<std::string>();
        c->add_option("--in", *in, "input OFF mesh")->required();
        c->callback([in, &exit_code] {
            MeshReport r = validate(read_off(fs::path(*in)));
            std::cout << r.json() << "\n";
            if (!r.pass()) {
                std::cerr << "validation failed: " << r.summary() << "\n";
                exit_code = 3;
            }
        });
    }

    // exp ------------------------------------------------------------------
    auto* exp_cmd = app.add_subcommand("exp", "experiment sweeps with CSV + plot-data output");
    exp_cmd->require_subcommand(1);

    {
        auto* c = exp_cmd->add_subcommand("dumbbell", "eigenvalue convergence as the neck shrinks");
        auto params = std::make_shared<DumbbellParams>();
        auto out = std::make_shared<std::string>();
        c->add_option("--h", params->h, "tube half-length");
        c->add_option("--deltas", params->deltas, "comma-separated neck radii")
            ->required()
            ->delimiter(',');
        c->add_option("--level", params->level, "icosphere subdivision level");
        c->add_option("--num", params->m, "eigenvalues per mesh");
        c->add_option("--tol", params->tol, "relative residual tolerance");
        c->add_option("--seed", params->seed, "random seed for the block solver");
        c->add_option("--out", *out, "output directory");
        c->callback([params, out, &common, &exit_code] {
            params->threads = effective_threads(common);
            DumbbellTable t = run_dumbbell_convergence(*params);
            fs::path dir = resolve_out(*out, ".");
            if (dir.empty()) {
                write_dumbbell_csv(std::cout, t, !common.no_timestamp);
                std::cout.flush();
                std::cerr << "no --out directory: plot-data files skipped\n";
            } else {
                fs::create_directories(dir);
                emit(dir / "dumbbell.csv",
                     [&](std::ostream& os) { write_dumbbell_csv(os, t, !common.no_timestamp); });
                emit(dir / "lambda1_vs_delta.csv",
                     [&](std::ostream& os) { write_lambda1_vs_delta_csv(os, t); });
                emit(dir / "iso_vs_delta.csv",
                     [&](std::ostream& os) { write_iso_vs_delta_csv(os, t); });
            }
            for (const auto& r : t.rows)
                if (!r.ok) {
                    std::cerr << "delta=" << r.delta << " failed: " << r.error << "\n";
                    exit_code = 3;
                }
        });
    }
    {
        auto* c = exp_cmd->add_subcommand("weyl", "normalized Weyl ratio table for the sphere");
        auto n = std::make_shared<int>(2);
        auto kmax = std::make_shared<std::int64_t>(0);
        auto out = std::make_shared<std::string>();
        c->add_option("--n", *n, "sphere dimension")->required();
        c->add_option("--kmax", *kmax, "largest index to tabulate")->required();
        c->add_option("--out", *out, "output directory");
        c->callback([n, kmax, out, &common] {
            WeylTable t = run_weyl_experiment(*n, *kmax);
            fs::path dir = resolve_out(*out, ".");
            if (dir.empty()) {
                write_weyl_csv(std::cout, t, !common.no_timestamp);
                std::cout.flush();
                std::cerr << "no --out directory: plot-data files skipped\n";
            } else {
                fs::create_directories(dir);
                emit(dir / "weyl.csv",
                     [&](std::ostream& os) { write_weyl_csv(os, t, !common.no_timestamp); });
                emit(dir / "ratio_vs_k.csv",
                     [&](std::ostream& os) { write_ratio_vs_k_csv(os, t); });
            }
        });
    }

    // plan -----------------------------------------------------------------
    {
        auto* c = app.add_subcommand("plan", "counterexample certificate for given n, A, f");
        auto n = std::make_shared<int>(0);
        auto A = std::make_shared<double>(0.0);
        auto f_path = std::make_shared<std::string>();
        auto horizon = std::make_shared<std::int64_t>(10000);
        auto out = std::make_shared<std::string>();
        c->add_option("--n", *n, "dimension of the hypersurface")->required();
        c->add_option("--A", *A, "target spectral level A")->required();
        c->add_option("--f", *f_path, "piecewise-linear f table CSV (x,fx rows); default f = 0");
        c->add_option("--horizon", *horizon, "largest index certified by exact scan");
        c->add_option("--out", *out, "output JSON path");
        c->callback([n, A, f_path, horizon, out] {
            PiecewiseLinear f = f_path->empty() ? PiecewiseLinear::constant(0.0)
                                                : load_f_table(fs::path(*f_path));
            PlanCertificate cert = plan_counterexample(*n, *A, f, *horizon);
            emit(resolve_out(*out, "cert.json"),
                 [&](std::ostream& os) { os << certificate_json(cert) << "\n"; });
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        std::cerr << e.what() << "\nrun with --help for usage\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 4;
    } catch (const MeshError& e) {
        std::cerr << "mesh error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return exit_code;
}
