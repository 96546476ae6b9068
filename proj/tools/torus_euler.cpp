// torus-euler: command-line driver for lattice queries, orbit censuses,
// Euler simulations, stability sweeps and the verification battery.
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical failure,
// 4 verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>

#include "torus/eigenstate.hpp"
#include "torus/equimeasurable.hpp"
#include "torus/euler.hpp"
#include "torus/field_io.hpp"
#include "torus/manifest.hpp"
#include "torus/verify.hpp"
#include "torus/workers.hpp"

namespace fs = std::filesystem;
using namespace torus;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerify = 4;

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string vec_text(Vec2 v) { return "(" + g17(v.x + 0.0) + ", " + g17(v.y + 0.0) + ")"; }

Vec2 parse_vec(const std::string& text, const char* what) {
    std::istringstream in(text);
    Vec2 v;
    std::string rest;
    if (!(in >> v.x >> v.y) || (in >> rest)) {
        throw Error(ErrorCode::ConfigError, std::string(what) + " needs two numbers, got '" + text + "'");
    }
    return v;
}

// Options shared by the subcommands that work on a torus.
struct LatticeOptions {
    std::string preset = "hexagonal";
    std::string xi;
    std::string eta;

    void attach(CLI::App* app) {
        app->add_option("--preset", preset, "square | hexagonal | rectangular:<h>")->capture_default_str();
        app->add_option("--xi", xi, "explicit first generator \"x y\" (with --eta)");
        app->add_option("--eta", eta, "explicit second generator \"x y\" (with --xi)");
    }

    void apply(ExperimentManifest& m, CLI::App* app) const {
        if (app->count("--preset")) {
            m.preset = preset;
            m.xi.reset();
            m.eta.reset();
        }
        if (!xi.empty()) m.xi = parse_vec(xi, "--xi");
        if (!eta.empty()) m.eta = parse_vec(eta, "--eta");
    }
};

// Run options layered over an optional manifest file.
struct RunOptions {
    LatticeOptions lattice;
    std::string manifest;
    int n = 0;
    double dt = 0.0;
    double t_end = 0.0;
    int diag_stride = 0;
    std::string coeffs;
    std::vector<double> eps;
    std::vector<std::uint64_t> seeds;
    double p_norm = 0.0;
    std::string out;

    void attach(CLI::App* app, bool sweep) {
        lattice.attach(app);
        app->add_option("--manifest", manifest, "experiment manifest; flags given here override it")
            ->check(CLI::ExistingFile);
        app->add_option("--n", n, "grid points per direction (even, >= 16)");
        app->add_option("--dt", dt, "time step");
        app->add_option("--t-end", t_end, "final time");
        app->add_option("--diag-stride", diag_stride, "steps between diagnostics rows");
        app->add_option("--coeffs", coeffs, "reference state \"A1 alpha1 ...\" (default: unit amplitudes)");
        app->add_option("--eps", eps, sweep ? "perturbation sizes" : "perturbation size");
        app->add_option("--seed", seeds, sweep ? "perturbation seeds" : "perturbation seed");
        app->add_option("--p-norm", p_norm, "exponent of the orbit distance");
        app->add_option("--out", out, "output directory");
    }

    ExperimentManifest resolve(CLI::App* app) const {
        ExperimentManifest m = manifest.empty() ? ExperimentManifest{} : load_manifest(manifest);
        lattice.apply(m, app);
        if (app->count("--n")) m.n1 = m.n2 = n;
        if (app->count("--dt")) m.dt = dt;
        if (app->count("--t-end")) m.t_end = t_end;
        if (app->count("--diag-stride")) m.diag_stride = diag_stride;
        if (app->count("--coeffs")) m.coeffs = coeffs;
        if (app->count("--eps")) m.epsilons = eps;
        if (app->count("--seed")) m.seeds = seeds;
        if (app->count("--p-norm")) m.p_norm = p_norm;
        if (app->count("--out")) m.output_dir = out;
        return m;
    }
};

EigenstateCoeffs reference_state(const ExperimentManifest& m, const EigenspaceInfo& info) {
    if (!m.coeffs.empty()) return parse_coeffs(m.coeffs, info);
    return EigenstateCoeffs::make(info, std::vector<double>(info.pairs(), 1.0), std::vector<double>(info.pairs(), 0.0));
}

std::vector<std::string> provenance(const char* command, const ExperimentManifest& m, const LatticeBasis& b,
                                    const EigenstateCoeffs& ref, double eps, std::uint64_t seed) {
    char seed_text[32];
    std::snprintf(seed_text, sizeof seed_text, "%" PRIu64, seed);
    return {std::string("torus-euler ") + command,
            "xi = " + g17(b.xi().x) + " " + g17(b.xi().y) + ", eta = " + g17(b.eta().x) + " " + g17(b.eta().y),
            "grid = " + std::to_string(m.n1) + "x" + std::to_string(m.n2) + ", dt = " + g17(m.dt) +
                ", t_end = " + g17(m.t_end) + ", diag_stride = " + std::to_string(m.diag_stride) +
                ", dealias = " + (m.dealias == Dealias::TwoThirds ? "two_thirds" : "none"),
            "reference = " + format_coeffs(ref),
            "epsilon = " + g17(eps) + ", seed = " + seed_text + ", p_norm = " + g17(m.p_norm)};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
}

int cmd_lattice_info(const ExperimentManifest& m) {
    const LatticeBasis b = m.basis();
    const DualBasis d = dual_basis(b);
    const ShortestVectorSet s = shortest_vectors(b);
    const EigenspaceInfo info = classify_eigenspace(b);
    std::cout << "xi      = " << vec_text(b.xi()) << "\n"
              << "eta     = " << vec_text(b.eta()) << "\n"
              << "area    = " << g17(b.area()) << "\n"
              << "xi*     = " << vec_text(d.xi_star) << "\n"
              << "eta*    = " << vec_text(d.eta_star) << "\n"
              << "rho     = " << g17(info.rho) << "\n"
              << "lambda1 = " << g17(info.lambda1) << "\n"
              << "dim E1  = " << info.dim << "\n"
              << "S       =";
    for (const DualVector& v : s.vectors) std::cout << " (" << v.m << "," << v.n << ")";
    std::cout << "\n";
    for (int i = 0; i < info.pairs(); ++i) {
        std::cout << "k" << i + 1 << "      = " << info.k[i].m << " xi* + " << info.k[i].n << " eta* = "
                  << vec_text(info.k[i].k) << "\n";
    }
    return kExitOk;
}

int cmd_eigenspace(const ExperimentManifest& m, const std::string& torf_out) {
    const LatticeBasis b = m.basis();
    const EigenspaceInfo info = classify_eigenspace(b);
    std::cout << "dim E1 = " << info.dim << ", lambda1 = " << g17(info.lambda1) << "\n";
    for (int i = 0; i < info.pairs(); ++i) {
        std::cout << "cos/sin(2 pi k" << i + 1 << ".x), k" << i + 1 << " = " << vec_text(info.k[i].k) << "\n";
    }
    if (m.coeffs.empty()) return kExitOk;
    const EigenstateCoeffs c = parse_coeffs(m.coeffs, info);
    std::cout << "state  = " << format_coeffs(c) << "\n";
    if (info.dim == 6) std::cout << "theta  = " << g17(phase_invariant_angle(c)) << "\n";
    const Grid grid(b, m.n1, m.n2);
    const RealField w = synthesize_eigenstate(c, grid);
    std::cout << "energy = " << g17(energy(w)) << ", enstrophy = " << g17(enstrophy(w)) << "\n";
    if (!torf_out.empty()) {
        write_torf(torf_out, w);
        std::cout << "wrote " << torf_out << "\n";
    }
    return kExitOk;
}

int cmd_census(const ExperimentManifest& m, bool records) {
    const EigenspaceInfo info = classify_eigenspace(m.basis());
    const EigenstateCoeffs ref = reference_state(m, info);
    const OrbitCensus census = orbit_census(ref);
    if (records) {
        for (int i = 0; i < census.count; ++i) {
            const EigenstateCoeffs& r = census.representatives[i];
            nlohmann::json rec{{"index", i},
                               {"dim", census.dim},
                               {"amplitudes", r.amplitude},
                               {"phases", r.phase},
                               {"same_orbit_as_reference", i == census.reference_index}};
            if (census.dim == 6) rec["theta"] = phase_invariant_angle(r);
            std::cout << rec.dump() << "\n";
        }
        return kExitOk;
    }
    std::cout << "reference  " << format_coeffs(ref) << "\n";
    const MomentData md = moment_data(ref);
    std::cout << "moments    c1 = " << g17(md.c1) << ", c2 = " << g17(md.c2) << ", c3 = " << g17(md.c3)
              << ", b2 = " << g17(md.b2) << "\n";
    const int bound = census.dim == 2 ? 1 : census.dim == 4 ? 2 : 12;
    std::cout << "orbits     " << census.count << " (bound " << bound << ")\n";
    for (int i = 0; i < census.count; ++i) {
        const EigenstateCoeffs& r = census.representatives[i];
        std::cout << "  [" << i << "] amplitudes";
        for (double a : r.amplitude) std::cout << " " << g17(a);
        std::cout << "  phases";
        for (double p : r.phase) std::cout << " " << g17(p);
        if (census.dim == 6) std::cout << "  theta " << g17(phase_invariant_angle(r));
        std::cout << (i == census.reference_index ? "  <- reference orbit" : "") << "\n";
    }
    return kExitOk;
}

int cmd_simulate(const ExperimentManifest& m) {
    const LatticeBasis b = m.basis();
    const EigenspaceInfo info = classify_eigenspace(b);
    const EigenstateCoeffs ref = reference_state(m, info);
    const SolverConfig cfg = m.solver_config();
    const double eps = m.epsilons.empty() ? 0.0 : m.epsilons.front();
    const std::uint64_t seed = m.seeds.empty() ? 1 : m.seeds.front();

    SpectralField w0 = eigenstate_spectrum(ref, cfg.grid);
    if (eps != 0.0) {
        const SpectralField g = random_perturbation(cfg.grid, seed, m.p_norm);
        for (std::size_t i = 0; i < w0.coeffs.size(); ++i) w0.coeffs[i] += eps * g.coeffs[i];
    }
    ensure_dir(m.output_dir);
    write_text(fs::path(m.output_dir) / "manifest.txt", emit_manifest(m));
    const RunResult r = run(cfg, w0, ref, m.p_norm);
    std::ofstream csv(fs::path(m.output_dir) / "diagnostics.csv");
    write_diagnostics_csv(csv, r.diagnostics, provenance("simulate", m, b, ref, eps, seed));
    const AdmissibilityReport rep = admissibility_check(r.diagnostics, {}, b.area());
    std::printf("rows %zu, energy drift %.3e, enstrophy drift %.3e, casimir6 drift %.3e, admissibility %s\n",
                r.diagnostics.rows.size(), rep.energy_drift, rep.casimir_drift[0], rep.casimir_drift[4],
                rep.pass ? "PASS" : "FAIL");
    for (const std::string& f : rep.failures) std::printf("  %s\n", f.c_str());
    if (r.diagnostics.cfl_warning) std::printf("warning: CFL number exceeded 0.5\n");
    std::printf("wrote %s\n", (fs::path(m.output_dir) / "diagnostics.csv").c_str());
    return kExitOk;
}

int cmd_stability(const ExperimentManifest& m) {
    const LatticeBasis b = m.basis();
    const EigenspaceInfo info = classify_eigenspace(b);
    const EigenstateCoeffs ref = reference_state(m, info);
    const SolverConfig cfg = m.solver_config();
    if (m.epsilons.empty() || m.seeds.empty()) throw Error(ErrorCode::ConfigError, "need at least one epsilon and seed");
    ensure_dir(m.output_dir);
    write_text(fs::path(m.output_dir) / "manifest.txt", emit_manifest(m));

    struct Job {
        double eps;
        std::uint64_t seed;
        StabilityResult result;
    };
    std::vector<Job> jobs;
    for (double e : m.epsilons) {
        for (std::uint64_t s : m.seeds) jobs.push_back({e, s, {}});
    }
    run_jobs(jobs.size(), [&](std::size_t i) {
        Job& job = jobs[i];
        job.result = stability_experiment(b, ref, job.eps, job.seed, m.p_norm, cfg);
        char name[96];
        std::snprintf(name, sizeof name, "stability_eps%s_seed%" PRIu64 ".csv", g17(job.eps).c_str(), job.seed);
        std::ofstream csv(fs::path(m.output_dir) / name);
        write_diagnostics_csv(csv, job.result.diagnostics, provenance("stability", m, b, ref, job.eps, job.seed));
    });
    std::printf("%-10s %-20s %-12s %-12s %-10s %s\n", "epsilon", "seed", "D(0)", "max D", "ratio", "max |dtheta|");
    for (const Job& job : jobs) {
        const StabilityResult& r = job.result;
        std::printf("%-10g %-20" PRIu64 " %-12.4e %-12.4e %-10.4f %.3e\n", job.eps, job.seed, r.d0, r.d_max,
                    r.d0 > 0.0 ? r.d_max / r.d0 : std::nan(""), r.theta_max_dev);
    }
    return kExitOk;
}

int cmd_verify(bool full) {
    VerifyOptions options;
    options.quick = !full;
    const auto results = run_acceptance(options, std::cout);
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << results.size() - failed << "/" << results.size() << " criteria passed"
              << (full ? "" : " (quick run lengths; use --full for the acceptance sizes)") << "\n";
    return failed == 0 ? kExitOk : kExitVerify;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::NumericalBlowup:
        case ErrorCode::InternalInvariant:
        case ErrorCode::InconsistentMoments:
        case ErrorCode::DegenerateLeadingCoefficient: return kExitNumerical;
        default: return kExitConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Euler flows and first eigenstates on flat tori"};
    app.require_subcommand(1);

    LatticeOptions info_lattice;
    auto* info_cmd = app.add_subcommand("lattice-info", "dual basis, shortest dual vectors, lambda1, dim E1");
    info_lattice.attach(info_cmd);

    LatticeOptions eig_lattice;
    std::string eig_coeffs, eig_torf;
    int eig_n = 128;
    auto* eig_cmd = app.add_subcommand("eigenspace", "first eigenspace basis; optionally synthesize a state");
    eig_lattice.attach(eig_cmd);
    eig_cmd->add_option("--coeffs", eig_coeffs, "state \"A1 alpha1 ...\"");
    eig_cmd->add_option("--n", eig_n, "grid points per direction")->capture_default_str();
    eig_cmd->add_option("--torf", eig_torf, "write the sampled state as a TORF snapshot");

    LatticeOptions census_lattice;
    std::string census_coeffs, census_manifest;
    bool census_records = false;
    auto* census_cmd = app.add_subcommand("census", "translational orbits sharing the moments of a reference state");
    census_lattice.attach(census_cmd);
    census_cmd->add_option("--coeffs", census_coeffs, "reference state \"A1 alpha1 ...\"");
    census_cmd->add_option("--manifest", census_manifest, "experiment manifest")->check(CLI::ExistingFile);
    census_cmd->add_flag("--records", census_records, "print line-delimited JSON records");

    RunOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "integrate a (perturbed) first eigenstate, write diagnostics CSV");
    sim.attach(sim_cmd, false);

    RunOptions stab;
    auto* stab_cmd = app.add_subcommand("stability", "epsilon/seed sweep of the orbital stability experiment");
    stab.attach(stab_cmd, true);

    bool verify_full = false;
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance battery");
    verify_cmd->add_flag("--full", verify_full, "use the full acceptance run lengths");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*info_cmd) {
            ExperimentManifest m;
            info_lattice.apply(m, info_cmd);
            return cmd_lattice_info(m);
        }
        if (*eig_cmd) {
            ExperimentManifest m;
            eig_lattice.apply(m, eig_cmd);
            m.n1 = m.n2 = eig_n;
            m.coeffs = eig_coeffs;
            return cmd_eigenspace(m, eig_torf);
        }
        if (*census_cmd) {
            ExperimentManifest m = census_manifest.empty() ? ExperimentManifest{} : load_manifest(census_manifest);
            census_lattice.apply(m, census_cmd);
            if (census_cmd->count("--coeffs")) m.coeffs = census_coeffs;
            return cmd_census(m, census_records);
        }
        if (*sim_cmd) return cmd_simulate(sim.resolve(sim_cmd));
        if (*stab_cmd) return cmd_stability(stab.resolve(stab_cmd));
        if (*verify_cmd) return cmd_verify(verify_full);
    } catch (const NumericalBlowupError& e) {
        std::cerr << "error: " << e.what() << " (" << e.partial().rows.size() << " diagnostics rows recorded)\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
