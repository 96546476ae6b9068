#pragma once

// The acceptance battery shared by the `verify` subcommand and the acceptance
// test binary. Each criterion reports one pass/fail line.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace torus {

struct VerifyOptions {
    /// Reduced run lengths for the solver criteria (8-11); tolerances are unchanged.
    bool quick = false;
};

struct CriterionOutcome {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct Criterion {
    int id;
    std::string name;
    std::function<CriterionOutcome(const VerifyOptions&)> check;
};

CriterionOutcome check_golden_lattice(const VerifyOptions&);
CriterionOutcome check_dual_identities(const VerifyOptions&);
CriterionOutcome check_energy_enstrophy(const VerifyOptions&);
CriterionOutcome check_moment_certification(const VerifyOptions&);
CriterionOutcome check_cubic_round_trip(const VerifyOptions&);
CriterionOutcome check_census_bounds(const VerifyOptions&);
CriterionOutcome check_orbit_equivalence(const VerifyOptions&);
CriterionOutcome check_steadiness(const VerifyOptions&);
CriterionOutcome check_conservation(const VerifyOptions&);
CriterionOutcome check_stability_witness(const VerifyOptions&);
CriterionOutcome check_rk4_order(const VerifyOptions&);

const std::vector<Criterion>& acceptance_criteria();

/// "PASS [id] name: detail (seconds)".
std::string format_outcome(const CriterionOutcome& o);

/// Runs every criterion, printing each line to `out` as it completes.
std::vector<CriterionOutcome> run_acceptance(const VerifyOptions& options, std::ostream& out);

}  // namespace torus
