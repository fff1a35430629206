#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stefanlab/analysis.hpp"
#include "stefanlab/barriers.hpp"
#include "stefanlab/elliptic.hpp"
#include "stefanlab/scenario.hpp"
#include "stefanlab/stefan.hpp"

namespace stefanlab {

struct SimOutputs {
    Scenario sc;
    bool has_dom = false;
    StarDomain dom;
    InitialData init;
    double dt = 0.0;
    Trajectory traj;
    std::vector<ConservationSample> cons;
};

// Snapshot ladder: t=0, geometric halvings of t_end, a quarter-time anchor,
// and the Lipschitz lag pairs derived from u0 (all deterministic given the
// scenario). Explicit solver.snapshot_times override everything.
std::vector<double> plan_snapshot_times(const Scenario& sc, const ScalarField& u0,
                                        const StarDomain* dom);

SimOutputs run_scenario(const Scenario& sc, int check_every = 64);

// star_domain.txt, u0.snap, snap_%04d.snap + snap.manifest, conservation.csv
void write_sim_outputs(const SimOutputs& so, const std::string& dir);
SimOutputs load_sim_outputs(const Scenario& sc, const std::string& dir);

struct AnalysisReport {
    GrowthFit growth;
    double band_lo = 0.0, band_hi = 0.0;  // distance-law target band
    ACFSeries acf;
    DecompositionReport decomp;
    ConditionA condA;
    std::vector<TimeLipschitz> lipschitz;
    std::vector<DefectRow> defect;
    BadBallCheck badball;
    std::vector<DistanceLawFit> fits;  // one per probe
    std::vector<RegularityRow> rows;
    std::vector<std::string> summary;
    bool all_pass = true;
    // slab measurements
    double front_err_rel = 0.0;
    double stationary_err = 0.0;
};

AnalysisReport run_analysis(const SimOutputs& so);
// report.csv, acf.csv, defect.csv, growth.txt, summary.txt
void write_analysis(const AnalysisReport& rep, const std::string& dir);

struct CertifyReport {
    double tol = 0.0;
    std::vector<std::pair<std::string, Certification>> certs;
    ConvolutionAudit conv_audit;
    ConvolutionAudit cap_audit;
    bool ran_sandwich = false;
    std::vector<std::string> summary;
    bool all_pass = true;
};

CertifyReport run_certify(const SimOutputs& so);
// cert_<name>.csv per ordering + certify_summary.txt
void write_certify(const CertifyReport& rep, const std::string& dir);

}  // namespace stefanlab
