#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#ifdef _OPENMP
#include <omp.h>
#endif

#include "stefanlab/neumann.hpp"
#include "stefanlab/runner.hpp"
#include "stefanlab/scenario.hpp"

namespace {

struct Options {
    std::string scenario;
    std::string out = "out";
    int threads = 0;
    int refine = 0;
};

void add_common(CLI::App* cmd, Options& opt, bool needs_scenario) {
    auto* s = cmd->add_option("--scenario", opt.scenario, "scenario config file");
    if (needs_scenario) s->required();
    cmd->add_option("--out", opt.out, "output directory");
    cmd->add_option("--threads", opt.threads, "worker thread count (0 = default)");
    cmd->add_option("--grid-refine", opt.refine,
                    "halve h this many times (dt follows through cfl)");
}

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

stefanlab::Scenario load(const Options& opt) {
    stefanlab::Scenario sc = stefanlab::read_scenario(opt.scenario);
    stefanlab::apply_refine(sc, opt.refine);
    return sc;
}

int do_simulate(const Options& opt) {
    stefanlab::Scenario sc = load(opt);
    stefanlab::SimOutputs so = stefanlab::run_scenario(sc);
    stefanlab::write_sim_outputs(so, opt.out);
    std::printf("simulate %s: %d snapshots, h=%.8g, dt=%.8g\n", sc.name.c_str(),
                so.traj.count(), so.traj.grid.h, so.dt);
    return 0;
}

int report_lines(const std::vector<std::string>& lines, bool all_pass) {
    for (const auto& l : lines) std::printf("%s\n", l.c_str());
    std::printf("%s\n", all_pass ? "ALL PASS" : "FAILURES PRESENT");
    return all_pass ? 0 : 1;
}

int do_analyze(const Options& opt) {
    stefanlab::Scenario sc = load(opt);
    stefanlab::SimOutputs so = stefanlab::load_sim_outputs(sc, opt.out);
    stefanlab::AnalysisReport rep = stefanlab::run_analysis(so);
    stefanlab::write_analysis(rep, opt.out);
    return report_lines(rep.summary, rep.all_pass);
}

int do_certify(const Options& opt) {
    stefanlab::Scenario sc = load(opt);
    stefanlab::SimOutputs so = stefanlab::load_sim_outputs(sc, opt.out);
    stefanlab::CertifyReport rep = stefanlab::run_certify(so);
    stefanlab::write_certify(rep, opt.out);
    return report_lines(rep.summary, rep.all_pass);
}

int do_oracle(const Options& opt) {
    std::filesystem::create_directories(opt.out);
    stefanlab::write_oracle_table(opt.out + "/neumann_oracle.csv",
                                  {0.1, 0.2, 0.5, 1.0, 2.0, 5.0});
    std::printf("oracle table written to %s/neumann_oracle.csv\n", opt.out.c_str());
    return 0;
}

int do_all(const Options& opt) {
    stefanlab::Scenario sc = load(opt);
    stefanlab::SimOutputs so = stefanlab::run_scenario(sc);
    stefanlab::write_sim_outputs(so, opt.out);
    stefanlab::AnalysisReport arep = stefanlab::run_analysis(so);
    stefanlab::write_analysis(arep, opt.out);
    stefanlab::CertifyReport crep = stefanlab::run_certify(so);
    stefanlab::write_certify(crep, opt.out);
    int rc = report_lines(arep.summary, arep.all_pass);
    rc |= report_lines(crep.summary, crep.all_pass);
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-phase Stefan front laboratory"};
    app.require_subcommand(1);
    Options opt;

    auto* sim = app.add_subcommand("simulate", "run a scenario, write snapshots");
    add_common(sim, opt, true);
    auto* ana = app.add_subcommand("analyze", "measure regularity quantities");
    add_common(ana, opt, true);
    auto* cert = app.add_subcommand("certify", "check barrier orderings");
    add_common(cert, opt, true);
    auto* orc = app.add_subcommand("oracle", "write the similarity-root table");
    add_common(orc, opt, false);
    auto* all = app.add_subcommand("all", "simulate + analyze + certify");
    add_common(all, opt, true);

    CLI11_PARSE(app, argc, argv);
    apply_threads(opt.threads);

    try {
        if (sim->parsed()) return do_simulate(opt);
        if (ana->parsed()) return do_analyze(opt);
        if (cert->parsed()) return do_certify(opt);
        if (orc->parsed()) return do_oracle(opt);
        if (all->parsed()) return do_all(opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
