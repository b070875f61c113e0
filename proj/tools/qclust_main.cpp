#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qclust/error.hpp"
#include "qclust/pipeline.hpp"
#include "qclust/version.hpp"

namespace {

struct CliOptions {
    qclust::pipeline::RunSpec spec;
    std::string kernel_measurement = "all_zeros";
    int k_min = 1;
    int k_max = 10;
};

void add_common_options(CLI::App* cmd, CliOptions& opt, bool with_algorithm) {
    cmd->add_option("--input", opt.spec.input, "KEV catalog CSV")->required();
    if (with_algorithm) {
        cmd->add_option("--algorithm", opt.spec.algorithm,
                        "kmeans | spectral | qcswap_kmeans | qkernel_kmeans | all");
    }
    cmd->add_option("--k", opt.spec.k, "number of clusters");
    cmd->add_option("--seed", opt.spec.seed, "base RNG seed");
    cmd->add_option("--restarts", opt.spec.restarts, "seeded restarts per algorithm");
    cmd->add_option("--shots", opt.spec.shots,
                    "shot count for sampled fidelities (default: exact)");
    cmd->add_option("--year", opt.spec.year_filter, "calendar year filter on date_added");
    cmd->add_option("--out", opt.spec.output_dir, "output directory");
    cmd->add_option("--kernel-measurement", opt.kernel_measurement,
                    "kernel circuit readout: all_zeros | first_qubit");
}

void finalize(CliOptions& opt) {
    if (opt.kernel_measurement == "all_zeros") {
        opt.spec.kernel_measurement = qclust::encode::KernelMeasurement::all_zeros;
    } else if (opt.kernel_measurement == "first_qubit") {
        opt.spec.kernel_measurement = qclust::encode::KernelMeasurement::first_qubit;
    } else {
        throw qclust::UsageError("unknown kernel measurement '" + opt.kernel_measurement + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qclust - classical and quantum-inspired clustering of the CISA KEV catalog"};
    app.set_version_flag("--version", qclust::kVersion);
    app.set_config("--config", "", "key=value config file ([run]/[elbow]/[compare] sections; "
                                   "command-line flags win)");
    app.require_subcommand(1);

    CliOptions run_opt;
    CLI::App* run_cmd = app.add_subcommand("run", "cluster the catalog and write reports");
    add_common_options(run_cmd, run_opt, /*with_algorithm=*/true);

    CliOptions elbow_opt;
    CLI::App* elbow_cmd =
        app.add_subcommand("elbow", "WCSS-vs-k curve with a suggested cluster count");
    add_common_options(elbow_cmd, elbow_opt, /*with_algorithm=*/true);
    elbow_cmd->add_option("--kmin", elbow_opt.k_min, "smallest k");
    elbow_cmd->add_option("--kmax", elbow_opt.k_max, "largest k");

    CliOptions compare_opt;
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "run all four algorithms and print the metric table");
    add_common_options(compare_cmd, compare_opt, /*with_algorithm=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2, --help/--version exit 0
    }

    try {
        if (run_cmd->parsed()) {
            finalize(run_opt);
            const auto report = qclust::pipeline::run(run_opt.spec);
            qclust::pipeline::write_run_outputs(report, run_opt.spec.output_dir);
            for (const auto& o : report.outcomes) {
                std::printf("%-16s iterations=%d converged=%s %s=%.6f (%.3fs)\n",
                            qclust::pipeline::algorithm_id(o.algorithm), o.result.iterations,
                            o.result.converged ? "yes" : "no", o.selection, o.objective,
                            o.duration_seconds);
            }
            std::printf("outputs written to %s\n", run_opt.spec.output_dir.string().c_str());
        } else if (elbow_cmd->parsed()) {
            finalize(elbow_opt);
            const auto result = qclust::pipeline::elbow(elbow_opt.spec, elbow_opt.k_min,
                                                        elbow_opt.k_max);
            qclust::pipeline::write_elbow_outputs(result, elbow_opt.spec.output_dir);
            for (const auto& [k, w] : result.curve) {
                std::printf("k=%d wcss=%.6f\n", k, w);
            }
            std::printf("suggested k = %d (max WCSS second difference)\n", result.suggested_k);
        } else if (compare_cmd->parsed()) {
            finalize(compare_opt);
            compare_opt.spec.algorithm = "all";
            const auto report = qclust::pipeline::run(compare_opt.spec);
            qclust::pipeline::write_compare_outputs(report, compare_opt.spec.output_dir);
            std::fputs(qclust::pipeline::comparison_table(report).c_str(), stdout);
        }
        return 0;
    } catch (const qclust::UsageError& e) {
        std::cerr << "qclust: error: " << e.what() << "\n";
        return 2;
    } catch (const qclust::DataError& e) {
        std::cerr << "qclust: error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "qclust: unexpected error: " << e.what() << "\n";
        return 70;
    }
}
