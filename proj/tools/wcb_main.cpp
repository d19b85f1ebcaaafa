// wcb: volunteer-crowdsourcing simulation CLI.
//
//   wcb gen       --out DIR --tasks N --volunteers M --seed S
//   wcb run       --config FILE [--policy NAME] --out DIR
//   wcb calibrate --config FILE [--offset X] [--out DIR]
//   wcb compare   --config FILE --out DIR
//
// Exit codes: 0 success, 1 validation failure, 2 I/O failure.

#include "wcb/metrics.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>

namespace {

void print_aggregate(const wcb::ExperimentBundle& b) {
    const auto& a = b.aggregate;
    std::printf("policy=%s reps=%zu kernel=%s\n", b.policy.c_str(), b.replications.size(),
                b.kernel_backend.c_str());
    std::printf("  retained        mean=%.3f median=%.3f iqr=%.3f distinct_mean=%.3f\n",
                a.retained.mean, a.retained.median, a.retained.iqr,
                a.retained_distinct.mean);
    std::printf("  completed       mean=%.3f median=%.3f iqr=%.3f\n", a.completed.mean,
                a.completed.median, a.completed.iqr);
    std::printf("  avg_remuneration mean=%.3f\n", a.avg_remuneration.mean);
    std::printf("  satisfaction    pooled_mean=%.4f (n=%ld)\n",
                a.satisfaction_pooled_mean, a.satisfaction_pooled_count);
}

int run_gen(const std::string& out_dir, int tasks, int volunteers, int catalog,
            double span, double stay_mean, std::uint64_t seed) {
    wcb::Dataset ds =
        wcb::generate_dataset(tasks, volunteers, catalog, span, stay_mean, seed);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw wcb::IoError("cannot create '" + out_dir + "': " + ec.message());
    wcb::write_file(out_dir + "/tasks.csv", wcb::tasks_to_csv(ds.tasks));
    wcb::write_file(out_dir + "/volunteers.csv", wcb::volunteers_to_csv(ds.volunteers));
    std::printf("wrote %zu tasks, %zu volunteers to %s\n", ds.tasks.size(),
                ds.volunteers.size(), out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Workforce-composition simulation: skill-based assignment with "
                 "retention-aware incentives"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    std::string gen_out;
    int gen_tasks = 100, gen_volunteers = 1500, gen_catalog = 50;
    double gen_span = 300.0, gen_stay = 100.0;
    std::uint64_t gen_seed = 42;
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--tasks", gen_tasks, "task count");
    gen->add_option("--volunteers", gen_volunteers, "volunteer count");
    gen->add_option("--catalog", gen_catalog, "universal skill catalog size");
    gen->add_option("--span", gen_span, "arrival window in time units");
    gen->add_option("--stay-mean", gen_stay, "mean volunteer availability window");
    gen->add_option("--seed", gen_seed, "rng seed");

    // run
    auto* run = app.add_subcommand("run", "run one policy experiment");
    std::string run_config, run_policy, run_out;
    run->add_option("--config", run_config, "config JSON file")->required();
    run->add_option("--policy", run_policy, "vrave|fixed|training|increasing");
    run->add_option("--out", run_out, "output directory")->required();

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "derive a retention threshold");
    std::string cal_config, cal_out;
    double cal_offset = 0.05;
    cal->add_option("--config", cal_config, "config JSON file")->required();
    cal->add_option("--offset", cal_offset, "subtracted from the pooled median");
    cal->add_option("--out", cal_out, "optional output directory");

    // compare
    auto* cmp = app.add_subcommand("compare", "paired run of all four policies");
    std::string cmp_config, cmp_out;
    cmp->add_option("--config", cmp_config, "config JSON file")->required();
    cmp->add_option("--out", cmp_out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return run_gen(gen_out, gen_tasks, gen_volunteers, gen_catalog, gen_span,
                           gen_stay, gen_seed);

        if (run->parsed()) {
            wcb::SimulationConfig cfg = wcb::load_config_file(run_config);
            wcb::ExperimentOptions opt;
            opt.policy = run_policy;
            wcb::ExperimentBundle bundle = wcb::run_experiment(cfg, opt);
            wcb::emit_experiment(bundle, run_out);
            print_aggregate(bundle);
            std::printf("outputs written to %s\n", run_out.c_str());
            return 0;
        }

        if (cal->parsed()) {
            wcb::SimulationConfig cfg = wcb::load_config_file(cal_config);
            wcb::CalibrationResult result = wcb::calibrate_threshold(cfg, cal_offset);
            std::printf("{\"threshold\": %.10g, \"median\": %.10g, \"iqr\": %.10g, "
                        "\"offset\": %.10g, \"pool_size\": %ld}\n",
                        result.threshold, result.median, result.iqr, result.offset,
                        result.pool_size);
            if (!cal_out.empty()) wcb::emit_calibration(result, cfg, cal_out);
            return 0;
        }

        if (cmp->parsed()) {
            wcb::SimulationConfig cfg = wcb::load_config_file(cmp_config);
            wcb::CompareResult result = wcb::compare_policies(cfg);
            wcb::emit_compare(result, cmp_out);
            for (const auto& b : result.bundles) print_aggregate(b);
            for (const auto& band : result.bands)
                std::printf("band %-22s %s (%s)\n", band.name.c_str(),
                            band.pass ? "PASS" : "FAIL", band.observed.c_str());
            std::printf("outputs written to %s\n", cmp_out.c_str());
            return 0;
        }
    } catch (const wcb::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
