#include "test_util.hpp"

#include "wcb/metrics.hpp"

#include <filesystem>
#include <map>

using namespace wcb;

TEST_CASE("median and iqr follow the linear-interpolation convention") {
    std::vector<double> even{1.0, 2.0, 3.0, 4.0};
    std::sort(even.begin(), even.end());
    CHECK_NEAR(median_sorted(even), 2.5, 1e-12); // mean of the two central values
    CHECK_NEAR(quantile_sorted(even, 0.25), 1.75, 1e-12);
    CHECK_NEAR(quantile_sorted(even, 0.75), 3.25, 1e-12);
    CHECK_NEAR(iqr_sorted(even), 1.5, 1e-12);

    std::vector<double> odd{3.0, 1.0, 2.0};
    std::sort(odd.begin(), odd.end());
    CHECK_NEAR(median_sorted(odd), 2.0, 1e-12);
}

TEST_CASE("calibration pooling rule") {
    auto cal = calibrate_from_pool({0.7, 0.8, 0.9}, 0.05);
    CHECK_NEAR(cal.threshold, 0.75, 1e-12);
    CHECK_NEAR(cal.median, 0.8, 1e-12);
    CHECK(cal.pool_size == 3);

    auto zero = calibrate_from_pool({0.7, 0.8, 0.9}, 0.0);
    CHECK_NEAR(zero.threshold, 0.8, 1e-12); // offset 0: exactly the median

    auto single = calibrate_from_pool({0.42}, 0.05);
    CHECK_NEAR(single.threshold, 0.37, 1e-12);
    CHECK_NEAR(single.iqr, 0.0, 1e-12);

    CHECK_THROWS_AS(calibrate_from_pool({0.5}, -0.1), DataError);
    CHECK(calibrate_from_pool({}, 0.05).pool_size == 0);
}

namespace {

SimulationConfig tiny_config() {
    SimulationConfig cfg;
    cfg.rounds = 6;
    cfg.round_length = 50.0;
    cfg.replications = 2;
    cfg.task_rate = 0.5;
    cfg.volunteer_rate = 6.0;
    cfg.catalog_size = 8;
    cfg.rng_seed = 31;
    cfg.threads = 1;
    return cfg;
}

std::string slurp(const std::filesystem::path& p) { return read_file(p.string()); }

} // namespace

TEST_CASE("emit_experiment: file shapes and determinism") {
    SimulationConfig cfg = tiny_config();
    ExperimentBundle bundle = run_experiment(cfg);
    const std::string dir = (std::filesystem::temp_directory_path() / "wcb_emit_test").string();
    std::filesystem::remove_all(dir);
    emit_experiment(bundle, dir);

    for (int rep = 0; rep < cfg.replications; ++rep) {
        const auto path = std::filesystem::path(dir) /
                          ("rounds_vrave_" + std::to_string(rep) + ".csv");
        REQUIRE(std::filesystem::exists(path));
        const std::string text = slurp(path);
        long data_rows = 0;
        bool header_seen = false;
        std::size_t start = 0;
        while (start < text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string::npos) end = text.size();
            const std::string line = text.substr(start, end - start);
            start = end + 1;
            if (line.empty()) continue;
            if (line[0] == '#') {
                // every file embeds the effective configuration
                if (line.rfind("# config=", 0) == 0)
                    CHECK(line.find("\"rounds\"") != std::string::npos);
                continue;
            }
            if (!header_seen) {
                CHECK(line.rfind("round,policy,", 0) == 0);
                header_seen = true;
                continue;
            }
            ++data_rows;
        }
        CHECK(data_rows == cfg.rounds); // one row per round
    }

    // byte-identical rerun
    ExperimentBundle again = run_experiment(cfg);
    const std::string dir2 = (std::filesystem::temp_directory_path() / "wcb_emit_test2").string();
    std::filesystem::remove_all(dir2);
    emit_experiment(again, dir2);
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto other = std::filesystem::path(dir2) / entry.path().filename();
        REQUIRE(std::filesystem::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
    }
}

TEST_CASE("summary aggregates equal recomputation from the rounds CSVs") {
    SimulationConfig cfg = tiny_config();
    ExperimentBundle bundle = run_experiment(cfg);
    const std::string dir =
        (std::filesystem::temp_directory_path() / "wcb_crosscheck").string();
    std::filesystem::remove_all(dir);
    emit_experiment(bundle, dir);

    std::vector<double> retained, completed, dividends;
    for (int rep = 0; rep < cfg.replications; ++rep) {
        const std::string text = slurp(std::filesystem::path(dir) /
                                       ("rounds_vrave_" + std::to_string(rep) + ".csv"));
        double rep_retained = 0, rep_completed = 0, rep_div = 0;
        std::size_t start = 0;
        while (start < text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string::npos) end = text.size();
            const std::string line = text.substr(start, end - start);
            start = end + 1;
            if (line.empty() || line[0] == '#' || line.rfind("round,", 0) == 0) continue;
            std::vector<std::string> cells;
            std::size_t c = 0;
            while (true) {
                std::size_t comma = line.find(',', c);
                if (comma == std::string::npos) {
                    cells.push_back(line.substr(c));
                    break;
                }
                cells.push_back(line.substr(c, comma - c));
                c = comma + 1;
            }
            REQUIRE(cells.size() == 12);
            rep_completed += std::stod(cells[2]);
            rep_retained += std::stod(cells[3]);
            rep_div += std::stod(cells[6]);
        }
        retained.push_back(rep_retained);
        completed.push_back(rep_completed);
        dividends.push_back(rep_div);
    }
    const SummaryStats ret = summarize(retained);
    const SummaryStats comp = summarize(completed);
    CHECK_NEAR(ret.mean, bundle.aggregate.retained.mean,
               1e-9 * std::max(1.0, ret.mean));
    CHECK_NEAR(ret.median, bundle.aggregate.retained.median,
               1e-9 * std::max(1.0, ret.median));
    CHECK_NEAR(ret.iqr, bundle.aggregate.retained.iqr, 1e-9 * std::max(1.0, ret.iqr));
    CHECK_NEAR(comp.mean, bundle.aggregate.completed.mean,
               1e-9 * std::max(1.0, comp.mean));
    CHECK_NEAR(mean(dividends), bundle.aggregate.dividends_mean,
               1e-9 * std::max(1.0, bundle.aggregate.dividends_mean));
}

TEST_CASE("figures.csv: long format covering every policy, rep, round, metric") {
    SimulationConfig cfg = tiny_config();
    cfg.replications = 1;
    CompareResult result = compare_policies(cfg);
    const std::string dir =
        (std::filesystem::temp_directory_path() / "wcb_figures").string();
    std::filesystem::remove_all(dir);
    emit_compare(result, dir);

    const std::string text = slurp(std::filesystem::path(dir) / "figures.csv");
    long rows = 0;
    std::size_t start = 0;
    bool header = false;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(start, end - start);
        start = end + 1;
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            CHECK(line == "policy,replication,round,metric,value");
            header = true;
            continue;
        }
        ++rows;
    }
    CHECK(rows == 4 * cfg.replications * cfg.rounds * 8); // 8 metrics per round

    // summary carries the band verdicts with observations
    const std::string summary = slurp(std::filesystem::path(dir) / "summary.json");
    CHECK(summary.find("\"bands\"") != std::string::npos);
    CHECK(summary.find("retention_ordering") != std::string::npos);
    CHECK(summary.find("observed") != std::string::npos);
}

TEST_CASE("degenerate compare: no volunteers means null ratios, zero aggregates") {
    Dataset ds; // empty replay world
    SimulationConfig cfg = tiny_config();
    cfg.replications = 1;
    cfg.arrival_mode = "dataset";
    // compare_policies loads datasets itself only from paths; emulate by
    // running the bundles directly through evaluate_bands + ratio logic.
    std::vector<ExperimentBundle> bundles;
    for (const char* policy : {"vrave", "fixed", "training", "increasing"}) {
        ExperimentOptions opt;
        opt.policy = policy;
        opt.dataset = &ds;
        bundles.push_back(run_experiment(cfg, opt));
    }
    for (const auto& b : bundles) {
        CHECK(b.aggregate.satisfaction_pooled_count == 0);
        CHECK(b.aggregate.retained.mean == 0.0);
        CHECK(b.aggregate.avg_remuneration.mean == 0.0);
    }
    auto bands = evaluate_bands(bundles);
    for (const auto& band : bands) {
        CHECK(!band.observed.empty()); // flagged with observations either way
    }
    // ratio of identical aggregates is exactly 1 where defined
    const auto& a = bundles[0].aggregate;
    CHECK(a.satisfaction_pooled_mean == 0.0); // undefined -> null in summary
}

TEST_CASE("self-comparison ratios are exactly one") {
    SimulationConfig cfg = tiny_config();
    ExperimentBundle bundle = run_experiment(cfg);
    const auto& a = bundle.aggregate;
    if (a.satisfaction_pooled_mean > 0.0)
        CHECK(a.satisfaction_pooled_mean / a.satisfaction_pooled_mean == 1.0);
    if (a.avg_remuneration.mean > 0.0)
        CHECK(a.avg_remuneration.mean / a.avg_remuneration.mean == 1.0);
    CHECK(a.retained.mean - a.retained.mean == 0.0);
}
