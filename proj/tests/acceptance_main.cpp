// Acceptance suite: every criterion prints one PASS/FAIL line; the exit code
// is the number of failed criteria. Criteria marked by a band check report the
// per-band observations either way.

#include "wcb/incentive.hpp"
#include "wcb/kernels.hpp"
#include "wcb/metrics.hpp"
#include "wcb/potential.hpp"
#include "wcb/sim.hpp"
#include "wcb/stats.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Clock = std::chrono::steady_clock;

struct Failure {
    std::string what;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw Failure{what};
}

void require_near(double a, double b, double tol, const std::string& what) {
    if (!(std::fabs(a - b) <= tol)) {
        std::ostringstream os;
        os << what << " (|" << a << " - " << b << "| > " << tol << ")";
        throw Failure{os.str()};
    }
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

void criterion1_equation_suite() {
    const auto t0 = Clock::now();
    using namespace wcb;

    // potential engine
    require_near(aging_factor(0.1, 1), 0.1, 1e-9, "aging(0.1,1)");
    require_near(aging_factor(1.0, 7), 1.0, 1e-9, "aging(1,7)");
    require_near(aging_factor(0.5, 2), 0.70710678118654752, 1e-9, "aging(0.5,2)");

    PotentialInputs pi;
    pi.alloc_success = 0;
    pi.alloc_participated = 0;
    pi.skill_count = 0;
    pi.catalog_size = 10;
    pi.aging_constant = 0.1;
    pi.rounds_since_assignment = 1;
    require_near(sigma(pi), 0.1, 1e-9, "sigma newcomer");
    pi.alloc_success = 2;
    pi.alloc_participated = 2;
    pi.skill_count = 10;
    pi.aging_constant = 1.0;
    require_near(sigma(pi), 3.0, 1e-9, "sigma saturated");
    pi.alloc_success = 1;
    pi.alloc_participated = 2;
    pi.skill_count = 7;
    pi.catalog_size = 100;
    pi.aging_constant = 0.5;
    pi.rounds_since_assignment = 2;
    require_near(sigma(pi), 1.27710678118654752, 1e-9, "sigma composite");

    require_near(potential_init(0.0), 0.5, 1e-9, "init(0)");
    require_near(potential_init(3.0), 0.95257412682243322, 1e-9, "init(3)");
    require_near(potential_init(1.27710678118654752), 0.78195688412973065, 1e-9,
                 "init(sigma)");
    require_near(potential_update(0.0, 0.37), 0.37, 1e-9, "update newcomer");
    require_near(potential_update(1.0, 0.3), 1.0, 1e-9, "update saturated");
    require_near(potential_update(0.5, 0.6), 0.8, 1e-9, "update blend");

    // incentive engine
    DividendContext single;
    single.contingency_balance = 100.0;
    single.gamma = 0.5;
    single.cohort_potentials = {{"v1", 0.8}};
    single.recipient_set = {"v1"};
    require_near(dividend("v1", single), 50.0, 1e-9, "dividend single");

    DividendContext pair;
    pair.contingency_balance = 100.0;
    pair.gamma = 0.5;
    pair.cohort_potentials = {{"v1", 0.6}, {"v2", 0.6}};
    pair.recipient_set = {"v1", "v2"};
    require_near(dividend("v1", pair), 25.0, 1e-9, "dividend split");
    require_near(dividend("v2", pair), 25.0, 1e-9, "dividend split");

    DividendContext empty = pair;
    empty.recipient_set = {};
    require_near(total_dividend(empty), 0.0, 1e-9, "dividend no recipients");

    DividendContext trio;
    trio.contingency_balance = 200.0;
    trio.gamma = 0.5;
    trio.cohort_potentials = {{"a", 0.9}, {"b", 0.6}, {"c", 0.3}};
    trio.recipient_set = {"a", "b", "c"};
    require_near(total_dividend(trio), 100.0, 1e-9, "dividend conservation");
    trio.gamma = 0.0;
    require_near(total_dividend(trio), 0.0, 1e-9, "dividend gamma 0");

    VolunteerLedger led;
    update_cumulative_income(led, 39.9, 0.0);
    require_near(led.cumulative_income, 39.9, 1e-9, "ci assigned");
    led.cumulative_income = 100.0;
    update_cumulative_income(led, 0.0, 12.5);
    require_near(led.cumulative_income, 112.5, 1e-9, "ci dividend");
    update_cumulative_income(led, 0.0, 0.0);
    require_near(led.cumulative_income, 112.5, 1e-9, "ci ineligible");

    SatisfactionInputs si;
    si.previous_potential = 0.7;
    si.cohort_max_potential = 0.7;
    si.expense = 10.0;
    si.round = 2;
    si.omega = 0.0;
    require_near(satisfaction(si), 1.0, 1e-9, "sat potential term");
    si.omega = 1.0;
    si.cumulative_income = 10.0;
    require_near(satisfaction(si), 1.0, 1e-9, "sat income term");
    si.omega = 0.5;
    si.previous_potential = 0.56;
    si.cumulative_income = 6.0;
    require_near(satisfaction(si), 0.7, 1e-9, "sat blend");

    ContingencyLedger fund(0.0, 0.5);
    replenish_contingency(fund, 1, std::vector<std::pair<double, double>>{{428.0, 350.0}});
    require_near(fund.balance(), 78.0, 1e-9, "replenish leftover");
    replenish_contingency(fund, 2, {});
    require_near(fund.balance(), 78.0, 1e-9, "replenish empty");
    replenish_contingency(fund, 3,
                          std::vector<std::pair<double, double>>{{10.0, 10.0}, {5.0, 5.0}});
    require_near(fund.balance(), 78.0, 1e-9, "replenish zero leftover");

    const double dt = seconds_since(t0);
    require(dt < 1.0, "equation suite exceeded 1s: " + std::to_string(dt));
}

void criterion2_dividend_conservation() {
    const auto t0 = Clock::now();
    using namespace wcb;
    Rng rng(777);
    for (int it = 0; it < 1000; ++it) {
        const std::size_t n = 1 + rng.bounded(500);
        DividendContext ctx;
        ctx.contingency_balance = rng.uniform(0.0, 1e6);
        ctx.gamma = rng.uniform(0.01, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::string id = "v" + std::to_string(i);
            ctx.cohort_potentials.emplace(id, rng.uniform(1e-9, 1.0));
            ctx.recipient_set.insert(id);
        }
        KahanSum oracle;
        for (const auto& id : ctx.recipient_set) oracle.add(dividend(id, ctx));
        const double expected = ctx.gamma * ctx.contingency_balance;
        require_near(oracle.value(), expected, 1e-9 * std::max(1.0, expected),
                     "cohort " + std::to_string(it));
    }
    const double dt = seconds_since(t0);
    require(dt < 5.0, "conservation fuzz exceeded 5s: " + std::to_string(dt));
}

void criterion3_potential_properties() {
    using namespace wcb;
    Rng rng(778);
    for (int seq = 0; seq < 10000; ++seq) {
        double p = 0.0;
        for (int step = 0; step < 20; ++step) {
            const double next = potential_update(p, potential_init(rng.uniform(0.0, 3.0)));
            require(next >= p, "potential decreased");
            require(next <= 1.0 && next >= 0.0, "potential out of [0,1]");
            p = next;
        }
    }
    for (int it = 0; it < 1000; ++it) {
        const double alpha = rng.uniform(0.001, 1.0);
        const long l = 1 + long(rng.bounded(100000));
        require(aging_factor(alpha, l + 1) >= aging_factor(alpha, l),
                "aging not monotone in l");
    }
}

void criterion4_assignment_safety() {
    using namespace wcb;
    Rng rng(779);
    const UtilityWeights weights;
    const RemunerationPolicy cost{PayKind::cost_coverage, 0.0, 0.0};

    auto random_skills = [&](const SkillCatalog& cat, std::size_t max_k) {
        std::vector<std::string> out;
        const std::size_t k = 1 + rng.bounded(max_k);
        for (std::size_t s = 0; s < k; ++s) out.push_back(cat.name_of(rng.bounded(cat.size())));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };

    auto build_catalog = [](int n) {
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
        return SkillCatalog(names);
    };

    // 1000 fuzzed rounds at the mandated sizes
    const SkillCatalog cat = build_catalog(20);
    for (int it = 0; it < 1000; ++it) {
        std::vector<Task> tasks;
        std::vector<Volunteer> vols;
        const std::size_t nt = 1 + rng.bounded(30);
        const std::size_t nv = 1 + rng.bounded(300);
        for (std::size_t i = 0; i < nt; ++i) {
            Task t;
            t.id = "t" + std::to_string(i);
            t.budget = rng.uniform(0.0, 500.0);
            t.skill_names = random_skills(cat, 12);
            t.arrival_time = rng.uniform(0.0, 50.0);
            t.duration = rng.uniform(0.1, 20.0);
            tasks.push_back(std::move(t));
        }
        for (std::size_t i = 0; i < nv; ++i) {
            Volunteer v;
            v.id = "v" + std::to_string(i);
            v.expense = rng.uniform(0.0, 90.0);
            v.skill_names = random_skills(cat, 10);
            v.departure_time = 1e9;
            v.willingness = rng.uniform01();
            vols.push_back(std::move(v));
        }
        attach_masks(cat, tasks, vols);
        const auto map = assign_round(tasks, vols, weights, cost, 1 + int(rng.bounded(6)));

        std::set<std::string> seen;
        for (const auto& [task_id, entries] : map.entries()) {
            const Task* task = nullptr;
            for (const auto& t : tasks)
                if (t.id == task_id) task = &t;
            require(task != nullptr, "map references unknown task");
            SkillMask covered = SkillMask::empty_for(cat.size());
            double paid = 0.0;
            for (const auto& e : entries) {
                require(seen.insert(e.volunteer_id).second, "volunteer exclusivity");
                const Volunteer* vol = nullptr;
                for (const auto& v : vols)
                    if (v.id == e.volunteer_id) vol = &v;
                require(vol != nullptr, "map references unknown volunteer");
                covered |= vol->skills;
                paid += e.remuneration;
            }
            require(covered.contains_all(task->skills), "incomplete skill coverage");
            require(paid <= task->budget + 1e-9, "budget exceeded");
        }
    }

    // exhaustive feasibility oracle on tiny instances
    const SkillCatalog small_cat = build_catalog(6);
    for (int it = 0; it < 1000; ++it) {
        std::vector<Task> tasks;
        std::vector<Volunteer> vols;
        const std::size_t nt = 1 + rng.bounded(2);
        const std::size_t nv = 1 + rng.bounded(4);
        for (std::size_t i = 0; i < nt; ++i) {
            Task t;
            t.id = "t" + std::to_string(i);
            t.budget = rng.uniform(0.0, 120.0);
            t.skill_names = random_skills(small_cat, 4);
            t.arrival_time = rng.uniform(0.0, 10.0);
            t.duration = 1.0;
            tasks.push_back(std::move(t));
        }
        for (std::size_t i = 0; i < nv; ++i) {
            Volunteer v;
            v.id = "v" + std::to_string(i);
            v.expense = rng.uniform(0.0, 60.0);
            v.skill_names = random_skills(small_cat, 4);
            v.departure_time = 1e9;
            v.willingness = rng.uniform01();
            vols.push_back(std::move(v));
        }
        attach_masks(small_cat, tasks, vols);
        const auto map = assign_round(tasks, vols, weights, cost, 1);
        for (const auto& [task_id, entries] : map.entries()) {
            const Task* task = nullptr;
            for (const auto& t : tasks)
                if (t.id == task_id) task = &t;
            SkillMask covered = SkillMask::empty_for(small_cat.size());
            double paid = 0.0;
            for (const auto& e : entries) {
                for (const auto& v : vols)
                    if (v.id == e.volunteer_id) {
                        covered |= v.skills;
                        paid += v.expense;
                    }
            }
            // the oracle's definition of a feasible bundle
            require(covered.contains_all(task->skills) && paid <= task->budget + 1e-9,
                    "oracle flags greedy bundle as infeasible");
        }
    }
}

void criterion5_retention_semantics() {
    using namespace wcb;
    SkillCatalog cat({"a"});

    auto volunteer = [&](const std::string& id, double expense) {
        Volunteer v;
        v.id = id;
        v.expense = expense;
        v.skill_names = {"a"};
        v.departure_time = 1e9;
        std::vector<Volunteer> vs{v};
        attach_masks(cat, {}, vs);
        return vs[0];
    };
    auto ledger = [](const std::string& id, double prev, double income) {
        VolunteerLedger led;
        led.volunteer_id = id;
        led.previous_potential = prev;
        led.cumulative_income = income;
        return led;
    };

    RetentionConfig cfg;
    cfg.gamma = 0.5;
    cfg.omega = 1.0;

    // strict drop below the threshold; equality retains
    {
        ContingencyLedger fund(0.0, 0.5);
        Volunteer va = volunteer("va", 100.0), vb = volunteer("vb", 100.0);
        VolunteerLedger la = ledger("va", 0.5, 0.0), lb = ledger("vb", 0.5, 74.0);
        std::vector<CohortMember> cohort{{&va, &la}, {&vb, &lb}};
        AllocationMap map(2);
        map.add("t1", "va", 10.0);
        auto out = run_vrave(fund, 2, map, cohort, 0.75, cfg);
        require(out.dropped.count("vb") == 1, "0.74 not dropped at threshold 0.75");

        lb.cumulative_income = 75.0;
        auto out2 = run_vrave(fund, 2, map, cohort, 0.75, cfg);
        require(out2.retained.count("vb") == 1, "0.75 not retained at threshold 0.75");
    }
    // dividend flows before the drop decision
    {
        ContingencyLedger fund(100.0, 0.5);
        Volunteer vb = volunteer("vb", 100.0);
        VolunteerLedger lb = ledger("vb", 0.8, 0.0);
        std::vector<CohortMember> cohort{{&vb, &lb}};
        AllocationMap map(2);
        auto out = run_vrave(fund, 2, map, cohort, 0.75, cfg);
        require(out.dropped.count("vb") == 1, "dividend recipient not dropped");
        require_near(out.total_dividend, 50.0, 1e-9, "dropped volunteer's dividend lost");
        require_near(lb.cumulative_income, 50.0, 1e-9, "dividend not credited before drop");
    }
    // round-1 suppression
    {
        ContingencyLedger fund(100.0, 0.5);
        Volunteer vb = volunteer("vb", 100.0);
        VolunteerLedger lb = ledger("vb", 0.0, 0.0);
        std::vector<CohortMember> cohort{{&vb, &lb}};
        AllocationMap map(1);
        auto out = run_vrave(fund, 1, map, cohort, 0.75, cfg);
        require(!out.evaluated && out.dropped.empty() && out.total_dividend == 0.0,
                "round 1 not suppressed");
    }
    // assigned volunteers are never evaluated
    {
        ContingencyLedger fund(100.0, 0.5);
        Volunteer va = volunteer("va", 1.0), vb = volunteer("vb", 100.0);
        VolunteerLedger la = ledger("va", 0.9, 0.0), lb = ledger("vb", 0.5, 1000.0);
        std::vector<CohortMember> cohort{{&va, &la}, {&vb, &lb}};
        AllocationMap map(2);
        map.add("t1", "va", 1.0);
        auto out = run_vrave(fund, 2, map, cohort, 0.75, cfg);
        require(out.per_volunteer.count("va") == 0, "assigned volunteer evaluated");
        require(out.retained.count("va") == 0 && out.dropped.count("va") == 0,
                "assigned volunteer in the outcome sets");
    }
}

std::string g_cli_path; // set from argv[0]'s directory or WCB_CLI env

void criterion6_cli_determinism() {
    namespace fs = std::filesystem;
    require(!g_cli_path.empty() && fs::exists(g_cli_path),
            "wcb binary not found at '" + g_cli_path + "'");
    const fs::path base = fs::temp_directory_path() / "wcb_acceptance_det";
    fs::remove_all(base);
    fs::create_directories(base);
    const fs::path cfg_path = base / "cfg.json";
    wcb::write_file(cfg_path.string(),
                    "{\"replications\": 3, \"rounds\": 3, \"task_rate\": 1.0, "
                    "\"volunteer_rate\": 10.0, \"rng_seed\": 2024, \"threads\": 2}");
    for (const char* out : {"run1", "run2"}) {
        const std::string cmd = "'" + g_cli_path + "' compare --config '" +
                                cfg_path.string() + "' --out '" +
                                (base / out).string() + "' > /dev/null 2>&1";
        require(std::system(cmd.c_str()) == 0, std::string("wcb compare failed: ") + out);
    }
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(base / "run1")) {
        const fs::path other = base / "run2" / entry.path().filename();
        require(fs::exists(other), "missing file in second run: " +
                                       entry.path().filename().string());
        require(wcb::read_file(entry.path().string()) == wcb::read_file(other.string()),
                "outputs differ: " + entry.path().filename().string());
        ++files;
    }
    require(files >= 14, "expected rounds CSVs + figures + summary, saw " +
                             std::to_string(files));

    // exit-code contract: 1 on validation failure, 2 on i/o failure
    wcb::write_file((base / "bad.json").string(), "{\"roundz\": 1}");
    const std::string bad = "'" + g_cli_path + "' run --config '" +
                            (base / "bad.json").string() + "' --out '" +
                            (base / "x").string() + "' > /dev/null 2>&1";
    int rc = std::system(bad.c_str());
    require(WEXITSTATUS(rc) == 1, "unknown config key must exit 1");
    const std::string missing = "'" + g_cli_path + "' run --config '" +
                                (base / "nope.json").string() + "' --out '" +
                                (base / "x").string() + "' > /dev/null 2>&1";
    rc = std::system(missing.c_str());
    require(WEXITSTATUS(rc) == 2, "missing config file must exit 2");
}

wcb::CompareResult g_compare; // criterion 7 runs it, criterion 9 audits it
bool g_compare_ran = false;

void criterion7_qualitative_bands() {
    const auto t0 = Clock::now();
    wcb::SimulationConfig cfg; // defaults: Table-2 scale, 6 rounds, 50 reps
    g_compare = wcb::compare_policies(cfg);
    g_compare_ran = true;
    const double dt = seconds_since(t0);

    // paired design: identical seeds across the four policies
    for (const auto& b : g_compare.bundles)
        for (std::size_t k = 0; k < b.replications.size(); ++k)
            require(b.replications[k].seed == (cfg.rng_seed ^ std::uint64_t(k)),
                    "unpaired replication seed");

    bool all_pass = true;
    std::string failing;
    for (const auto& band : g_compare.bands) {
        std::printf("         band %-22s %s (%s)\n", band.name.c_str(),
                    band.pass ? "PASS" : "FAIL", band.observed.c_str());
        if (!band.pass) {
            all_pass = false;
            failing += (failing.empty() ? "" : ", ") + band.name;
        }
    }
    // failing bands must be flagged with observations in the report
    const std::string summary = wcb::summary_json(g_compare);
    for (const auto& band : g_compare.bands)
        if (!band.pass)
            require(summary.find(band.name) != std::string::npos &&
                        summary.find(band.observed) != std::string::npos,
                    "failing band not flagged in summary.json");

    require(dt < 300.0, "compare exceeded the 5-minute budget: " + std::to_string(dt));
    require(all_pass, "band(s) outside the acceptance contract: " + failing);
}

void criterion8_calibration() {
    using namespace wcb;
    auto cal = calibrate_from_pool({0.7, 0.8, 0.9}, 0.05);
    require(cal.threshold == 0.8 - 0.05, "hand pool: threshold != median - offset");

    SimulationConfig cfg; // default synthetic config
    CalibrationResult full = calibrate_threshold(cfg, 0.05);
    std::printf("         calibrate: threshold=%.4f median=%.4f iqr=%.4f pool=%ld\n",
                full.threshold, full.median, full.iqr, full.pool_size);
    require(full.pool_size > 0, "empty satisfaction pool");
    require(full.iqr >= 0.0, "IQR not reported");
    require(full.threshold > 0.5 && full.threshold < 0.95,
            "threshold outside (0.5, 0.95): " + std::to_string(full.threshold));
}

void criterion9_money_conservation() {
    require(g_compare_ran, "criterion 7 must run first");
    for (const auto& bundle : g_compare.bundles)
        for (const auto& rep : bundle.replications)
            require(rep.conservation_error <= 1e-6,
                    bundle.policy + " replication " + std::to_string(rep.replication) +
                        " leaks " + std::to_string(rep.conservation_error));
}

} // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("WCB_CLI")) g_cli_path = env;
#ifdef WCB_CLI_PATH
    if (g_cli_path.empty()) g_cli_path = WCB_CLI_PATH;
#endif
    (void)argc;
    (void)argv;

    struct Entry {
        const char* name;
        std::function<void()> fn;
    };
    const std::vector<Entry> criteria = {
        {"criterion 1: equation unit suite (1e-9, <1s)", criterion1_equation_suite},
        {"criterion 2: dividend conservation, 1000 fuzzed cohorts (<5s)",
         criterion2_dividend_conservation},
        {"criterion 3: potential monotonicity and bounds", criterion3_potential_properties},
        {"criterion 4: assignment safety + exhaustive oracle", criterion4_assignment_safety},
        {"criterion 5: retention pass semantics", criterion5_retention_semantics},
        {"criterion 6: byte-identical compare runs", criterion6_cli_determinism},
        {"criterion 7: qualitative reproduction bands", criterion7_qualitative_bands},
        {"criterion 8: threshold calibration", criterion8_calibration},
        {"criterion 9: money conservation per replication", criterion9_money_conservation},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = Clock::now();
        try {
            c.fn();
            std::printf("[PASS] %s (%.2fs)\n", c.name, seconds_since(t0));
        } catch (const Failure& f) {
            std::printf("[FAIL] %s (%.2fs): %s\n", c.name, seconds_since(t0),
                        f.what.c_str());
            ++failures;
        } catch (const std::exception& e) {
            std::printf("[FAIL] %s (%.2fs): unexpected error: %s\n", c.name,
                        seconds_since(t0), e.what());
            ++failures;
        }
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures,
                criteria.size());
    return failures;
}
