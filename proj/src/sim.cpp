#include "wcb/sim.hpp"

#include "wcb/incentive.hpp"
#include "wcb/kernels.hpp"
#include "wcb/potential.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

namespace wcb {

namespace {

// Synthetic distribution shapes. Means mirror the evaluation setup the
// framework targets; the shapes around them are our own and are echoed into
// every summary's generator metadata.
constexpr double kTaskSkillMean = 10.0;      // Poisson, truncated >= 1
constexpr double kVolunteerSkillMean = 7.0;  // Poisson, truncated >= 1
constexpr double kExpenseMean = 39.9;        // Normal
constexpr double kExpenseSigma = 8.0;
constexpr double kExpenseMin = 1.0;
constexpr double kExpenseMax = 72.0;         // mean + 4 sigma
constexpr double kBudgetMean = 428.0;        // Normal
constexpr double kBudgetSigma = 80.0;
constexpr double kBudgetMin = kExpenseMax;   // any single volunteer is affordable
constexpr double kDurationMean = 7.5;        // Exponential

double truncated_normal(Rng& rng, double mu, double sigma, double lo, double hi) {
    for (;;) {
        const double x = rng.normal(mu, sigma);
        if (x >= lo && x <= hi) return x;
    }
}

long truncated_poisson_min1(Rng& rng, double lambda, long cap) {
    for (;;) {
        const long k = rng.poisson(lambda);
        if (k >= 1) return std::min(k, cap);
    }
}

std::vector<std::string> pick_skills(Rng& rng, const SkillCatalog& catalog, long count) {
    std::vector<int> idx(catalog.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = int(i);
    std::vector<std::string> out;
    out.reserve(std::size_t(count));
    for (long k = 0; k < count; ++k) {
        const std::size_t j = std::size_t(k) + rng.bounded(idx.size() - std::size_t(k));
        std::swap(idx[std::size_t(k)], idx[j]);
        out.push_back(catalog.name_of(std::size_t(idx[std::size_t(k)])));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string seq_id(char prefix, std::size_t n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%c%06zu", prefix, n);
    return buf;
}

SkillCatalog synthetic_catalog(int size) {
    std::vector<std::string> names;
    names.reserve(std::size_t(size));
    for (int i = 0; i < size; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "s%03d", i);
        names.emplace_back(buf);
    }
    return SkillCatalog(std::move(names));
}

} // namespace

SimPolicy resolve_policy(const SimulationConfig& cfg, const std::string& name,
                         double derived_base) {
    // Training opens at twice the cost anchor and decays toward a token
    // payment; increasing opens at the anchor and grows to twice it by the
    // final round of the default horizon. Fixed always pays the volunteer's
    // own expense.
    const double anchor = cfg.policy_base > 0.0 ? cfg.policy_base : derived_base;
    const double training_slope =
        cfg.policy_slope >= 0.0 ? cfg.policy_slope : anchor / 3.0;
    const double increasing_slope =
        cfg.policy_slope >= 0.0 ? cfg.policy_slope : anchor / 5.0;
    SimPolicy p;
    p.name = name;
    if (name == "vrave") {
        p.remuneration = {PayKind::cost_coverage, 0.0, 0.0};
        p.run_retention = true;
        p.pay_dividends = true;
        p.attrition = true;
    } else if (name == "fixed") {
        p.remuneration = {PayKind::fixed, 0.0, 0.0};
        p.attrition = cfg.baseline_attrition;
    } else if (name == "training") {
        p.remuneration = {PayKind::training, 2.0 * anchor, training_slope};
        p.attrition = cfg.baseline_attrition;
    } else if (name == "increasing") {
        p.remuneration = {PayKind::increasing, anchor, increasing_slope};
        p.attrition = cfg.baseline_attrition;
    } else {
        throw DataError("unknown policy '" + name + "'");
    }
    return p;
}

std::vector<double> poisson_arrival_stamps(double rate, double span, Rng& rng) {
    if (!(rate > 0.0)) throw std::invalid_argument("arrival rate must be > 0");
    std::vector<double> stamps;
    if (span <= 0.0) return stamps;
    const double whole_units = std::floor(span);
    for (double u = 0.0; u < whole_units; u += 1.0) {
        const long n = rng.poisson(rate);
        for (long i = 0; i < n; ++i) stamps.push_back(u + rng.uniform01());
    }
    const double frac = span - whole_units;
    if (frac > 0.0) {
        const long n = rng.poisson(rate * frac);
        for (long i = 0; i < n; ++i) stamps.push_back(whole_units + frac * rng.uniform01());
    }
    std::sort(stamps.begin(), stamps.end());
    return stamps;
}

ReplicationWorld generate_world(const SimulationConfig& cfg, const Dataset* dataset,
                                std::uint64_t seed) {
    ReplicationWorld world;
    Rng rng(seed);
    const double span = double(cfg.rounds) * cfg.round_length;

    if (dataset && cfg.arrival_mode == "dataset") {
        // Replay the dataset's own stamps; replications are identical by design.
        world.catalog = dataset->catalog;
        world.tasks = dataset->tasks;
        world.volunteers = dataset->volunteers;
    } else if (dataset) {
        world.catalog = dataset->catalog;
        if (dataset->tasks.empty() || dataset->volunteers.empty())
            throw DataError("dataset template must contain at least one task and volunteer");
        const auto task_stamps = poisson_arrival_stamps(cfg.task_rate, span, rng);
        world.tasks.reserve(task_stamps.size());
        for (std::size_t i = 0; i < task_stamps.size(); ++i) {
            Task t = dataset->tasks[rng.bounded(dataset->tasks.size())];
            t.id = seq_id('t', i);
            t.arrival_time = task_stamps[i];
            world.tasks.push_back(std::move(t));
        }
        const auto vol_stamps = poisson_arrival_stamps(cfg.volunteer_rate, span, rng);
        world.volunteers.reserve(vol_stamps.size());
        for (std::size_t i = 0; i < vol_stamps.size(); ++i) {
            Volunteer v = dataset->volunteers[rng.bounded(dataset->volunteers.size())];
            v.id = seq_id('v', i);
            const double stay = v.departure_time > v.arrival_time
                                    ? v.departure_time - v.arrival_time
                                    : rng.exponential(cfg.volunteer_stay_mean);
            v.arrival_time = vol_stamps[i];
            v.departure_time = vol_stamps[i] + stay;
            world.volunteers.push_back(std::move(v));
        }
    } else {
        world.catalog = synthetic_catalog(cfg.catalog_size);
        const auto task_stamps = poisson_arrival_stamps(cfg.task_rate, span, rng);
        world.tasks.reserve(task_stamps.size());
        for (std::size_t i = 0; i < task_stamps.size(); ++i) {
            Task t;
            t.id = seq_id('t', i);
            t.arrival_time = task_stamps[i];
            t.budget = truncated_normal(rng, kBudgetMean, kBudgetSigma, kBudgetMin, 1e9);
            t.duration = rng.exponential(kDurationMean);
            if (t.duration <= 0.0) t.duration = 1e-9;
            t.skill_names = pick_skills(
                rng, world.catalog,
                truncated_poisson_min1(rng, kTaskSkillMean, long(world.catalog.size())));
            world.tasks.push_back(std::move(t));
        }
        const auto vol_stamps = poisson_arrival_stamps(cfg.volunteer_rate, span, rng);
        world.volunteers.reserve(vol_stamps.size());
        for (std::size_t i = 0; i < vol_stamps.size(); ++i) {
            Volunteer v;
            v.id = seq_id('v', i);
            v.arrival_time = vol_stamps[i];
            v.departure_time = vol_stamps[i] + rng.exponential(cfg.volunteer_stay_mean);
            v.expense = truncated_normal(rng, kExpenseMean, kExpenseSigma, kExpenseMin,
                                         kExpenseMax);
            v.skill_names = pick_skills(
                rng, world.catalog,
                truncated_poisson_min1(rng, kVolunteerSkillMean, long(world.catalog.size())));
            v.willingness = rng.uniform01();
            v.bias = rng.uniform01();
            v.rating = rng.uniform01();
            world.volunteers.push_back(std::move(v));
        }
        attach_masks(world.catalog, world.tasks, world.volunteers);
    }

    auto by_arrival_then_id = [](const auto& a, const auto& b) {
        if (a.arrival_time != b.arrival_time) return a.arrival_time < b.arrival_time;
        return a.id < b.id;
    };
    std::sort(world.tasks.begin(), world.tasks.end(), by_arrival_then_id);
    std::sort(world.volunteers.begin(), world.volunteers.end(), by_arrival_then_id);

    if (dataset) {
        KahanSum s;
        for (const auto& v : dataset->volunteers) s.add(v.expense);
        world.mean_expense =
            dataset->volunteers.empty() ? kExpenseMean
                                        : s.value() / double(dataset->volunteers.size());
    } else {
        world.mean_expense = kExpenseMean;
    }
    return world;
}

Dataset generate_dataset(int tasks, int volunteers, int catalog_size, double span,
                         double stay_mean, std::uint64_t seed) {
    if (tasks < 0 || volunteers < 0) throw DataError("gen: counts must be >= 0");
    if (catalog_size < 1) throw DataError("gen: catalog size must be >= 1");
    if (!(span > 0.0)) throw DataError("gen: span must be > 0");
    if (!(stay_mean > 0.0)) throw DataError("gen: stay mean must be > 0");
    Dataset ds;
    ds.catalog = synthetic_catalog(catalog_size);
    Rng rng(seed);
    ds.tasks.reserve(std::size_t(tasks));
    for (int i = 0; i < tasks; ++i) {
        Task t;
        t.id = seq_id('t', std::size_t(i));
        t.arrival_time = rng.uniform(0.0, span);
        t.budget = truncated_normal(rng, kBudgetMean, kBudgetSigma, kBudgetMin, 1e9);
        t.duration = rng.exponential(kDurationMean);
        if (t.duration <= 0.0) t.duration = 1e-9;
        t.skill_names = pick_skills(
            rng, ds.catalog, truncated_poisson_min1(rng, kTaskSkillMean, catalog_size));
        ds.tasks.push_back(std::move(t));
    }
    ds.volunteers.reserve(std::size_t(volunteers));
    for (int i = 0; i < volunteers; ++i) {
        Volunteer v;
        v.id = seq_id('v', std::size_t(i));
        v.arrival_time = rng.uniform(0.0, span);
        v.departure_time = v.arrival_time + rng.exponential(stay_mean);
        v.expense = truncated_normal(rng, kExpenseMean, kExpenseSigma, kExpenseMin,
                                     kExpenseMax);
        v.skill_names = pick_skills(
            rng, ds.catalog, truncated_poisson_min1(rng, kVolunteerSkillMean, catalog_size));
        v.willingness = rng.uniform01();
        v.bias = rng.uniform01();
        v.rating = rng.uniform01();
        ds.volunteers.push_back(std::move(v));
    }
    attach_masks(ds.catalog, ds.tasks, ds.volunteers);
    return ds;
}

namespace {

struct OpenTask {
    const Task* task = nullptr;
    double deadline = 0.0; // admission boundary + duration
};

struct ActiveVolunteer {
    const Volunteer* volunteer = nullptr;
    VolunteerLedger ledger;
    double skill_ratio = 0.0;
};

struct RefreshBuffers {
    std::vector<double> successes, participations, skill_ratio, alpha, rounds_since,
        previous, out;
};

void refresh_potentials(std::vector<ActiveVolunteer>& active, RefreshBuffers& buf) {
    const std::size_t n = active.size();
    if (n == 0) return;
    buf.successes.resize(n);
    buf.participations.resize(n);
    buf.skill_ratio.resize(n);
    buf.alpha.resize(n);
    buf.rounds_since.resize(n);
    buf.previous.resize(n);
    buf.out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& led = active[i].ledger;
        buf.successes[i] = double(led.alloc_success);
        buf.participations[i] = double(led.alloc_participated);
        buf.skill_ratio[i] = active[i].skill_ratio;
        buf.alpha[i] = led.aging_constant;
        buf.rounds_since[i] = double(led.rounds_since_assignment);
        buf.previous[i] = led.potential;
    }
    kernels::PotentialBatch batch{n,
                                  buf.successes.data(),
                                  buf.participations.data(),
                                  buf.skill_ratio.data(),
                                  buf.alpha.data(),
                                  buf.rounds_since.data(),
                                  buf.previous.data()};
    kernels::active_ops().potential_refresh(batch, buf.out.data());
    for (std::size_t i = 0; i < n; ++i) {
        active[i].ledger.previous_potential = active[i].ledger.potential;
        active[i].ledger.potential = buf.out[i];
    }
}

std::size_t find_active(const std::vector<ActiveVolunteer>& active, const std::string& id) {
    auto it = std::lower_bound(active.begin(), active.end(), id,
                               [](const ActiveVolunteer& a, const std::string& key) {
                                   return a.ledger.volunteer_id < key;
                               });
    if (it == active.end() || it->ledger.volunteer_id != id)
        throw SimAbort("internal: assigned volunteer '" + id + "' not found in active set");
    return std::size_t(it - active.begin());
}

} // namespace

ReplicationResult run_replication(const ReplicationWorld& world,
                                  const SimulationConfig& cfg, const SimPolicy& policy,
                                  const RunOptions& opt, int replication,
                                  std::uint64_t seed) {
    ReplicationResult res;
    res.replication = replication;
    res.seed = seed;

    ContingencyLedger contingency(cfg.initial_contingency, cfg.gamma);
    std::vector<OpenTask> open;
    std::vector<ActiveVolunteer> active;
    std::size_t next_task = 0, next_vol = 0;
    RefreshBuffers buf;
    std::set<std::string> ever_retained;

    KahanSum payments, dividends, completed_budget;

    RetentionConfig retention_cfg;
    retention_cfg.gamma = cfg.gamma;
    retention_cfg.omega = cfg.omega;
    retention_cfg.eligibility = cfg.dividend_eligibility;
    retention_cfg.pay_dividends = policy.pay_dividends;

    const bool act_on_drops =
        (policy.run_retention || policy.attrition) && !opt.disable_retention;

    for (int round = 1; round <= cfg.rounds; ++round) {
        const double now = double(round) * cfg.round_length;
        RoundAudit audit;
        audit.round = round;

        // -- arrivals, expirations, departures -------------------------------
        {
            const auto before = open.size();
            std::erase_if(open, [&](const OpenTask& t) { return t.deadline <= now; });
            audit.expired_tasks = long(before - open.size());
        }
        {
            const auto before = active.size();
            std::erase_if(active, [&](const ActiveVolunteer& a) {
                return a.volunteer->departure_time <= now;
            });
            audit.departed = long(before - active.size());
        }
        while (next_task < world.tasks.size() && world.tasks[next_task].arrival_time < now) {
            const Task& t = world.tasks[next_task++];
            open.push_back(OpenTask{&t, now + t.duration});
        }
        bool admitted_any = false;
        while (next_vol < world.volunteers.size() &&
               world.volunteers[next_vol].arrival_time < now) {
            const Volunteer& v = world.volunteers[next_vol++];
            if (v.departure_time <= now) continue; // gone before ever seen at a boundary
            ActiveVolunteer a;
            a.volunteer = &v;
            a.ledger.volunteer_id = v.id;
            a.ledger.aging_constant = cfg.newcomer_alpha;
            a.skill_ratio = double(popcount(v.skills)) / double(world.catalog.size());
            active.push_back(std::move(a));
            ++audit.admitted;
            admitted_any = true;
        }
        if (admitted_any)
            std::sort(active.begin(), active.end(),
                      [](const ActiveVolunteer& a, const ActiveVolunteer& b) {
                          return a.ledger.volunteer_id < b.ledger.volunteer_id;
                      });

        // -- potential refresh ------------------------------------------------
        refresh_potentials(active, buf);

        // -- assignment -------------------------------------------------------
        std::vector<const Task*> open_tasks;
        open_tasks.reserve(open.size());
        for (const auto& ot : open) open_tasks.push_back(ot.task);
        std::vector<const Volunteer*> pool;
        pool.reserve(active.size());
        for (const auto& a : active) pool.push_back(a.volunteer);

        AllocationMap map = assign_round(std::span<const Task* const>(open_tasks),
                                         std::span<const Volunteer* const>(pool),
                                         cfg.weights, policy.remuneration, round);

        // -- payments, completions, replenishment ----------------------------
        std::map<std::string, const Task*> open_by_id;
        for (const auto& ot : open) open_by_id.emplace(ot.task->id, ot.task);
        std::vector<std::pair<double, double>> completed; // (budget, paid)
        double round_pay = 0.0;
        for (const auto& [task_id, entries] : map.entries()) {
            double paid_total = 0.0;
            for (const auto& e : entries) {
                const std::size_t idx = find_active(active, e.volunteer_id);
                update_cumulative_income(active[idx].ledger, e.remuneration, 0.0);
                payments.add(e.remuneration);
                round_pay += e.remuneration;
                paid_total += e.remuneration;
            }
            auto it = open_by_id.find(task_id);
            if (it == open_by_id.end()) throw SimAbort("internal: assigned task not open");
            completed.emplace_back(it->second->budget, paid_total);
            completed_budget.add(it->second->budget);
        }
        if (!completed.empty()) {
            replenish_contingency(contingency, round, completed);
            std::erase_if(open, [&](const OpenTask& t) { return map.entries_for(t.task->id); });
        }

        // -- retention / satisfaction measurement -----------------------------
        std::vector<CohortMember> cohort;
        cohort.reserve(active.size());
        for (auto& a : active)
            cohort.push_back(CohortMember{a.volunteer, &a.ledger});
        RetentionOutcome outcome =
            run_vrave(contingency, round, map, cohort, cfg.threshold, retention_cfg);

        if (outcome.total_dividend > 0.0) {
            dividends.add(outcome.total_dividend);
            contingency.deduct_dividends(round, outcome.total_dividend);
        }

        if (act_on_drops && !outcome.dropped.empty()) {
            std::erase_if(active, [&](const ActiveVolunteer& a) {
                return outcome.dropped.count(a.ledger.volunteer_id) != 0;
            });
            audit.actual_drops = long(outcome.dropped.size());
        }
        if (opt.keep_maps)
            res.dropped_ids.push_back(act_on_drops ? outcome.dropped
                                                   : std::set<std::string>{});

        // -- ledger updates ----------------------------------------------------
        {
            for (auto& a : active) {
                const bool was_assigned = map.has_volunteer(a.ledger.volunteer_id);
                a.ledger.alloc_participated += 1;
                if (was_assigned) {
                    a.ledger.alloc_success += 1;
                    a.ledger.rounds_since_assignment = 1;
                    a.ledger.consecutive_unassigned = 0;
                } else {
                    a.ledger.rounds_since_assignment += 1;
                    a.ledger.consecutive_unassigned += 1;
                }
                if (a.ledger.is_newcomer && a.ledger.alloc_participated > 0) {
                    a.ledger.is_newcomer = false;
                    a.ledger.aging_constant = cfg.alpha;
                }
            }
        }

        // -- report -------------------------------------------------------------
        RoundReport rep;
        rep.round = round;
        rep.policy = policy.name;
        rep.completed_tasks = long(completed.size());
        rep.newcomers_admitted = audit.admitted;
        rep.total_dividend = outcome.total_dividend;
        rep.contingency_balance = contingency.balance();

        long div_recipients = 0;
        if (outcome.evaluated) {
            ever_retained.insert(outcome.retained.begin(), outcome.retained.end());
            std::vector<double> scores;
            scores.reserve(outcome.per_volunteer.size());
            for (const auto& [id, dec] : outcome.per_volunteer) {
                scores.push_back(dec.satisfaction);
                if (dec.dividend > 0.0) ++div_recipients;
            }
            const SummaryStats st = summarize(scores);
            rep.satisfaction_mean = st.mean;
            rep.satisfaction_median = st.median;
            rep.satisfaction_iqr = st.iqr;
            rep.retained = long(outcome.retained.size());
            rep.dropped = long(outcome.dropped.size());
            for (double s : scores) {
                res.sat_sum += s;
                ++res.sat_count;
                if (opt.collect_scores) res.satisfaction_scores.push_back(s);
            }
        }
        const double heads = double(map.volunteer_count()) + double(div_recipients);
        rep.avg_remuneration =
            heads > 0.0 ? (round_pay + outcome.total_dividend) / heads : 0.0;

        res.total_retained += rep.retained;
        res.total_dropped += rep.dropped;
        res.total_completed += rep.completed_tasks;
        res.paid_money += round_pay + outcome.total_dividend;
        res.paid_heads += heads;

        audit.active_end = long(active.size());
        audit.open_tasks_end = long(open.size());
        res.audits.push_back(audit);
        res.rounds.push_back(std::move(rep));
        if (opt.keep_maps) res.maps.push_back(std::move(map));
    }

    res.distinct_retained = long(ever_retained.size());
    res.total_payments = payments.value();
    res.total_dividends = dividends.value();
    res.total_completed_budget = completed_budget.value();
    res.final_contingency = contingency.balance();
    const double lhs = cfg.initial_contingency + res.total_completed_budget;
    const double rhs = res.total_payments + res.total_dividends + res.final_contingency;
    res.conservation_error = std::fabs(lhs - rhs);
    return res;
}

PolicyAggregate aggregate_results(const std::string& policy,
                                  std::span<const ReplicationResult> reps) {
    PolicyAggregate agg;
    agg.policy = policy;
    std::vector<double> retained, retained_distinct, completed, avg_rem, sat_means, dividends;
    double pool_sum = 0.0;
    long pool_count = 0;
    for (const auto& r : reps) {
        retained.push_back(double(r.total_retained));
        retained_distinct.push_back(double(r.distinct_retained));
        completed.push_back(double(r.total_completed));
        avg_rem.push_back(r.paid_heads > 0.0 ? r.paid_money / r.paid_heads : 0.0);
        sat_means.push_back(r.sat_count > 0 ? r.sat_sum / double(r.sat_count) : 0.0);
        dividends.push_back(r.total_dividends);
        pool_sum += r.sat_sum;
        pool_count += r.sat_count;
        agg.max_conservation_error = std::max(agg.max_conservation_error,
                                              r.conservation_error);
    }
    agg.retained = summarize(retained);
    agg.retained_distinct = summarize(retained_distinct);
    agg.completed = summarize(completed);
    agg.avg_remuneration = summarize(avg_rem);
    agg.satisfaction = summarize(sat_means);
    agg.satisfaction_pooled_mean = pool_count > 0 ? pool_sum / double(pool_count) : 0.0;
    agg.satisfaction_pooled_count = pool_count;
    agg.dividends_mean = mean(dividends);
    return agg;
}

ExperimentBundle run_experiment(const SimulationConfig& cfg, const ExperimentOptions& opt) {
    validate_config(cfg);
    if (!kernels::set_backend(cfg.kernel_backend))
        throw DataError("kernel backend '" + cfg.kernel_backend +
                        "' is unavailable on this machine");

    Dataset loaded;
    const Dataset* dataset = opt.dataset;
    if (!dataset && !cfg.tasks_csv.empty()) {
        loaded = load_dataset(cfg.tasks_csv, cfg.volunteers_csv);
        dataset = &loaded;
    }
    if (cfg.arrival_mode == "dataset" && !dataset)
        throw DataError("arrival_mode 'dataset' requires tasks_csv and volunteers_csv");

    const std::string policy_name = opt.policy.empty() ? cfg.policy : opt.policy;

    ExperimentBundle bundle;
    bundle.config = cfg;
    bundle.policy = policy_name;
    bundle.retention_disabled = opt.disable_retention;
    bundle.kernel_backend = kernels::active_ops().name;
    bundle.replications.resize(std::size_t(cfg.replications));

    RunOptions ropt;
    ropt.disable_retention = opt.disable_retention;
    ropt.keep_maps = opt.keep_maps;
    ropt.collect_scores = opt.collect_scores;

    const int hw = int(std::thread::hardware_concurrency());
    const int workers =
        std::max(1, std::min(cfg.threads > 0 ? cfg.threads : (hw > 0 ? hw : 1),
                             cfg.replications));

    std::atomic<int> cursor{0};
    std::vector<std::string> errors(std::size_t(cfg.replications));
    std::atomic<bool> failed{false};

    auto work = [&]() {
        for (;;) {
            const int k = cursor.fetch_add(1);
            if (k >= cfg.replications) return;
            try {
                const std::uint64_t seed = cfg.rng_seed ^ std::uint64_t(k);
                const ReplicationWorld world = generate_world(cfg, dataset, seed);
                const SimPolicy policy = resolve_policy(cfg, policy_name, world.mean_expense);
                bundle.replications[std::size_t(k)] =
                    run_replication(world, cfg, policy, ropt, k, seed);
            } catch (const std::exception& e) {
                errors[std::size_t(k)] = e.what();
                failed.store(true);
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(std::size_t(workers));
        for (int i = 0; i < workers; ++i) threads.emplace_back(work);
        for (auto& t : threads) t.join();
    }

    if (failed.load()) {
        for (std::size_t k = 0; k < errors.size(); ++k)
            if (!errors[k].empty())
                throw SimAbort("replication " + std::to_string(k) + " failed: " + errors[k]);
    }

    bundle.aggregate = aggregate_results(policy_name, bundle.replications);
    return bundle;
}

} // namespace wcb
