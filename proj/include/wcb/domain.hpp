#pragma once
// Core value types of the volunteer-crowdsourcing simulation: the universal
// skill catalog, tasks, volunteers, per-volunteer ledgers, per-round
// allocation maps and the platform contingency fund.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace wcb {

// Bitmask over catalog skill indices. The catalog is fixed for a run, so the
// word count is uniform across all masks of one world.
struct SkillMask {
    std::vector<std::uint64_t> words;

    static SkillMask empty_for(std::size_t catalog_size) {
        SkillMask m;
        m.words.assign((catalog_size + 63) / 64, 0);
        return m;
    }
    bool resolved() const { return !words.empty(); }
    void set(std::size_t bit) { words[bit / 64] |= (std::uint64_t(1) << (bit % 64)); }
    bool test(std::size_t bit) const { return (words[bit / 64] >> (bit % 64)) & 1u; }

    SkillMask& operator|=(const SkillMask& o) {
        for (std::size_t i = 0; i < words.size(); ++i) words[i] |= o.words[i];
        return *this;
    }
    bool contains_all(const SkillMask& o) const {
        for (std::size_t i = 0; i < words.size(); ++i)
            if ((o.words[i] & ~words[i]) != 0) return false;
        return true;
    }
    bool none() const {
        for (auto w : words)
            if (w) return false;
        return true;
    }
    friend bool operator==(const SkillMask&, const SkillMask&) = default;
};

std::size_t popcount(const SkillMask& m);
std::size_t intersect_count(const SkillMask& a, const SkillMask& b);
// |a & ~b|: skills of `a` not yet present in `b`.
std::size_t uncovered_count(const SkillMask& a, const SkillMask& b);

// Ordered universal skill set; immutable once a simulation starts.
class SkillCatalog {
public:
    SkillCatalog() = default;
    // Throws std::invalid_argument on empty input, duplicates, or identifiers
    // containing CSV-hostile characters (',', '|', '"', newline).
    explicit SkillCatalog(std::vector<std::string> skills);

    std::size_t size() const { return skills_.size(); }
    const std::vector<std::string>& skills() const { return skills_; }
    std::optional<std::size_t> index_of(const std::string& skill) const;
    const std::string& name_of(std::size_t idx) const { return skills_[idx]; }

private:
    std::vector<std::string> skills_;
    std::map<std::string, std::size_t> index_;
};

// Tasks and volunteers keep their skill sets as identifier lists (what the
// CSV schemas carry); the bitmask is a derived view attached once the catalog
// is known. attach_masks() below fills it.
struct Task {
    std::string id;
    double budget = 0.0;                  // B_t, dollars
    std::vector<std::string> skill_names; // S_t
    double arrival_time = 0.0;            // delta_t
    double duration = 0.0;                // e_t, > 0
    SkillMask skills;                     // derived

    double expiration_time() const { return arrival_time + duration; }
};

struct Volunteer {
    std::string id;
    double expense = 0.0;                 // C_v, dollars, task-independent
    std::vector<std::string> skill_names; // S_v
    double arrival_time = 0.0;
    double departure_time = 0.0;
    double willingness = 0.0;             // [0,1]
    double bias = 0.0;                    // [0,1]; carried for the utility hook
    double rating = 0.0;                  // [0,1]; carried for the utility hook
    SkillMask skills;                     // derived
};

// Resolve skill-name lists into catalog masks. Throws std::invalid_argument
// on skills missing from the catalog (validate first to get a report instead).
void attach_masks(const SkillCatalog& catalog, std::span<Task> tasks,
                  std::span<Volunteer> volunteers);

// Running per-volunteer history. `potential` is the value refreshed at the
// start of the current round; `previous_potential` is the value it replaced,
// which is what dividends and satisfaction read.
struct VolunteerLedger {
    std::string volunteer_id;
    long alloc_success = 0;
    long alloc_participated = 0;
    long rounds_since_assignment = 1;   // l_v, >= 1 from the first evaluation
    long consecutive_unassigned = 0;
    double potential = 0.0;             // [0,1]
    double previous_potential = 0.0;    // [0,1]
    double cumulative_income = 0.0;     // >= 0
    double aging_constant = 0.1;        // newcomers 0.1, veterans the configured alpha
    bool is_newcomer = true;            // true iff alloc_participated == 0
};

// Per-round mapping task -> assigned volunteers with their remunerations.
// Construction enforces that no volunteer appears under two tasks.
class AllocationMap {
public:
    struct Entry {
        std::string volunteer_id;
        double remuneration = 0.0;  // RW_v
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    explicit AllocationMap(int round = 0) : round_(round) {}

    int round() const { return round_; }
    // Throws std::invalid_argument if the volunteer is already assigned.
    void add(const std::string& task_id, std::string volunteer_id, double remuneration);

    bool has_volunteer(const std::string& volunteer_id) const {
        return assigned_.count(volunteer_id) != 0;
    }
    bool empty() const { return entries_.empty(); }
    std::size_t task_count() const { return entries_.size(); }
    std::size_t volunteer_count() const { return assigned_.size(); }

    const std::vector<Entry>* entries_for(const std::string& task_id) const;
    const std::map<std::string, std::vector<Entry>>& entries() const { return entries_; }
    const std::set<std::string>& assigned_volunteers() const { return assigned_; }

    double total_paid(const std::string& task_id) const;

private:
    int round_ = 0;
    std::map<std::string, std::vector<Entry>> entries_;
    std::set<std::string> assigned_;
};

// Platform reserve fed by leftover task budgets, drained by dividends.
class ContingencyLedger {
public:
    struct Flow {
        int round = 0;
        double inflow = 0.0;
        double dividend_outflow = 0.0;
    };

    explicit ContingencyLedger(double initial = 0.0, double gamma = 0.5);

    double balance() const { return balance_; }
    double gamma() const { return gamma_; }
    const std::vector<Flow>& history() const { return history_; }

    void record_inflow(int round, double amount);
    // Throws std::domain_error if the deduction would drive the balance
    // negative (beyond rounding slack).
    void deduct_dividends(int round, double amount);

private:
    double balance_ = 0.0;
    double gamma_ = 0.5;
    std::vector<Flow> history_;
};

struct ValidationIssue {
    std::string entity;   // "catalog" | "task" | "volunteer"
    std::string id;
    std::string message;
};

// Checks every type invariant over a whole world description; violations are
// data, not errors. Works on unresolved entities (mask checks are skipped
// until attach_masks has run).
std::vector<ValidationIssue> validate_world(const SkillCatalog& catalog,
                                            std::span<const Task> tasks,
                                            std::span<const Volunteer> volunteers);

} // namespace wcb
