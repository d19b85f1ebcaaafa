#include "wcb/domain.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace wcb {

namespace {
constexpr double kMoneyTol = 1e-9;

bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c == ',' || c == '|' || c == '"' || c == '\n' || c == '\r') return false;
    return true;
}

SkillMask mask_from_names(const SkillCatalog& catalog, const std::string& owner,
                          std::span<const std::string> names) {
    SkillMask m = SkillMask::empty_for(catalog.size());
    for (const auto& name : names) {
        auto idx = catalog.index_of(name);
        if (!idx)
            throw std::invalid_argument("'" + owner + "' references unknown skill '" + name + "'");
        m.set(*idx);
    }
    return m;
}
} // namespace

std::size_t popcount(const SkillMask& m) {
    std::size_t n = 0;
    for (auto w : m.words) n += std::size_t(std::popcount(w));
    return n;
}

std::size_t intersect_count(const SkillMask& a, const SkillMask& b) {
    std::size_t n = 0;
    const std::size_t k = std::min(a.words.size(), b.words.size());
    for (std::size_t i = 0; i < k; ++i) n += std::size_t(std::popcount(a.words[i] & b.words[i]));
    return n;
}

std::size_t uncovered_count(const SkillMask& a, const SkillMask& b) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.words.size(); ++i) {
        const std::uint64_t bw = i < b.words.size() ? b.words[i] : 0;
        n += std::size_t(std::popcount(a.words[i] & ~bw));
    }
    return n;
}

SkillCatalog::SkillCatalog(std::vector<std::string> skills) : skills_(std::move(skills)) {
    if (skills_.empty()) throw std::invalid_argument("skill catalog must not be empty");
    for (std::size_t i = 0; i < skills_.size(); ++i) {
        if (!valid_identifier(skills_[i]))
            throw std::invalid_argument("invalid skill identifier: '" + skills_[i] + "'");
        if (!index_.emplace(skills_[i], i).second)
            throw std::invalid_argument("duplicate skill identifier: '" + skills_[i] + "'");
    }
}

std::optional<std::size_t> SkillCatalog::index_of(const std::string& skill) const {
    auto it = index_.find(skill);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void attach_masks(const SkillCatalog& catalog, std::span<Task> tasks,
                  std::span<Volunteer> volunteers) {
    for (auto& t : tasks) t.skills = mask_from_names(catalog, t.id, t.skill_names);
    for (auto& v : volunteers) v.skills = mask_from_names(catalog, v.id, v.skill_names);
}

void AllocationMap::add(const std::string& task_id, std::string volunteer_id,
                        double remuneration) {
    if (!assigned_.insert(volunteer_id).second)
        throw std::invalid_argument("volunteer '" + volunteer_id +
                                    "' already assigned in this round");
    entries_[task_id].push_back(Entry{std::move(volunteer_id), remuneration});
}

const std::vector<AllocationMap::Entry>* AllocationMap::entries_for(
    const std::string& task_id) const {
    auto it = entries_.find(task_id);
    return it == entries_.end() ? nullptr : &it->second;
}

double AllocationMap::total_paid(const std::string& task_id) const {
    const auto* es = entries_for(task_id);
    if (!es) return 0.0;
    double sum = 0.0;
    for (const auto& e : *es) sum += e.remuneration;
    return sum;
}

ContingencyLedger::ContingencyLedger(double initial, double gamma)
    : balance_(initial), gamma_(gamma) {
    if (initial < 0.0) throw std::invalid_argument("contingency balance must be >= 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
}

void ContingencyLedger::record_inflow(int round, double amount) {
    if (amount < -kMoneyTol) throw std::domain_error("contingency inflow must be >= 0");
    if (amount < 0.0) amount = 0.0;
    balance_ += amount;
    if (!history_.empty() && history_.back().round == round) {
        history_.back().inflow += amount;
    } else {
        history_.push_back(Flow{round, amount, 0.0});
    }
}

void ContingencyLedger::deduct_dividends(int round, double amount) {
    if (amount < -kMoneyTol) throw std::domain_error("dividend outflow must be >= 0");
    if (amount > balance_ + kMoneyTol)
        throw std::domain_error("contingency underflow: outflow exceeds balance");
    balance_ -= amount;
    if (balance_ < 0.0) balance_ = 0.0;
    if (!history_.empty() && history_.back().round == round) {
        history_.back().dividend_outflow += amount;
    } else {
        history_.push_back(Flow{round, 0.0, amount});
    }
}

namespace {

void check_unit(std::vector<ValidationIssue>& out, const std::string& entity,
                const std::string& id, const char* field, double value) {
    if (!(value >= 0.0 && value <= 1.0))
        out.push_back({entity, id,
                       std::string(field) + " must lie in [0,1], got " + std::to_string(value)});
}

void check_skills(std::vector<ValidationIssue>& out, const SkillCatalog& catalog,
                  const std::string& entity, const std::string& id,
                  std::span<const std::string> names, bool require_nonempty) {
    if (require_nonempty && names.empty())
        out.push_back({entity, id, "required skill set is empty"});
    std::set<std::string> seen;
    for (const auto& name : names) {
        if (!catalog.index_of(name))
            out.push_back({entity, id, "unknown skill '" + name + "' (not in catalog)"});
        if (!seen.insert(name).second)
            out.push_back({entity, id, "duplicate skill '" + name + "'"});
    }
}

} // namespace

std::vector<ValidationIssue> validate_world(const SkillCatalog& catalog,
                                            std::span<const Task> tasks,
                                            std::span<const Volunteer> volunteers) {
    std::vector<ValidationIssue> issues;
    if (catalog.size() == 0) {
        issues.push_back({"catalog", "", "catalog is empty"});
        return issues;
    }

    std::set<std::string> seen_tasks;
    for (const auto& t : tasks) {
        if (t.id.empty()) issues.push_back({"task", t.id, "empty id"});
        else if (!seen_tasks.insert(t.id).second)
            issues.push_back({"task", t.id, "duplicate task id"});
        if (!(t.budget >= 0.0))
            issues.push_back({"task", t.id, "budget must be >= 0"});
        if (!(t.duration > 0.0))
            issues.push_back({"task", t.id, "duration must be > 0"});
        check_skills(issues, catalog, "task", t.id, t.skill_names, /*require_nonempty=*/true);
    }

    std::set<std::string> seen_vols;
    for (const auto& v : volunteers) {
        if (v.id.empty()) issues.push_back({"volunteer", v.id, "empty id"});
        else if (!seen_vols.insert(v.id).second)
            issues.push_back({"volunteer", v.id, "duplicate volunteer id"});
        if (!(v.expense >= 0.0))
            issues.push_back({"volunteer", v.id, "expense must be >= 0"});
        if (v.departure_time < v.arrival_time)
            issues.push_back({"volunteer", v.id, "departure_time precedes arrival_time"});
        check_skills(issues, catalog, "volunteer", v.id, v.skill_names,
                     /*require_nonempty=*/false);
        check_unit(issues, "volunteer", v.id, "willingness", v.willingness);
        check_unit(issues, "volunteer", v.id, "bias", v.bias);
        check_unit(issues, "volunteer", v.id, "rating", v.rating);
    }
    return issues;
}

} // namespace wcb
