#include "wcb/potential.hpp"

#include <stdexcept>
#include <string>

namespace wcb {

namespace {
[[noreturn]] void domain_fail(const std::string& what) { throw std::domain_error(what); }
} // namespace

double aging_factor(double alpha, long rounds_since_assignment) {
    if (!(alpha > 0.0) || alpha > 1.0)
        domain_fail("aging_factor: alpha must lie in (0,1], got " + std::to_string(alpha));
    if (rounds_since_assignment < 1)
        domain_fail("aging_factor: rounds_since_assignment must be >= 1, got " +
                    std::to_string(rounds_since_assignment));
    return detail::aging_core(alpha, double(rounds_since_assignment));
}

double sigma(const PotentialInputs& in) {
    if (in.catalog_size <= 0) domain_fail("sigma: catalog_size must be > 0");
    if (in.alloc_success < 0 || in.alloc_participated < 0)
        domain_fail("sigma: allocation counts must be >= 0");
    if (in.alloc_success > in.alloc_participated)
        domain_fail("sigma: alloc_success exceeds alloc_participated");
    if (in.skill_count < 0 || in.skill_count > in.catalog_size)
        domain_fail("sigma: skill_count must lie in [0, catalog_size]");
    const double success =
        detail::success_ratio_core(double(in.alloc_success), double(in.alloc_participated));
    const double skills = double(in.skill_count) / double(in.catalog_size);
    const double aging = aging_factor(in.aging_constant, in.rounds_since_assignment);
    return success + skills + aging;
}

double potential_init(double sigma_value) {
    if (!(sigma_value >= 0.0) || sigma_value > 3.0)
        domain_fail("potential_init: sigma must lie in [0,3], got " + std::to_string(sigma_value));
    return detail::sigmoid_core(sigma_value);
}

double potential_update(double previous, double init) {
    if (!(previous >= 0.0) || previous > 1.0)
        domain_fail("potential_update: previous must lie in [0,1]");
    if (!(init >= 0.0) || init > 1.0)
        domain_fail("potential_update: init must lie in [0,1]");
    return detail::potential_update_core(previous, init);
}

} // namespace wcb
