#include "kernels_internal.hpp"

#include <cstdlib>
#include <string>

namespace wcb::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const Ops* resolve(std::string_view name) {
    if (name == "scalar") return &scalar_ops();
    if (name == "avx2") {
        const Ops* t = avx2_ops();
        return t; // nullptr when unsupported
    }
    if (name == "auto" || name.empty()) {
        if (const Ops* t = avx2_ops()) return t;
        return &scalar_ops();
    }
    return nullptr;
}

const Ops*& active_slot() {
    static const Ops* slot = [] {
        const char* env = std::getenv("WCB_KERNEL");
        const Ops* t = resolve(env ? std::string_view(env) : std::string_view("auto"));
        return t ? t : &scalar_ops();
    }();
    return slot;
}

} // namespace

const Ops* avx2_ops() {
    static const Ops* table = cpu_has_avx2() ? avx2_table() : nullptr;
    return table;
}

const Ops& active_ops() { return *active_slot(); }

bool set_backend(std::string_view name) {
    const Ops* t = resolve(name);
    if (!t) return false;
    active_slot() = t;
    return true;
}

} // namespace wcb::kernels
