#include "dyngreen/error.hpp"

#include <cstdlib>
#include <string>

#ifndef DYNGREEN_VERSION
#define DYNGREEN_VERSION "0.0.0"
#endif

namespace dyngreen {

Limits Limits::from_env() {
    Limits limits;
    if (const char* bits = std::getenv("DYNGREEN_MAX_BITS"); bits != nullptr && *bits != '\0') {
        try {
            const auto value = std::stoull(bits);
            if (value > 0) limits.max_coeff_bits = static_cast<std::size_t>(value);
        } catch (const std::exception&) {
            throw DomainError(std::string("DYNGREEN_MAX_BITS is not a positive integer: ") + bits);
        }
    }
    return limits;
}

const Limits& default_limits() {
    static const Limits limits = Limits::from_env();
    return limits;
}

std::string version_string() { return DYNGREEN_VERSION; }

}  // namespace dyngreen
