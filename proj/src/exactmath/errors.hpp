#pragma once
#include <stdexcept>
#include <string>

namespace msel {

/* Error taxonomy mirrors the CLI exit codes: schema_error -> 2,
   ceiling_error -> 3, math_error -> 4.  Anything else is a plain bug. */

struct schema_error : std::runtime_error {
    explicit schema_error(const std::string& m) : std::runtime_error(m) {}
};

struct ceiling_error : std::runtime_error {
    explicit ceiling_error(const std::string& m) : std::runtime_error(m) {}
};

struct math_error : std::runtime_error {
    explicit math_error(const std::string& m) : std::runtime_error(m) {}
};

} // namespace msel
