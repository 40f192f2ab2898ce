// Fixed fixture matrix with a deterministic report.
#pragma once

#include <cstdint>
#include <string>

namespace amu {

struct SelftestOptions {
    uint64_t seed = 0;
    bool json = false;
    bool heavy = false;  // adds the large Full(3) bisimulation instance
};

// Entries keyed `section.item`; `failures` counts fixtures whose value
// differs from the expected one.
std::string selftest_report(const SelftestOptions& opt, int* failures = nullptr);

}  // namespace amu
