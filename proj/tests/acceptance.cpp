// SPDX-License-Identifier: Apache-2.0
// Acceptance gate: every criterion at its pinned tolerance.

#include <cstdio>

#include "matconvex/acceptance.hpp"

int main() {
    const auto results = matconvex::acceptance::run();
    for (const auto& r : results) std::printf("%s\n", matconvex::acceptance::format_line(r).c_str());
    const bool ok = matconvex::acceptance::all_pass(results);
    std::printf("%s\n", ok ? "acceptance: all criteria passed" : "acceptance: FAILED");
    return ok ? 0 : 1;
}
