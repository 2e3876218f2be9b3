#include <cstdio>

#include "safechain/checks.hpp"

int main()
{
    const auto results = safechain::run_all_checks();
    int failed = 0;
    for (const auto& r : results) {
        std::printf("[%s] %d %s: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
        failed += r.pass ? 0 : 1;
    }
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    return failed == 0 ? 0 : 1;
}
