// acceptance gate: runs every release criterion and prints one line per check
#include <cstdio>

#include "phononbus/accept.hpp"

int main() {
    const auto suite = pbus::accept::run_all(1, 1.0);
    std::fputs(pbus::accept::format_table(suite).c_str(), stdout);
    return suite.all_pass ? 0 : 4;
}
