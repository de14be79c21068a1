// Minimal library use: evaluate the OR gate's four rows on a noise-free device
// and print the read currents.

#include "memspike/memspike.hpp"

#include <cstdio>

int main() {
    using namespace memspike;

    SimulatedPort port(DeviceParams::noiseless(), 42);
    const GateSpec gate = or_gate();
    const auto table = truth_table(port, gate);
    for (const auto& r : table.results) {
        std::printf("OR(%d,%d) = %d   i_read = %+.3e A   margin = %+.3f\n", r.b1, r.b2, r.output,
                    r.i_read, r.margin);
    }
    std::printf("%zu/%zu rows correct\n", table.correct, table.total);
    return table.passed() ? 0 : 1;
}
