// Randomized invariants. Generators are seeded so failures reproduce.

#include "memspike/memspike.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace memspike;

namespace {

constexpr int kCases = 300;

Waveform random_waveform(std::mt19937_64& rng, double max_v = 1.0) {
    std::uniform_int_distribution<int> events(1, 12);
    std::uniform_int_distribution<int> hold(1, 15);
    std::uniform_real_distribution<double> level(-max_v, max_v);
    std::bernoulli_distribution repeat(0.2);
    Waveform w;
    w.events.push_back({0, 0.0, Annotation::plain});
    std::int64_t step = 0;
    double v = 0.0;
    const int n = events(rng);
    for (int k = 0; k < n; ++k) {
        step += hold(rng);
        if (!repeat(rng)) {
            v = level(rng);
        }
        w.events.push_back({step, v, k + 1 == n ? Annotation::read : Annotation::plain});
    }
    return w;
}

} // namespace

TEST(PropertyTest, SpikeIsLinearFromRest) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> volts(-5.0, 5.0);
    const auto p = DeviceParams::noiseless();
    for (int c = 0; c < kCases; ++c) {
        const double v = volts(rng);
        Device d(p, 0);
        d.apply_voltage(v);
        EXPECT_EQ(d.sample_current(), p.g_dc * v + p.kappa * v);
        Device d2(p, 0);
        d2.apply_voltage(2 * v);
        EXPECT_NEAR(d2.sample_current(), 2 * d.sample_current(), 1e-22);
    }
}

TEST(PropertyTest, TransientDecaysMonotonically) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> volts(-2.0, 2.0);
    std::uniform_real_distribution<double> dts(0.001, 0.05);
    const auto p = DeviceParams::noiseless();
    for (int c = 0; c < kCases; ++c) {
        Device d(p, 0);
        d.apply_voltage(volts(rng));
        d.advance(dts(rng));
        d.apply_voltage(volts(rng));
        const double dc = p.g_dc * d.state().v_applied;
        double prev = std::abs(d.sample_current() - dc);
        for (int k = 0; k < 20; ++k) {
            d.advance(dts(rng));
            const double now = std::abs(d.sample_current() - dc);
            EXPECT_LE(now, prev);
            prev = now;
        }
    }
}

TEST(PropertyTest, AccommodationStaysBounded) {
    std::mt19937_64 rng(3);
    const auto p = DeviceParams::noiseless();
    for (int c = 0; c < kCases; ++c) {
        SimulatedPort port(p, 0);
        const auto w = random_waveform(rng);
        double max_abs = 0.0;
        std::size_t next = 0;
        double level = 0.0;
        for (std::int64_t k = 0; k <= w.last_step(); ++k) {
            if (next < w.events.size() && w.events[next].step == k) {
                level = w.events[next++].volts;
            }
            port.set_level(level);
            max_abs = std::max(max_abs, std::abs(level));
            EXPECT_LE(std::abs(port.device().state().u), max_abs + 1e-15);
        }
    }
}

TEST(PropertyTest, DownSpikeGrowsWithDwell) {
    const auto p = DeviceParams::noiseless();
    double prev = 0.0;
    for (int dwell = 1; dwell <= 20; ++dwell) {
        Device d(p, 0);
        d.apply_voltage(0.5);
        for (int k = 0; k < dwell; ++k) {
            d.advance(0.02);
        }
        d.apply_voltage(0.0);
        const double mag = std::abs(d.state().s);
        EXPECT_GT(mag, prev) << "dwell " << dwell;
        prev = mag;
    }
}

TEST(PropertyTest, IdenticalSeedsGiveIdenticalTraces) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::uint64_t> seeds;
    for (int c = 0; c < 100; ++c) {
        const auto w = random_waveform(rng);
        const auto seed = seeds(rng);
        SimulatedPort a(DeviceParams::reference(), seed);
        SimulatedPort b(DeviceParams::reference(), seed);
        EXPECT_EQ(to_csv(record(a, w)), to_csv(record(b, w)));
    }
}

TEST(PropertyTest, RecordReplayRoundTrip) {
    std::mt19937_64 rng(5);
    for (int c = 0; c < 100; ++c) {
        const auto w = random_waveform(rng);
        SimulatedPort sim(DeviceParams::reference(), c);
        const Trace recorded = record(sim, w);

        ReplayPort in_memory(recorded);
        EXPECT_EQ(record(in_memory, w), recorded);

        std::istringstream csv(to_csv(recorded));
        ReplayPort from_disk(read_csv(csv));
        const Trace again = record(from_disk, w);
        ASSERT_EQ(again.size(), recorded.size());
        for (std::size_t k = 0; k < again.size(); ++k) {
            EXPECT_NEAR(*again[k].i, *recorded[k].i, 1e-11 * std::abs(*recorded[k].i) + 1e-30);
        }
    }
}

TEST(PropertyTest, ZeroingIsIdempotent) {
    std::mt19937_64 rng(6);
    for (int c = 0; c < kCases; ++c) {
        SimulatedPort port(DeviceParams::noiseless(), 0);
        record(port, random_waveform(rng, 0.5));
        Device d = port.device();
        d.zero();
        const auto once = d.state();
        d.zero();
        EXPECT_NEAR(d.state().u, once.u, d.params().eps_u);
        EXPECT_NEAR(d.state().s, once.s, d.params().eps_s);
    }
}

TEST(PropertyTest, ZeroingMakesRowsHistoryIndependent) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> bit(0, 1);
    for (const auto& gate : {or_gate(), xor_gate()}) {
        for (int c = 0; c < 50; ++c) {
            const int b1 = bit(rng);
            const int b2 = bit(rng);
            SimulatedPort clean(DeviceParams::noiseless(), 0);
            const double expected = run_gate(clean, gate, b1, b2).i_read;

            SimulatedPort port(DeviceParams::noiseless(), 0);
            record(port, random_waveform(rng, 0.5));
            const double got = run_gate(port, gate, b1, b2).i_read;
            EXPECT_NEAR(got, expected, 1e-20);
        }
    }
}

TEST(PropertyTest, DecodeConsistency) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> thresholds(1e-9, 6e-8);
    std::uniform_int_distribution<int> bit(0, 1);
    for (int c = 0; c < kCases; ++c) {
        auto gate = c % 2 ? or_gate() : xor_gate();
        gate.threshold = thresholds(rng);
        SimulatedPort port(DeviceParams::reference(), c);
        const auto r = run_gate(port, gate, bit(rng), bit(rng));
        EXPECT_EQ(r.output, std::abs(r.i_read) > gate.threshold ? 1 : 0);
        EXPECT_EQ(r.margin > 0.0, r.correct());
    }
}
