#include "memspike/gate.hpp"
#include "memspike/instrument.hpp"
#include "memspike/trace.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace memspike;

TEST(TraceTest, HeaderIsExact) {
    Trace t;
    t.append(0, 0.0, 0.0, Annotation::plain);
    const std::string csv = to_csv(t);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,t_s,v_V,i_A,annotation");
}

TEST(TraceTest, TimeIsStepTimesTimestep) {
    Trace t(0.02);
    t.append(3, 0.1, 1e-9, Annotation::read);
    EXPECT_EQ(t[0].t, 3 * 0.02);
}

TEST(TraceTest, StepsMustIncrease) {
    Trace t;
    t.append(2, 0.0, 0.0, Annotation::plain);
    EXPECT_THROW(t.append(2, 0.0, 0.0, Annotation::plain), TraceError);
    EXPECT_THROW(t.append(1, 0.0, 0.0, Annotation::plain), TraceError);
}

TEST(TraceTest, CsvUsesTwelveSignificantDigits) {
    Trace t;
    t.append(1, 0.2, 5.8735758882342886e-08, Annotation::read);
    EXPECT_NE(to_csv(t).find("1,0.02,0.2,5.87357588823e-08,read"), std::string::npos);
}

TEST(TraceTest, WaveformSerializesWithEmptyCurrent) {
    const auto w = encode_bits(or_gate().encoding, 0, 1);
    const Trace t = waveform_trace(w);
    const std::string csv = to_csv(t);
    EXPECT_EQ(csv,
              "step,t_s,v_V,i_A,annotation\n"
              "0,0,0,,plain\n"
              "1,0.02,0.01,,bit1\n"
              "2,0.04,0.2,,read\n");
    std::istringstream in(csv);
    const Trace back = read_csv(in);
    ASSERT_EQ(back.size(), 3u);
    EXPECT_FALSE(back[0].i.has_value());
    EXPECT_EQ(back[2].annotation, Annotation::read);
}

TEST(TraceTest, CsvRoundTripOfRecordedRun) {
    SimulatedPort port(DeviceParams::reference(), 42);
    const auto r = run_gate(port, xor_gate(), 0, 1);
    std::istringstream in(to_csv(r.trace));
    const Trace back = read_csv(in);
    ASSERT_EQ(back.size(), r.trace.size());
    EXPECT_NEAR(back.timestep(), 0.02, 1e-15);
    for (std::size_t k = 0; k < back.size(); ++k) {
        EXPECT_EQ(back[k].step, r.trace[k].step);
        EXPECT_EQ(back[k].annotation, r.trace[k].annotation);
        EXPECT_NEAR(*back[k].i, *r.trace[k].i, 1e-11 * std::abs(*r.trace[k].i) + 1e-24);
    }
    // A second serialization is byte-identical.
    EXPECT_EQ(to_csv(back), to_csv(r.trace));
}

TEST(TraceTest, ReadRejectsMalformedInput) {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_csv(in);
    };
    EXPECT_THROW(parse(""), TraceError);
    EXPECT_THROW(parse("time,v\n"), TraceError);
    EXPECT_THROW(parse("step,t_s,v_V,i_A,annotation\n0,0,0,0\n"), TraceError);
    EXPECT_THROW(parse("step,t_s,v_V,i_A,annotation\n0,0,x,0,plain\n"), TraceError);
    EXPECT_THROW(parse("step,t_s,v_V,i_A,annotation\n0,0,0,0,spike\n"), TraceError);
    EXPECT_THROW(parse("step,t_s,v_V,i_A,annotation\n1,0.02,0,0,plain\n0,0,0,0,plain\n"),
                 TraceError);
    EXPECT_THROW(parse("step,t_s,v_V,i_A,annotation\n1,0.02,0,0,plain\n2,0.05,0,0,plain\n"),
                 TraceError);
    EXPECT_TRUE(parse("step,t_s,v_V,i_A,annotation\n").empty());
}

TEST(TraceTest, ConcatShiftsOverlappingSteps) {
    Trace a;
    a.append(0, 0.0, 0.0, Annotation::plain);
    a.append(1, 0.1, 0.0, Annotation::read);
    Trace b;
    b.append(0, 0.0, 0.0, Annotation::zeroing);
    b.append(5, 0.2, 0.0, Annotation::read);
    a.concat(b);
    ASSERT_EQ(a.size(), 4u);
    EXPECT_EQ(a[2].step, 2);
    EXPECT_EQ(a[3].step, 7);
}
