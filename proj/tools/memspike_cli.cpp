// memspike: command-line front end for the spiking-memristor gate simulator.
//
// Exit codes: 0 success, 1 gate/experiment/calibration failure or unreadable
// input, 2 bad arguments.

#include "memspike/memspike.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using json = nlohmann::json;
using namespace memspike;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Globals {
    std::optional<std::uint64_t> seed;
    bool no_noise = false;
    std::string config;
    std::string trace;
    bool json = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Settings load_settings(const Globals& g, std::string_view gate_name,
                       std::optional<double> threshold) {
    Settings s;
    if (!g.config.empty()) {
        apply_config_file(g.config, s);
    }
    Overrides o;
    o.seed = g.seed;
    o.no_noise = g.no_noise;
    o.threshold = threshold;
    apply_overrides(o, gate_name, s);
    return s;
}

SimulatedPort make_port(const Settings& s) {
    return SimulatedPort(s.effective_device(), s.seed, s.timestep);
}

GateRunOptions run_options(const Settings& s) {
    GateRunOptions o;
    o.zero_hold = s.device.zero_hold;
    return o;
}

void maybe_write_trace(const Globals& g, const Trace& trace) {
    if (!g.trace.empty()) {
        save_csv(g.trace, trace);
    }
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4e", x);
    return buf;
}

json report_json(const Report& r) {
    json j = json::object();
    for (const auto& [k, v] : r.entries()) {
        j[k] = v;
    }
    return j;
}

// --- run -----------------------------------------------------------------

struct RunArgs {
    std::string gate;
    std::string bits;
    std::optional<double> threshold;
    int gap_steps = 1;
};

int cmd_run(const Globals& g, const RunArgs& a) {
    const Settings s = load_settings(g, a.gate, a.threshold);
    const GateSpec& gate = s.gate(a.gate);

    int b1 = 0;
    int b2 = 0;
    auto bit = [](char c) {
        if (c != '0' && c != '1') {
            throw UsageError("--bits must contain only 0 and 1");
        }
        return c - '0';
    };
    if (gate.fixed_first) {
        if (a.bits.size() != 1) {
            throw UsageError("gate '" + a.gate + "' takes one input bit");
        }
        b1 = *gate.fixed_first;
        b2 = bit(a.bits[0]);
    } else {
        if (a.bits.size() != 2) {
            throw UsageError("gate '" + a.gate + "' takes two input bits");
        }
        b1 = bit(a.bits[0]);
        b2 = bit(a.bits[1]);
    }
    if (a.gap_steps < 1) {
        throw UsageError("--gap must be >= 1");
    }

    auto port = make_port(s);
    auto opts = run_options(s);
    opts.gap_steps = a.gap_steps;
    const auto r = run_gate(port, gate, b1, b2, opts);
    maybe_write_trace(g, r.trace);

    if (g.json) {
        json j{{"gate", gate.name},     {"bits", a.bits},        {"output", r.output},
               {"i_read_A", r.i_read},  {"threshold_A", gate.threshold},
               {"margin", r.margin},    {"gap_steps", a.gap_steps}};
        if (r.expected) {
            j["expected"] = *r.expected;
        }
        std::cout << j.dump() << '\n';
    } else {
        std::cout << r.output << '\n';
    }
    return kExitOk;
}

// --- truth-table ---------------------------------------------------------

struct TableArgs {
    std::string gate;
    int repeat = 1;
    std::optional<double> threshold;
};

int cmd_truth_table(const Globals& g, const TableArgs& a) {
    if (a.repeat < 1) {
        throw UsageError("--repeat must be >= 1");
    }
    const Settings s = load_settings(g, a.gate, a.threshold);
    const GateSpec& gate = s.gate(a.gate);
    auto port = make_port(s);
    const auto t = truth_table(port, gate, a.repeat, run_options(s));
    maybe_write_trace(g, t.trace);

    if (g.json) {
        json rows = json::array();
        for (std::size_t k = 0; k < t.results.size(); ++k) {
            const auto& r = t.results[k];
            rows.push_back({{"repeat", k / gate.truth.size() + 1},
                            {"b1", r.b1},
                            {"b2", r.b2},
                            {"expected", r.expected.value_or(-1)},
                            {"output", r.output},
                            {"i_read_A", r.i_read},
                            {"margin", r.margin},
                            {"pass", r.correct()}});
        }
        std::cout << json{{"gate", gate.name},
                          {"threshold_A", gate.threshold},
                          {"rows", rows},
                          {"correct", t.correct},
                          {"total", t.total},
                          {"worst_margin", t.worst_margin()},
                          {"passed", t.passed()}}
                         .dump()
                  << '\n';
    } else {
        std::printf("gate=%s threshold=%sA\n", gate.name.c_str(), sci(gate.threshold).c_str());
        std::printf("%-4s %-4s %-4s %-4s %-4s %-13s %-9s %s\n", "rep", "b1", "b2", "want", "out",
                    "i_read(A)", "margin", "result");
        for (std::size_t k = 0; k < t.results.size(); ++k) {
            const auto& r = t.results[k];
            std::printf("%-4zu %-4d %-4d %-4d %-4d %-13s %-+9.4f %s\n",
                        k / gate.truth.size() + 1, r.b1, r.b2, r.expected.value_or(-1), r.output,
                        sci(r.i_read).c_str(), r.margin, r.correct() ? "pass" : "FAIL");
        }
        std::printf("correct=%zu/%zu worst_margin=%+.4f\n", t.correct, t.total, t.worst_margin());
    }
    return t.passed() ? kExitOk : kExitFailure;
}

// --- calibrate -----------------------------------------------------------

struct CalibrateArgs {
    std::string gate;
    int trials = 1;
};

int cmd_calibrate(const Globals& g, const CalibrateArgs& a) {
    if (a.trials < 1) {
        throw UsageError("--trials must be >= 1");
    }
    Settings s = load_settings(g, a.gate, std::nullopt);
    // Calibration is defined over noise-free reads.
    s.noise = false;
    const GateSpec& gate = s.gate(a.gate);
    auto port = make_port(s);
    const auto c = calibrate_threshold(port, gate, a.trials, run_options(s));
    if (g.json) {
        std::cout << json{{"gate", gate.name},
                          {"threshold_A", c.threshold},
                          {"max_zero_A", c.max_zero},
                          {"min_one_A", c.min_one},
                          {"configured_threshold_A", gate.threshold}}
                         .dump()
                  << '\n';
    } else {
        std::printf("gate=%s\nthreshold_A=%s\nmax_zero_A=%s\nmin_one_A=%s\n", gate.name.c_str(),
                    sci(c.threshold).c_str(), sci(c.max_zero).c_str(), sci(c.min_one).c_str());
    }
    return kExitOk;
}

// --- experiment ----------------------------------------------------------

struct ExperimentArgs {
    std::string name;
    int runs = 7;
    std::string summary;
};

int cmd_experiment(const Globals& g, const ExperimentArgs& a) {
    const std::string gate_name = a.name == "or-demo" ? "or" : "xor";
    const Settings s = load_settings(g, gate_name, std::nullopt);
    auto port = make_port(s);
    ExperimentOptions opt;
    opt.zero_hold = s.device.zero_hold;

    Report summary;
    Trace trace;
    bool passed = false;
    if (a.name == "square-wave") {
        auto r = exp_square_wave(port, {}, opt);
        summary = std::move(r.summary);
        trace = std::move(r.trace);
        passed = r.memory_effect;
    } else if (a.name == "noncommutative") {
        auto r = exp_noncommutative(port, 0.12, {}, opt);
        summary = std::move(r.summary);
        trace = std::move(r.trace);
        passed = r.s1_increasing && r.t1_decreasing && r.differences_positive;
    } else if (a.name == "or-demo") {
        auto r = exp_or_demo(port, s.gate("or"), opt);
        summary = std::move(r.summary);
        trace = std::move(r.trace);
        passed = r.passed;
    } else if (a.name == "xor-demo" || a.name == "xor-repro") {
        if (a.runs < 1) {
            throw UsageError("--runs must be >= 1");
        }
        auto r = a.name == "xor-demo" ? exp_xor_demo(port, s.gate("xor"), opt)
                                      : exp_xor_repro(port, a.runs, s.gate("xor"), opt);
        summary = std::move(r.summary);
        trace = std::move(r.table.trace);
        passed = r.passed();
    } else {
        throw UsageError("unknown experiment '" + a.name + "'");
    }
    summary.add("seed", static_cast<long long>(s.seed));
    summary.add("noise", s.noise);

    maybe_write_trace(g, trace);
    if (!a.summary.empty()) {
        std::ofstream out(a.summary);
        if (!out) {
            throw TraceError("cannot open '" + a.summary + "' for writing");
        }
        out << summary.to_string();
    }
    if (g.json) {
        std::cout << report_json(summary).dump() << '\n';
    } else {
        std::cout << summary.to_string();
    }
    return passed ? kExitOk : kExitFailure;
}

// --- plot ----------------------------------------------------------------

struct PlotArgs {
    std::string input;
    std::string out;
    bool ascii = false;
    std::optional<double> threshold;
    std::size_t width = 80;
    std::string title;
};

int cmd_plot(const Globals& g, const PlotArgs& a) {
    const Trace trace = load_csv(a.input);
    if (trace.empty()) {
        throw TraceError("trace '" + a.input + "' has no samples");
    }
    if (a.ascii) {
        const std::string line = render_sparkline(trace, a.width);
        if (g.json) {
            std::cout << json{{"sparkline", line}, {"rows", trace.size()}}.dump() << '\n';
        } else {
            std::cout << line << '\n';
        }
        return kExitOk;
    }
    PlotOptions opt;
    opt.threshold = a.threshold;
    opt.title = a.title.empty() ? a.input : a.title;
    const std::string svg = render_svg(trace, opt);
    if (a.out.empty()) {
        std::cout << svg;
        return kExitOk;
    }
    std::ofstream out(a.out, std::ios::binary);
    if (!out) {
        throw TraceError("cannot open '" + a.out + "' for writing");
    }
    out << svg;
    if (g.json) {
        std::cout << json{{"svg", a.out}, {"rows", trace.size()}}.dump() << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spiking-memristor temporal logic simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Noise generator seed");
    app.add_flag("--no-noise", g.no_noise, "Disable read noise");
    app.add_option("--config", g.config, "INI file overriding device and gate constants");
    app.add_option("--trace", g.trace, "Write the recorded trace as CSV");
    app.add_flag("--json", g.json, "Machine-readable output");

    const auto gates = CLI::IsMember({"or", "xor", "not"});

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run one gate evaluation");
    run_cmd->add_option("--gate", run.gate, "or | xor | not")->required()->check(gates);
    run_cmd->add_option("--bits", run.bits, "Input bits, e.g. 01 (one bit for not)")->required();
    run_cmd->add_option("--threshold", run.threshold, "Decision threshold, A");
    run_cmd->add_option("--gap", run.gap_steps, "Timesteps between the two bits");

    TableArgs table;
    auto* table_cmd = app.add_subcommand("truth-table", "Run every truth-table row");
    table_cmd->add_option("--gate", table.gate, "or | xor | not")->required()->check(gates);
    table_cmd->add_option("--repeat", table.repeat, "Number of passes");
    table_cmd->add_option("--threshold", table.threshold, "Decision threshold, A");

    CalibrateArgs cal;
    auto* cal_cmd = app.add_subcommand("calibrate", "Fit a threshold from noise-free reads");
    cal_cmd->add_option("--gate", cal.gate, "or | xor | not")->required()->check(gates);
    cal_cmd->add_option("--trials", cal.trials, "Passes over the truth table");

    ExperimentArgs exp;
    auto* exp_cmd = app.add_subcommand("experiment", "Run a scripted experiment");
    exp_cmd->add_option("name", exp.name)
        ->required()
        ->check(CLI::IsMember(
            {"square-wave", "noncommutative", "or-demo", "xor-demo", "xor-repro"}));
    exp_cmd->add_option("--runs", exp.runs, "Truth-table passes for xor-repro");
    exp_cmd->add_option("--summary", exp.summary, "Also write the key=value summary here");

    PlotArgs plot;
    auto* plot_cmd = app.add_subcommand("plot", "Render a trace CSV");
    plot_cmd->add_option("trace", plot.input, "Trace CSV")->required();
    plot_cmd->add_option("--out", plot.out, "SVG output path (stdout when omitted)");
    plot_cmd->add_flag("--ascii", plot.ascii, "Print a terminal sparkline instead");
    plot_cmd->add_option("--threshold", plot.threshold, "Draw +/- threshold lines, A");
    plot_cmd->add_option("--width", plot.width, "Sparkline width");
    plot_cmd->add_option("--title", plot.title, "SVG title");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*run_cmd) {
            return cmd_run(g, run);
        }
        if (*table_cmd) {
            return cmd_truth_table(g, table);
        }
        if (*cal_cmd) {
            return cmd_calibrate(g, cal);
        }
        if (*exp_cmd) {
            return cmd_experiment(g, exp);
        }
        if (*plot_cmd) {
            return cmd_plot(g, plot);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}
