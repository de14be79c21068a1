#pragma once

// INI configuration. Precedence, lowest to highest:
//
//     built-in reference values  <  config file  <  command-line flags
//
//     [device]   kappa tau_u tau_s g_dc noise_sigma zero_hold eps_u eps_s
//                compliance tail_gain tau_tail
//     [run]      seed noise timestep
//     [or] [xor] [not]   threshold zero_V one_V
//
// Unknown sections or keys are rejected.

#include "memspike/device.hpp"
#include "memspike/errors.hpp"
#include "memspike/gate.hpp"
#include "memspike/waveform.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace memspike {

struct Settings {
    DeviceParams device = DeviceParams::reference();
    std::uint64_t seed = 42;
    bool noise = true;
    double timestep = kDefaultTimestep;
    std::map<std::string, GateSpec, std::less<>> gates{
        {"or", or_gate()}, {"xor", xor_gate()}, {"not", not_gate()}};

    /// Device parameters with the noise switch applied.
    [[nodiscard]] DeviceParams effective_device() const {
        DeviceParams p = device;
        if (!noise) {
            p.noise_sigma = 0.0;
        }
        return p;
    }

    [[nodiscard]] const GateSpec& gate(std::string_view name) const {
        const auto it = gates.find(name);
        if (it == gates.end()) {
            throw GateError("unknown gate '" + std::string(name) + "'");
        }
        return it->second;
    }
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    bool no_noise = false;
    std::optional<double> threshold; // applies to the named gate
};

namespace detail {

template <class T>
T config_value(const boost::property_tree::ptree& node, const std::string& where) {
    try {
        return node.get_value<T>();
    } catch (const boost::property_tree::ptree_error&) {
        throw ConfigError("config: bad value '" + node.data() + "' for " + where);
    }
}

inline bool config_bool(const boost::property_tree::ptree& node, const std::string& where) {
    const std::string& v = node.data();
    if (v == "true" || v == "on" || v == "yes" || v == "1") {
        return true;
    }
    if (v == "false" || v == "off" || v == "no" || v == "0") {
        return false;
    }
    throw ConfigError("config: bad boolean '" + v + "' for " + where);
}

} // namespace detail

inline void apply_config(std::istream& in, Settings& settings) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            throw ConfigError("config: key '" + section + "' outside of a section");
        }
        for (const auto& [key, node] : body) {
            const std::string where = "[" + section + "] " + key;
            if (section == "device") {
                static const std::map<std::string, double DeviceParams::*> fields{
                    {"kappa", &DeviceParams::kappa},
                    {"tau_u", &DeviceParams::tau_u},
                    {"tau_s", &DeviceParams::tau_s},
                    {"g_dc", &DeviceParams::g_dc},
                    {"noise_sigma", &DeviceParams::noise_sigma},
                    {"zero_hold", &DeviceParams::zero_hold},
                    {"eps_u", &DeviceParams::eps_u},
                    {"eps_s", &DeviceParams::eps_s},
                    {"compliance", &DeviceParams::compliance},
                    {"tail_gain", &DeviceParams::tail_gain},
                    {"tau_tail", &DeviceParams::tau_tail},
                };
                const auto f = fields.find(key);
                if (f == fields.end()) {
                    throw ConfigError("config: unknown key " + where);
                }
                settings.device.*(f->second) = detail::config_value<double>(node, where);
            } else if (section == "run") {
                if (key == "seed") {
                    settings.seed = detail::config_value<std::uint64_t>(node, where);
                } else if (key == "noise") {
                    settings.noise = detail::config_bool(node, where);
                } else if (key == "timestep") {
                    settings.timestep = detail::config_value<double>(node, where);
                } else {
                    throw ConfigError("config: unknown key " + where);
                }
            } else if (const auto g = settings.gates.find(section); g != settings.gates.end()) {
                auto& gate = g->second;
                if (key == "threshold") {
                    gate.threshold = detail::config_value<double>(node, where);
                } else if (key == "zero_V") {
                    gate.encoding.zero_volts = detail::config_value<double>(node, where);
                } else if (key == "one_V") {
                    gate.encoding.one_volts = detail::config_value<double>(node, where);
                } else {
                    throw ConfigError("config: unknown key " + where);
                }
            } else {
                throw ConfigError("config: unknown section [" + section + "]");
            }
        }
    }

    try {
        settings.device.validate();
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!(settings.timestep > 0.0)) {
        throw ConfigError("config: [run] timestep must be > 0");
    }
    for (const auto& [name, gate] : settings.gates) {
        try {
            gate.validate();
        } catch (const GateError& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }
}

inline void apply_config_text(const std::string& text, Settings& settings) {
    std::istringstream in(text);
    apply_config(in, settings);
}

inline void apply_config_file(const std::string& path, Settings& settings) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    apply_config(in, settings);
}

inline void apply_overrides(const Overrides& o, std::string_view gate_name, Settings& settings) {
    if (o.seed) {
        settings.seed = *o.seed;
    }
    if (o.no_noise) {
        settings.noise = false;
    }
    if (o.threshold) {
        if (!(*o.threshold > 0.0)) {
            throw GateError("threshold must be > 0");
        }
        const auto it = settings.gates.find(gate_name);
        if (it == settings.gates.end()) {
            throw GateError("unknown gate '" + std::string(gate_name) + "'");
        }
        it->second.threshold = *o.threshold;
    }
}

} // namespace memspike
