#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "trp/errors.hpp"
#include "trp/optimize.hpp"
#include "trp/propagator.hpp"
#include "trp/sweep.hpp"
#include "trp/targets.hpp"

namespace trp {

/// Flat dotted-key configuration document. Lines are `key = value`,
/// '#' starts a comment, blank lines are skipped. Unknown keys are
/// rejected up front.
class RunConfig {
  public:
    static const std::vector<std::string>& known_keys() {
        static const std::vector<std::string> keys = {
            "sweep.lambda", "sweep.eta4", "sweep.tau0",
            "twoqubit.d1", "twoqubit.d2", "twoqubit.d3", "twoqubit.d4", "twoqubit.c4",
            "target.name",
            "integrator.abs_tol", "integrator.rel_tol", "integrator.max_steps",
            "integrator.initial_step", "integrator.init_gauge",
            "optimize.algorithm", "optimize.seed", "optimize.max_evals", "optimize.free",
            "optimize.t0", "optimize.cooling", "optimize.sweep_length", "optimize.t_floor",
            "optimize.proposal_rel", "optimize.proposal_floor", "optimize.simplex_scale",
            "optimize.polish",
            "optimize.bounds.lambda", "optimize.bounds.eta4", "optimize.bounds.d1",
            "optimize.bounds.d2", "optimize.bounds.d3", "optimize.bounds.d4",
            "optimize.bounds.c4",
            "hardware.backend", "hardware.b_over_hbar", "hardware.samples",
            "hardware.cg_farad", "hardware.ec_over_hbar",
            "hardware.l_henry", "hardware.c_farad", "hardware.ej0_over_hbar",
            "hardware.epsilon", "hardware.validity_threshold",
            "hardware.z0", "hardware.x1", "hardware.x2", "hardware.z1", "hardware.z2",
            "tables.which",
            "output.path", "output.format",
        };
        return keys;
    }

    void set(const std::string& key, const std::string& value) {
        bool known = false;
        for (const auto& k : known_keys())
            if (k == key) {
                known = true;
                break;
            }
        if (!known) throw InputError("unknown config key '" + key + "'");
        kv_[key] = value;
    }

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    const std::map<std::string, std::string>& entries() const { return kv_; }

    std::string get_string(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw InputError("missing required config key '" + key + "'");
        return it->second;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key) const { return parse_double(key, get_string(key)); }

    double get_double(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    long get_long(const std::string& key, long fallback) const {
        if (!has(key)) return fallback;
        try {
            return std::stol(get_string(key));
        } catch (const std::exception&) {
            throw InputError("config key '" + key + "' is not an integer: '" + get_string(key) +
                             "'");
        }
    }

    std::uint64_t get_u64(const std::string& key) const {
        try {
            return std::stoull(get_string(key));
        } catch (const InputError&) {
            throw;
        } catch (const std::exception&) {
            throw InputError("config key '" + key + "' is not an unsigned integer");
        }
    }

    std::vector<int> get_int_list(const std::string& key) const {
        std::vector<int> out;
        std::stringstream ss(get_string(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(std::stoi(item));
            } catch (const std::exception&) {
                throw InputError("config key '" + key + "' has a non-integer entry '" + item +
                                 "'");
            }
        }
        return out;
    }

    std::vector<std::string> get_name_list(const std::string& key) const {
        std::vector<std::string> out;
        std::stringstream ss(get_string(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

    static RunConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InputError("cannot open config file '" + path + "'");
        RunConfig c;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw InputError("config line " + std::to_string(lineno) +
                                 " is not of the form key = value: '" + line + "'");
            c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
        return c;
    }

    /// Applies a `key=value` override (the CLI's --set flag).
    void apply_override(const std::string& assignment) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos)
            throw InputError("override must be key=value, got '" + assignment + "'");
        set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
    }

  private:
    static std::string trim(std::string s) {
        const char* ws = " \t\r\n";
        const auto b = s.find_first_not_of(ws);
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(ws);
        return s.substr(b, e - b + 1);
    }

    static double parse_double(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw InputError("config key '" + key + "' is not a number: '" + v + "'");
        }
    }

    std::map<std::string, std::string> kv_;
};

inline SweepParams sweep_from_config(const RunConfig& c) {
    SweepParams p{c.get_double("sweep.lambda"), c.get_double("sweep.eta4"),
                  c.get_double("sweep.tau0")};
    p.validate();
    return p;
}

inline TwoQubitParams twoqubit_from_config(const RunConfig& c) {
    TwoQubitParams q;
    q.sweep = sweep_from_config(c);
    q.d1 = c.get_double("twoqubit.d1");
    q.d2 = c.get_double("twoqubit.d2");
    q.d3 = c.get_double("twoqubit.d3");
    q.d4 = c.get_double("twoqubit.d4");
    q.c4 = c.get_double("twoqubit.c4");
    q.validate();
    return q;
}

inline IntegratorOptions integrator_from_config(const RunConfig& c) {
    IntegratorOptions o;
    o.abs_tol = c.get_double("integrator.abs_tol", o.abs_tol);
    o.rel_tol = c.get_double("integrator.rel_tol", o.rel_tol);
    o.max_steps = c.get_long("integrator.max_steps", o.max_steps);
    o.initial_step = c.get_double("integrator.initial_step", o.initial_step);
    const std::string gauge = c.get_string("integrator.init_gauge", "largest");
    if (gauge == "largest")
        o.initial_gauge = InitialGauge::largest_component_real;
    else if (gauge == "first_nonzero")
        o.initial_gauge = InitialGauge::first_nonzero_real;
    else
        throw InputError("integrator.init_gauge must be 'largest' or 'first_nonzero', got '" +
                         gauge + "'");
    return o;
}

}  // namespace trp
