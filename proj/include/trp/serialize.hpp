#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "trp/config.hpp"
#include "trp/hardware.hpp"
#include "trp/optimize.hpp"
#include "trp/propagator.hpp"
#include "trp/tables.hpp"

namespace trp {

using json = nlohmann::json;

template <std::size_t N>
json matrix_to_json(const cmat<N>& m) {
    json re = json::array(), im = json::array();
    for (std::size_t i = 0; i < N; ++i) {
        json rrow = json::array(), irow = json::array();
        for (std::size_t j = 0; j < N; ++j) {
            rrow.push_back(m(i, j).real());
            irow.push_back(m(i, j).imag());
        }
        re.push_back(rrow);
        im.push_back(irow);
    }
    return json{{"re", re}, {"im", im}};
}

template <std::size_t N>
cmat<N> matrix_from_json(const json& j) {
    cmat<N> m;
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (re.size() != N || im.size() != N) throw InputError("matrix json has wrong dimension");
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t jj = 0; jj < N; ++jj)
            m(i, jj) = cplx(re.at(i).at(jj).get<double>(), im.at(i).at(jj).get<double>());
    return m;
}

inline json params_to_json(const SweepParams& p) {
    return json{{"lambda", p.lambda}, {"eta4", p.eta4}, {"tau0", p.tau0}};
}

inline json params_to_json(const TwoQubitParams& q) {
    json j = params_to_json(q.sweep);
    j["d1"] = q.d1;
    j["d2"] = q.d2;
    j["d3"] = q.d3;
    j["d4"] = q.d4;
    j["c4"] = q.c4;
    return j;
}

template <std::size_t N, class Params>
json gate_result_to_json(const std::string& target, const Params& params,
                         const GateResult<N>& r) {
    json j;
    j["target"] = target;
    j["params"] = params_to_json(params);
    j["tr_p"] = r.tr_p;
    j["fidelity"] = r.fidelity;
    j["unitary"] = matrix_to_json(r.unitary);
    j["diagnostics"] = {{"steps_accepted", r.steps_accepted},
                        {"steps_rejected", r.steps_rejected},
                        {"max_norm_drift", r.max_norm_drift},
                        {"unitarity_residual", r.unitarity_residual}};
    if (N == 4) j["fidelity_trp_quarter"] = 1.0 - r.tr_p / 4.0;
    return j;
}

inline json trace_to_json(const OptimizationTrace& t, const std::string& algorithm,
                          std::uint64_t seed, const std::vector<std::string>& names) {
    json evals = json::array();
    for (const auto& e : t.evaluations) evals.push_back(json{{"x", e.x}, {"value", e.value}});
    return json{{"algorithm", algorithm},
                {"seed", seed},
                {"parameters", names},
                {"evaluations", evals},
                {"best", {{"x", t.best.x}, {"value", t.best.value}}},
                {"failed_evaluations", t.failed_evaluations},
                {"termination", termination_name(t.termination)}};
}

inline json rfsquid_report_to_json(const RfSquidConstants& k) {
    return json{{"backend", "rfsquid"},
                {"phi_tilde0_over_phi0", k.phi_tilde0},
                {"ej_op_over_hbar", k.ej_op},
                {"beta_l0", k.beta_l0},
                {"omega_star0", k.omega_star0},
                {"i0", k.i0},
                {"c_coeff", k.c_coeff},
                {"d_coeff", k.d_coeff},
                {"validity",
                 {{"threshold", k.threshold},
                  {"max_flux_ratio", k.max_flux_ratio},
                  {"flux_ok", k.flux_ok},
                  {"max_dej_ratio", k.max_dej_ratio},
                  {"dej_ok", k.dej_ok},
                  {"max_dbeta_ratio", k.max_dbeta_ratio},
                  {"dbeta_ok", k.dbeta_ok}}}};
}

/// Waveform CSV: one `#` header line with channel metadata, then
/// `t_seconds,value` rows at full double precision.
inline void waveform_to_csv(const Waveform& w, std::ostream& out) {
    w.check();
    out << "# channel=" << w.channel << " units=" << w.units << " T0_seconds="
        << std::setprecision(17) << w.t0 << "\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < w.times.size(); ++i)
        out << w.times[i] << "," << w.values[i] << "\n";
}

inline void waveform_to_csv_file(const Waveform& w, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open output file '" + path + "'");
    waveform_to_csv(w, out);
}

inline Waveform waveform_from_csv(std::istream& in) {
    Waveform w;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# channel=", 0) != 0)
        throw InputError("waveform csv is missing its header line");
    std::stringstream hs(line.substr(2));
    std::string tok;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "channel") w.channel = val;
        else if (key == "units") w.units = val;
        else if (key == "T0_seconds") w.t0 = std::stod(val);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InputError("bad waveform csv row: '" + line + "'");
        w.times.push_back(std::stod(line.substr(0, comma)));
        w.values.push_back(std::stod(line.substr(comma + 1)));
    }
    w.check();
    return w;
}

inline void table_to_csv(const std::vector<TableRow>& rows, std::ostream& out) {
    out << "parameter,value,trp_reference,trp_simulated\n" << std::setprecision(17);
    for (const auto& r : rows)
        out << r.axis << "," << r.value << "," << r.reference_trp << "," << r.trp << "\n";
}

}  // namespace trp
