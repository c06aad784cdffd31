#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "trp/errors.hpp"
#include "trp/hamiltonians.hpp"
#include "trp/sweep.hpp"

namespace trp {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double planck_h = 6.62607015e-34;       // J s (exact)
inline constexpr double e_charge = 1.602176634e-19;      // C (exact)
inline constexpr double phi0 = planck_h / (2.0 * e_charge);  // flux quantum, Wb
}  // namespace constants

/// Physical sweep description. Energies are stored divided by hbar
/// (angular-frequency units): a in 1/s^2, b in 1/s, twist in 1/s^5,
/// t0 in seconds.
struct PhysicalSweep {
    double a = 0.0;      // inversion rate, (energy/time)/hbar
    double b = 0.0;      // transverse strength, energy/hbar
    double twist = 0.0;  // quartic twist strength B, (energy/time^4)/hbar
    double t0 = 0.0;     // inversion duration, seconds

    void validate() const {
        const std::pair<double, const char*> checks[] = {
            {a, "a"}, {b, "b"}, {twist, "twist"}, {t0, "t0"}};
        for (auto [v, n] : checks)
            if (!(std::isfinite(v) && v > 0.0))
                throw InputError(std::string("physical sweep parameter ") + n +
                                 " must be positive, got " + std::to_string(v));
    }

    /// Twist profile phi_trp(t) = (B/2) t^4 at lab time t.
    double phi_trp(double t) const {
        const double t2 = t * t;
        return 0.5 * twist * t2 * t2;
    }
};

/// tau = (a/b) t, lambda = a/b^2, eta4 = (b^2/a^3) B. The sweep covers
/// tau in [-tau0, +tau0], so the physical duration is t0 = 2 tau0 b / a and
/// waveforms span [-t0/2, +t0/2].
inline PhysicalSweep from_dimensionless(const SweepParams& p, double b) {
    p.validate();
    if (!(std::isfinite(b) && b > 0.0))
        throw InputError("transverse strength b must be positive, got " + std::to_string(b));
    PhysicalSweep ph;
    ph.b = b;
    ph.a = p.lambda * b * b;
    ph.twist = p.eta4 * ph.a * ph.a * ph.a / (b * b);
    ph.t0 = 2.0 * p.tau0 * b / ph.a;
    return ph;
}

inline SweepParams to_dimensionless(const PhysicalSweep& ph) {
    ph.validate();
    SweepParams p;
    p.lambda = ph.a / (ph.b * ph.b);
    p.eta4 = ph.b * ph.b / (ph.a * ph.a * ph.a) * ph.twist;
    p.tau0 = ph.a * ph.t0 / (2.0 * ph.b);
    return p;
}

/// NMR sweep parameters: rf amplitude omega1 = 2b, frequency sweep range
/// A = a T0, twist coefficient script-B = B T0^4 / 2.
struct NmrSweepParams {
    double omega1 = 0.0;   // 1/s
    double a_range = 0.0;  // 1/s
    double curly_b = 0.0;  // dimensionless twist coefficient
    double t0 = 0.0;       // s
};

inline NmrSweepParams nmr_translate(const PhysicalSweep& ph) {
    ph.validate();
    NmrSweepParams z;
    z.omega1 = 2.0 * ph.b;
    z.a_range = ph.a * ph.t0;
    z.curly_b = ph.twist * std::pow(ph.t0, 4) / 2.0;
    z.t0 = ph.t0;
    return z;
}

inline PhysicalSweep nmr_invert(const NmrSweepParams& z) {
    PhysicalSweep ph;
    ph.b = z.omega1 / 2.0;
    ph.a = z.a_range / z.t0;
    ph.twist = 2.0 * z.curly_b / std::pow(z.t0, 4);
    ph.t0 = z.t0;
    ph.validate();
    return ph;
}

/// lambda = 4A/(omega1^2 T0), eta4 = B omega1^2 / (2 A^3 T0).
inline SweepParams nmr_to_dimensionless(const NmrSweepParams& z) {
    return to_dimensionless(nmr_invert(z));
}

/// Uniformly sampled control waveform. Times span [-T0/2, +T0/2].
struct Waveform {
    std::vector<double> times;   // seconds
    std::vector<double> values;  // see `units`
    std::string channel;
    std::string units;
    double t0 = 0.0;

    void check() const {
        if (times.size() != values.size()) throw InputError("waveform arrays differ in length");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw InputError("waveform times must be strictly increasing");
    }
};

namespace detail {

inline std::vector<double> time_grid(double t0, int samples) {
    if (samples < 2) throw InputError("sample count must be at least 2");
    std::vector<double> t(samples);
    for (int i = 0; i < samples; ++i)
        t[i] = -t0 / 2.0 + t0 * static_cast<double>(i) / (samples - 1);
    return t;
}

}  // namespace detail

/// Charge qubit: gate voltage V_g(t) = (e/C_g)(1 - a t / 2 E_c) drives the
/// inversion, dc-SQUID flux Phi_x(t) = (Phi_0/pi) phi_trp(t) drives the
/// twist, and the junction energy must satisfy E_J^0 = b.
struct ChargeQubitSchedule {
    Waveform vg;     // volts
    Waveform phi_x;  // units of Phi_0
    double ej0 = 0.0;  // required junction coupling, = b (1/s)
};

inline ChargeQubitSchedule charge_qubit_schedule(const PhysicalSweep& ph, double cg, double ec,
                                                 int samples = 4096) {
    ph.validate();
    if (!(cg > 0.0) || !(ec > 0.0))
        throw InputError("charge qubit needs positive gate capacitance and charging energy");
    const auto t = detail::time_grid(ph.t0, samples);

    ChargeQubitSchedule s;
    s.ej0 = ph.b;
    s.vg.times = t;
    s.phi_x.times = t;
    s.vg.channel = "Vg";
    s.vg.units = "volts";
    s.phi_x.channel = "Phi_x";
    s.phi_x.units = "Phi_0";
    s.vg.t0 = s.phi_x.t0 = ph.t0;
    s.vg.values.reserve(t.size());
    s.phi_x.values.reserve(t.size());
    for (double ti : t) {
        s.vg.values.push_back(constants::e_charge / cg * (1.0 - ph.a * ti / (2.0 * ec)));
        s.phi_x.values.push_back(ph.phi_trp(ti) / pi);
    }
    return s;
}

/// rf-SQUID constants report: junction coupling at the dc-SQUID operating
/// point, the double-well parameters, the WKB tunneling exponent, and the
/// small-signal flux response coefficients.
struct RfSquidConstants {
    double phi_tilde0 = 0.0;    // operating point, units of Phi_0
    double ej_op = 0.0;         // E_J(Phi_tilde0)/hbar, 1/s
    double beta_l0 = 0.0;
    double omega_star0 = 0.0;   // 1/s
    double i0 = 0.0;            // WKB exponent
    double c_coeff = 0.0;
    double d_coeff = 0.0;
    // small-parameter validity checks, each against `threshold`
    double max_flux_ratio = 0.0;  // max |pi dPhi_tilde / Phi_0|
    double max_dej_ratio = 0.0;   // max |dE_J| / E_J(Phi_tilde0)
    double max_dbeta_ratio = 0.0; // max dbeta_L / (beta_L0 - 1)
    double threshold = 0.05;
    bool flux_ok = false, dej_ok = false, dbeta_ok = false;

    bool all_ok() const { return flux_ok && dej_ok && dbeta_ok; }
};

struct RfSquidSchedule {
    Waveform phi_x;            // main loop flux, units of Phi_0
    Waveform delta_phi_tilde;  // dc-SQUID flux deviation, units of Phi_0
    RfSquidConstants constants;
};

/// rf-SQUID flux qubit with a dc-SQUID in place of the junction.
/// l and c are the loop inductance (H) and junction capacitance (F), ej0 the
/// junction coupling over hbar (1/s), epsilon the operating-point offset in
/// Phi_tilde0/Phi_0 = 1/2 - epsilon/pi.
inline RfSquidSchedule rfsquid_schedule(const PhysicalSweep& ph, double l, double c, double ej0,
                                        double epsilon, int samples = 4096,
                                        double threshold = 0.05) {
    ph.validate();
    if (!(l > 0.0) || !(c > 0.0) || !(ej0 > 0.0))
        throw InputError("rf-SQUID needs positive L, C and E_J0");

    RfSquidConstants k;
    k.threshold = threshold;
    k.phi_tilde0 = 0.5 - epsilon / pi;
    const double ang = pi * k.phi_tilde0;
    k.ej_op = 2.0 * ej0 * std::cos(ang);
    if (k.ej_op <= 0.0) throw InputError("operating point puts E_J(Phi_tilde0) <= 0");

    // beta_L0 = E_J(Phi_tilde0) / (Phi_0^2 / 4 pi^2 L), E_J in joules
    const double ej_op_joule = k.ej_op * constants::hbar;
    k.beta_l0 = ej_op_joule * 4.0 * pi * pi * l / (constants::phi0 * constants::phi0);
    if (k.beta_l0 <= 1.0)
        throw InputError("beta_L0 = " + std::to_string(k.beta_l0) +
                         " <= 1: no double-well potential");

    const double bm1 = k.beta_l0 - 1.0;
    const double sqrt_lc = std::sqrt(l * c);
    k.omega_star0 = std::sqrt(bm1 / (l * c));
    k.i0 = 8.0 * sqrt_lc * std::pow(bm1, 1.5) * k.ej_op;

    const double bracket = (1.0 / std::sin(ang)) / ((5.0 * k.beta_l0 - 2.0) * std::sqrt(bm1));
    k.d_coeff = bracket / (8.0 * sqrt_lc * ej0);
    k.c_coeff = k.d_coeff * (2.0 * pi * ph.b / k.omega_star0) * std::exp(k.i0);

    const auto t = detail::time_grid(ph.t0, samples);
    RfSquidSchedule s;
    s.phi_x.times = t;
    s.delta_phi_tilde.times = t;
    s.phi_x.channel = "Phi_x";
    s.phi_x.units = "Phi_0";
    s.delta_phi_tilde.channel = "delta_Phi_tilde_x";
    s.delta_phi_tilde.units = "Phi_0";
    s.phi_x.t0 = s.delta_phi_tilde.t0 = ph.t0;

    const double inv_denom = 1.0 / (pi * k.ej_op * std::sqrt(6.0 * bm1));
    const double tan_ang = std::tan(ang);
    for (double ti : t) {
        s.phi_x.values.push_back(0.5 * (1.0 + ph.a * ti * inv_denom));
        const double flux_ratio = k.c_coeff * std::cos(ph.phi_trp(ti)) - k.d_coeff;
        s.delta_phi_tilde.values.push_back(flux_ratio / pi);

        k.max_flux_ratio = std::max(k.max_flux_ratio, std::abs(flux_ratio));
        const double dej_ratio = std::abs(-tan_ang * flux_ratio);  // |dE_J| / E_J(op)
        k.max_dej_ratio = std::max(k.max_dej_ratio, dej_ratio);
        // dbeta_L / (beta_L0 - 1) = (dE_J/E_J) * beta_L0 / (beta_L0 - 1)
        k.max_dbeta_ratio = std::max(k.max_dbeta_ratio, dej_ratio * k.beta_l0 / bm1);
    }
    k.flux_ok = k.max_flux_ratio < threshold;
    k.dej_ok = k.max_dej_ratio < threshold;
    k.dbeta_ok = k.max_dbeta_ratio < threshold;
    s.constants = k;
    return s;
}

/// Persistent-current qubit: the two frustration detunings delta_1, delta_2
/// solve the 2x2 linear system that pins the sigma_z drive to (b/E_J0) tau
/// and the sigma_x drive to (b/E_J0) cos phi_trp. G = x1 z2 - x2 z1.
struct PcqSchedule {
    Waveform delta1, delta2;  // dimensionless frustration offsets
    double g_det = 0.0;
    // prefactors in the solved form
    //   delta1 = p1 [z0 - (b/E) tau] + p2 (b/E) cos phi
    //   delta2 = p3 [(b/E) tau - z0] + p4 (b/E) cos phi
    double p1 = 0.0, p2 = 0.0, p3 = 0.0, p4 = 0.0;
};

inline PcqSchedule pcq_schedule(const PhysicalSweep& ph, double ej0, double z0, double x1,
                                double x2, double z1, double z2, int samples = 4096) {
    ph.validate();
    if (!(ej0 > 0.0)) throw InputError("persistent-current qubit needs positive E_J0");
    const double g = x1 * z2 - x2 * z1;
    if (std::abs(g) <= 1e-12)
        throw InputError("singular control map: x1 z2 - x2 z1 = " + std::to_string(g) +
                         "; the two flux knobs cannot realize independent z and x drives");

    PcqSchedule s;
    s.g_det = g;
    s.p1 = -x2 / g;
    s.p2 = z2 / g;
    s.p3 = -x1 / g;
    s.p4 = -z1 / g;

    const double r = ph.b / ej0;  // b / E_J^0
    const auto t = detail::time_grid(ph.t0, samples);
    s.delta1.times = s.delta2.times = t;
    s.delta1.channel = "delta_1";
    s.delta2.channel = "delta_2";
    s.delta1.units = s.delta2.units = "frustration";
    s.delta1.t0 = s.delta2.t0 = ph.t0;
    for (double ti : t) {
        const double tau = ph.a / ph.b * ti;
        const double cosphi = std::cos(ph.phi_trp(ti));
        s.delta1.values.push_back(s.p1 * (z0 - r * tau) + s.p2 * r * cosphi);
        s.delta2.values.push_back(s.p3 * (r * tau - z0) + s.p4 * r * cosphi);
    }
    return s;
}

/// Effective sigma_z coefficient (a t) and sigma_x coefficient
/// (b cos phi_trp) recovered from emitted waveforms through the forward
/// control maps. Reproducing the requested sweep through these is the
/// defining contract of every backend.
struct ReconstructedSweep {
    std::vector<double> sigma_z;  // 1/s
    std::vector<double> sigma_x;  // 1/s
};

inline ReconstructedSweep reconstruct_charge(const ChargeQubitSchedule& s, double cg, double ec) {
    ReconstructedSweep r;
    for (std::size_t i = 0; i < s.vg.times.size(); ++i) {
        const double ng = cg * s.vg.values[i] / (2.0 * constants::e_charge);
        r.sigma_z.push_back(2.0 * ec * (1.0 - 2.0 * ng));      // B_z/2 = at
        r.sigma_x.push_back(s.ej0 * std::cos(pi * s.phi_x.values[i]));  // E_J(Phi_x)/2 with E_J0 = b
    }
    return r;
}

inline ReconstructedSweep reconstruct_rfsquid(const RfSquidSchedule& s) {
    const auto& k = s.constants;
    ReconstructedSweep r;
    const double ang = pi * k.phi_tilde0;
    const double bm1 = k.beta_l0 - 1.0;
    for (std::size_t i = 0; i < s.phi_x.times.size(); ++i) {
        r.sigma_z.push_back(2.0 * pi * (s.phi_x.values[i] - 0.5) * k.ej_op *
                            std::sqrt(6.0 * bm1));
        // first-order WKB response: dE_J from the flux deviation, then
        // b cos phi = (omega*0 / 2 pi) e^{-I0} [1 - I0 (3/2 dbeta/(beta-1) + dE_J/E_J)]
        const double flux_ratio = pi * s.delta_phi_tilde.values[i];
        const double dej_over_ej = -std::tan(ang) * flux_ratio;
        const double correction =
            1.0 - k.i0 * (1.5 * dej_over_ej * k.beta_l0 / bm1 + dej_over_ej);
        r.sigma_x.push_back(k.omega_star0 / (2.0 * pi) * std::exp(-k.i0) * correction);
    }
    return r;
}

inline ReconstructedSweep reconstruct_pcq(const PcqSchedule& s, double ej0, double z0, double x1,
                                          double x2, double z1, double z2) {
    ReconstructedSweep r;
    for (std::size_t i = 0; i < s.delta1.times.size(); ++i) {
        const double d1 = s.delta1.values[i], d2 = s.delta2.values[i];
        r.sigma_z.push_back(ej0 * (z0 - z1 * d1 - z2 * d2));
        r.sigma_x.push_back(ej0 * (x1 * d1 + x2 * d2));
    }
    return r;
}

inline ReconstructedSweep reconstruct_nmr(const NmrSweepParams& z, int samples) {
    const PhysicalSweep ph = nmr_invert(z);
    ReconstructedSweep r;
    for (double ti : detail::time_grid(ph.t0, samples)) {
        r.sigma_z.push_back(ph.a * ti);
        r.sigma_x.push_back(ph.b * std::cos(ph.phi_trp(ti)));
    }
    return r;
}

}  // namespace trp
