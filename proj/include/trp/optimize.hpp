#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "trp/errors.hpp"
#include "trp/metrics.hpp"
#include "trp/propagator.hpp"
#include "trp/rng.hpp"
#include "trp/targets.hpp"

namespace trp {

using Objective = std::function<double(const std::vector<double>&)>;

struct OptimizationTrace {
    struct Eval {
        std::vector<double> x;
        double value;
    };
    enum class Termination { converged, small_simplex, eval_budget, temperature_floor };

    std::vector<Eval> evaluations;
    Eval best{{}, std::numeric_limits<double>::infinity()};
    Termination termination = Termination::eval_budget;
    long failed_evaluations = 0;

    void record(const std::vector<double>& x, double v) {
        evaluations.push_back({x, v});
        if (v < best.value) best = {x, v};
    }
};

inline const char* termination_name(OptimizationTrace::Termination t) {
    switch (t) {
        case OptimizationTrace::Termination::converged: return "converged";
        case OptimizationTrace::Termination::small_simplex: return "small_simplex";
        case OptimizationTrace::Termination::eval_budget: return "eval_budget";
        case OptimizationTrace::Termination::temperature_floor: return "temperature_floor";
    }
    return "?";
}

struct NelderMeadOptions {
    double f_tol = 1e-12;        // stop when the vertex value spread falls below this
    double diameter_tol = 1e-10; // or when the simplex diameter does
    long max_evals = 20000;
};

namespace detail {

/// |det| of the edge matrix, used to reject degenerate simplexes.
inline double edge_volume(const std::vector<std::vector<double>>& simplex) {
    const std::size_t n = simplex.size() - 1;
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = simplex[i + 1][j] - simplex[0][j];
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (m[piv][c] == 0.0) return 0.0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return std::abs(det);
}

inline double distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace detail

/// Downhill simplex with the classic coefficients (reflection 1, expansion 2,
/// contraction 0.5, shrink 0.5). Finds a local minimum only.
inline OptimizationTrace nelder_mead(const Objective& fn,
                                     std::vector<std::vector<double>> simplex,
                                     const NelderMeadOptions& opt = {},
                                     OptimizationTrace* append_to = nullptr) {
    if (simplex.size() < 2) throw InputError("nelder_mead needs at least 2 vertices");
    const std::size_t n = simplex[0].size();
    if (simplex.size() != n + 1)
        throw InputError("nelder_mead needs dim+1 vertices, got " +
                         std::to_string(simplex.size()) + " for dim " + std::to_string(n));
    for (const auto& v : simplex)
        if (v.size() != n) throw InputError("nelder_mead simplex vertices differ in size");

    double scale = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i)
        scale = std::max(scale, detail::distance(simplex[i], simplex[0]));
    if (detail::edge_volume(simplex) <= std::pow(1e-14 * std::max(scale, 1e-300), double(n)))
        throw InputError("nelder_mead simplex is degenerate");

    OptimizationTrace local;
    OptimizationTrace& trace = append_to ? *append_to : local;

    auto eval = [&](const std::vector<double>& x) {
        double v = fn(x);
        if (!std::isfinite(v)) {
            v = std::numeric_limits<double>::infinity();
            ++trace.failed_evaluations;
        }
        trace.record(x, std::isfinite(v) ? v : std::numeric_limits<double>::max());
        return v;
    };

    std::vector<double> f(n + 1);
    long evals = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        f[i] = eval(simplex[i]);
        ++evals;
    }

    while (true) {
        std::vector<std::size_t> order(n + 1);
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        const std::size_t lo = order[0], hi = order[n], second_hi = order[n - 1];

        const double spread = f[hi] - f[lo];
        double diameter = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            diameter = std::max(diameter, detail::distance(simplex[i], simplex[lo]));
        if (spread < opt.f_tol) {
            trace.termination = OptimizationTrace::Termination::converged;
            break;
        }
        if (diameter < opt.diameter_tol) {
            trace.termination = OptimizationTrace::Termination::small_simplex;
            break;
        }
        if (evals >= opt.max_evals) {
            trace.termination = OptimizationTrace::Termination::eval_budget;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == hi) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / double(n);
        }

        auto along = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j)
                x[j] = centroid[j] + t * (centroid[j] - simplex[hi][j]);
            return x;
        };

        const auto xr = along(1.0);
        const double fr = eval(xr);
        ++evals;

        if (fr < f[lo]) {
            const auto xe = along(2.0);
            const double fe = eval(xe);
            ++evals;
            if (fe < fr) {
                simplex[hi] = xe;
                f[hi] = fe;
            } else {
                simplex[hi] = xr;
                f[hi] = fr;
            }
        } else if (fr < f[second_hi]) {
            simplex[hi] = xr;
            f[hi] = fr;
        } else {
            const auto xc = fr < f[hi] ? along(0.5) : along(-0.5);
            const double fc = eval(xc);
            ++evals;
            if (fc < std::min(fr, f[hi])) {
                simplex[hi] = xc;
                f[hi] = fc;
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == lo) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i][j] = simplex[lo][j] + 0.5 * (simplex[i][j] - simplex[lo][j]);
                    f[i] = eval(simplex[i]);
                    ++evals;
                }
            }
        }
    }
    return trace;
}

struct AnnealSchedule {
    double t0 = -1.0;       // <= 0 means 10 x the starting objective value
    double cooling = 0.95;  // geometric decay per sweep
    int sweep_length = 50;  // proposals per temperature
    double t_floor = 1e-12;
    long max_evals = 100000;
};

struct AnnealOptions {
    std::uint64_t seed = 1;
    std::vector<double> proposal_scale;  // per parameter; empty means 1e-3|x| floored at 1e-6
    std::vector<double> lower, upper;    // optional bounds, empty means unbounded
    bool polish = true;                  // finish with a simplex pass around the best point
    long polish_max_evals = 400;
};

/// Metropolis annealing with Gaussian proposals and a geometric temperature
/// schedule; deterministic for a fixed seed. Failed objective evaluations
/// score as +infinity and are simply rejected moves.
inline OptimizationTrace simulated_annealing(const Objective& fn, std::vector<double> start,
                                             const AnnealSchedule& schedule = {},
                                             const AnnealOptions& opt = {}) {
    const std::size_t n = start.size();
    if (n == 0) throw InputError("simulated_annealing needs at least one parameter");
    if (!opt.lower.empty() && (opt.lower.size() != n || opt.upper.size() != n))
        throw InputError("simulated_annealing bounds must match the parameter count");
    if (!opt.lower.empty())
        for (std::size_t i = 0; i < n; ++i)
            if (!(std::isfinite(opt.lower[i]) && std::isfinite(opt.upper[i])))
                throw InputError("simulated_annealing bounds must be finite when given");

    auto in_bounds = [&](const std::vector<double>& x) {
        if (opt.lower.empty()) return true;
        for (std::size_t i = 0; i < n; ++i)
            if (x[i] < opt.lower[i] || x[i] > opt.upper[i]) return false;
        return true;
    };
    if (!in_bounds(start)) throw InputError("simulated_annealing start violates the bounds");

    std::vector<double> scale = opt.proposal_scale;
    if (scale.empty()) {
        scale.resize(n);
        for (std::size_t i = 0; i < n; ++i) scale[i] = std::max(1e-3 * std::abs(start[i]), 1e-6);
    } else if (scale.size() != n) {
        throw InputError("proposal_scale must match the parameter count");
    }

    OptimizationTrace trace;
    auto eval = [&](const std::vector<double>& x) {
        double v = fn(x);
        if (!std::isfinite(v)) {
            v = std::numeric_limits<double>::infinity();
            ++trace.failed_evaluations;
        }
        trace.record(x, std::isfinite(v) ? v : std::numeric_limits<double>::max());
        return v;
    };

    Rng rng(opt.seed);
    std::vector<double> cur = start;
    double fcur = eval(cur);
    long evals = 1;

    double t = schedule.t0 > 0.0 ? schedule.t0 : 10.0 * std::max(fcur, 1e-30);
    trace.termination = OptimizationTrace::Termination::temperature_floor;

    while (t >= schedule.t_floor) {
        if (evals >= schedule.max_evals) {
            trace.termination = OptimizationTrace::Termination::eval_budget;
            break;
        }
        for (int i = 0; i < schedule.sweep_length && evals < schedule.max_evals; ++i) {
            std::vector<double> cand = cur;
            for (std::size_t j = 0; j < n; ++j) cand[j] += scale[j] * rng.gaussian();
            if (!in_bounds(cand)) continue;
            const double fc = eval(cand);
            ++evals;
            const double delta = fc - fcur;
            if (delta < 0.0 || rng.uniform() < std::exp(-delta / t)) {
                cur = cand;
                fcur = fc;
            }
        }
        t *= schedule.cooling;
    }

    if (opt.polish && !trace.best.x.empty()) {
        std::vector<std::vector<double>> simplex{trace.best.x};
        for (std::size_t j = 0; j < n; ++j) {
            auto v = trace.best.x;
            v[j] += scale[j];
            simplex.push_back(v);
        }
        NelderMeadOptions nm;
        nm.max_evals = opt.polish_max_evals;
        nelder_mead(fn, simplex, nm, &trace);
    }
    return trace;
}

/// What to optimize: a target gate, the parameter point to start from, and
/// which parameters are free. eta4 is handled in log space internally
/// because its scale is four orders of magnitude below lambda's.
struct ObjectiveSpec {
    Gate target = Gate::hadamard;
    std::variant<SweepParams, TwoQubitParams> center;
    std::vector<std::string> free;  // subset of parameter_names(), in vector order
    IntegratorOptions integrator;

    bool two_qubit() const { return std::holds_alternative<TwoQubitParams>(center); }

    std::vector<std::string> parameter_names() const {
        if (two_qubit()) return {"lambda", "eta4", "d1", "d2", "d3", "d4", "c4"};
        return {"lambda", "eta4"};
    }
};

namespace detail {

inline double get_param(const ObjectiveSpec& spec, const std::variant<SweepParams, TwoQubitParams>& p,
                        const std::string& name) {
    (void)spec;
    if (std::holds_alternative<SweepParams>(p)) {
        const auto& s = std::get<SweepParams>(p);
        if (name == "lambda") return s.lambda;
        if (name == "eta4") return s.eta4;
    } else {
        const auto& q = std::get<TwoQubitParams>(p);
        if (name == "lambda") return q.sweep.lambda;
        if (name == "eta4") return q.sweep.eta4;
        if (name == "d1") return q.d1;
        if (name == "d2") return q.d2;
        if (name == "d3") return q.d3;
        if (name == "d4") return q.d4;
        if (name == "c4") return q.c4;
    }
    throw InputError("unknown free parameter '" + name + "'");
}

inline void set_param(std::variant<SweepParams, TwoQubitParams>& p, const std::string& name,
                      double v) {
    if (std::holds_alternative<SweepParams>(p)) {
        auto& s = std::get<SweepParams>(p);
        if (name == "lambda") {
            s.lambda = v;
            return;
        }
        if (name == "eta4") {
            s.eta4 = v;
            return;
        }
    } else {
        auto& q = std::get<TwoQubitParams>(p);
        if (name == "lambda") {
            q.sweep.lambda = v;
            return;
        }
        if (name == "eta4") {
            q.sweep.eta4 = v;
            return;
        }
        if (name == "d1") {
            q.d1 = v;
            return;
        }
        if (name == "d2") {
            q.d2 = v;
            return;
        }
        if (name == "d3") {
            q.d3 = v;
            return;
        }
        if (name == "d4") {
            q.d4 = v;
            return;
        }
        if (name == "c4") {
            q.c4 = v;
            return;
        }
    }
    throw InputError("unknown free parameter '" + name + "'");
}

}  // namespace detail

/// Objective plus the encode/decode maps between free-parameter vectors and
/// parameter sets.
struct BuiltObjective {
    Objective fn;
    std::vector<double> x0;
    std::vector<std::string> names;

    std::function<std::variant<SweepParams, TwoQubitParams>(const std::vector<double>&)> decode;
    std::function<std::vector<double>(const std::variant<SweepParams, TwoQubitParams>&)> encode;
};

inline BuiltObjective build_objective(const ObjectiveSpec& spec) {
    BuiltObjective b;
    b.names = spec.free.empty() ? spec.parameter_names() : spec.free;
    if (b.names.empty()) throw InputError("objective needs at least one free parameter");

    const auto names = b.names;
    const auto center = spec.center;
    const auto spec_copy = spec;

    b.encode = [names, spec_copy](const std::variant<SweepParams, TwoQubitParams>& p) {
        std::vector<double> x(names.size());
        for (std::size_t i = 0; i < names.size(); ++i) {
            const double v = detail::get_param(spec_copy, p, names[i]);
            x[i] = names[i] == "eta4" ? std::log(v) : v;
        }
        return x;
    };
    b.decode = [names, center](const std::vector<double>& x) {
        auto p = center;
        for (std::size_t i = 0; i < names.size(); ++i)
            detail::set_param(p, names[i], names[i] == "eta4" ? std::exp(x[i]) : x[i]);
        return p;
    };
    b.x0 = b.encode(center);

    const auto decode = b.decode;
    const Gate target = spec.target;
    const IntegratorOptions integ = spec.integrator;
    b.fn = [decode, target, integ](const std::vector<double>& x) -> double {
        try {
            const auto p = decode(x);
            if (std::holds_alternative<SweepParams>(p))
                return assemble_unitary(std::get<SweepParams>(p), target_1q(target), integ).tr_p;
            return assemble_unitary(std::get<TwoQubitParams>(p), target_2q(target), integ).tr_p;
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    return b;
}

struct SensitivityRow {
    double value;
    double tr_p;
};

/// Tr P along one parameter axis, everything else held at the center point.
inline std::vector<SensitivityRow> sensitivity_scan(const ObjectiveSpec& spec,
                                                    const std::string& axis,
                                                    const std::vector<double>& values) {
    std::vector<SensitivityRow> rows;
    rows.reserve(values.size());
    for (std::size_t r = 0; r < values.size(); ++r) {
        const double v = values[r];
        auto p = spec.center;
        detail::set_param(p, axis, v);
        try {
            double trp;
            if (std::holds_alternative<SweepParams>(p))
                trp = assemble_unitary(std::get<SweepParams>(p), target_1q(spec.target),
                                       spec.integrator)
                          .tr_p;
            else
                trp = assemble_unitary(std::get<TwoQubitParams>(p), target_2q(spec.target),
                                       spec.integrator)
                          .tr_p;
            rows.push_back({v, trp});
        } catch (const NumericalError& e) {
            throw NumericalError("sensitivity row " + std::to_string(r) + " (" + axis + " = " +
                                 std::to_string(v) + "): " + e.what());
        }
    }
    return rows;
}

inline std::vector<SensitivityRow> sensitivity_table(const ObjectiveSpec& spec,
                                                     const std::string& axis,
                                                     const std::vector<double>& deltas) {
    const double c = detail::get_param(spec, spec.center, axis);
    std::vector<double> values;
    values.reserve(deltas.size());
    for (double d : deltas) values.push_back(c + d);
    return sensitivity_scan(spec, axis, values);
}

}  // namespace trp
