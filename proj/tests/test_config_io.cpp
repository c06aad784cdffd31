#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "trp/serialize.hpp"

using namespace trp;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "./" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

#ifdef TRP_CLI_PATH
std::string run_cli(const std::string& cli_args, int& exit_code,
                    const std::string& stdout_file = "cli_out.txt") {
    const std::string cmd =
        std::string(TRP_CLI_PATH) + " " + cli_args + " > " + stdout_file + " 2> cli_err.txt";
    const int rc = std::system(cmd.c_str());
    exit_code = WEXITSTATUS(rc);
    std::ifstream in(stdout_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
#endif

}  // namespace

TEST_CASE("config parsing") {
    const auto path = write_temp("cfg_basic.cfg",
                                 "# comment line\n"
                                 "sweep.lambda = 5.8511\n"
                                 "sweep.eta4   = 2.9280e-4   # trailing comment\n"
                                 "sweep.tau0 = 80\n"
                                 "target.name = hadamard\n"
                                 "\n");
    auto cfg = RunConfig::from_file(path);
    CHECK(cfg.get_double("sweep.lambda") == doctest::Approx(5.8511));
    CHECK(cfg.get_double("sweep.eta4") == doctest::Approx(2.9280e-4));
    CHECK(cfg.get_string("target.name") == "hadamard");
    CHECK_FALSE(cfg.has("twoqubit.d1"));

    SUBCASE("overrides replace values") {
        cfg.apply_override("sweep.lambda=6.0");
        CHECK(cfg.get_double("sweep.lambda") == doctest::Approx(6.0));
        CHECK_THROWS_AS(cfg.apply_override("sweep.lambda"), InputError);
    }

    SUBCASE("unknown keys are rejected by name") {
        try {
            cfg.set("sweep.lambada", "1.0");
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("sweep.lambada") != std::string::npos);
        }
    }

    SUBCASE("missing keys are reported by name") {
        try {
            (void)cfg.get_double("twoqubit.d1");
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("twoqubit.d1") != std::string::npos);
        }
    }

    SUBCASE("malformed numbers are rejected") {
        cfg.set("sweep.tau0", "eighty");
        CHECK_THROWS_AS((void)cfg.get_double("sweep.tau0"), InputError);
    }

    SUBCASE("typed builders") {
        const auto p = sweep_from_config(cfg);
        CHECK(p.lambda == doctest::Approx(5.8511));
        const auto o = integrator_from_config(cfg);
        CHECK(o.rel_tol == doctest::Approx(1e-10));
        cfg.set("integrator.init_gauge", "nonsense");
        CHECK_THROWS_AS((void)integrator_from_config(cfg), InputError);
    }

    SUBCASE("list values") {
        cfg.set("tables.which", "1, 3,7");
        CHECK(cfg.get_int_list("tables.which") == std::vector<int>{1, 3, 7});
        cfg.set("optimize.free", "lambda, eta4");
        CHECK(cfg.get_name_list("optimize.free") ==
              std::vector<std::string>{"lambda", "eta4"});
    }
}

TEST_CASE("matrix json round trip") {
    cmat<2> m;
    m(0, 0) = cplx(0.5, -0.25);
    m(0, 1) = cplx(-1.0, 2.0);
    m(1, 0) = cplx(3.0, 0.125);
    m(1, 1) = cplx(0.0, -4.0);
    const auto j = matrix_to_json(m);
    const auto back = matrix_from_json<2>(j);
    CHECK(frobenius_norm(back - m) == 0.0);
}

TEST_CASE("gate result json has the full schema") {
    GateResult<2> r;
    r.unitary = cmat<2>::identity();
    r.tr_p = 1.5e-5;
    r.fidelity = 1.0 - 1.5e-5 / 4.0;
    r.steps_accepted = 100;
    r.steps_rejected = 3;
    r.max_norm_drift = 1e-11;
    r.unitarity_residual = 1e-12;
    const auto j = gate_result_to_json("hadamard", SweepParams{5.8511, 2.928e-4, 80.0}, r);
    CHECK(j.at("target") == "hadamard");
    CHECK(j.at("params").at("lambda") == doctest::Approx(5.8511));
    CHECK(j.at("tr_p") == doctest::Approx(1.5e-5));
    CHECK(j.at("diagnostics").at("steps_accepted") == 100);
    const auto u = matrix_from_json<2>(j.at("unitary"));
    CHECK(frobenius_norm(u - r.unitary) == 0.0);

    // reparse from text round trips
    const auto text = j.dump();
    const auto re = json::parse(text);
    CHECK(re == j);
}

TEST_CASE("waveform csv round trip") {
    Waveform w;
    w.channel = "Vg";
    w.units = "volts";
    w.t0 = 0.04;
    for (int i = 0; i <= 10; ++i) {
        w.times.push_back(-0.02 + 0.004 * i);
        w.values.push_back(std::sin(0.1 * i) * 1e-4);
    }
    std::stringstream ss;
    waveform_to_csv(w, ss);
    const auto first_line = ss.str().substr(0, ss.str().find('\n'));
    CHECK(first_line.rfind("# channel=Vg units=volts T0_seconds=", 0) == 0);

    const auto back = waveform_from_csv(ss);
    CHECK(back.channel == w.channel);
    CHECK(back.units == w.units);
    CHECK(back.t0 == w.t0);
    REQUIRE(back.times.size() == w.times.size());
    for (std::size_t i = 0; i < w.times.size(); ++i) {
        CHECK(back.times[i] == w.times[i]);    // full-precision, lossless
        CHECK(back.values[i] == w.values[i]);
    }
}

TEST_CASE("table csv layout") {
    std::vector<TableRow> rows{{"lambda", 5.8510, 7.22e-5, 7.1e-5},
                               {"lambda", 5.8511, 8.82e-6, 8.7e-6}};
    std::stringstream ss;
    table_to_csv(rows, ss);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "parameter,value,trp_reference,trp_simulated");
    std::getline(ss, line);
    CHECK(line.rfind("lambda,5.851", 0) == 0);
}

#ifdef TRP_CLI_PATH

TEST_CASE("cli: malformed config exits 2 and names the key") {
    write_temp("cfg_missing.cfg",
               "sweep.eta4 = 2.9280e-4\nsweep.tau0 = 80\ntarget.name = hadamard\n");
    int code = 0;
    run_cli("simulate --config cfg_missing.cfg", code);
    CHECK(code == 2);
    std::ifstream err("cli_err.txt");
    std::stringstream ss;
    ss << err.rdbuf();
    CHECK(ss.str().find("sweep.lambda") != std::string::npos);
}

TEST_CASE("cli: simulate emits valid json and is bit-identical across runs") {
    write_temp("cfg_sim.cfg",
               "sweep.lambda = 5.8511\nsweep.eta4 = 2.9280e-4\nsweep.tau0 = 80\n"
               "target.name = hadamard\nintegrator.rel_tol = 1e-8\n"
               "integrator.abs_tol = 1e-10\n");
    int code = 0;
    const auto out1 = run_cli("simulate --config cfg_sim.cfg", code, "cli_out1.txt");
    CHECK(code == 0);
    const auto j = json::parse(out1);
    CHECK(j.at("target") == "hadamard");
    CHECK(j.at("tr_p").get<double>() < 1e-4);
    const auto u = matrix_from_json<2>(j.at("unitary"));
    CHECK(frobenius_norm(dagger_mul(u, u) - cmat<2>::identity()) < 1e-8);

    const auto out2 = run_cli("simulate --config cfg_sim.cfg", code, "cli_out2.txt");
    CHECK(out1 == out2);
}

TEST_CASE("cli: seeded annealing trace is byte-identical") {
    write_temp("cfg_anneal.cfg",
               "sweep.lambda = 5.8511\nsweep.eta4 = 2.9280e-4\nsweep.tau0 = 80\n"
               "target.name = hadamard\noptimize.algorithm = anneal\n"
               "optimize.seed = 17\noptimize.max_evals = 6\noptimize.sweep_length = 5\n"
               "optimize.t_floor = 1e-3\noptimize.polish = 0\n"
               "integrator.rel_tol = 1e-8\nintegrator.abs_tol = 1e-10\n");
    int code = 0;
    run_cli("optimize --config cfg_anneal.cfg --out run_a", code);
    // out dir must exist beforehand; create then rerun
    (void)!std::system("mkdir -p run_a run_b");
    run_cli("optimize --config cfg_anneal.cfg --out run_a", code);
    CHECK(code == 0);
    run_cli("optimize --config cfg_anneal.cfg --out run_b", code);
    CHECK(code == 0);
    std::ifstream a("run_a/trace.json"), b("run_b/trace.json");
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().size() > 0);
}

TEST_CASE("cli: two-qubit simulate path produces a converged gate") {
    write_temp("cfg_vcp.cfg",
               "sweep.lambda = 5.1\nsweep.eta4 = 2.4e-4\nsweep.tau0 = 120\n"
               "twoqubit.d1 = 11.702\ntwoqubit.d2 = -2.6\ntwoqubit.d3 = -0.41\n"
               "twoqubit.d4 = 6.6650\ntwoqubit.c4 = 5.0003\ntarget.name = vcp\n"
               "integrator.rel_tol = 1e-8\nintegrator.abs_tol = 1e-10\n");
    int code = 0;
    const auto out = run_cli("simulate --config cfg_vcp.cfg", code);
    CHECK(code == 0);
    const auto j = json::parse(out);
    CHECK(j.at("params").at("d4") == doctest::Approx(6.6650));
    CHECK(j.at("fidelity_trp_quarter").get<double>() ==
          doctest::Approx(1.0 - j.at("tr_p").get<double>() / 4.0).epsilon(1e-12));
    const auto u = matrix_from_json<4>(j.at("unitary"));
    CHECK(frobenius_norm(dagger_mul(u, u) - cmat<4>::identity()) < 1e-6);
}

TEST_CASE("cli: tables command mirrors the reference row structure") {
    (void)!std::system("mkdir -p run_tab");
    int code = 0;
    run_cli("tables --set tables.which=1 --set integrator.rel_tol=1e-8 "
            "--set integrator.abs_tol=1e-10 --out run_tab",
            code);
    CHECK(code == 0);
    std::ifstream in("run_tab/table1.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "parameter,value,trp_reference,trp_simulated");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 6);  // two blocks of three rows
}

TEST_CASE("cli: annealing honors parameter bounds from the config") {
    write_temp("cfg_bounds.cfg",
               "sweep.lambda = 5.8511\nsweep.eta4 = 2.9280e-4\nsweep.tau0 = 80\n"
               "target.name = hadamard\noptimize.algorithm = anneal\n"
               "optimize.seed = 5\noptimize.max_evals = 10\noptimize.sweep_length = 8\n"
               "optimize.t_floor = 1e-3\noptimize.polish = 0\n"
               "optimize.proposal_rel = 2e-3\n"
               "optimize.bounds.lambda = 5.84,5.86\n"
               "integrator.rel_tol = 1e-8\nintegrator.abs_tol = 1e-10\n");
    (void)!std::system("mkdir -p run_bounds");
    int code = 0;
    run_cli("optimize --config cfg_bounds.cfg --out run_bounds", code);
    CHECK(code == 0);
    std::ifstream in("run_bounds/trace.json");
    REQUIRE(in.good());
    const auto j = json::parse(in);
    for (const auto& e : j.at("evaluations")) {
        const double lambda = e.at("x")[0].get<double>();
        CHECK(lambda >= 5.84);
        CHECK(lambda <= 5.86);
    }

    SUBCASE("bad output format is a config error") {
        int code2 = 0;
        run_cli("simulate --config cfg_sim.cfg --set output.format=xml", code2);
        CHECK(code2 == 2);
    }
}

TEST_CASE("cli: translate rfsquid writes waveforms and a constants report") {
    write_temp("cfg_rf.cfg",
               "sweep.lambda = 5.8511\nsweep.eta4 = 2.9280e-4\nsweep.tau0 = 80\n"
               "hardware.backend = rfsquid\nhardware.b_over_hbar = 400\n"
               "hardware.l_henry = 2.2832392763823187e-8\n"
               "hardware.c_farad = 4.3797424577613751e-11\n"
               "hardware.ej0_over_hbar = 1e11\nhardware.epsilon = 0.25\n"
               "hardware.samples = 64\n");
    (void)!std::system("mkdir -p run_rf");
    int code = 0;
    const auto out = run_cli("translate --config cfg_rf.cfg --out run_rf", code);
    CHECK(code == 0);
    const auto j = json::parse(out);
    CHECK(j.at("i0").get<double>() == doctest::Approx(12.517760214204576).epsilon(1e-9));
    std::ifstream wf("run_rf/phi_x.csv");
    CHECK(wf.good());
    const auto back = waveform_from_csv(wf);
    CHECK(back.times.size() == 64);

    SUBCASE("no double well is a numerical error with exit 1") {
        int code2 = 0;
        run_cli("translate --config cfg_rf.cfg --set hardware.l_henry=1e-12 --out run_rf",
                code2);
        CHECK(code2 == 2);  // rejected as invalid physical input
    }
}

#endif  // TRP_CLI_PATH
