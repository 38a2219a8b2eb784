// fdst: greedy full-degree spanning trees on random regular graphs.
//
//   fdst simulate          seeded lazy/graph-mode runs, per-trial JSON + trajectory CSVs
//   fdst integrate         two-phase ODE solution, result JSON + solution CSV
//   fdst reproduce-table1  f_r for r = 3..10 against the reference table
//   fdst exact             exact phi / lambda / gamma_C with identity checks
//   fdst compare           simulation vs ODE sup-norm deviations
//
// Any subcommand accepts --config FILE with key=value lines; flags on the
// command line win over the file.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "fdst/errors.hpp"
#include "fdst/harness.hpp"
#include "fdst/published_values.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Expands "--config FILE" into "--key value" pairs placed before the
/// remaining arguments of the subcommand.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<std::string> out;
    std::vector<std::string> from_file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            std::ifstream in(args[i + 1]);
            if (!in) throw fdst::InvalidInput("cannot open config file " + args[i + 1]);
            std::string line;
            while (std::getline(in, line)) {
                const auto hash = line.find('#');
                if (hash != std::string::npos) line.erase(hash);
                const auto eq = line.find('=');
                if (eq == std::string::npos) continue;
                auto trim = [](std::string s) {
                    const auto b = s.find_first_not_of(" \t\r");
                    const auto e = s.find_last_not_of(" \t\r");
                    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
                };
                from_file.push_back("--" + trim(line.substr(0, eq)));
                from_file.push_back(trim(line.substr(eq + 1)));
            }
            ++i;
            continue;
        }
        out.push_back(args[i]);
    }
    if (!from_file.empty()) {
        // Insert right after the subcommand name.
        const auto pos = out.empty() ? out.end() : out.begin() + 1;
        out.insert(pos, from_file.begin(), from_file.end());
    }
    return out;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw fdst::InvalidInput("cannot write " + path.string());
    out << text;
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Greedy full-degree spanning trees on random regular graphs", "fdst"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string config_file;
    app.add_option("--config", config_file, "key=value file (flags override)");

    // simulate
    fdst::SimulateConfig sim;
    std::string mode = "lazy";
    std::string sim_out;
    bool sim_check = false;
    double sim_tol = 0.005;
    auto* simulate = app.add_subcommand("simulate", "Run seeded trials of the greedy algorithm");
    simulate->add_option("--r", sim.r, "Degree")->capture_default_str();
    simulate->add_option("--n", sim.n, "Vertices")->capture_default_str();
    simulate->add_option("--trials", sim.trials, "Independent trials")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Base seed")->capture_default_str();
    simulate->add_option("--mode", mode, "lazy or graph")->check(CLI::IsMember({"lazy", "graph"}))->capture_default_str();
    simulate->add_option("--stride", sim.sample_stride, "Trajectory sample stride (0 = ceil(n/1000))");
    simulate->add_option("--threads", sim.threads, "Worker threads (0 = auto)");
    simulate->add_option("--out", sim_out, "Output directory");
    simulate->add_flag("--check", sim_check, "Fail unless the mean F/n matches the reference f_r");
    simulate->add_option("--tol", sim_tol, "Tolerance for --check")->capture_default_str();

    // integrate
    int int_r = 3;
    fdst::IntegrationOptions integ;
    int csv_stride = 100;
    std::string int_out;
    auto* integrate = app.add_subcommand("integrate", "Solve the two-phase trajectory system");
    integrate->add_option("--r", int_r, "Degree")->capture_default_str();
    integrate->add_option("--step", integ.step, "RK4 step")->capture_default_str();
    integrate->add_option("--event-tol", integ.event_tol, "Event bisection tolerance")->capture_default_str();
    integrate->add_option("--csv-stride", csv_stride, "Write every k-th grid point")->capture_default_str();
    integrate->add_option("--out", int_out, "Output directory");

    // reproduce-table1
    fdst::IntegrationOptions table_opt;
    double table_tol = 1e-3;
    std::string table_out;
    auto* table = app.add_subcommand("reproduce-table1", "Integrate r = 3..10 and compare f_r");
    table->add_option("--step", table_opt.step, "RK4 step")->capture_default_str();
    table->add_option("--event-tol", table_opt.event_tol, "Event bisection tolerance")->capture_default_str();
    table->add_option("--tol", table_tol, "Allowed |f_r - reference|")->capture_default_str();
    table->add_option("--out", table_out, "Output directory");

    // exact
    std::string graph_spec;
    std::string graph_file;
    int trees_max = 12;
    std::string exact_out;
    auto* exact = app.add_subcommand("exact", "Exact phi, lambda, gamma_C on a small graph");
    auto* spec_opt = exact->add_option("--graph", graph_spec,
                                       "Named graph (k4, k33, prism, cube, petersen, mobius-kantor) or "
                                       "construction prism:r=3,m=5 | grid:delta=4,m=4 | cycle:n=6");
    auto* file_opt = exact->add_option("--file", graph_file, "Graph file ('n r' header, 'u v' edges)");
    spec_opt->excludes(file_opt);
    exact->add_option("--trees-max", trees_max, "Cross-check phi by tree enumeration up to this n")
        ->capture_default_str();
    exact->add_option("--out", exact_out, "Output directory");

    // compare
    fdst::CompareConfig cmp;
    std::string cmp_out;
    std::string sim_csv;
    std::string ode_csv;
    auto* compare = app.add_subcommand("compare", "Sup-norm deviation of simulations from the ODE");
    compare->add_option("--r", cmp.simulate.r, "Degree")->capture_default_str();
    compare->add_option("--n", cmp.simulate.n, "Vertices")->capture_default_str();
    compare->add_option("--trials", cmp.simulate.trials, "Independent trials")->capture_default_str();
    compare->add_option("--seed", cmp.simulate.seed, "Base seed")->capture_default_str();
    compare->add_option("--stride", cmp.simulate.sample_stride, "Trajectory sample stride");
    compare->add_option("--threads", cmp.simulate.threads, "Worker threads (0 = auto)");
    compare->add_option("--step", cmp.integration.step, "RK4 step")->capture_default_str();
    compare->add_option("--event-tol", cmp.integration.event_tol, "Event bisection tolerance")
        ->capture_default_str();
    compare->add_option("--tol", cmp.tolerance, "Allowed sup deviation")->capture_default_str();
    compare->add_option("--sim-csv", sim_csv, "Compare this trajectory CSV instead of simulating");
    compare->add_option("--ode-csv", ode_csv, "Reference solution CSV (with --sim-csv)");
    compare->add_option("--out", cmp_out, "Output directory (merged CSV for plotting)");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? fdst::kExitOk : fdst::kExitUsage;
    } catch (const fdst::InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return fdst::kExitUsage;
    }

    try {
        if (*simulate) {
            sim.mode = mode == "graph" ? fdst::RunMode::Graph : fdst::RunMode::Lazy;
            const Timer timer;
            const fdst::SimulateSummary summary = fdst::run_simulations(sim);
            json j = fdst::to_json(summary);
            int code = fdst::kExitOk;
            if (sim_check && !summary.trials.empty()) {
                const auto ref = fdst::published::f_r(sim.r);
                if (!ref) throw fdst::InvalidInput("no reference f_r for r=" + std::to_string(sim.r));
                const bool ok = std::abs(summary.mean_full_fraction - *ref) <= sim_tol;
                j["check"] = {{"f_r_reference", *ref}, {"tolerance", sim_tol}, {"pass", ok}};
                if (!ok) code = fdst::kExitTolerance;
            }
            if (!sim_out.empty()) {
                ensure_dir(sim_out);
                write_file(fs::path(sim_out) / "simulate.json", j.dump(2) + "\n");
                for (const auto& t : summary.trials) {
                    if (t.trajectory.samples.empty()) continue;
                    std::ofstream csv(fs::path(sim_out) / ("trajectory_trial_" + std::to_string(t.trial) + ".csv"));
                    fdst::write_trajectory_csv(csv, t.trajectory);
                }
            }
            std::cout << j.dump(2) << '\n';
            std::cerr << "simulate: " << summary.trials.size() << " trials in " << std::fixed
                      << std::setprecision(2) << timer.seconds() << " s\n";
            return code;
        }

        if (*integrate) {
            const fdst::TrajectoryResult res = fdst::integrate_two_phase(int_r, integ);
            const json j = fdst::to_json(res);
            if (!int_out.empty()) {
                ensure_dir(int_out);
                write_file(fs::path(int_out) / "integrate.json", j.dump(2) + "\n");
                fdst::Trajectory traj = fdst::to_trajectory(res);
                fdst::Trajectory thinned{traj.r, csv_stride, {}};
                for (std::size_t k = 0; k < traj.samples.size(); ++k) {
                    if (k % csv_stride == 0 || k + 1 == traj.samples.size()) thinned.samples.push_back(traj.samples[k]);
                }
                std::ofstream csv(fs::path(int_out) / "solution.csv");
                fdst::write_trajectory_csv(csv, thinned);
            }
            std::cout << j.dump(2) << '\n';
            return fdst::kExitOk;
        }

        if (*table) {
            const Timer timer;
            const fdst::TableReport rep = fdst::reproduce_table(table_opt, table_tol);
            std::cout << " r   f_r computed  f_r reference   u_r      |delta|\n";
            for (const auto& row : rep.rows) {
                std::cout << std::setw(2) << row.r << "   " << std::fixed << std::setprecision(6)
                          << row.f_computed << "      " << std::setprecision(4) << row.f_published
                          << "       " << row.u_r << "   " << std::scientific << std::setprecision(2)
                          << row.abs_delta << std::defaultfloat << '\n';
            }
            std::cout << (rep.pass ? "PASS" : "FAIL") << " (tolerance " << rep.tolerance << ", "
                      << std::fixed << std::setprecision(2) << timer.seconds() << " s)\n";
            if (!table_out.empty()) {
                ensure_dir(table_out);
                write_file(fs::path(table_out) / "table1.json", fdst::to_json(rep).dump(2) + "\n");
            }
            return rep.pass ? fdst::kExitOk : fdst::kExitTolerance;
        }

        if (*exact) {
            fdst::Graph g;
            if (!graph_file.empty()) {
                std::ifstream in(graph_file);
                if (!in) throw fdst::InvalidInput("cannot open " + graph_file);
                g = fdst::read_graph(in);
            } else if (!graph_spec.empty()) {
                g = fdst::graph_from_spec(graph_spec);
            } else {
                throw fdst::InvalidInput("exact needs --graph or --file");
            }
            const fdst::ExactResult res = fdst::exact_parameters(g, trees_max);
            const fdst::PropositionReport checks = fdst::check_propositions(g, res);
            json j = fdst::to_json(res, checks);
            bool ok = checks.all_pass();
            if (graph_spec.rfind("prism:", 0) == 0) {
                const int r = g.max_degree();
                const int m = g.n() / (r - 1);
                const auto witness = fdst::prism_torus_witness(r, m);
                const bool valid = fdst::stars_form_forest(g, witness);
                j["construction_witness"] = {{"set", witness},
                                             {"size", witness.size()},
                                             {"valid", valid},
                                             {"bound", m - 2}};
                ok = ok && valid && res.phi >= m - 2;
            }
            if (!exact_out.empty()) {
                ensure_dir(exact_out);
                write_file(fs::path(exact_out) / "exact.json", j.dump(2) + "\n");
            }
            std::cout << j.dump(2) << '\n';
            return ok ? fdst::kExitOk : fdst::kExitTolerance;
        }

        if (*compare) {
            fdst::CompareReport rep;
            if (!sim_csv.empty() || !ode_csv.empty()) {
                if (sim_csv.empty() || ode_csv.empty()) {
                    throw fdst::InvalidInput("--sim-csv and --ode-csv go together");
                }
                std::ifstream a(sim_csv);
                std::ifstream b(ode_csv);
                if (!a || !b) throw fdst::InvalidInput("cannot open trajectory CSVs");
                const fdst::Trajectory emp = fdst::read_trajectory_csv(a);
                const fdst::Trajectory ref = fdst::read_trajectory_csv(b);
                rep.r = emp.r;
                rep.tolerance = cmp.tolerance;
                rep.deviations = fdst::trajectory_deviation(emp, ref);
                rep.per_trial.push_back(rep.deviations);
                rep.mean_full_fraction = emp.samples.back().z_full;
                rep.pass = std::all_of(rep.deviations.begin(), rep.deviations.end(),
                                       [&](const auto& d) { return d.sup <= cmp.tolerance; });
                if (!cmp_out.empty()) {
                    ensure_dir(cmp_out);
                    std::ofstream merged(fs::path(cmp_out) / "merged.csv");
                    fdst::write_merged_csv(merged, emp, ref);
                }
            } else {
                const fdst::TrajectoryResult ode = fdst::integrate_two_phase(cmp.simulate.r, cmp.integration);
                const fdst::SimulateSummary sims = fdst::run_simulations(cmp.simulate);
                rep = fdst::compare_with_ode(cmp, ode, sims);
                if (!cmp_out.empty() && !sims.trials.empty()) {
                    ensure_dir(cmp_out);
                    std::ofstream merged(fs::path(cmp_out) / "merged.csv");
                    fdst::write_merged_csv(merged, sims.trials.front().trajectory, fdst::to_trajectory(ode));
                }
            }
            const json j = fdst::to_json(rep);
            if (!cmp_out.empty()) {
                ensure_dir(cmp_out);
                write_file(fs::path(cmp_out) / "compare.json", j.dump(2) + "\n");
            }
            std::cout << j.dump(2) << '\n';
            return rep.pass ? fdst::kExitOk : fdst::kExitTolerance;
        }
    } catch (const fdst::InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return fdst::kExitUsage;
    } catch (const fdst::SizeGuardExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return fdst::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return fdst::kExitInternal;
    }
    return fdst::kExitUsage;
}
