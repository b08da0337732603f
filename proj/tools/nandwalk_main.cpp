// Copyright 2026 The nandwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nandwalk/fit.hpp"
#include "nandwalk/nand_tree.hpp"
#include "nandwalk/oracle_gadget.hpp"
#include "nandwalk/product_formula.hpp"
#include "nandwalk/records.hpp"
#include "nandwalk/runner.hpp"
#include "nandwalk/state_vector.hpp"
#include "nandwalk/util.hpp"
#include "nandwalk/walk_system.hpp"

namespace {

using namespace nandwalk;

std::string joined_command(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

/// Writes to --out when given, stdout otherwise.
struct OutputTarget {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw std::runtime_error("cannot open output file: " + path);
            stream = &file;
        }
    }
    std::ostream& out() { return *stream; }
};

NandInstance parse_instance(int depth, const std::string& bits) {
    if (!bits.empty() && bits[0] == '@') {
        NandInstance inst = load_instance(bits.substr(1));
        if (depth >= 0 && depth != inst.depth) {
            throw std::invalid_argument("--depth disagrees with the instance file");
        }
        return inst;
    }
    if (depth < 0) throw std::invalid_argument("--depth is required");
    return NandInstance::from_bit_string(depth, bits);
}

NandInstance random_instance(int depth, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> bits(std::size_t{1} << depth);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1);
    return NandInstance(depth, std::move(bits));
}

struct SharedFlags {
    int depth = -1;
    std::string bits;
    int order = 2;
    double time_const = 0.0;
    double runway_const = 0.0;
    double sigma = -1.0;
    double eps_sim = 0.0;
    std::uint64_t seed = 20260809;
    std::string out_path;
    std::string format = "csv";
};

void add_config_flags(CLI::App* cmd, SharedFlags& flags) {
    cmd->add_option("--order", flags.order, "Product-formula order index k (order 2k)");
    cmd->add_option("--time-const", flags.time_const, "Evolution-time constant c_t");
    cmd->add_option("--runway-const", flags.runway_const, "Runway-length constant c_run");
    cmd->add_option("--sigma", flags.sigma, "Packet width (0 = automatic)");
    cmd->add_option("--eps-sim", flags.eps_sim, "Target simulation error");
}

RunConfig config_from_flags(const SharedFlags& flags) {
    RunConfig c = RunConfig::calibrated();
    if (flags.order > 0) c.order_index = flags.order;
    if (flags.time_const > 0.0) c.time_const = flags.time_const;
    if (flags.runway_const > 0.0) c.runway_const = flags.runway_const;
    if (flags.sigma >= 0.0) c.sigma = flags.sigma;
    if (flags.eps_sim > 0.0) c.eps_sim = flags.eps_sim;
    c.validate();
    return c;
}

int run_eval(const SharedFlags& flags) {
    const NandInstance inst = parse_instance(flags.depth, flags.bits);
    std::cout << eval_exact(inst) << "\n";
    return 0;
}

int run_classical_sweep(const SharedFlags& flags, int max_depth, const std::string& command) {
    const auto table = worst_case_table(max_depth);
    OutputTarget target(flags.out_path);
    if (flags.format == "jsonl") {
        for (int d = 0; d <= max_depth; ++d) {
            nlohmann::json j;
            j["depth"] = d;
            j["N"] = std::pow(2.0, d);
            j["W0"] = table[d].value0;
            j["W1"] = table[d].value1;
            j["W_max"] = table[d].worst();
            target.out() << j.dump() << "\n";
        }
        return 0;
    }
    CsvWriter writer(target.out(), make_record_header(command, flags.seed),
                     {"depth", "N", "W0", "W1", "W_max"});
    for (int d = 0; d <= max_depth; ++d) {
        writer.write_row({std::to_string(d), format_double(std::pow(2.0, d)),
                          format_double(table[d].value0), format_double(table[d].value1),
                          format_double(table[d].worst())});
    }
    return 0;
}

int run_gadget_verify(const SharedFlags& flags, int trials) {
    const int max_depth = flags.depth < 0 ? 3 : flags.depth;
    std::mt19937_64 rng(flags.seed);
    std::uniform_real_distribution<double> angle(-6.0, 6.0);
    double max_dev = 0.0;
    std::uint64_t invocations = 0;
    QueryLedger ledger;
    for (int depth = 0; depth <= max_depth; ++depth) {
        for (int trial = 0; trial < trials; ++trial) {
            const NandInstance inst = random_instance(depth, rng());
            const double t = angle(rng);
            const Eigen::MatrixXcd circuit = gadget_circuit_unitary(inst, t, ledger);
            const Eigen::MatrixXcd expected = dense_oracle_exponential(inst, t);
            invocations += static_cast<std::uint64_t>(circuit.cols());
            const std::size_t block = std::size_t{1} << (depth + 1);
            const std::uint64_t leaves = std::uint64_t{1} << depth;
            RegisterState layout(depth);
            for (std::size_t col = 0; col < block; ++col) {
                for (std::size_t row = 0; row < block; ++row) {
                    const auto ri = layout.index(static_cast<int>(row / leaves), row % leaves, 0);
                    const auto ci = layout.index(static_cast<int>(col / leaves), col % leaves, 0);
                    max_dev = std::max(max_dev, std::abs(circuit(ri, ci) - expected(row, col)));
                    const auto leak = layout.index(static_cast<int>(row / leaves), row % leaves, 1);
                    max_dev = std::max(max_dev, std::abs(circuit(leak, ci)));
                }
            }
        }
    }
    const bool ledger_ok = ledger.total == 2 * invocations;
    std::cout << "gadget-verify: max deviation " << max_dev << " over depths 0.." << max_depth
              << ", " << trials << " trials each; ledger "
              << (ledger_ok ? "consistent" : "INCONSISTENT") << " (2 queries per invocation)\n";
    return (max_dev <= 1e-12 && ledger_ok) ? 0 : 2;
}

int run_dump_system(const SharedFlags& flags, int runway_len, int attach) {
    const NandInstance inst = parse_instance(flags.depth, flags.bits);
    if (runway_len <= 0) {
        const RunConfig c = config_from_flags(flags);
        const RunGeometry g = run_geometry(inst.depth, c);
        runway_len = g.runway_len;
        attach = g.attach;
    }
    if (attach <= 0) attach = (runway_len + 1) / 2;
    const WalkSystem sys = build_walk_system(inst, runway_len, attach);
    OutputTarget target(flags.out_path);
    target.out() << system_to_json(sys).dump() << "\n";
    return 0;
}

int run_trotter_error(const SharedFlags& flags, int runway_len, double t, std::int64_t r_min,
                      std::int64_t r_max, const std::string& command) {
    const NandInstance inst = flags.bits.empty()
                                  ? random_instance(flags.depth < 0 ? 2 : flags.depth, flags.seed)
                                  : parse_instance(flags.depth, flags.bits);
    if (runway_len <= 0) runway_len = 16;
    const WalkSystem sys = build_walk_system(inst, runway_len, (runway_len + 1) / 2);
    std::mt19937_64 rng(flags.seed ^ 0xabcdef);
    std::normal_distribution<double> gauss(0.0, 1.0);
    StateVec probe(sys.dim);
    for (auto& a : probe.amp) a = Amplitude(gauss(rng), gauss(rng));
    probe.normalize();

    OutputTarget target(flags.out_path);
    std::unique_ptr<CsvWriter> csv;
    if (flags.format != "jsonl") {
        csv = std::make_unique<CsvWriter>(
            target.out(), make_record_header(command, flags.seed),
            std::vector<std::string>{"n", "M", "k", "t", "r", "lambda", "error", "queries"});
    }
    std::uint64_t per_segment = 2;
    for (int i = 1; i < flags.order; ++i) per_segment *= 5;
    for (std::int64_t r = r_min; r <= r_max; r *= 2) {
        const double err = measure_error(sys, t, flags.order, r, probe);
        const double lambda = t / static_cast<double>(r);
        const std::uint64_t queries = per_segment * static_cast<std::uint64_t>(r);
        if (csv) {
            csv->write_row({std::to_string(inst.depth), std::to_string(runway_len),
                            std::to_string(flags.order), format_double(t), std::to_string(r),
                            format_double(lambda), format_double(err), std::to_string(queries)});
        } else {
            nlohmann::json j;
            j["n"] = inst.depth;
            j["M"] = runway_len;
            j["k"] = flags.order;
            j["t"] = t;
            j["r"] = r;
            j["lambda"] = lambda;
            j["error"] = err;
            j["queries"] = queries;
            target.out() << j.dump() << "\n";
        }
    }
    return 0;
}

int run_run(const SharedFlags& flags, double theta, const std::string& snapshot_path) {
    const NandInstance inst = parse_instance(flags.depth, flags.bits);
    RunConfig config = config_from_flags(flags);
    if (theta > 0.0) {
        config.theta = theta;
        config.validate();
    }
    StateVec final_state;
    const RunResult result = run_instance(inst, config, &final_state);
    if (!snapshot_path.empty()) {
        std::ofstream snap(snapshot_path);
        if (!snap) throw std::runtime_error("cannot open snapshot file: " + snapshot_path);
        snap << state_to_json(final_state).dump() << "\n";
    }
    OutputTarget target(flags.out_path);
    target.out() << result.to_json(inst).dump() << "\n";
    return 0;
}

int run_sweep(const SharedFlags& flags, int n_min, int n_max, std::vector<int> k_list,
              int execute_max_depth, const std::string& command) {
    if (k_list.empty()) k_list = {1, 2, 3};
    const RunConfig config = config_from_flags(flags);
    const auto rows = sweep_scaling(n_min, n_max, config, k_list, execute_max_depth, flags.seed);
    OutputTarget target(flags.out_path);
    if (flags.format == "jsonl") {
        for (const auto& row : rows) {
            nlohmann::json j;
            j["n"] = row.depth;
            j["N"] = row.problem_size;
            j["k"] = row.order_index;
            j["t"] = row.time;
            j["r"] = row.segments;
            j["queries"] = row.queries;
            j["executed"] = row.executed;
            if (row.executed) {
                j["decided_bit"] = row.decided_bit < 0 ? nlohmann::json() : nlohmann::json(row.decided_bit);
                j["exact_bit"] = row.exact_bit;
            }
            target.out() << j.dump() << "\n";
        }
        return 0;
    }
    CsvWriter writer(target.out(), make_record_header(command, flags.seed),
                     {"n", "N", "k", "t", "r", "queries", "executed", "decided_bit", "exact_bit"});
    for (const auto& row : rows) {
        writer.write_row({std::to_string(row.depth), std::to_string(row.problem_size),
                          std::to_string(row.order_index), format_double(row.time),
                          std::to_string(row.segments), std::to_string(row.queries),
                          row.executed ? "1" : "0", std::to_string(row.decided_bit),
                          std::to_string(row.exact_bit)});
    }
    return 0;
}

int run_calibrate(const SharedFlags& flags, const std::string& targetname, int trials,
                  bool skip_formula, const std::string& command) {
    OutputTarget target(flags.out_path);
    if (targetname == "trotter") {
        const TrotterCalibration cal = calibrate_trotter_constants();
        nlohmann::json j = cal.to_json();
        j["generated_by"] = command;
        target.out() << j.dump(2) << "\n";
        return 0;
    }
    CalibrationOptions options;
    options.trials_per_depth = trials;
    options.seed = flags.seed;
    options.validate_with_formula = !skip_formula;
    if (flags.order > 0) options.order_index = flags.order;
    if (flags.eps_sim > 0.0) options.eps_sim = flags.eps_sim;
    const CalibrationOutcome outcome = calibrate(options);
    nlohmann::json j = outcome.to_json();
    j["generated_by"] = command;
    target.out() << j.dump(2) << "\n";
    std::cerr << "calibrate: " << (outcome.passed ? "passed" : "FAILED (best shown)") << "\n";
    return outcome.passed ? 0 : 2;
}

int run_fit(const std::string& path, const std::string& x_col, const std::string& y_col) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    const CsvTable table = read_csv(in);
    const FitResult fit = fit_loglog(table.numeric_column(x_col), table.numeric_column(y_col));
    nlohmann::json j;
    j["x"] = x_col;
    j["y"] = y_col;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r_squared"] = fit.r_squared;
    std::cout << j.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nandwalk: discrete-query NAND-tree walk simulator and benchmark harness"};
    app.require_subcommand(1);
    const std::string command = joined_command(argc, argv);

    SharedFlags flags;

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a NAND-tree instance classically");
    eval_cmd->add_option("--depth", flags.depth, "Tree depth n");
    eval_cmd->add_option("--bits", flags.bits, "2^n bits, or @file with instance JSON")
        ->required();

    auto* classical_cmd =
        app.add_subcommand("classical-sweep", "Worst-case expected-query table of the "
                                              "randomized pruning evaluator");
    int max_depth = 30;
    classical_cmd->add_option("--max-depth", max_depth, "Largest depth in the table");

    auto* gadget_cmd = app.add_subcommand(
        "gadget-verify", "Check the two-query circuit against the dense oracle exponential");
    int trials = 20;
    gadget_cmd->add_option("--depth", flags.depth, "Largest register depth (default 3)");
    gadget_cmd->add_option("--trials", trials, "Random (instance, t) draws per depth");
    gadget_cmd->add_option("--seed", flags.seed, "RNG seed");

    auto* dump_cmd = app.add_subcommand("dump-system", "Emit the walk-system edge lists as JSON");
    int runway_len = 0, attach = 0;
    dump_cmd->add_option("--depth", flags.depth, "Tree depth n");
    dump_cmd->add_option("--bits", flags.bits, "2^n bits, or @file")->required();
    dump_cmd->add_option("--runway-len", runway_len, "Explicit runway length M");
    dump_cmd->add_option("--attach", attach, "Attach position (default mid-runway)");
    dump_cmd->add_option("--out", flags.out_path, "Output file (default stdout)");
    add_config_flags(dump_cmd, flags);

    auto* trotter_cmd =
        app.add_subcommand("trotter-error", "Product-formula error ladder on one system");
    double ladder_time = 2.0;
    std::int64_t r_min = 5, r_max = 80;
    trotter_cmd->add_option("--depth", flags.depth, "Tree depth n (default 2)");
    trotter_cmd->add_option("--bits", flags.bits, "Bits (default seeded random)");
    trotter_cmd->add_option("--runway-len", runway_len, "Runway length (default 16)");
    trotter_cmd->add_option("--order", flags.order, "Order index k");
    trotter_cmd->add_option("--time", ladder_time, "Total evolution time");
    trotter_cmd->add_option("--r-min", r_min, "Smallest segment count");
    trotter_cmd->add_option("--r-max", r_max, "Largest segment count (doubling ladder)");
    trotter_cmd->add_option("--seed", flags.seed, "RNG seed");
    trotter_cmd->add_option("--out", flags.out_path, "Output file");
    trotter_cmd->add_option("--format", flags.format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));

    auto* run_cmd = app.add_subcommand("run", "End-to-end quantum evaluation of one instance");
    double theta = 0.0;
    std::string snapshot_path;
    run_cmd->add_option("--depth", flags.depth, "Tree depth n");
    run_cmd->add_option("--bits", flags.bits, "2^n bits, or @file")->required();
    run_cmd->add_option("--theta", theta, "Decision threshold override");
    run_cmd->add_option("--snapshot", snapshot_path, "Write the final state as JSON");
    run_cmd->add_option("--out", flags.out_path, "Output file (default stdout)");
    add_config_flags(run_cmd, flags);

    auto* sweep_cmd = app.add_subcommand("sweep", "Query-count scaling table over depths");
    int n_min = 4, n_max = 12, execute_max_depth = 0;
    std::vector<int> k_list;
    sweep_cmd->add_option("--n-min", n_min, "Smallest depth");
    sweep_cmd->add_option("--n-max", n_max, "Largest depth");
    sweep_cmd->add_option("--k-list", k_list, "Order indices (default 1 2 3)");
    sweep_cmd->add_option("--execute-max-depth", execute_max_depth,
                          "Also run the evolution up to this depth");
    sweep_cmd->add_option("--seed", flags.seed, "RNG seed");
    sweep_cmd->add_option("--out", flags.out_path, "Output file");
    sweep_cmd->add_option("--format", flags.format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    add_config_flags(sweep_cmd, flags);

    auto* calibrate_cmd = app.add_subcommand("calibrate", "Freeze run or trotter constants");
    std::string calibrate_target = "run";
    bool skip_formula = false;
    calibrate_cmd->add_option("--target", calibrate_target, "run or trotter")
        ->check(CLI::IsMember({"run", "trotter"}));
    calibrate_cmd->add_option("--trials", trials, "Sampled instances per depth above 2");
    calibrate_cmd->add_flag("--skip-formula-validation", skip_formula,
                            "Grid phase only (faster, less faithful)");
    calibrate_cmd->add_option("--seed", flags.seed, "RNG seed");
    calibrate_cmd->add_option("--out", flags.out_path, "Fixture output file");
    add_config_flags(calibrate_cmd, flags);

    auto* fit_cmd = app.add_subcommand("fit", "Log-log regression over two CSV columns");
    std::string fit_file, x_col = "N", y_col = "queries";
    fit_cmd->add_option("file", fit_file, "CSV file")->required();
    fit_cmd->add_option("--x", x_col, "X column name");
    fit_cmd->add_option("--y", y_col, "Y column name");

    try {
        app.parse(argc, argv);
        if (*eval_cmd) return run_eval(flags);
        if (*classical_cmd) return run_classical_sweep(flags, max_depth, command);
        if (*gadget_cmd) return run_gadget_verify(flags, trials);
        if (*dump_cmd) return run_dump_system(flags, runway_len, attach);
        if (*trotter_cmd) return run_trotter_error(flags, runway_len, ladder_time, r_min, r_max, command);
        if (*run_cmd) return run_run(flags, theta, snapshot_path);
        if (*sweep_cmd) return run_sweep(flags, n_min, n_max, k_list, execute_max_depth, command);
        if (*calibrate_cmd) return run_calibrate(flags, calibrate_target, trials, skip_formula, command);
        if (*fit_cmd) return run_fit(fit_file, x_col, y_col);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const cap_exceeded& e) {
        std::cerr << "nandwalk: refused: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "nandwalk: refused: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "nandwalk: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
