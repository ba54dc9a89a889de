#pragma once

// Command-line front end: simulate | recover | sweep | verify.
//
// Exit codes: 0 success, 2 config/usage error, 3 I/O error,
// 4 verification failure.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bridgesift/config.hpp"
#include "bridgesift/experiments.hpp"
#include "bridgesift/io.hpp"
#include "bridgesift/manifest.hpp"
#include "bridgesift/recover.hpp"
#include "bridgesift/verify.hpp"

namespace bridgesift::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitVerify = 4;

enum class OutputFormat { Csv, Json };

inline OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ConfigError("--format must be csv or json, got '" + s + "'");
}

inline unsigned resolve_threads(std::optional<unsigned> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("BRIDGESIFT_THREADS")) {
        try {
            const unsigned long v = std::stoul(env);
            return static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw ConfigError(std::string("BRIDGESIFT_THREADS is not an integer: '") + env + "'");
        }
    }
    return 0; // all hardware threads
}

namespace detail {

template <class Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

inline void write_manifest_file(const std::filesystem::path& beside, const RunManifest& manifest,
                                const nlohmann::json& extra = nlohmann::json::object()) {
    nlohmann::json j = manifest.to_json();
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    write_text_file(beside, j.dump(2) + "\n");
}

} // namespace detail

struct SimulateOptions {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    OutputFormat format = OutputFormat::Csv;
};

inline int cmd_simulate(const SimulateOptions& opt) {
    return detail::guarded([&]() {
        FlatConfig cfg = parse_config_text(read_text_file(opt.config_path));
        reject_unknown_keys(cfg);
        if (!cfg.has("simulate.n")) throw ConfigError("config: missing key 'simulate.n'");
        const LevyModel model = model_from_config(cfg);
        const std::size_t n =
            static_cast<std::size_t>(bridgesift::detail::config_u64(cfg, "simulate.n", 1));
        const std::uint64_t stream = bridgesift::detail::config_u64(cfg, "simulate.stream", 0);
        const std::uint64_t master =
            opt.seed ? *opt.seed : bridgesift::detail::config_u64(cfg, "seed", 0);
        if (opt.seed) cfg.values["seed"] = std::to_string(master);

        const PathSample sample = simulate(model, n, SeedSpec{master, stream});
        if (opt.format == OutputFormat::Csv) {
            write_text_file(opt.out_path, path_sample_csv(sample));
        } else {
            write_text_file(opt.out_path, path_sample_json(sample).dump(2) + "\n");
        }
        const RunManifest manifest = make_manifest("simulate", canonicalize(cfg), master);
        detail::write_manifest_file(opt.out_path + ".manifest.json", manifest);
        return kExitOk;
    });
}

struct RecoverOptions {
    std::string increments_csv;
    std::string scheme;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    OutputFormat format = OutputFormat::Csv;
};

inline int cmd_recover(const RecoverOptions& opt) {
    return detail::guarded([&]() {
        Scheme scheme;
        if (opt.scheme == "quantile") {
            scheme = Scheme::Quantile;
        } else if (opt.scheme == "randomized") {
            scheme = Scheme::Randomized;
        } else {
            throw ConfigError("--scheme must be quantile or randomized, got '" + opt.scheme + "'");
        }
        if (scheme == Scheme::Randomized && !opt.seed)
            throw ConfigError("--seed is required for the randomized scheme (auxiliary stream)");

        const std::string input_text = read_text_file(opt.increments_csv);
        const std::vector<double> dx = read_increments_csv(opt.increments_csv);

        RecoveryOutput rec;
        if (scheme == Scheme::Quantile) {
            rec = recover_quantile(dx);
        } else {
            std::vector<double> aux = gaussian_stream(SeedSpec{*opt.seed, 0}, dx.size());
            const double root_dt = 1.0 / std::sqrt(static_cast<double>(dx.size()));
            for (double& a : aux) a *= root_dt;
            rec = recover_randomized(dx, aux);
        }
        if (rec.tie_count > 0)
            std::cerr << "warning: " << rec.tie_count
                      << " tied increment(s); ranks used the index tie-break\n";

        if (opt.format == OutputFormat::Csv) {
            write_text_file(opt.out_path, grid_path_csv(rec.path));
        } else {
            nlohmann::json j{{"scheme", scheme_name(rec.scheme)},
                             {"values", rec.path.values},
                             {"terminal", rec.terminal},
                             {"tie_count", rec.tie_count},
                             {"rank_hash", rec.rank_hash}};
            write_text_file(opt.out_path, j.dump(2) + "\n");
        }

        FlatConfig pseudo;
        pseudo.values["recover.scheme"] = opt.scheme;
        pseudo.values["recover.input_sha256"] = sha256_hex(input_text);
        if (opt.seed) pseudo.values["seed"] = std::to_string(*opt.seed);
        const RunManifest manifest =
            make_manifest("recover", canonicalize(pseudo), opt.seed.value_or(0));
        detail::write_manifest_file(opt.out_path + ".manifest.json", manifest,
                                    {{"tie_count", rec.tie_count}, {"rank_hash", rec.rank_hash}});
        return kExitOk;
    });
}

struct SweepOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    OutputFormat format = OutputFormat::Csv;
};

inline int cmd_sweep(const SweepOptions& opt) {
    return detail::guarded([&]() {
        FlatConfig cfg = parse_config_text(read_text_file(opt.config_path));
        reject_unknown_keys(cfg);
        if (opt.seed) cfg.values["seed"] = std::to_string(*opt.seed);
        SweepConfig sweep = sweep_from_config(cfg);
        sweep.threads = resolve_threads(opt.threads);

        const SweepResult result = run_sweep(sweep);

        std::error_code ec;
        std::filesystem::create_directories(opt.out_dir, ec);
        if (ec) throw IoError("cannot create output directory: " + opt.out_dir);
        const std::filesystem::path dir(opt.out_dir);
        if (opt.format == OutputFormat::Csv) {
            write_text_file(dir / "errors.csv", records_csv(result.records));
            write_text_file(dir / "summary.csv", summary_csv(result.fits));
        } else {
            nlohmann::json records = nlohmann::json::array();
            for (const ReplicateRecord& r : result.records)
                records.push_back({{"scheme", scheme_name(r.scheme)},
                                   {"n", r.n},
                                   {"replicate", r.replicate},
                                   {"sup_error", r.sup_error},
                                   {"argmax_index", r.argmax_index}});
            nlohmann::json fits = nlohmann::json::array();
            for (const RateFit& fit : result.fits) fits.push_back(rate_fit_json(fit));
            write_text_file(dir / "errors.json", records.dump(2) + "\n");
            write_text_file(dir / "summary.json", fits.dump(2) + "\n");
        }
        const RunManifest manifest = make_manifest("sweep", canonicalize(cfg), sweep.master_seed);
        detail::write_manifest_file(dir / "manifest.json", manifest,
                                    {{"rank_hash_agreement", result.rank_hash_agreement}});
        return kExitOk;
    });
}

// ---------------------------------------------------------------------------
// verify: the pinned numeric check suite
// ---------------------------------------------------------------------------

struct CheckRecord {
    std::string name;
    bool hard = true;
    bool pass = false;
    nlohmann::json details;
};

inline std::vector<CheckRecord> run_verification_suite() {
    std::vector<CheckRecord> checks;

    { // quantile round trip on a two-sided log-spaced grid
        const std::size_t half = 5000;
        double worst = 0.0;
        const double lo = std::log(1e-10), hi = std::log(0.5);
        for (std::size_t i = 0; i < half; ++i) {
            const double u =
                std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(half - 1));
            for (double point : {u, 1.0 - u}) {
                const double err = std::abs(cdf(quantile(point)) - point);
                worst = std::max(worst, err);
            }
        }
        checks.push_back({"quantile_round_trip", true, worst <= 1e-12,
                          {{"points", 2 * half}, {"max_abs_error", worst}, {"tolerance", 1e-12}}});
    }

    { // antisymmetry: quantile(u) + quantile(1-u) == 0 bit-exactly
        const std::size_t half = 5000;
        std::size_t violations = 0;
        const double lo = std::log(1e-10), hi = std::log(0.5);
        for (std::size_t i = 0; i < half; ++i) {
            const double u =
                std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(half - 1));
            if (quantile(u) + quantile(1.0 - u) != 0.0) ++violations;
        }
        if (quantile(0.5) != 0.0) ++violations;
        checks.push_back({"quantile_antisymmetry", true, violations == 0,
                          {{"points", half + 1}, {"violations", violations}}});
    }

    { // grid-quantile L2 distance against 3.73/n
        nlohmann::json rows = nlohmann::json::array();
        bool all_pass = true;
        double worst_cross = 0.0;
        for (std::size_t n : {1ul, 2ul, 5ul, 10ul, 100ul, 1000ul, 10000ul, 100000ul}) {
            const QuantileGridDistance d = lemma1_check(n);
            rows.push_back({{"n", d.n},
                            {"integral", d.integral},
                            {"bound", d.bound},
                            {"pass", d.pass},
                            {"endpoint_cross_check", d.endpoint_cross_check}});
            all_pass = all_pass && d.pass && d.endpoint_cross_check <= 1e-8;
            worst_cross = std::max(worst_cross, d.endpoint_cross_check);
        }
        checks.push_back({"quantile_grid_l2_bound", true, all_pass,
                          {{"rows", rows}, {"worst_endpoint_cross_check", worst_cross}}});
    }

    { // tail inequality 1-u <= sqrt(pi/2) phi(Q(u))
        const InequalityScan scan = lemma3_scan(100000);
        const double at_half = std::abs(0.5 - kSqrtHalfPi * phi(quantile(0.5)));
        const bool pass = scan.violations == 0 && at_half <= 1e-9;
        checks.push_back({"tail_density_inequality", true, pass,
                          {{"points", scan.points},
                           {"violations", scan.violations},
                           {"worst_margin", scan.worst_margin},
                           {"equality_gap_at_half", at_half}}});
    }

    { // Mills gap positivity
        const InequalityScan scan = mills_scan(10000, 40.0);
        checks.push_back({"mills_gap_positive", true, scan.violations == 0,
                          {{"points", scan.points},
                           {"violations", scan.violations},
                           {"worst_margin", scan.worst_margin}}});
    }

    { // eta zero-sum across models and sizes
        std::vector<LevyModel> models(3);
        models[0] = LevyModel{};
        models[1] = LevyModel{1.0, 0.0, CompoundPoissonJumps{5.0, GaussianJump{}}};
        models[2] = LevyModel{1.0, 0.0, SymmetricStableJumps{1.5, 1.0}};
        double worst = 0.0;
        std::size_t cases = 0;
        for (const LevyModel& model : models) {
            for (std::size_t n : {64ul, 4096ul}) {
                for (std::uint64_t rep = 0; rep < 3; ++rep) {
                    const PathSample sample =
                        simulate(model, n, SeedSpec{0x5EEDF00Dull, stream_hash(n, rep)});
                    const EtaDiagnostics eta = eta_diagnostics(sample);
                    worst = std::max(worst, std::abs(eta.sum_eta));
                    ++cases;
                }
            }
        }
        checks.push_back({"eta_zero_sum", true, worst <= 1e-9,
                          {{"cases", cases}, {"worst_abs_sum", worst}, {"tolerance", 1e-9}}});
    }

    { // eta sum-of-squares scaling (reported; the claim is asymptotic)
        nlohmann::json rows = nlohmann::json::array();
        double min_median = std::numeric_limits<double>::infinity(), max_median = 0.0;
        for (std::size_t n : {256ul, 1024ul, 4096ul, 16384ul}) {
            std::vector<double> normalized;
            for (std::uint64_t rep = 0; rep < 50; ++rep) {
                const PathSample sample =
                    simulate(LevyModel{}, n, SeedSpec{0xE7A5CA1Eull, stream_hash(n, rep)});
                normalized.push_back(eta_diagnostics(sample).normalized);
            }
            std::sort(normalized.begin(), normalized.end());
            const double median = sorted_quantile(normalized, 0.5);
            rows.push_back({{"n", n}, {"median_normalized", median}});
            min_median = std::min(min_median, median);
            max_median = std::max(max_median, median);
        }
        checks.push_back({"eta_square_scaling", false, true,
                          {{"rows", rows},
                           {"median_spread_factor", max_median / min_median},
                           {"note", "reported only; no constant is pinned"}}});
    }

    { // empirical-quantile L2 scaling (reported)
        const std::size_t n = 10000;
        std::vector<double> scaled;
        Stream stream(SeedSpec{0xBEF02020ull, 0});
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<double> z(n);
            for (double& v : z) v = stream.gaussian();
            scaled.push_back(empirical_quantile_l2(z) * static_cast<double>(n) /
                             std::log(std::log(static_cast<double>(n))));
        }
        std::sort(scaled.begin(), scaled.end());
        checks.push_back({"empirical_quantile_l2_scaling", false, true,
                          {{"n", n},
                           {"replicates", 100},
                           {"median_scaled", sorted_quantile(scaled, 0.5)},
                           {"q90_scaled", sorted_quantile(scaled, 0.9)},
                           {"note", "reported only; no constant is pinned"}}});
    }

    return checks;
}

struct VerifyOptions {
    std::string out_path = "verify_report.json";
};

inline int cmd_verify(const VerifyOptions& opt) {
    return detail::guarded([&]() {
        const std::vector<CheckRecord> checks = run_verification_suite();
        bool hard_fail = false;
        nlohmann::json report = nlohmann::json::array();
        for (const CheckRecord& check : checks) {
            std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name
                      << (check.hard ? "" : " (reported)") << "\n";
            if (check.hard && !check.pass) hard_fail = true;
            report.push_back({{"name", check.name},
                              {"hard", check.hard},
                              {"pass", check.pass},
                              {"details", check.details}});
        }
        FlatConfig pseudo;
        pseudo.values["verify.suite"] = "default";
        const RunManifest manifest = make_manifest("verify", canonicalize(pseudo), 0);
        nlohmann::json doc{{"manifest", manifest.to_json()}, {"checks", report}};
        write_text_file(opt.out_path, doc.dump(2) + "\n");
        return hard_fail ? kExitVerify : kExitOk;
    });
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv) {
    CLI::App app{"bridgesift: recover the Brownian bridge component of a Levy path "
                 "from high-frequency increments"};
    app.require_subcommand(1);

    SimulateOptions sim_opt;
    RecoverOptions rec_opt;
    SweepOptions sweep_opt;
    VerifyOptions verify_opt;
    std::string sim_format = "csv", rec_format = "csv", sweep_format = "csv";

    CLI::App* sim = app.add_subcommand("simulate", "simulate a path sample to CSV/JSON");
    sim->add_option("--config", sim_opt.config_path, "run configuration file")->required();
    sim->add_option("--out", sim_opt.out_path, "output file")->required();
    sim->add_option("--seed", sim_opt.seed, "master seed override");
    sim->add_option("--format", sim_format, "csv or json");

    CLI::App* rec = app.add_subcommand("recover", "recover a bridge path from increments");
    rec->add_option("increments_csv", rec_opt.increments_csv, "input increments CSV")->required();
    rec->add_option("--scheme", rec_opt.scheme, "quantile or randomized")->required();
    rec->add_option("--out", rec_opt.out_path, "output file")->required();
    rec->add_option("--seed", rec_opt.seed, "auxiliary stream seed (randomized scheme)");
    rec->add_option("--format", rec_format, "csv or json");

    CLI::App* sweep = app.add_subcommand("sweep", "run a Monte Carlo convergence sweep");
    sweep->add_option("--config", sweep_opt.config_path, "run configuration file")->required();
    sweep->add_option("--out", sweep_opt.out_dir, "output directory")->required();
    sweep->add_option("--seed", sweep_opt.seed, "master seed override");
    sweep->add_option("--threads", sweep_opt.threads,
                      "worker threads (default: BRIDGESIFT_THREADS or all cores)");
    sweep->add_option("--format", sweep_format, "csv or json");

    CLI::App* verify = app.add_subcommand("verify", "run the numeric verification suite");
    verify->add_option("--out", verify_opt.out_path, "report file (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (sim->parsed()) sim_opt.format = parse_format(sim_format);
        if (rec->parsed()) rec_opt.format = parse_format(rec_format);
        if (sweep->parsed()) sweep_opt.format = parse_format(sweep_format);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    if (sim->parsed()) return cmd_simulate(sim_opt);
    if (rec->parsed()) return cmd_recover(rec_opt);
    if (sweep->parsed()) return cmd_sweep(sweep_opt);
    if (verify->parsed()) return cmd_verify(verify_opt);
    std::cerr << "error: no subcommand given\n";
    return kExitUsage;
}

} // namespace bridgesift::cli
