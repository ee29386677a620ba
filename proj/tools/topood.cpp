// topood command line: generate, ph, bootstrap, compare, sweep.
//
// Exit status: 0 ok, 2 bad input or usage, 3 resource failure (memory, disk), 130 interrupted.

#include "topood/bootstrap.hpp"
#include "topood/compare.hpp"
#include "topood/error.hpp"
#include "topood/io.hpp"
#include "topood/numfmt.hpp"
#include "topood/persistence.hpp"
#include "topood/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

using namespace topood;
namespace fs = std::filesystem;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitResource = 3;
constexpr int kExitInterrupted = 130;

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted.store(true); }

struct CloudArgs {
    std::string path;
    std::string format = "auto";
    std::string role;
    bool standardize = false;
};

struct PersistenceArgs {
    std::string threshold = "enclosing";
    bool include_zero_bars = true;
};

struct BootstrapArgs {
    std::size_t sample_size = 150;
    std::size_t iterations = 50'000;
    std::uint64_t seed = 0;
    double ci_level = 0.95;
    std::string empty_h1 = "zeros";
    std::string statistics;
    std::size_t bins = io::kDefaultHistogramBins;
    bool progress = false;
};

void add_cloud_options(CLI::App* cmd, CloudArgs& a) {
    cmd->add_option("input", a.path, "point cloud file (.csv or .topd)")->required();
    cmd->add_option("--format", a.format, "input format: auto, csv, topd")->capture_default_str();
    cmd->add_option("--role", a.role, "override the role recorded in the file: train, test, ood, unlabeled");
    cmd->add_flag("--standardize", a.standardize, "z-score every coordinate before analysis");
}

void add_persistence_options(CLI::App* cmd, PersistenceArgs& a) {
    cmd->add_option("--threshold", a.threshold, "filtration threshold: 'enclosing' or a distance")
        ->capture_default_str();
    cmd->add_flag("--include-zero-bars,!--exclude-zero-bars", a.include_zero_bars,
                  "keep [0, 0) H0 bars from duplicate points (default on)");
}

void add_bootstrap_options(CLI::App* cmd, BootstrapArgs& a, bool with_sample_size) {
    if (with_sample_size)
        cmd->add_option("--sample-size,-n", a.sample_size, "points per bootstrap sample")->capture_default_str();
    cmd->add_option("--iterations,-M", a.iterations, "bootstrap iterations")->capture_default_str();
    cmd->add_option("--seed", a.seed, "master seed")->capture_default_str();
    cmd->add_option("--ci-level", a.ci_level, "confidence level in (0, 1]")->capture_default_str();
    cmd->add_option("--empty-h1", a.empty_h1, "samples without finite H1 bars: zeros or skip")->capture_default_str();
    cmd->add_option("--statistics", a.statistics, "comma separated, e.g. h0.avg_lifetime,h1.max_lifetime (default all)");
    cmd->add_option("--bins", a.bins, "histogram bins stored with each distribution")->capture_default_str();
    cmd->add_flag("--progress", a.progress, "report progress on stderr");
}

PointCloud load_cloud(const CloudArgs& a) {
    std::optional<Role> role;
    if (!a.role.empty()) role = parse_role(a.role);
    PointCloud cloud = io::read_point_cloud(a.path, io::parse_cloud_format(a.format), role);
    if (a.standardize) {
        std::string source = cloud.source();
        const Role r = cloud.role();
        cloud = standardize_features(cloud);
        cloud.set_source(source + " (standardized)");
        cloud.set_role(r);
    }
    return cloud;
}

std::vector<StatisticId> parse_statistics(const std::string& text) {
    if (text.empty()) return all_statistics();
    std::vector<StatisticId> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const StatisticId id = StatisticId::parse(text.substr(start, comma - start));
        if (std::find(out.begin(), out.end(), id) != out.end())
            throw InputError("statistic " + id.name() + " listed twice");
        out.push_back(id);
        start = comma + 1;
    }
    return out;
}

BootstrapConfig make_config(const BootstrapArgs& b, const PersistenceArgs& p) {
    BootstrapConfig c;
    c.sample_size = b.sample_size;
    c.iterations = b.iterations;
    c.master_seed = b.seed;
    c.ci_level = b.ci_level;
    c.threshold = ThresholdPolicy::parse(p.threshold);
    c.include_zero_h0_bars = p.include_zero_bars;
    c.empty_h1 = parse_empty_h1_policy(b.empty_h1);
    c.statistics = parse_statistics(b.statistics);
    c.validate();
    return c;
}

RunOptions run_options(int threads, bool progress, const std::string& label) {
    RunOptions opt;
    opt.threads = threads;
    opt.cancel = &g_interrupted;
    if (progress) {
        opt.progress = [label](std::size_t done, std::size_t total) {
            std::fprintf(stderr, "%s%zu/%zu\n", label.c_str(), done, total);
        };
    }
    return opt;
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-")
        std::cout << text << std::flush;
    else
        io::write_file_atomically(out, text);
}

int cmd_generate(const SynthSpec& spec, const std::string& kind, const std::string& role, const std::string& format,
                 const std::string& out) {
    SynthSpec s = spec;
    s.kind = parse_synth_kind(kind);
    if (!role.empty()) s.role = parse_role(role);
    const PointCloud cloud = generate(s);
    const auto fmt = io::parse_cloud_format(format);
    if (out.empty() || out == "-") {
        if (fmt == io::CloudFormat::Topd) throw InputError("TOPD output needs --out");
        std::cout << io::format_csv_cloud(cloud) << std::flush;
    } else {
        io::write_point_cloud(cloud, out, fmt);
    }
    return 0;
}

int cmd_ph(const CloudArgs& ca, const PersistenceArgs& pa, const std::string& out) {
    const PointCloud cloud = load_cloud(ca);
    PersistenceConfig cfg;
    cfg.threshold = ThresholdPolicy::parse(pa.threshold);
    cfg.include_zero_h0_bars = pa.include_zero_bars;
    const PersistenceDiagram d = compute_persistence(cloud, cfg);
    emit(out, io::format_diagram(d, {cloud.source(), cfg.threshold, cfg.include_zero_h0_bars}));
    return 0;
}

int cmd_bootstrap(const CloudArgs& ca, const PersistenceArgs& pa, const BootstrapArgs& ba, int threads,
                  const std::string& out) {
    const BootstrapConfig cfg = make_config(ba, pa);
    const PointCloud cloud = load_cloud(ca);
    const BootstrapResult r = run_bootstrap(cloud, cfg, run_options(threads, ba.progress, "bootstrap "));
    emit(out, io::format_distributions(r, ba.bins));
    return 0;
}

int cmd_compare(const std::string& train_path, const std::string& test_path, const std::string& ood_path,
                const std::string& format, int precision, const std::string& out) {
    const BootstrapResult train = io::read_distributions(train_path);
    std::optional<BootstrapResult> test, ood;
    if (!test_path.empty()) test = io::read_distributions(test_path);
    if (!ood_path.empty()) ood = io::read_distributions(ood_path);
    const ComparisonReport report =
        compare_distributions(train, test ? &*test : nullptr, ood ? &*ood : nullptr);
    const OodVerdict verdict = ood_verdict(report);
    if (!out.empty()) io::write_report(report, verdict, out);
    if (format == "table")
        std::cout << io::render_table(report, verdict, precision) << std::flush;
    else if (format == "json")
        std::cout << io::format_report(report, verdict) << std::flush;
    else
        throw InputError("compare output format must be 'table' or 'json'");
    return 0;
}

int cmd_sweep(const CloudArgs& ca, const PersistenceArgs& pa, const BootstrapArgs& ba,
              const std::vector<std::size_t>& sizes, int threads, const std::string& out_dir,
              const std::string& out) {
    const PointCloud cloud = load_cloud(ca);
    std::vector<BootstrapConfig> configs;
    for (std::size_t n : sizes) {
        BootstrapArgs b = ba;
        b.sample_size = n;
        configs.push_back(make_config(b, pa));
    }
    if (!out_dir.empty()) fs::create_directories(out_dir);

    const StatisticId key{0, StatisticKind::AvgLifetime};
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    std::cout << "n,statistic,mean,std,ci_low,ci_high\n";
    std::vector<BootstrapResult> results;
    for (const auto& cfg : configs) {
        const std::string label = "sweep n=" + std::to_string(cfg.sample_size) + " ";
        BootstrapResult r = run_bootstrap(cloud, cfg, run_options(threads, ba.progress, label));
        if (!out_dir.empty())
            io::write_distributions(r, fs::path(out_dir) / ("n" + std::to_string(cfg.sample_size) + ".json"), ba.bins);
        for (const auto& d : r.distributions) {
            std::cout << cfg.sample_size << "," << d.id.name() << "," << format_real(d.mean) << ","
                      << format_real(d.std) << "," << format_real(d.ci_low) << "," << format_real(d.ci_high) << "\n";
            rows.push_back({{"n", cfg.sample_size},
                            {"statistic", d.id.name()},
                            {"mean", d.mean},
                            {"std", d.std},
                            {"ci", {d.ci_low, d.ci_high}}});
        }
        results.push_back(std::move(r));
    }
    std::cout << std::flush;

    // Larger samples should give a tighter distribution of the key statistic.
    bool narrowing = true;
    for (std::size_t i = 1; i < results.size(); ++i) {
        const auto* prev = results[i - 1].find(key);
        const auto* cur = results[i].find(key);
        if (prev && cur && cur->std > prev->std) narrowing = false;
    }
    if (!out.empty()) {
        nlohmann::ordered_json doc{{"format", "topood-sweep"},
                                   {"version", 1},
                                   {"source", cloud.source()},
                                   {"iterations", ba.iterations},
                                   {"seed", ba.seed},
                                   {"threshold", pa.threshold},
                                   {"include_zero_h0_bars", pa.include_zero_bars},
                                   {"rows", rows},
                                   {"h0_avg_lifetime_std_non_increasing", narrowing}};
        io::write_file_atomically(out, doc.dump(1) + "\n");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Persistent homology and bootstrap tools for embedding point clouds"};
    app.require_subcommand(1);
    app.fallthrough(); // --threads may follow the subcommand
    app.set_version_flag("--version", "topood 0.1.0");
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = all available)")->check(CLI::NonNegativeNumber);

    // generate
    auto* gen = app.add_subcommand("generate", "write a synthetic point cloud");
    SynthSpec spec;
    std::string gen_kind = "clusters", gen_role, gen_format = "auto", gen_out;
    gen->add_option("--kind", gen_kind, "circle, clusters, cube, hexagon, square, line")->capture_default_str();
    gen->add_option("--count", spec.count, "points (per cluster for clusters)")->capture_default_str();
    gen->add_option("--k", spec.k, "number of clusters")->capture_default_str();
    gen->add_option("--radius", spec.radius, "circle / cluster radius, hexagon circumradius, square side")
        ->capture_default_str();
    gen->add_option("--separation", spec.separation, "distance between cluster centres; cube diagonal face")
        ->capture_default_str();
    gen->add_option("--sigma", spec.sigma, "isotropic noise level")->capture_default_str();
    gen->add_option("--dim", spec.dim, "ambient dimension")->capture_default_str();
    gen->add_option("--seed", spec.seed, "generator seed")->capture_default_str();
    gen->add_option("--role", gen_role, "role stored in the file");
    gen->add_option("--format", gen_format, "auto (by extension), csv, topd")->capture_default_str();
    gen->add_option("--out,-o", gen_out, "output file (stdout when omitted, CSV only)");

    // ph
    auto* ph = app.add_subcommand("ph", "persistence diagram of a point cloud");
    CloudArgs ph_cloud;
    PersistenceArgs ph_pers;
    std::string ph_out;
    add_cloud_options(ph, ph_cloud);
    add_persistence_options(ph, ph_pers);
    ph->add_option("--out,-o", ph_out, "output file (stdout when omitted)");

    // bootstrap
    auto* boot = app.add_subcommand("bootstrap", "bootstrap distributions of the summary statistics");
    CloudArgs bs_cloud;
    PersistenceArgs bs_pers;
    BootstrapArgs bs_args;
    std::string bs_out;
    add_cloud_options(boot, bs_cloud);
    add_persistence_options(boot, bs_pers);
    add_bootstrap_options(boot, bs_args, true);
    boot->add_option("--out,-o", bs_out, "output file (stdout when omitted)");

    // compare
    auto* cmp = app.add_subcommand("compare", "compare train / test / ood distributions and give a verdict");
    std::string cmp_train, cmp_test, cmp_ood, cmp_format = "table", cmp_out;
    int cmp_precision = 3;
    cmp->add_option("--train", cmp_train, "train distribution file")->required();
    cmp->add_option("--test", cmp_test, "test distribution file");
    cmp->add_option("--ood", cmp_ood, "ood distribution file");
    cmp->add_option("--format", cmp_format, "stdout format: table or json")->capture_default_str();
    cmp->add_option("--precision", cmp_precision, "decimals in the table")->capture_default_str()->check(
        CLI::Range(0, 17));
    cmp->add_option("--out,-o", cmp_out, "also write the JSON report here");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "bootstrap at several sample sizes");
    CloudArgs sw_cloud;
    PersistenceArgs sw_pers;
    BootstrapArgs sw_args;
    std::vector<std::size_t> sw_sizes{25, 50, 100, 150};
    std::string sw_dir, sw_out;
    add_cloud_options(sweep, sw_cloud);
    add_persistence_options(sweep, sw_pers);
    add_bootstrap_options(sweep, sw_args, false);
    sweep->add_option("--sizes", sw_sizes, "sample sizes")->delimiter(',')->capture_default_str();
    sweep->add_option("--out-dir", sw_dir, "write one distribution file per size here");
    sweep->add_option("--out,-o", sw_out, "sweep summary file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    std::signal(SIGINT, on_sigint);
    std::signal(SIGTERM, on_sigint);
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (*gen) return cmd_generate(spec, gen_kind, gen_role, gen_format, gen_out);
        if (*ph) return cmd_ph(ph_cloud, ph_pers, ph_out);
        if (*boot) return cmd_bootstrap(bs_cloud, bs_pers, bs_args, threads, bs_out);
        if (*cmp) return cmd_compare(cmp_train, cmp_test, cmp_ood, cmp_format, cmp_precision, cmp_out);
        if (*sweep) return cmd_sweep(sw_cloud, sw_pers, sw_args, sw_sizes, threads, sw_dir, sw_out);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const Cancelled&) {
        std::cerr << "interrupted; no output written\n";
        return kExitInterrupted;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return kExitResource;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
