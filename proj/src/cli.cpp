#include "barrenlab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "barrenlab/csv.hpp"
#include "barrenlab/figure.hpp"
#include "barrenlab/gram.hpp"
#include "barrenlab/nn.hpp"
#include "barrenlab/spectral.hpp"
#include "barrenlab/sqdim.hpp"
#include "barrenlab/waves.hpp"

namespace barrenlab::cli {

namespace fs = std::filesystem;
using modcore::PrimeField;
using modcore::u64;

namespace {

spectral::TargetKind parse_kind(const std::string& name) {
    if (name == "rawmul") return spectral::TargetKind::RawMul;
    if (name == "bit") return spectral::TargetKind::BitR;
    if (name == "standardized") return spectral::TargetKind::Standardized;
    if (name == "centeredbit") return spectral::TargetKind::CenteredBitR;
    throw ConfigError("unknown target kind: " + name);
}

std::string kind_slug(spectral::TargetKind kind, unsigned r) {
    switch (kind) {
        case spectral::TargetKind::RawMul: return "rawmul";
        case spectral::TargetKind::BitR: return "bit" + std::to_string(r);
        case spectral::TargetKind::Standardized: return "standardized";
        case spectral::TargetKind::CenteredBitR:
            return "centeredbit" + std::to_string(r);
        case spectral::TargetKind::Custom: return "custom";
    }
    return "unknown";
}

fs::path ensure_dir(const std::string& dir) {
    fs::path path(dir);
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) throw IoError("cannot create output directory: " + dir);
    return path;
}

void add_common(CLI::App* cmd, std::string& out_dir) {
    cmd->add_option("--out", out_dir, "output directory")
        ->envname("BARRENLAB_OUT")
        ->capture_default_str();
    // Listed for --help only; the token is expanded before parsing.
    static std::string config_doc;
    cmd->add_option("--config", config_doc,
                    "config file with `key = value` lines, `#` comments");
}

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

/// Replaces `--config FILE` with the file's `key = value` pairs as
/// `--key value` tokens. Keys the command line sets explicitly win; unknown
/// keys surface as normal unrecognized-option errors.
std::vector<std::string> expand_config_args(std::vector<std::string> args) {
    std::vector<std::string>::iterator it;
    while ((it = std::find(args.begin(), args.end(), "--config")) !=
           args.end()) {
        if (it + 1 == args.end())
            throw ConfigError("--config needs a file path");
        const std::string path = *(it + 1);
        it = args.erase(it, it + 2);
        const std::size_t insert_at = static_cast<std::size_t>(it - args.begin());

        std::ifstream in(path);
        if (!in) throw ConfigError("cannot read config file: " + path);
        std::vector<std::string> extra;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string entry = trim(line);
            if (entry.empty()) continue;
            const auto eq = entry.find('=');
            if (eq == std::string::npos)
                throw ConfigError(path + ":" + std::to_string(line_no) +
                                  ": expected `key = value`");
            const std::string key = trim(entry.substr(0, eq));
            const std::string value = trim(entry.substr(eq + 1));
            if (key.empty() || value.empty())
                throw ConfigError(path + ":" + std::to_string(line_no) +
                                  ": expected `key = value`");
            const std::string flag = "--" + key;
            if (std::find(args.begin(), args.end(), flag) != args.end())
                continue;  // explicit flag wins
            extra.push_back(flag);
            extra.push_back(value);
        }
        args.insert(args.begin() + insert_at, extra.begin(), extra.end());
    }
    return args;
}

struct ManifestWriter {
    std::ofstream out;
    explicit ManifestWriter(const fs::path& path) : out(path) {
        if (!out) throw IoError("cannot open manifest: " + path.string());
    }
    void entry(const fs::path& file, const std::string& what) {
        out << file.filename().string() << " :: " << what << '\n';
    }
};

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

void run_spectrum(u64 p, const std::string& kind_name, unsigned r,
                  const std::string& out_dir) {
    const PrimeField field(p);
    const auto kind = parse_kind(kind_name);
    const auto table = spectral::make_target(field, kind, r);
    const auto spectrum = spectral::dft_naive(table);

    const fs::path dir = ensure_dir(out_dir);
    const std::string slug =
        "spectrum_p" + std::to_string(p) + "_" + kind_slug(kind, r);
    spectral::write_spectrum_csv(spectrum, (dir / (slug + ".csv")).string());

    figure::FigureSpec fig;
    fig.title = "|t_hat| over frequencies, p=" + std::to_string(p);
    fig.x_label = "frequency";
    fig.y_label = "|t_hat|";
    figure::Series s{kind_slug(kind, r), {}};
    for (std::size_t i = 0; i < spectrum.coeffs.size(); ++i)
        s.points.emplace_back(static_cast<double>(i),
                              std::abs(spectrum.coeffs[i]));
    fig.series.push_back(std::move(s));
    figure::emit_svg(fig, (dir / (slug + ".svg")).string());

    std::printf("spectrum: p=%llu kind=%s l1(units)=%s -> %s\n",
                static_cast<unsigned long long>(p), kind_slug(kind, r).c_str(),
                format_double(spectral::spectral_l1(spectrum, true)).c_str(),
                dir.string().c_str());
}

void run_gram(u64 p, const std::string& kind_name, unsigned r,
              const std::string& out_dir) {
    const PrimeField field(p);
    const auto kind = parse_kind(kind_name);
    const auto table = spectral::make_target(field, kind, r);
    const auto report = gram::gram_f(table);

    const fs::path dir = ensure_dir(out_dir);
    const std::string slug =
        "gram_p" + std::to_string(p) + "_" + kind_slug(kind, r);
    gram::write_gram_csv(report, (dir / (slug + ".csv")).string(),
                         (dir / (slug + "_summary.txt")).string());

    figure::FigureSpec fig;
    fig.title = "Gram statistic f(y), p=" + std::to_string(p);
    fig.x_label = "y";
    fig.y_label = "f(y)";
    figure::Series s{kind_slug(kind, r), {}};
    for (std::size_t i = 0; i < report.f_values.size(); ++i)
        s.points.emplace_back(static_cast<double>(i + 1), report.f_values[i]);
    fig.series.push_back(std::move(s));
    figure::emit_svg(fig, (dir / (slug + ".svg")).string());

    std::printf("gram: p=%llu kind=%s E[f]=%s E[f^2]=%s bound=%s -> %s\n",
                static_cast<unsigned long long>(p), kind_slug(kind, r).c_str(),
                format_double(report.mean_f).c_str(),
                format_double(report.second_moment_f).c_str(),
                format_double(report.theorem_a_bound).c_str(),
                dir.string().c_str());
}

void run_mscov(u64 pmin, u64 pmax, const std::string& out_dir) {
    const fs::path dir = ensure_dir(out_dir);
    CsvWriter csv((dir / "mscov.csv").string(),
                  {"p", "value", "ref_ln", "ref_log2"});
    figure::FigureSpec fig;
    fig.title = "mean squared covariance of modular multiplications";
    fig.x_label = "p";
    fig.y_label = "E (Cov)^2";
    fig.log_x = true;
    fig.log_y = true;
    figure::Series data{"measured", {}}, ref_ln{"0.015 p^3 (ln p)^0.42", {}},
        ref_l2{"0.015 p^3 (log2 p)^0.42", {}};

    for (u64 p : modcore::primes_in_range(std::max<u64>(pmin, 3), pmax)) {
        const double value = gram::ms_covariance(PrimeField(p));
        const double pd = static_cast<double>(p);
        const double r_ln = 0.015 * pd * pd * pd * std::pow(std::log(pd), 0.42);
        const double r_l2 = 0.015 * pd * pd * pd * std::pow(std::log2(pd), 0.42);
        csv.row({pd, value, r_ln, r_l2});
        data.points.emplace_back(pd, value);
        ref_ln.points.emplace_back(pd, r_ln);
        ref_l2.points.emplace_back(pd, r_l2);
    }
    fig.series = {data, ref_ln, ref_l2};
    figure::emit_svg(fig, (dir / "mscov.svg").string());
    std::printf("mscov: primes in [%llu,%llu] -> %s\n",
                static_cast<unsigned long long>(pmin),
                static_cast<unsigned long long>(pmax), dir.string().c_str());
}

void run_bounds(u64 pmin, u64 pmax, std::vector<unsigned> rs,
                const std::string& out_dir) {
    const fs::path dir = ensure_dir(out_dir);
    CsvWriter csv((dir / "bit_bounds.csv").string(),
                  {"p", "r", "moment", "theorem_bound", "ratio_constant"});
    figure::FigureSpec fig;
    fig.title = "empirical constant of the r-th-bit variance bound";
    fig.x_label = "p";
    fig.y_label = "E[f~^2] p / (r (log2 p + 1 - r))^2";
    fig.log_x = true;
    for (unsigned r : rs) fig.series.push_back({"r=" + std::to_string(r), {}});

    for (u64 p : modcore::primes_in_range(std::max<u64>(pmin, 3), pmax)) {
        const PrimeField field(p);
        for (std::size_t k = 0; k < rs.size(); ++k) {
            const unsigned r = rs[k];
            if ((1ull << (r - 1)) >= p) continue;
            const auto table = spectral::make_target(
                field, spectral::TargetKind::CenteredBitR, r);
            const auto report = gram::gram_f(table);
            const double ratio = gram::variance_bound_bits(field, r);
            csv.row({static_cast<double>(p), static_cast<double>(r),
                     report.second_moment_f, report.theorem_a_bound, ratio});
            fig.series[k].points.emplace_back(static_cast<double>(p), ratio);
        }
    }
    figure::emit_svg(fig, (dir / "bit_bounds.svg").string());
    std::printf("bounds: primes in [%llu,%llu] -> %s\n",
                static_cast<unsigned long long>(pmin),
                static_cast<unsigned long long>(pmax), dir.string().c_str());
}

void run_discrepancy(double x, double y, std::size_t nmax, unsigned H,
                     const std::string& out_dir) {
    const fs::path dir = ensure_dir(out_dir);
    CsvWriter csv((dir / "discrepancy.csv").string(),
                  {"N", "dstar", "etk_bound"});
    figure::FigureSpec fig;
    fig.title = "Kronecker orbit: exact D* and its exponential-sum bound";
    fig.x_label = "N";
    fig.y_label = "discrepancy";
    fig.log_x = true;
    fig.log_y = true;
    figure::Series d_series{"exact D*", {}}, e_series{"ETK bound", {}};

    for (std::size_t n = 16; n <= nmax; n *= 2) {
        const auto orbit = waves::kronecker_orbit(x, y, n);
        const double dstar = waves::star_discrepancy_2d(orbit);
        const double etk = waves::etk_bound(orbit, H);
        csv.row({static_cast<double>(n), dstar, etk});
        d_series.points.emplace_back(static_cast<double>(n), dstar);
        e_series.points.emplace_back(static_cast<double>(n), etk);
    }
    fig.series = {d_series, e_series};
    figure::emit_svg(fig, (dir / "discrepancy.svg").string());
    std::printf("discrepancy: orbit (%s,%s) up to N=%zu -> %s\n",
                format_double(x).c_str(), format_double(y).c_str(), nmax,
                dir.string().c_str());
}

void run_waves(unsigned amax, const std::string& wave_name,
               const std::string& out_dir) {
    const fs::path dir = ensure_dir(out_dir);
    const waves::PeriodicWave psi = wave_name == "square"
                                        ? waves::PeriodicWave::square()
                                        : waves::PeriodicWave::centered_sawtooth();

    std::vector<unsigned> As;
    for (unsigned A = 4; A <= amax; A *= 2) As.push_back(A);
    const auto q_values = waves::q_norm_squared_sweep(psi, As);

    CsvWriter csv((dir / "qnorm.csv").string(),
                  {"A", "qnorm_sq", "norm_ratio"});
    figure::FigureSpec fig;
    fig.title = "kernel norm of the pairwise wave inner products";
    fig.x_label = "A";
    fig.y_label = "|Q| / (sqrt(A) (ln A + 1)^2.5)";
    fig.log_x = true;
    figure::Series ratio_series{wave_name, {}};
    for (std::size_t i = 0; i < As.size(); ++i) {
        const double A = static_cast<double>(As[i]);
        const double ratio = std::sqrt(q_values[i]) /
                             (std::sqrt(A) * std::pow(std::log(A) + 1.0, 2.5));
        csv.row({A, q_values[i], ratio});
        ratio_series.points.emplace_back(A, ratio);
    }
    fig.series.push_back(std::move(ratio_series));
    figure::emit_svg(fig, (dir / "qnorm.svg").string());

    CsvWriter sin_csv((dir / "sin_ratio.csv").string(),
                      {"omega", "r", "integral", "log_ratio"});
    figure::FigureSpec sin_fig;
    sin_fig.title = "sin-ratio integral against its logarithmic envelope";
    sin_fig.x_label = "r";
    sin_fig.y_label = "integral / (1 + ln r)";
    sin_fig.log_x = true;
    for (double omega : {1.0, 10.0, 100.0}) {
        figure::Series s{"omega=" + format_double(omega), {}};
        for (unsigned r = 2; r <= 1024; r *= 2) {
            const double value = waves::sin_ratio_integral(omega, r);
            const double ratio = value / (1.0 + std::log(r));
            sin_csv.row({omega, static_cast<double>(r), value, ratio});
            s.points.emplace_back(static_cast<double>(r), ratio);
        }
        sin_fig.series.push_back(std::move(s));
    }
    figure::emit_svg(sin_fig, (dir / "sin_ratio.svg").string());

    std::printf("waves: %s up to A=%u -> %s\n", wave_name.c_str(), amax,
                dir.string().c_str());
}

void run_sqdim(u64 pmax, unsigned r, const std::string& out_dir) {
    const fs::path dir = ensure_dir(out_dir);
    CsvWriter csv((dir / "sqdim.csv").string(),
                  {"p", "r", "m", "bb", "turan_lower", "greedy_lower",
                   "exact_dim"});
    figure::FigureSpec fig;
    fig.title = "SQ-dimension lower bound for the modular bit class";
    fig.x_label = "p";
    fig.y_label = "bound";
    fig.log_x = true;
    fig.log_y = true;
    figure::Series turan{"Turan lower bound", {}};

    for (u64 p : modcore::primes_in_range(3, pmax)) {
        const PrimeField field(p);
        if ((1ull << (r - 1)) >= p) continue;
        const auto cls = sqdim::modular_bit_class(field, r);
        const auto report = sqdim::analyze(cls);
        std::vector<std::string> row{
            std::to_string(p),
            std::to_string(r),
            std::to_string(cls.size()),
            format_double(report.bb),
            format_double(report.turan_lower),
            std::to_string(report.greedy_lower),
            report.exact_dim ? std::to_string(*report.exact_dim) : ""};
        csv.raw_row(row);
        turan.points.emplace_back(static_cast<double>(p), report.turan_lower);
    }
    fig.series.push_back(std::move(turan));
    figure::emit_svg(fig, (dir / "sqdim.svg").string());
    std::printf("sqdim: primes up to %llu, r=%u -> %s\n",
                static_cast<unsigned long long>(pmax), r, dir.string().c_str());
}

void run_probe(u64 pmin, u64 pmax, unsigned r, int inits, u64 seed, int width,
               u64 stride, const std::string& out_dir) {
    const fs::path dir = ensure_dir(out_dir);
    CsvWriter csv((dir / "probe.csv").string(),
                  {"p", "v", "g", "ratio_sqrt", "ratio_lin"});
    figure::FigureSpec fig;
    fig.title = "gradient variance over mean squared gradient norm";
    fig.x_label = "p";
    fig.y_label = "E[(v/g) sqrt(p)]";
    figure::Series sqrt_series{"(v/g) sqrt(p)", {}};
    figure::FigureSpec fig_lin = fig;
    fig_lin.y_label = "E[(v/g) p]";
    figure::Series lin_series{"(v/g) p", {}};

    const nn::MlpSpec arch = nn::dense_spec(
        {1, width, width, 1}, nn::Activation::Sigmoid, nn::Activation::Identity);
    const auto primes = modcore::primes_in_range(pmin, pmax);
    for (std::size_t i = 0; i < primes.size(); i += stride) {
        const PrimeField field(primes[i]);
        const auto report = nn::probe_variance(field, r, arch, inits, seed);
        csv.row({static_cast<double>(report.p), report.v, report.g,
                 report.ratio_sqrt, report.ratio_lin});
        sqrt_series.points.emplace_back(static_cast<double>(report.p),
                                        report.ratio_sqrt);
        lin_series.points.emplace_back(static_cast<double>(report.p),
                                       report.ratio_lin);
    }
    fig.series.push_back(std::move(sqrt_series));
    figure::emit_svg(fig, (dir / "probe_sqrt.svg").string());
    fig_lin.series.push_back(std::move(lin_series));
    figure::emit_svg(fig_lin, (dir / "probe_lin.svg").string());
    std::printf("probe: primes in [%llu,%llu], r=%u, %d inits -> %s\n",
                static_cast<unsigned long long>(pmin),
                static_cast<unsigned long long>(pmax), r, inits,
                dir.string().c_str());
}

void run_train(const std::string& task_name, nn::TrainConfig config,
               const std::string& out_dir) {
    const bool wave = task_name == "wave";
    if (!wave && task_name != "bits")
        throw ConfigError("train: task must be `wave` or `bits`");
    const auto trace = nn::train(
        wave ? nn::Task::WaveRegression : nn::Task::BitClassification, config);

    const fs::path dir = ensure_dir(out_dir);
    const std::string slug = "train_" + task_name;
    CsvWriter csv((dir / (slug + ".csv")).string(), {"epoch", "loss", "acc"});
    for (std::size_t e = 0; e < trace.epoch_loss.size(); ++e)
        csv.row({static_cast<double>(e + 1), trace.epoch_loss[e],
                 e < trace.epoch_test_acc.size() ? trace.epoch_test_acc[e]
                                                 : 0.0});

    figure::FigureSpec fig;
    fig.title = wave ? "wave regression training loss"
                     : "modular bit classification";
    fig.x_label = "epoch";
    fig.y_label = wave ? "train MSE" : "train loss / test accuracy";
    figure::Series loss_series{"train loss", {}};
    for (std::size_t e = 0; e < trace.epoch_loss.size(); ++e)
        loss_series.points.emplace_back(static_cast<double>(e + 1),
                                        trace.epoch_loss[e]);
    fig.series.push_back(std::move(loss_series));
    if (!trace.epoch_test_acc.empty()) {
        figure::Series acc_series{"test accuracy", {}};
        for (std::size_t e = 0; e < trace.epoch_test_acc.size(); ++e)
            acc_series.points.emplace_back(static_cast<double>(e + 1),
                                           trace.epoch_test_acc[e]);
        fig.series.push_back(std::move(acc_series));
    }
    figure::emit_svg(fig, (dir / (slug + ".svg")).string());

    std::printf("train %s: drew a=%llu, final loss=%s, final test acc=%s -> %s\n",
                task_name.c_str(),
                static_cast<unsigned long long>(trace.drawn_parameter),
                format_double(trace.final_loss).c_str(),
                format_double(trace.final_test_acc).c_str(),
                dir.string().c_str());
}

void run_sweep(const std::string& out_dir) {
    const fs::path dir = ensure_dir(out_dir);
    ManifestWriter manifest(dir / "manifest.txt");

    run_spectrum(101, "bit", 1, out_dir);
    manifest.entry("spectrum_p101_bit1.csv",
                   "last-bit target spectrum, closed form vs naive scale");
    run_gram(101, "centeredbit", 1, out_dir);
    manifest.entry("gram_p101_centeredbit1.csv",
                   "Gram statistic of the centered last bit with its "
                   "convolution bound");
    run_mscov(3, 500, out_dir);
    manifest.entry("mscov.csv",
                   "mean squared covariance of a.X and b.X vs the fitted "
                   "cubic-log reference curves");
    run_bounds(31, 503, {1, 2, 3}, out_dir);
    manifest.entry("bit_bounds.csv",
                   "empirical constant of the r-th-bit variance bound "
                   "staying flat in p");

    {
        CsvWriter csv((dir / "harmonics.csv").string(),
                      {"p", "plus", "minus", "plus_ratio", "minus_ratio"});
        for (u64 p : modcore::primes_in_range(3, 20000)) {
            const PrimeField field(p);
            const double plus =
                spectral::harmonic_sum(field, spectral::HarmonicSign::Plus, 1);
            const double minus =
                spectral::harmonic_sum(field, spectral::HarmonicSign::Minus, 1);
            const double scale =
                static_cast<double>(p) * std::log(static_cast<double>(p));
            csv.row({static_cast<double>(p), plus, minus, plus / scale,
                     minus / scale});
        }
        manifest.entry("harmonics.csv",
                       "harmonic sums over roots of unity scaled by p ln p");
    }

    run_discrepancy(std::sqrt(2.0) - 1.0, std::sqrt(3.0) - 1.0, 4096, 32,
                    out_dir);
    manifest.entry("discrepancy.csv",
                   "exact star discrepancy of a Kronecker orbit under its "
                   "exponential-sum bound");
    run_waves(256, "sawtooth", out_dir);
    manifest.entry("qnorm.csv",
                   "pairwise wave inner-product mass against the "
                   "sqrt(A) polylog envelope");
    manifest.entry("sin_ratio.csv",
                   "oscillatory sine-ratio integral against 1 + ln r");
    run_sqdim(101, 1, out_dir);
    manifest.entry("sqdim.csv",
                   "SQ-dimension bounds for the modular last-bit class");
    run_probe(300, 400, 1, 5, 7, 128, 1, out_dir);
    manifest.entry("probe.csv",
                   "gradient concentration ratios for the last-bit class");

    nn::TrainConfig wave_cfg;
    wave_cfg.wave_a_max = 1ull << 20;
    wave_cfg.seed = 1;
    run_train("wave", wave_cfg, out_dir);
    manifest.entry("train_wave.csv",
                   "high-frequency wave regression stuck at the 1/12 floor");

    nn::TrainConfig bit_cfg;
    bit_cfg.p = 1031;
    bit_cfg.epochs = 200;
    bit_cfg.seed = 1;
    run_train("bits", bit_cfg, out_dir);
    manifest.entry("train_bits.csv",
                   "last-bit classification accuracy at a 11-bit prime");

    std::printf("sweep: all outputs in %s (see manifest.txt)\n",
                dir.string().c_str());
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"verification lab for hardness of learning modular "
                 "multiplication and high-frequency waves"};
    app.require_subcommand(1);

    // spectrum ---------------------------------------------------------
    u64 sp_p = 101;
    std::string sp_kind = "bit";
    unsigned sp_r = 1;
    std::string sp_out = "out";
    auto* sp = app.add_subcommand("spectrum", "DFT of a built-in target");
    sp->add_option("--p", sp_p, "prime modulus")->required();
    sp->add_option("--kind", sp_kind,
                   "rawmul | bit | standardized | centeredbit");
    sp->add_option("--r", sp_r, "bit index");
    add_common(sp, sp_out);

    // gram -------------------------------------------------------------
    u64 gr_p = 101;
    std::string gr_kind = "bit";
    unsigned gr_r = 1;
    std::string gr_out = "out";
    auto* gr = app.add_subcommand("gram", "Gram statistic report");
    gr->add_option("--p", gr_p, "prime modulus")->required();
    gr->add_option("--kind", gr_kind,
                   "rawmul | bit | standardized | centeredbit");
    gr->add_option("--r", gr_r, "bit index");
    add_common(gr, gr_out);

    // mscov ------------------------------------------------------------
    u64 mc_pmin = 3, mc_pmax = 500;
    std::string mc_out = "out";
    auto* mc = app.add_subcommand("mscov", "mean squared covariance sweep");
    mc->add_option("--pmin", mc_pmin, "smallest prime");
    mc->add_option("--pmax", mc_pmax, "largest prime");
    add_common(mc, mc_out);

    // bounds -----------------------------------------------------------
    u64 bd_pmin = 31, bd_pmax = 503;
    std::vector<unsigned> bd_rs{1, 2, 3};
    std::string bd_out = "out";
    auto* bd = app.add_subcommand("bounds", "bit-variance bound constants");
    bd->add_option("--pmin", bd_pmin, "smallest prime");
    bd->add_option("--pmax", bd_pmax, "largest prime");
    bd->add_option("--r", bd_rs, "bit indices");
    add_common(bd, bd_out);

    // discrepancy ------------------------------------------------------
    double dc_x = std::sqrt(2.0) - 1.0, dc_y = std::sqrt(3.0) - 1.0;
    std::size_t dc_nmax = 4096;
    unsigned dc_h = 32;
    std::string dc_out = "out";
    auto* dc = app.add_subcommand("discrepancy",
                                  "Kronecker orbit discrepancy sweep");
    dc->add_option("--x", dc_x, "first slope");
    dc->add_option("--y", dc_y, "second slope");
    dc->add_option("--nmax", dc_nmax, "largest orbit length (power of two)");
    dc->add_option("--H", dc_h, "frequency cutoff of the bound");
    add_common(dc, dc_out);

    // waves ------------------------------------------------------------
    unsigned wv_amax = 256;
    std::string wv_wave = "sawtooth";
    std::string wv_out = "out";
    auto* wv = app.add_subcommand("waves", "pairwise wave kernel norms");
    wv->add_option("--amax", wv_amax, "largest frequency bound (power of two)");
    wv->add_option("--wave", wv_wave, "sawtooth | square");
    add_common(wv, wv_out);

    // sqdim ------------------------------------------------------------
    u64 sq_pmax = 101;
    unsigned sq_r = 1;
    std::string sq_out = "out";
    auto* sq = app.add_subcommand("sqdim", "SQ-dimension reports");
    sq->add_option("--pmax", sq_pmax, "largest prime");
    sq->add_option("--r", sq_r, "bit index");
    add_common(sq, sq_out);

    // probe ------------------------------------------------------------
    u64 pb_pmin = 300, pb_pmax = 1000, pb_seed = 7, pb_stride = 1;
    unsigned pb_r = 1;
    int pb_inits = 20, pb_width = 128;
    std::string pb_out = "out";
    auto* pb = app.add_subcommand("probe", "gradient concentration probe");
    pb->add_option("--pmin", pb_pmin, "smallest prime");
    pb->add_option("--pmax", pb_pmax, "largest prime");
    pb->add_option("--r", pb_r, "bit index");
    pb->add_option("--inits", pb_inits, "number of initializations");
    pb->add_option("--seed", pb_seed, "base seed");
    pb->add_option("--width", pb_width, "hidden width");
    pb->add_option("--stride", pb_stride, "keep every k-th prime");
    add_common(pb, pb_out);

    // train ------------------------------------------------------------
    std::string tr_task = "wave";
    nn::TrainConfig tr_cfg;
    u64 tr_amax = 1ull << 20;
    std::vector<int> tr_hidden;
    std::string tr_out = "out";
    auto* tr = app.add_subcommand("train", "train a dense network");
    tr->add_option("--task", tr_task, "wave | bits")->required();
    tr->add_option("--A", tr_amax, "wave frequency bound");
    tr->add_option("--p", tr_cfg.p, "prime modulus (bits task)");
    tr->add_option("--r", tr_cfg.r, "bit index (bits task)");
    tr->add_option("--m", tr_cfg.sample_count, "sample count");
    tr->add_option("--epochs", tr_cfg.epochs, "training epochs");
    tr->add_option("--batch", tr_cfg.batch_size, "batch size");
    tr->add_option("--lr", tr_cfg.lr, "Adam learning rate");
    tr->add_option("--split", tr_cfg.train_fraction, "train fraction");
    tr->add_option("--hidden", tr_hidden, "hidden layer sizes");
    tr->add_option("--seed", tr_cfg.seed, "run seed");
    add_common(tr, tr_out);

    // sweep --------------------------------------------------------------
    std::string sw_out = "out";
    auto* sw = app.add_subcommand(
        "sweep", "desk-scale reproduction suite with a manifest");
    add_common(sw, sw_out);

    std::vector<std::string> expanded;
    try {
        expanded = expand_config_args(args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    std::vector<const char*> argv;
    argv.push_back("barrenlab");
    for (const auto& a : expanded) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help() << std::flush;
        return 2;
    }

    try {
        if (sp->parsed()) run_spectrum(sp_p, sp_kind, sp_r, sp_out);
        if (gr->parsed()) run_gram(gr_p, gr_kind, gr_r, gr_out);
        if (mc->parsed()) run_mscov(mc_pmin, mc_pmax, mc_out);
        if (bd->parsed()) run_bounds(bd_pmin, bd_pmax, bd_rs, bd_out);
        if (dc->parsed()) run_discrepancy(dc_x, dc_y, dc_nmax, dc_h, dc_out);
        if (wv->parsed()) run_waves(wv_amax, wv_wave, wv_out);
        if (sq->parsed()) run_sqdim(sq_pmax, sq_r, sq_out);
        if (pb->parsed()) {
            const nn::MlpSpec arch [[maybe_unused]] = nn::dense_spec(
                {1, pb_width, pb_width, 1}, nn::Activation::Sigmoid,
                nn::Activation::Identity);
            run_probe(pb_pmin, pb_pmax, pb_r, pb_inits, pb_seed, pb_width,
                      pb_stride, pb_out);
        }
        if (tr->parsed()) {
            tr_cfg.wave_a_max = tr_amax;
            tr_cfg.hidden = tr_hidden;
            run_train(tr_task, tr_cfg, tr_out);
        }
        if (sw->parsed()) run_sweep(sw_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace barrenlab::cli
