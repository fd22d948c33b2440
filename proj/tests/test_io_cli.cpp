#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "barrenlab/cli.hpp"
#include "barrenlab/csv.hpp"
#include "barrenlab/figure.hpp"

using namespace barrenlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir()
        : path(fs::temp_directory_path() /
               ("barrenlab_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

figure::FigureSpec two_point_spec() {
    figure::FigureSpec spec;
    spec.x_label = "x";
    spec.y_label = "y";
    spec.series.push_back({"demo", {{1.0, 2.0}, {3.0, 5.0}}});
    return spec;
}

}  // namespace

TEST_CASE("csv writer emits plain comma-separated rows") {
    TempDir tmp;
    const auto path = tmp.path / "demo.csv";
    {
        CsvWriter csv(path.string(), {"a", "b"});
        csv.row({1.5, -2.0});
        csv.row({0.1, 3.0});
    }
    CHECK(slurp(path) == "a,b\n1.5,-2\n0.1,3\n");

    const auto rows = read_xy_csv(path.string());
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].first == 1.5);
    CHECK(rows[1].second == 3.0);
}

TEST_CASE("format_double round trips") {
    for (double v : {0.1, -1e-300, 3.141592653589793, 12345.0})
        CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("svg emitter basics") {
    TempDir tmp;
    const auto path = tmp.path / "fig.svg";
    figure::emit_svg(two_point_spec(), path.string());
    const std::string body = slurp(path);

    std::size_t polylines = 0, pos = 0;
    while ((pos = body.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 9;
    }
    CHECK(polylines == 1);
    CHECK(body.find("</svg>") != std::string::npos);

    // Determinism: identical specs give identical bytes.
    const auto path2 = tmp.path / "fig2.svg";
    figure::emit_svg(two_point_spec(), path2.string());
    CHECK(slurp(path2) == body);
}

TEST_CASE("svg emitter validation") {
    TempDir tmp;
    figure::FigureSpec spec = two_point_spec();
    spec.log_x = true;
    spec.series[0].points[0].first = -1.0;
    CHECK_THROWS_AS(figure::emit_svg(spec, (tmp.path / "bad.svg").string()),
                    ValidationError);

    figure::FigureSpec empty;
    CHECK_THROWS_AS(figure::emit_svg(empty, (tmp.path / "e.svg").string()),
                    ValidationError);

    figure::FigureSpec nan_spec = two_point_spec();
    nan_spec.series[0].points[0].second =
        std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(figure::emit_svg(nan_spec, (tmp.path / "n.svg").string()),
                    ValidationError);

    CHECK_THROWS_AS(
        figure::emit_svg(two_point_spec(), "/nonexistent_dir_xyz/f.svg"),
        IoError);
}

TEST_CASE("cli rejects unknown subcommands and missing options") {
    CHECK(cli::run({"no_such_command"}) == 2);
    CHECK(cli::run({}) == 2);
    CHECK(cli::run({"spectrum"}) == 2);              // --p required
    CHECK(cli::run({"spectrum", "--p", "4"}) == 1);  // not prime
}

TEST_CASE("cli spectrum subcommand writes csv and svg") {
    TempDir tmp;
    const std::string out = (tmp.path / "run").string();
    CHECK(cli::run({"spectrum", "--p", "13", "--kind", "bit", "--r", "1",
                    "--out", out}) == 0);
    CHECK(fs::exists(fs::path(out) / "spectrum_p13_bit1.csv"));
    CHECK(fs::exists(fs::path(out) / "spectrum_p13_bit1.svg"));

    // Determinism across runs.
    const std::string out2 = (tmp.path / "run2").string();
    CHECK(cli::run({"spectrum", "--p", "13", "--kind", "bit", "--r", "1",
                    "--out", out2}) == 0);
    CHECK(slurp(fs::path(out) / "spectrum_p13_bit1.csv") ==
          slurp(fs::path(out2) / "spectrum_p13_bit1.csv"));
}

TEST_CASE("cli reads flat key = value config files") {
    TempDir tmp;
    const auto cfg = tmp.path / "gram.cfg";
    {
        std::ofstream out(cfg);
        out << "# gram settings\n"
            << "p = 13\n"
            << "kind = rawmul\n";
    }
    const std::string out_dir = (tmp.path / "cfg_run").string();
    CHECK(cli::run({"gram", "--config", cfg.string(), "--out", out_dir}) == 0);
    CHECK(fs::exists(fs::path(out_dir) / "gram_p13_rawmul.csv"));
    CHECK(fs::exists(fs::path(out_dir) / "gram_p13_rawmul_summary.txt"));

    // Unknown keys are errors.
    const auto bad = tmp.path / "bad.cfg";
    {
        std::ofstream out(bad);
        out << "p = 13\nnot_a_key = 1\n";
    }
    CHECK(cli::run({"gram", "--config", bad.string(), "--out", out_dir}) == 2);
}

TEST_CASE("cli train subcommand produces a trace") {
    TempDir tmp;
    const std::string out = (tmp.path / "train").string();
    CHECK(cli::run({"train", "--task", "bits", "--p", "127", "--m", "200",
                    "--epochs", "2", "--batch", "50", "--hidden", "8",
                    "--hidden", "8", "--seed", "3", "--out", out}) == 0);
    const auto rows = read_xy_csv((fs::path(out) / "train_bits.csv").string());
    CHECK(rows.size() == 2);
}
