#include "anisofem/analysis.hpp"
#include "anisofem/experiment.hpp"
#include "anisofem/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using namespace anisofem;

namespace {

struct RunArgs {
    int table = 0;
    int fig = 0;
    std::string custom;
    std::string output;
    bool eps_sweep = false;
    bool no_timing = false;
    int threads = 0;
};

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open " + path);
    return file;
}

int run_command(const RunArgs& a) {
    std::vector<ExperimentConfig> configs;
    std::string id;
    if (!a.custom.empty()) {
        std::ifstream in(a.custom);
        if (!in) throw std::runtime_error("cannot read " + a.custom);
        std::stringstream text;
        text << in.rdbuf();
        configs.push_back(config_from_json_text(text.str()));
        id = configs.front().table;
    } else {
        id = a.table ? "table" + std::to_string(a.table) : "fig" + std::to_string(a.fig);
        configs = preset(id, a.eps_sweep);
    }

    std::vector<ExperimentRow> rows;
    for (const auto& c : configs) {
        auto part = run_experiment(c, a.threads);
        rows.insert(rows.end(), part.begin(), part.end());
    }

    std::string path = a.output;
    if (path.empty()) path = !configs.front().output.empty() ? configs.front().output : id + ".csv";
    std::ofstream file;
    write_csv(open_output(path, file), rows, !a.no_timing);
    if (path != "-") std::fprintf(stderr, "wrote %zu rows to %s\n", rows.size(), path.c_str());

    if (a.fig && path != "-") {
        const std::string series = path.substr(0, path.rfind(".csv")) + "_series.csv";
        std::ofstream out(series);
        if (!out) throw std::runtime_error("cannot open " + series);
        write_plot_series(out, rows);
        std::fprintf(stderr, "wrote plot series to %s\n", series.c_str());
    }
    return 0;
}

int verify_command(double scale, bool skip_lemmas, bool mutate_c) {
    VerifyOptions options;
    options.tolerance_scale = scale;
    options.lemma_probes = !skip_lemmas;
    if (mutate_c) options.pattern_c = PatternSpec::from([](int, int) { return Diagonal::Slash; });
    const auto results = verify_suite(options);
    int failed = 0;
    for (const auto& r : results) {
        std::printf("%s  %-44s %s\n", r.passed ? "PASS" : "FAIL", r.id.c_str(), r.detail.c_str());
        if (!r.passed) ++failed;
    }
    std::printf("%zu checks, %d failed\n", results.size(), failed);
    return failed == 0 ? 0 : 1;
}

int stencil_command(const std::string& pattern_name, int n0, double eps, double H, const std::string& quadrature,
                    int column) {
    PatternSpec pattern = pattern_name == "C3" ? PatternSpec::c3(n0) : pattern_from_string(pattern_name);
    const FeSpace space = strip_space(eps, n0, H, pattern, 2);
    const SparseSystem sys =
        assemble_system(space, ProblemSpec::reaction_diffusion(eps), quadrature_from_string(quadrature));
    if (column < 0) column = n0;
    if (column < 1 || column >= space.tri.nx()) throw std::invalid_argument("column must be interior");
    const StencilRecord rec = extract_stencil(sys, space, space.tri.vertex(column, 1));
    std::cout << format_stencil(rec);
    const ReducedStencil red = reduce_stencil_1d(rec, eps * eps);
    std::printf("  x_weight   %+.12e\n  center_add %+.12e\n", red.x_weight, red.center_addition);
    return 0;
}

int metric_command(const std::string& mesh_name, double theta, int n, int m, double eps, const std::string& variant,
                   const std::string& pattern_name) {
    Mesh1D x;
    switch (mesh_kind_from_string(mesh_name)) {
        case MeshKind::Uniform: x = uniform_mesh(0.0, 2.0 * eps, n); break;
        case MeshKind::Bakhvalov: x = bakhvalov_mesh(eps, 1, n); break;
        case MeshKind::Shishkin: x = shishkin_mesh(eps, n); break;
        case MeshKind::GradedPower: x = graded_mesh(n); break;
        case MeshKind::HessianUniform: x = hessian_uniform_mesh(eps, n); break;
    }
    if (m <= 0) m = n / 4;
    const TensorTriangulation tri = build_triangulation(x, uniform_mesh(0.0, 1.0, m), pattern_from_string(pattern_name));
    HessianMetric metric{theta, exponential_layer_hessian(eps),
                         variant == "clamp" ? MetricVariant::ClampEigenvalues : MetricVariant::AddThetaIdentity};
    std::printf("mesh %s N=%d M=%d eps=%.6e theta=%.6e variant=%s\n", mesh_name.c_str(), n, m, eps, theta,
                variant.c_str());
    std::printf("edge length ratio %.6f\n", metric_edge_ratio(tri, metric));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anisotropic triangulation finite element lab"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Reproduce a table or figure, or run a JSON configuration");
    auto* source = run_cmd->add_option_group("source");
    source->add_option("--table", run.table, "Table id")->check(CLI::Range(1, 9));
    source->add_option("--fig", run.fig, "Figure id")->check(CLI::IsMember({1, 4, 6}));
    source->add_option("--custom", run.custom, "JSON configuration file")->check(CLI::ExistingFile);
    source->require_option(1);
    run_cmd->add_option("-o,--output", run.output, "CSV path ('-' for stdout); default <id>.csv");
    run_cmd->add_flag("--eps-sweep", run.eps_sweep, "Expand eps = 2^-16 to 2^-16 .. 2^-24");
    run_cmd->add_flag("--no-timing", run.no_timing, "Write 0 in the seconds column");
    run_cmd->add_option("--threads", run.threads, "Worker threads (default ANISOFEM_THREADS or all cores)");

    double scale = 1.0;
    bool skip_lemmas = false, mutate_c = false;
    auto* verify_cmd = app.add_subcommand("verify", "Stencil identities, probes, audits and invariants");
    verify_cmd->add_option("--tolerance-scale", scale, "Multiply all tolerances")->check(CLI::NonNegativeNumber);
    verify_cmd->add_flag("--skip-lemmas", skip_lemmas, "Skip the lemma spread probes");
    verify_cmd->add_flag("--mutate-c", mutate_c, "Negative control: replace pattern C by all-Slash");

    std::string pattern = "B", quadrature = "consistent";
    int n0 = 16, column = -1;
    double eps = std::ldexp(1.0, -16), H = 1.0;
    auto* stencil_cmd = app.add_subcommand("stencil", "Print a normalized matrix row on a strip");
    stencil_cmd->add_option("--pattern", pattern, "A, B, C or C3")->check(CLI::IsMember({"A", "B", "C", "C3"}));
    stencil_cmd->add_option("--N", n0, "N0: the strip has 2 N0 x-intervals")->check(CLI::PositiveNumber);
    stencil_cmd->add_option("--eps", eps, "Layer width")->check(CLI::PositiveNumber);
    stencil_cmd->add_option("--H", H, "y-spacing")->check(CLI::PositiveNumber);
    stencil_cmd->add_option("--quadrature", quadrature, "consistent or lumped")
        ->check(CLI::IsMember({"consistent", "lumped"}));
    stencil_cmd->add_option("--column", column, "Vertex column on the middle row (default N0)");

    std::string mesh = "uniform", variant = "add", metric_pattern = "A";
    double theta = 1.0, metric_eps = std::ldexp(1.0, -8);
    int metric_n = 64, metric_m = 0;
    auto* metric_cmd = app.add_subcommand("metric", "Hessian-metric edge length ratio of a triangulation");
    metric_cmd->add_option("--mesh", mesh, "uniform, bakhvalov, shishkin, graded or hessian_uniform");
    metric_cmd->add_option("--theta", theta, "Metric regularization")->check(CLI::NonNegativeNumber);
    metric_cmd->add_option("--N", metric_n, "x-intervals")->check(CLI::PositiveNumber);
    metric_cmd->add_option("--M", metric_m, "y-intervals (default N/4)");
    metric_cmd->add_option("--eps", metric_eps, "Layer width")->check(CLI::PositiveNumber);
    metric_cmd->add_option("--variant", variant, "add or clamp")->check(CLI::IsMember({"add", "clamp"}));
    metric_cmd->add_option("--pattern", metric_pattern, "A, B or C")->check(CLI::IsMember({"A", "B", "C"}));

    auto* presets_cmd = app.add_subcommand("presets", "List preset ids for run");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return run_command(run);
        if (*verify_cmd) return verify_command(scale, skip_lemmas, mutate_c);
        if (*stencil_cmd) return stencil_command(pattern, n0, eps, H, quadrature, column);
        if (*presets_cmd) {
            for (const auto& id : preset_ids()) std::printf("%s\n", id.c_str());
            return 0;
        }
        if (*metric_cmd) return metric_command(mesh, theta, metric_n, metric_m, metric_eps, variant, metric_pattern);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
