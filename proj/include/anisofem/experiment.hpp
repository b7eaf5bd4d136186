#pragma once

#include "anisofem/analysis.hpp"
#include "anisofem/assembly.hpp"
#include "anisofem/mesh1d.hpp"
#include "anisofem/problem.hpp"
#include "anisofem/triangulation.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace anisofem {

/// One block of a convergence table: a fixed discretization swept over N and eps.
struct ExperimentConfig {
    std::string table = "custom";
    ProblemKind problem = ProblemKind::ReactionDiffusion;
    std::vector<double> eps{1.0};
    MeshKind mesh = MeshKind::Uniform;
    PatternKind pattern = PatternKind::A;
    int degree = 1;
    Quadrature quadrature = Quadrature::Consistent;
    std::vector<int> n{32, 64, 128, 256};
    /// y-intervals: N/4 when empty, otherwise the fixed value.
    std::optional<int> m_fixed;
    RateKind rate_kind = RateKind::Plain;
    /// Singular problem: mu = N^{-mu_power}.
    int mu_power = 2;
    std::string output;

    [[nodiscard]] int m_for(int n_value) const;
    /// Throws std::invalid_argument when the configuration is inconsistent.
    void validate() const;
};

struct ExperimentRow {
    std::string table;
    ProblemKind problem = ProblemKind::ReactionDiffusion;
    MeshKind mesh = MeshKind::Uniform;
    PatternKind pattern = PatternKind::A;
    int degree = 1;
    Quadrature quadrature = Quadrature::Consistent;
    int n = 0;
    int m = 0;
    bool fixed_m = false;
    double eps = 1.0;
    double error = 0.0;
    /// Rate from this N to 2N, when the 2N row exists.
    std::optional<double> rate;
    RateKind rate_kind = RateKind::Plain;
    double seconds = 0.0;
    int newton_iterations = 0;
};

class ExperimentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// x-direction mesh for a configuration (domain depends on problem and mesh kind).
[[nodiscard]] Mesh1D build_x_mesh(const ExperimentConfig& config, int n, double eps);

/// Solve one (N, eps) cell; rate is left empty.
[[nodiscard]] ExperimentRow run_cell(const ExperimentConfig& config, int n, double eps);

/// All cells of a configuration, rows ordered by N then eps (config order),
/// with rates attached. Cells run on up to `threads` threads (0: from
/// ANISOFEM_THREADS, default hardware concurrency).
[[nodiscard]] std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config, int threads = 0);

/// Fill in rates for rows sharing every key but N.
void attach_rates(std::vector<ExperimentRow>& rows);

/// Thread cap from ANISOFEM_THREADS.
[[nodiscard]] int configured_threads();

/// Preset ids: table1..table9, fig1, fig4, fig6. `eps_sweep` replaces the
/// representative eps = 2^-16 by 2^-16, ..., 2^-24.
[[nodiscard]] std::vector<ExperimentConfig> preset(const std::string& id, bool eps_sweep = false);
[[nodiscard]] std::vector<std::string> preset_ids();

inline constexpr const char* kCsvHeader =
    "table,problem,mesh,pattern,degree,quadrature,N,M,eps,error,rate,rate_kind,seconds";

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows, bool timing = true);

/// Plot-ready series: "series,N,error" with one series per discretization and eps.
void write_plot_series(std::ostream& out, const std::vector<ExperimentRow>& rows);

[[nodiscard]] ExperimentConfig config_from_json_text(const std::string& text);
[[nodiscard]] std::string config_to_json_text(const ExperimentConfig& config);

}  // namespace anisofem
