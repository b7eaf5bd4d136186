#include "anisofem/experiment.hpp"

#include "anisofem/solver.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

namespace anisofem {

int ExperimentConfig::m_for(int n_value) const { return m_fixed ? *m_fixed : n_value / 4; }

void ExperimentConfig::validate() const {
    if (eps.empty()) throw std::invalid_argument("config: empty eps list");
    if (n.empty()) throw std::invalid_argument("config: empty N list");
    if (degree < 1 || degree > 3) throw std::invalid_argument("config: degree must be 1, 2 or 3");
    if (quadrature == Quadrature::LumpedMass && degree != 1)
        throw std::invalid_argument("config: mass lumping requires degree 1");
    if (problem == ProblemKind::Singular && degree != 1)
        throw std::invalid_argument("config: singular problem requires degree 1");
    if (pattern == PatternKind::C3 || pattern == PatternKind::Custom)
        throw std::invalid_argument("config: pattern must be A, B or C");
    for (int v : n) {
        if (v < 4) throw std::invalid_argument("config: N must be at least 4");
        if (!m_fixed && v % 4 != 0) throw std::invalid_argument("config: M = N/4 requires N divisible by 4");
    }
    if (m_fixed && *m_fixed < 1) throw std::invalid_argument("config: fixed M must be positive");
    for (double e : eps)
        if (!(e > 0.0)) throw std::invalid_argument("config: eps must be positive");
}

Mesh1D build_x_mesh(const ExperimentConfig& config, int n, double eps) {
    switch (config.mesh) {
        case MeshKind::Uniform: {
            double right = 2.0 * eps;
            if (config.problem == ProblemKind::AnisotropicDiffusion) right = 2.0;
            if (config.problem == ProblemKind::Singular) right = 1.0;
            return uniform_mesh(0.0, right, n);
        }
        case MeshKind::Bakhvalov: return bakhvalov_mesh(eps, config.degree, n);
        case MeshKind::Shishkin: return shishkin_mesh(eps, n);
        case MeshKind::GradedPower: return graded_mesh(n);
        case MeshKind::HessianUniform: return hessian_uniform_mesh(eps, n);
    }
    throw std::invalid_argument("unknown mesh kind");
}

namespace {

PatternSpec pattern_spec(PatternKind kind) {
    switch (kind) {
        case PatternKind::A: return PatternSpec::a();
        case PatternKind::B: return PatternSpec::b();
        case PatternKind::C: return PatternSpec::c();
        default: throw std::invalid_argument("experiments support patterns A, B and C");
    }
}

ProblemSpec problem_spec(ProblemKind kind, double eps) {
    switch (kind) {
        case ProblemKind::ReactionDiffusion: return ProblemSpec::reaction_diffusion(eps);
        case ProblemKind::Laplace: return ProblemSpec::laplace(eps);
        case ProblemKind::AnisotropicDiffusion: return ProblemSpec::anisotropic_diffusion(eps);
        case ProblemKind::Singular: break;
    }
    throw std::invalid_argument("problem_spec: singular problem has no linear form");
}

}  // namespace

ExperimentRow run_cell(const ExperimentConfig& config, int n, double eps) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentRow row;
    row.table = config.table;
    row.problem = config.problem;
    row.mesh = config.mesh;
    row.pattern = config.pattern;
    row.degree = config.degree;
    row.quadrature = config.quadrature;
    row.n = n;
    row.m = config.m_for(n);
    row.fixed_m = config.m_fixed.has_value();
    row.eps = eps;
    row.rate_kind = config.rate_kind;

    const Mesh1D x = build_x_mesh(config, n, eps);
    const Mesh1D y = uniform_mesh(0.0, 1.0, row.m);
    const FeSpace space = lagrange_space(build_triangulation(x, y, pattern_spec(config.pattern)), config.degree);

    if (config.problem == ProblemKind::Singular) {
        const double mu = std::pow(static_cast<double>(n), -config.mu_power);
        const NewtonResult res = damped_newton(space, mu, config.quadrature == Quadrature::LumpedMass);
        row.newton_iterations = res.report.iterations;
        row.error = max_nodal_error(space, res.solution, [](double xx, double) { return std::sqrt(xx); });
    } else {
        const ProblemSpec problem = problem_spec(config.problem, eps);
        const SparseSystem sys = assemble_system(space, problem, config.quadrature);
        const auto [u, report] = solve_spd(sys);
        row.error = max_nodal_error(space, sys.expand(u), problem.exact);
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

void attach_rates(std::vector<ExperimentRow>& rows) {
    using Key = std::tuple<std::string, int, int, int, int, int, double, int, int>;
    auto key = [](const ExperimentRow& r) {
        const int m_rule = r.fixed_m ? r.m : 0;
        return Key{r.table, static_cast<int>(r.problem), static_cast<int>(r.mesh), static_cast<int>(r.pattern),
                   r.degree, static_cast<int>(r.quadrature), r.eps, static_cast<int>(r.rate_kind), m_rule};
    };
    std::map<std::pair<Key, int>, const ExperimentRow*> index;
    for (const auto& r : rows) index[{key(r), r.n}] = &r;
    for (auto& r : rows) {
        auto it = index.find({key(r), 2 * r.n});
        if (it != index.end() && r.error > 0.0 && it->second->error > 0.0)
            r.rate = convergence_rate(r.error, it->second->error, r.n, r.rate_kind);
    }
}

int configured_threads() {
    if (const char* env = std::getenv("ANISOFEM_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config, int threads) {
    config.validate();
    std::vector<int> ns = config.n;
    std::sort(ns.begin(), ns.end());
    std::vector<std::pair<int, double>> cells;
    for (int n : ns)
        for (double e : config.eps) cells.emplace_back(n, e);

    std::vector<ExperimentRow> rows(cells.size());
    std::vector<std::exception_ptr> errors(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) {
            try {
                rows[k] = run_cell(config, cells[k].first, cells[k].second);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const int cap = threads > 0 ? threads : configured_threads();
    const int count = std::max(1, std::min<int>(cap, static_cast<int>(cells.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (!errors[k]) continue;
        try {
            std::rethrow_exception(errors[k]);
        } catch (const std::exception& e) {
            char where[96];
            std::snprintf(where, sizeof where, " (N=%d, eps=%.6e)", cells[k].first, cells[k].second);
            throw ExperimentError(config.table + ": " + e.what() + where);
        }
    }
    attach_rates(rows);
    return rows;
}

namespace {

const double kEps8 = std::ldexp(1.0, -8);
const double kEps16 = std::ldexp(1.0, -16);

ExperimentConfig block(std::string table, ProblemKind problem, MeshKind mesh, PatternKind pattern, int degree,
                       Quadrature q, std::vector<double> eps, std::vector<int> n) {
    ExperimentConfig c;
    c.table = std::move(table);
    c.problem = problem;
    c.mesh = mesh;
    c.pattern = pattern;
    c.degree = degree;
    c.quadrature = q;
    c.eps = std::move(eps);
    c.n = std::move(n);
    return c;
}

std::vector<ExperimentConfig> build_preset(const std::string& id) {
    using enum PatternKind;
    const auto RD = ProblemKind::ReactionDiffusion;
    const auto cons = Quadrature::Consistent;
    const auto lump = Quadrature::LumpedMass;
    const std::vector<double> eps3{1.0, kEps8, kEps16};
    const std::vector<int> n32{32, 64, 128, 256};
    const std::vector<int> n64{64, 128, 256, 512};
    std::vector<ExperimentConfig> out;

    if (id == "table1" || id == "table2") {
        const MeshKind mesh = id == "table1" ? MeshKind::Bakhvalov : MeshKind::Uniform;
        for (auto q : {cons, lump})
            for (auto p : {A, C}) out.push_back(block(id, RD, mesh, p, 1, q, eps3, n32));
    } else if (id == "table3") {
        for (auto p : {A, C})
            out.push_back(block(id, ProblemKind::Laplace, MeshKind::Uniform, p, 1, lump, eps3, n64));
    } else if (id == "table4") {
        for (std::optional<int> m : {std::optional<int>{}, std::optional<int>{16}})
            for (auto p : {A, C}) {
                auto c = block(id, ProblemKind::Laplace, MeshKind::HessianUniform, p, 1, lump, eps3, n64);
                c.m_fixed = m;
                out.push_back(c);
            }
    } else if (id == "table5" || id == "table6") {
        const MeshKind mesh = id == "table5" ? MeshKind::Uniform : MeshKind::Shishkin;
        for (auto q : {cons, lump}) {
            auto c = block(id, RD, mesh, B, 1, q, eps3, n32);
            if (id == "table6") c.rate_kind = RateKind::ShishkinLog;
            out.push_back(c);
        }
    } else if (id == "table7" || id == "table8") {
        const MeshKind mesh = id == "table7" ? MeshKind::Bakhvalov : MeshKind::Uniform;
        for (auto p : {A, C}) out.push_back(block(id, RD, mesh, p, 2, cons, eps3, n32));
    } else if (id == "table9") {
        out.push_back(block(id, RD, MeshKind::Uniform, A, 3, cons, {1.0, kEps8, kEps16, std::ldexp(1.0, -24)},
                            {16, 32, 64, 128}));
    } else if (id == "fig1") {
        for (int r : {1, 2, 3})
            for (auto p : {A, C}) {
                std::vector<int> ns{16, 32, 64, 128};
                if (r < 3) ns.push_back(256);
                out.push_back(block(id, RD, MeshKind::Uniform, p, r, cons, {1e-3, 1.0}, ns));
            }
    } else if (id == "fig4") {
        for (auto q : {cons, lump})
            for (auto p : {A, B})
                out.push_back(block(id, ProblemKind::Singular, MeshKind::GradedPower, p, 1, q, {1.0},
                                    {16, 32, 64, 128, 256, 512}));
    } else if (id == "fig6") {
        for (auto mesh : {MeshKind::Uniform, MeshKind::Shishkin})
            for (auto q : {cons, lump})
                for (auto p : {A, B}) {
                    auto c = block(id, RD, mesh, p, 1, q, {1e-3}, {16, 32, 64, 128, 256});
                    if (mesh == MeshKind::Shishkin) c.rate_kind = RateKind::ShishkinLog;
                    out.push_back(c);
                }
    } else {
        throw std::invalid_argument("unknown preset: " + id);
    }
    return out;
}

}  // namespace

std::vector<std::string> preset_ids() {
    return {"table1", "table2", "table3", "table4", "table5", "table6",
            "table7", "table8", "table9", "fig1",   "fig4",   "fig6"};
}

std::vector<ExperimentConfig> preset(const std::string& id, bool eps_sweep) {
    auto configs = build_preset(id);
    if (eps_sweep) {
        for (auto& c : configs) {
            std::vector<double> eps;
            for (double e : c.eps) {
                if (e == kEps16) {
                    for (int k = 16; k <= 24; ++k) eps.push_back(std::ldexp(1.0, -k));
                } else if (std::find(eps.begin(), eps.end(), e) == eps.end()) {
                    eps.push_back(e);
                }
            }
            c.eps = eps;
        }
    }
    return configs;
}

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows, bool timing) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        char rate[32] = "";
        if (r.rate) std::snprintf(rate, sizeof rate, "%.2f", *r.rate);
        out << r.table << ',' << to_string(r.problem) << ',' << to_string(r.mesh) << ',' << to_string(r.pattern)
            << ',' << r.degree << ',' << to_string(r.quadrature) << ',' << r.n << ',' << r.m << ',' << sci(r.eps)
            << ',' << sci(r.error) << ',' << rate << ',' << to_string(r.rate_kind) << ','
            << (timing ? sci(r.seconds) : std::string("0")) << '\n';
    }
}

void write_plot_series(std::ostream& out, const std::vector<ExperimentRow>& rows) {
    out << "series,N,error\n";
    for (const auto& r : rows) {
        out << to_string(r.mesh) << '-' << to_string(r.pattern) << "-r" << r.degree << '-' << to_string(r.quadrature)
            << "-eps" << sci(r.eps) << ',' << r.n << ',' << sci(r.error) << '\n';
    }
}

ExperimentConfig config_from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ExperimentConfig c;
    c.table = j.value("table", c.table);
    if (j.contains("problem")) c.problem = problem_kind_from_string(j.at("problem").get<std::string>());
    if (j.contains("eps")) c.eps = j.at("eps").get<std::vector<double>>();
    if (j.contains("mesh")) c.mesh = mesh_kind_from_string(j.at("mesh").get<std::string>());
    if (j.contains("pattern")) c.pattern = pattern_from_string(j.at("pattern").get<std::string>()).kind;
    c.degree = j.value("degree", c.degree);
    if (j.contains("quadrature")) c.quadrature = quadrature_from_string(j.at("quadrature").get<std::string>());
    if (j.contains("N")) c.n = j.at("N").get<std::vector<int>>();
    if (j.contains("M")) {
        const auto& m = j.at("M");
        if (m.is_string()) {
            if (m.get<std::string>() != "quarter") throw std::invalid_argument("config: M must be \"quarter\" or an integer");
            c.m_fixed.reset();
        } else {
            c.m_fixed = m.get<int>();
        }
    }
    if (j.contains("rate_kind"))
        c.rate_kind = j.at("rate_kind").get<std::string>() == "shishkin_log" ? RateKind::ShishkinLog : RateKind::Plain;
    c.mu_power = j.value("mu_power", c.mu_power);
    c.output = j.value("output", c.output);
    c.validate();
    return c;
}

std::string config_to_json_text(const ExperimentConfig& c) {
    nlohmann::json j;
    j["table"] = c.table;
    j["problem"] = to_string(c.problem);
    j["eps"] = c.eps;
    j["mesh"] = to_string(c.mesh);
    j["pattern"] = to_string(c.pattern);
    j["degree"] = c.degree;
    j["quadrature"] = to_string(c.quadrature);
    j["N"] = c.n;
    if (c.m_fixed)
        j["M"] = *c.m_fixed;
    else
        j["M"] = "quarter";
    j["rate_kind"] = to_string(c.rate_kind);
    j["mu_power"] = c.mu_power;
    j["output"] = c.output;
    return j.dump(2);
}

}  // namespace anisofem
