#include "speclab/harness.hpp"

#include "speclab/eigensolver.hpp"
#include "speclab/error.hpp"
#include "speclab/localization.hpp"
#include "speclab/operators.hpp"
#include "speclab/parallel.hpp"
#include "speclab/spectra.hpp"
#include "speclab/transfer.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

namespace speclab {

namespace {

constexpr std::array<std::pair<Experiment, std::string_view>, 11> kExperimentNames{{
    {Experiment::Spectrum, "spectrum"},
    {Experiment::DeformSweep, "deform-sweep"},
    {Experiment::PhaseSweep, "phase-sweep"},
    {Experiment::Density, "density"},
    {Experiment::Thouless, "thouless"},
    {Experiment::GammaScatter, "gamma-scatter"},
    {Experiment::Variance3d, "variance-3d"},
    {Experiment::HoleVsXi, "hole-vs-xi"},
    {Experiment::DualityCheck, "duality-check"},
    {Experiment::WindingCheck, "winding-check"},
    {Experiment::HermitianHN, "hermitian-hn"},
}};

const std::vector<std::string> kSpectrumColumns{"sample_index", "re_E", "im_E"};
const std::vector<std::string> kDensityColumns{"r_lo", "r_hi", "count", "density", "density_smoothed", "n0"};
const std::vector<std::string> kScatterColumns{"abs_E", "variance", "rate", "flagged", "seam_flag"};
const std::vector<std::string> kWindingColumns{"radius", "winding", "eig_count_inside"};
const std::vector<std::string> kTrajectoryColumns{"label", "phi", "re_E", "im_E"};

/// Position salt for auxiliary draws (contour energies, phases) so they never
/// collide with matrix entries, which use positions 0 .. 3n-1.
constexpr std::uint64_t kAuxPosition = 0xA000000000000000ULL;

EnsembleSpec ensemble_for(const ExperimentConfig& c, EnsembleKind kind)
{
    return {kind, c.n, c.width, c.samples, c.seed};
}

std::string xi_label(double xi)
{
    return format_number(xi);
}

struct Context {
    const ExperimentConfig& config;
    RunResult& result;
    nlohmann::json notes = nlohmann::json::object();

    void tally(const std::string& what, int index, const std::string& error)
    {
        ++result.failures;
        notes["failures"].push_back({{"task", what}, {"index", index}, {"error", error}});
    }

    /// Eigenvalues of M_b(xi, phi) for every sample and every xi, in sample order.
    std::vector<std::optional<std::vector<Eigen::VectorXcd>>> spectra_per_sample(EnsembleKind kind,
                                                                              const std::vector<double>& xis)
    {
        const EnsembleSpec spec = ensemble_for(config, kind);
        auto tasks = parallel_map<std::vector<Eigen::VectorXcd>>(config.samples, config.workers, [&](int s) {
            const MatrixSample sample = sample_matrix(spec, s);
            std::vector<Eigen::VectorXcd> out;
            for (double xi : xis) {
                out.push_back(eigenvalues(build_balanced(sample, Deformation(xi, config.phi))));
            }
            return out;
        });
        std::vector<std::optional<std::vector<Eigen::VectorXcd>>> out;
        for (int s = 0; s < config.samples; ++s) {
            auto& t = tasks[static_cast<std::size_t>(s)];
            if (!t.error.empty()) {
                tally("eigenvalues", s, t.error);
            }
            out.push_back(std::move(t.value));
        }
        return out;
    }

    void spectrum_tables(const std::vector<std::optional<std::vector<Eigen::VectorXcd>>>& per_sample,
                         const std::vector<double>& xis, const std::string& prefix)
    {
        for (std::size_t x = 0; x < xis.size(); ++x) {
            Table t(prefix + "_xi_" + xi_label(xis[x]), kSpectrumColumns);
            for (std::size_t s = 0; s < per_sample.size(); ++s) {
                if (!per_sample[s]) {
                    continue;
                }
                for (const cplx& e : (*per_sample[s])[x]) {
                    t.add_row({static_cast<int>(s), e.real(), e.imag()});
                }
            }
            result.tables.push_back(std::move(t));
        }
    }

    /// Pooled undeformed density over all samples plus per-sample spectra.
    std::pair<DensityProfile, std::vector<Eigen::VectorXcd>> pooled_density()
    {
        const EnsembleSpec spec = ensemble_for(config, EnsembleKind::UniformUnitDisk);
        auto tasks = parallel_map<Eigen::VectorXcd>(config.samples, config.workers, [&](int s) {
            return eigenvalues(build_undeformed(sample_matrix(spec, s)));
        });
        RadialHistogram hist(config.bins, config.r_max);
        std::vector<Eigen::VectorXcd> spectra;
        for (int s = 0; s < config.samples; ++s) {
            auto& t = tasks[static_cast<std::size_t>(s)];
            if (!t.value) {
                tally("eigenvalues", s, t.error);
                continue;
            }
            hist.add(as_span(*t.value));
            spectra.push_back(std::move(*t.value));
        }
        return {hist.profile(), std::move(spectra)};
    }

    void density_table(const DensityProfile& p)
    {
        const DensityProfile smoothed = smooth(p, std::min(config.window, p.bins()));
        Table t("density", kDensityColumns);
        for (int i = 0; i < p.bins(); ++i) {
            t.add_row({p.bin_edges[i], p.bin_edges[i + 1], static_cast<std::int64_t>(p.counts[i]), p.density[i],
                       smoothed.density[i], p.n0[i + 1]});
        }
        result.tables.push_back(std::move(t));
        notes["overflow"] = p.overflow;
        notes["total_eigenvalues"] = p.total;
        notes["smoothing_window"] = config.window;
        notes["plateau_fit"] = {{"value", plateau_fit(smoothed, 0.5)}, {"r_window", {0.0, 0.5}}};
    }

    void moments_table(const std::vector<Eigen::VectorXcd>& spectra)
    {
        Table t("moments", {"k", "mu", "std_error"});
        for (int k = 1; k <= 4; ++k) {
            const MomentEstimate m = moments(spectra, k);
            t.add_row({k, m.value, m.std_error});
        }
        result.tables.push_back(std::move(t));
    }

    LyapunovCurve curve_grid(const DensityProfile& p)
    {
        const int points = 2 * p.bins() + 1;
        return lyapunov_curve(p, Eigen::VectorXd::LinSpaced(points, 0.0, p.r_max()));
    }

    // ---- experiments -------------------------------------------------------

    void spectrum(EnsembleKind kind, const std::string& prefix)
    {
        spectrum_tables(spectra_per_sample(kind, config.xi), config.xi, prefix);
    }

    void deform_sweep()
    {
        std::vector<double> xis{0.0};
        xis.insert(xis.end(), config.xi.begin(), config.xi.end());
        const auto per_sample = spectra_per_sample(EnsembleKind::UniformUnitDisk, xis);
        spectrum_tables(per_sample, xis, "spectrum");

        Table halo("halo_match", {"xi", "sample_index", "matched", "unmatched_undeformed", "unmatched_deformed"});
        for (std::size_t x = 1; x < xis.size(); ++x) {
            for (std::size_t s = 0; s < per_sample.size(); ++s) {
                if (!per_sample[s]) {
                    continue;
                }
                const auto& spectra = *per_sample[s];
                const HaloMatchReport r = halo_match(as_span(spectra[0]), as_span(spectra[x]), config.tolerance);
                halo.add_row({xis[x], static_cast<int>(s), static_cast<int>(r.matched.size()),
                              r.unmatched_undeformed, r.unmatched_deformed});
            }
        }
        result.tables.push_back(std::move(halo));
        notes["halo_tolerance"] = config.tolerance;
    }

    void phase_sweep()
    {
        const MatrixSample sample = sample_matrix(ensemble_for(config, EnsembleKind::UniformUnitDisk), 0);
        const double xi = config.xi.front();
        const double span = 2.0 * std::numbers::pi / config.n;
        std::vector<double> phis;
        for (int j = 0; j <= config.steps; ++j) {
            phis.push_back(config.phi + span * j / config.steps);
        }
        auto tasks = parallel_map<Eigen::VectorXcd>(static_cast<int>(phis.size()), config.workers, [&](int j) {
            return eigenvalues(build_balanced(sample, Deformation(xi, phis[static_cast<std::size_t>(j)])));
        });
        std::vector<Eigen::VectorXcd> steps;
        for (std::size_t j = 0; j < tasks.size(); ++j) {
            if (!tasks[j].value) {
                throw ConvergenceError("phase-sweep step " + std::to_string(j) + ": " + tasks[j].error);
            }
            steps.push_back(std::move(*tasks[j].value));
        }
        for (std::size_t j = 0; j < steps.size(); ++j) {
            char name[32];
            std::snprintf(name, sizeof name, "phase_step_%02zu", j);
            Table t(name, kSpectrumColumns);
            for (const cplx& e : steps[j]) {
                t.add_row({0, e.real(), e.imag()});
            }
            result.tables.push_back(std::move(t));
        }
        const Trajectories traj = trajectory_continuation(steps);
        Table t("trajectory", kTrajectoryColumns);
        for (std::size_t label = 0; label < traj.path.size(); ++label) {
            for (std::size_t j = 0; j < steps.size(); ++j) {
                const cplx e = traj.path[label][j];
                t.add_row({static_cast<int>(label), phis[j], e.real(), e.imag()});
            }
        }
        result.tables.push_back(std::move(t));
        Table summary("trajectory_summary", {"label", "total_displacement", "split_flag"});
        for (std::size_t label = 0; label < traj.path.size(); ++label) {
            summary.add_row({static_cast<int>(label), traj.displacement[label], static_cast<bool>(traj.split[label])});
        }
        result.tables.push_back(std::move(summary));
        notes["phase_steps"] = config.steps;
        notes["xi"] = xi;
        notes["sample_index"] = 0;
    }

    void density()
    {
        auto [profile, spectra] = pooled_density();
        density_table(profile);
        moments_table(spectra);
    }

    void thouless()
    {
        auto [profile, spectra] = pooled_density();
        density_table(profile);
        const LyapunovCurve curve = curve_grid(profile);

        EnsembleSpec chain_spec{EnsembleKind::UniformUnitDisk, config.chain, 0.0, 1,
                                sample_seed(config.seed, kAuxPosition)};
        const MatrixSample chain = sample_matrix(chain_spec, 0);
        auto direct = parallel_map<double>(static_cast<int>(curve.radii.size()), config.workers, [&](int i) {
            return lyapunov_exponents(chain, cplx{curve.radii[i], 0.0}).xi_plus;
        });

        Table t("gamma", {"r", "gamma_thouless", "gamma_transfer"});
        for (Eigen::Index i = 0; i < curve.radii.size(); ++i) {
            t.add_row({curve.radii[i], curve.gamma[i], direct[static_cast<std::size_t>(i)].value});
        }
        result.tables.push_back(std::move(t));

        const QuadraticFit fit = fit_quadratic_near_origin(curve, 0.5);
        notes["quadratic_fit"] = {{"c0", fit.c0}, {"c2", fit.c2}, {"r_window", {0.0, fit.r_hi}}};
        notes["gamma_at_zero"] = curve.gamma[0];
        notes["chain_length"] = config.chain;
    }

    void gamma_scatter()
    {
        const MatrixSample sample = sample_matrix(ensemble_for(config, EnsembleKind::UniformUnitDisk), 0);
        const auto records =
            localization_spectrum(build_balanced(sample, Deformation(config.xi.front(), config.phi)));
        Table t("scatter", kScatterColumns);
        for (const auto& r : records) {
            t.add_row({std::abs(r.eigenvalue), r.variance, r.rate, r.flagged, r.seam_flag});
        }
        result.tables.push_back(std::move(t));
        notes["rate_oracle"] = "brute-force ideal profile exp(-2 gamma |k|) on k in [-n/2, n/2]";
        notes["flagged_pairs"] = std::count_if(records.begin(), records.end(), [](auto& r) { return r.flagged; });
    }

    void variance_3d()
    {
        const MatrixSample sample = sample_matrix(ensemble_for(config, EnsembleKind::UniformUnitDisk), 0);
        const auto records =
            localization_spectrum(build_balanced(sample, Deformation(config.xi.front(), config.phi)));
        Table t("variance3d", {"re_E", "im_E", "variance", "flagged"});
        for (const auto& r : records) {
            t.add_row({r.eigenvalue.real(), r.eigenvalue.imag(), r.variance, r.flagged});
        }
        result.tables.push_back(std::move(t));
    }

    void hole_vs_xi()
    {
        auto [profile, spectra] = pooled_density();
        const LyapunovCurve curve = curve_grid(profile);
        const auto deformed = spectra_per_sample(EnsembleKind::UniformUnitDisk, config.xi);

        Table t("hole", {"xi", "predicted_radius", "observed_min_abs_E_mean", "observed_min_abs_E_sd"});
        for (std::size_t x = 0; x < config.xi.size(); ++x) {
            std::vector<double> minima;
            for (const auto& s : deformed) {
                if (s) {
                    minima.push_back((*s)[x].cwiseAbs().minCoeff());
                }
            }
            double mean = 0.0;
            double sd = 0.0;
            if (!minima.empty()) {
                for (double m : minima) {
                    mean += m;
                }
                mean /= static_cast<double>(minima.size());
                for (double m : minima) {
                    sd += (m - mean) * (m - mean);
                }
                sd = minima.size() > 1 ? std::sqrt(sd / static_cast<double>(minima.size() - 1)) : 0.0;
            }
            const HolePrediction h = hole_radius(curve, config.xi[x]);
            t.add_row({config.xi[x], h.radius, mean, sd});
        }
        result.tables.push_back(std::move(t));
        notes["gamma_at_zero"] = curve.gamma[0];
    }

    void duality_check()
    {
        const EnsembleSpec spec = ensemble_for(config, EnsembleKind::UniformUnitDisk);
        struct Row {
            double xi, phi;
            cplx energy;
            LogPolar dense, dual;
        };
        auto tasks = parallel_map<std::vector<Row>>(config.samples, config.workers, [&](int s) {
            const MatrixSample sample = sample_matrix(spec, s);
            CounterRng aux{config.seed, static_cast<std::uint64_t>(s), kAuxPosition};
            std::vector<Row> rows;
            for (double xi : config.xi) {
                const double phi = 2.0 * std::numbers::pi * uniform01(aux);
                const cplx energy = 3.0 * sample_unit_disk(aux);
                const Deformation d(xi, phi);
                rows.push_back({xi, d.phi(), energy, determinant(build_balanced(sample, d), energy),
                                duality_det(sample, energy, d)});
            }
            return rows;
        });
        Table t("duality", {"sample_index", "xi", "phi", "re_E", "im_E", "log_mag_dense", "phase_dense",
                            "log_mag_dual", "phase_dual", "rel_diff"});
        for (int s = 0; s < config.samples; ++s) {
            auto& task = tasks[static_cast<std::size_t>(s)];
            if (!task.value) {
                tally("duality", s, task.error);
                continue;
            }
            for (const Row& r : *task.value) {
                const cplx ratio = std::polar(std::exp(r.dual.log_magnitude - r.dense.log_magnitude),
                                              r.dual.phase - r.dense.phase);
                t.add_row({s, r.xi, r.phi, r.energy.real(), r.energy.imag(), r.dense.log_magnitude, r.dense.phase,
                           r.dual.log_magnitude, r.dual.phase, std::abs(ratio - 1.0)});
            }
        }
        result.tables.push_back(std::move(t));
    }

    void winding_check()
    {
        const MatrixSample sample = sample_matrix(ensemble_for(config, EnsembleKind::UniformUnitDisk), 0);
        const Deformation d(config.xi.front(), config.phi);
        const Eigen::VectorXcd eigs = eigenvalues(build_balanced(sample, d));
        const int count = std::max(config.radii, 1);
        auto tasks = parallel_map<WindingReport>(count, config.workers, [&](int i) {
            const double r = config.r_max * (i + 1) / count;
            return winding_number(sample, d, r, 8 * config.n);
        });
        Table t("winding", kWindingColumns);
        for (int i = 0; i < count; ++i) {
            auto& task = tasks[static_cast<std::size_t>(i)];
            if (!task.value) {
                tally("winding", i, task.error);
                continue;
            }
            const double r = task.value->radius;
            const auto inside = (eigs.cwiseAbs().array() < r).count();
            t.add_row({r, task.value->winding, static_cast<std::int64_t>(inside)});
        }
        result.tables.push_back(std::move(t));
    }
};

} // namespace

std::string_view to_string(Experiment e)
{
    for (const auto& [value, name] : kExperimentNames) {
        if (value == e) {
            return name;
        }
    }
    return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name)
{
    for (const auto& [value, label] : kExperimentNames) {
        if (label == name) {
            return value;
        }
    }
    return std::nullopt;
}

std::vector<std::string> experiment_names()
{
    std::vector<std::string> out;
    for (const auto& entry : kExperimentNames) {
        out.emplace_back(entry.second);
    }
    return out;
}

void ExperimentConfig::validate() const
{
    auto require = [](bool ok, const std::string& what) {
        if (!ok) {
            throw InvalidArgument("invalid config: " + what);
        }
    };
    require(n >= 3, "n must be >= 3");
    require(samples >= 1, "samples must be >= 1");
    require(!xi.empty(), "xi list is empty");
    for (double x : xi) {
        require(std::isfinite(x), "xi must be finite");
    }
    require(std::isfinite(phi), "phi must be finite");
    require(bins >= 1, "bins must be >= 1");
    require(workers >= 1, "workers must be >= 1");
    require(steps >= 1, "steps must be >= 1");
    require(width > 0.0, "width must be > 0");
    require(window >= 1, "window must be >= 1");
    require(r_max > 0.0, "r_max must be > 0");
    require(tolerance > 0.0, "tolerance must be > 0");
    require(chain >= 1, "chain must be >= 1");
    require(radii >= 1, "radii must be >= 1");
    require(!out_dir.empty(), "out_dir is empty");
}

nlohmann::json ExperimentConfig::to_json() const
{
    return {
        {"experiment", std::string(to_string(experiment))},
        {"n", n},
        {"samples", samples},
        {"xi", xi},
        {"phi", phi},
        {"bins", bins},
        {"seed", seed},
        {"out_dir", out_dir.string()},
        {"format", format == OutputFormat::Csv ? "csv" : "json"},
        {"workers", workers},
        {"steps", steps},
        {"width", width},
        {"window", window},
        {"r_max", r_max},
        {"tolerance", tolerance},
        {"chain", chain},
        {"radii", radii},
    };
}

RunResult compute(const ExperimentConfig& config)
{
    config.validate();
    RunResult result;
    Context ctx{config, result};
    switch (config.experiment) {
    case Experiment::Spectrum:
        ctx.spectrum(EnsembleKind::UniformUnitDisk, "spectrum");
        break;
    case Experiment::DeformSweep:
        ctx.deform_sweep();
        break;
    case Experiment::PhaseSweep:
        ctx.phase_sweep();
        break;
    case Experiment::Density:
        ctx.density();
        break;
    case Experiment::Thouless:
        ctx.thouless();
        break;
    case Experiment::GammaScatter:
        ctx.gamma_scatter();
        break;
    case Experiment::Variance3d:
        ctx.variance_3d();
        break;
    case Experiment::HoleVsXi:
        ctx.hole_vs_xi();
        break;
    case Experiment::DualityCheck:
        ctx.duality_check();
        break;
    case Experiment::WindingCheck:
        ctx.winding_check();
        break;
    case Experiment::HermitianHN:
        ctx.spectrum(EnsembleKind::HermitianHN, "hn_spectrum");
        break;
    }
    result.metadata["notes"] = ctx.notes;
    return result;
}

RunResult run(const ExperimentConfig& config)
{
    const auto start = std::chrono::steady_clock::now();
    RunResult result = compute(config);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const bool json = config.format == OutputFormat::Json;
    nlohmann::json tables = nlohmann::json::array();
    for (const Table& t : result.tables) {
        result.files.push_back(t.write(config.out_dir, json));
        tables.push_back({{"name", t.name()}, {"file", result.files.back().filename().string()},
                          {"columns", t.columns()}, {"rows", t.rows()}});
    }
    result.metadata["config"] = config.to_json();
    result.metadata["version"] = std::string(kVersion);
    result.metadata["wall_time_seconds"] = wall;
    result.metadata["failures"] = result.failures;
    result.metadata["tables"] = tables;

    std::filesystem::create_directories(config.out_dir);
    const auto meta_path = config.out_dir / "metadata.json";
    std::ofstream(meta_path) << result.metadata.dump(2) << '\n';
    result.files.push_back(meta_path);
    result.exit_status = 0;
    return result;
}

Trajectories trajectory_continuation(const std::vector<Eigen::VectorXcd>& steps)
{
    Trajectories out;
    if (steps.empty()) {
        return out;
    }
    const Eigen::Index count = steps.front().size();
    for (const auto& s : steps) {
        if (s.size() != count) {
            throw InvalidArgument("trajectory_continuation: steps differ in size");
        }
    }
    out.path.assign(static_cast<std::size_t>(count), {});
    out.displacement.assign(static_cast<std::size_t>(count), 0.0);
    out.split.assign(static_cast<std::size_t>(count), false);
    for (Eigen::Index i = 0; i < count; ++i) {
        out.path[static_cast<std::size_t>(i)].push_back(steps.front()[i]);
    }

    std::vector<cplx> current(steps.front().data(), steps.front().data() + count);
    for (std::size_t j = 1; j < steps.size(); ++j) {
        const auto next = as_span(steps[j]);
        const Pairing pairing = greedy_pairing(current, next);
        for (const MatchedPair& m : pairing.pairs) {
            const auto label = static_cast<std::size_t>(m.first);
            // runner-up candidate for the ambiguity check
            double runner_up = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < next.size(); ++k) {
                if (static_cast<int>(k) != m.second) {
                    runner_up = std::min(runner_up, std::abs(current[label] - next[k]));
                }
            }
            if (runner_up <= 1.1 * m.distance) {
                out.split[label] = true;
            }
            out.displacement[label] += m.distance;
            current[label] = next[static_cast<std::size_t>(m.second)];
            out.path[label].push_back(current[label]);
        }
    }
    return out;
}

} // namespace speclab
