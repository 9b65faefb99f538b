#pragma once

#include "speclab/ensemble.hpp"
#include "speclab/table.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace speclab {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Experiment {
    Spectrum,
    DeformSweep,
    PhaseSweep,
    Density,
    Thouless,
    GammaScatter,
    Variance3d,
    HoleVsXi,
    DualityCheck,
    WindingCheck,
    HermitianHN,
};

enum class OutputFormat { Csv, Json };

std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);
std::vector<std::string> experiment_names();

struct ExperimentConfig {
    Experiment experiment = Experiment::Spectrum;
    int n = 100;
    int samples = 1;
    std::vector<double> xi{0.0};
    double phi = 0.0;
    int bins = 300;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = "speclab_out";
    OutputFormat format = OutputFormat::Csv;
    int workers = 1;

    int steps = 16;         ///< phase-sweep steps over [phi, phi + 2 pi / n]
    double width = 3.5;     ///< hermitian-hn diagonal half-width
    int window = 10;        ///< density smoothing window (bins)
    double r_max = 3.0;     ///< radial histogram range
    double tolerance = 1e-3;///< halo-match displacement tolerance
    int chain = 10000;      ///< chain length for direct Lyapunov estimates
    int radii = 30;         ///< contour radii in winding-check

    /// Throws InvalidArgument on inconsistent values.
    void validate() const;
    nlohmann::json to_json() const;
};

struct RunResult {
    int exit_status = 0;
    std::vector<Table> tables;
    std::vector<std::filesystem::path> files;
    nlohmann::json metadata;
    int failures = 0;
};

/// Runs one experiment. Tables are written to out_dir together with
/// metadata.json (config echo, version, wall time, failure tally, notes).
/// Identical configs give byte-identical tables for any worker count.
/// Per-sample solver failures are tallied and skipped.
RunResult run(const ExperimentConfig& config);

/// Same computation without touching the filesystem.
RunResult compute(const ExperimentConfig& config);

struct Trajectories {
    /// path[label][step]
    std::vector<std::vector<cplx>> path;
    std::vector<double> displacement; ///< total path length per label
    std::vector<bool> split;          ///< ambiguous continuation somewhere
};

/// Persistent labels across consecutive eigenvalue lists by greedy nearest
/// pairing. A step is ambiguous when the runner-up candidate is within 10%
/// of the chosen distance.
Trajectories trajectory_continuation(const std::vector<Eigen::VectorXcd>& steps);

} // namespace speclab
