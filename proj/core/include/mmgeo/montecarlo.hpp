#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "mmgeo/geometry.hpp"
#include "mmgeo/pdp.hpp"
#include "mmgeo/scenario.hpp"

namespace mmgeo {

/// Marginal law of one building side; parameters are derived from the
/// scenario's first two moments and must be consistent with them.
enum class DimDist { Constant, Uniform, Exponential };

struct SceneConfig {
    double half_extent = 400.0;  ///< scene is [-H, H]^2, rx at the centre
    DimDist length_dist = DimDist::Constant;
    DimDist width_dist = DimDist::Constant;
    std::uint64_t master_seed = 1;
    std::uint64_t realizations = 200000;
    double pdp_bin = 1e-9;  ///< histogram bin width [s]
};

/// Checks that the configured side distributions can reproduce the
/// scenario's moments (relative 1e-9); throws scenario_error otherwise.
void validate_sampling(const Scenario& s, const SceneConfig& cfg);

struct Scene {
    std::vector<Building> buildings;
    std::vector<Person> persons;
    Point2 tx;
    Point2 rx;
    std::uint64_t resamples = 0;  ///< scenes rejected for covering tx/rx
};

/// Deterministic scene draw: the same (master_seed, index) always produces
/// the same scene, independent of thread count or call order. Scenes whose
/// buildings cover the tx or rx are redrawn from the same stream.
Scene generate_scene(const Scenario& s, const SceneConfig& cfg,
                     std::uint64_t index);

struct RayPath {
    ReflectionOrder order = ReflectionOrder::First;
    std::array<Point2, 4> vertices{};  ///< tx, bounce(s), rx
    int n_vertices = 0;
    double theta_n = 0.0;  ///< grazing arrival angle at the final bounce
    double length = 0.0;
    double delay = 0.0;
    double power = 0.0;  ///< gain- and P_t-normalised received power
    bool blocked = false;
    double self_block_weight = 1.0;
};

/// Image-theory enumeration of single-bounce specular paths off illuminated
/// building faces. Paths passing the specular and main-lobe tests are
/// returned with their blockage flag; blocked paths are kept for diagnostics.
std::vector<RayPath> trace_first_order(const Scene& sc, const Scenario& s);

/// Double-bounce paths over ordered building pairs (first bounce, second
/// bounce), with distance and lobe pruning.
std::vector<RayPath> trace_second_order(const Scene& sc, const Scenario& s);

enum class EstimateKind { Count, PathLoss, PdpHistogram, DelayStatsEmpirical };

struct EstimateWithCI {
    double mean = 0.0;
    double se = 0.0;
    std::uint64_t m = 0;
};

struct McPdpBin {
    double tau_lo = 0.0;
    double value = 0.0;  ///< mean power density in the bin [1/s]
    std::uint64_t hits = 0;
};

struct McPdp {
    double bin_width = 1e-9;
    std::vector<McPdpBin> bins;
    std::uint64_t m = 0;
};

struct McDelayStats {
    double tau_mean = 0.0;
    double tau_rms = 0.0;
    std::uint64_t m = 0;
};

using EstimateResult = std::variant<EstimateWithCI, McPdp, McDelayStats>;

/// Runs cfg.realizations independent scene draws and reduces the requested
/// statistic. Count and PathLoss trace single bounces (matching their
/// analytic counterparts); the profile and delay estimators trace both
/// orders when s.second_order is set. PathLoss reports the linear path loss
/// (reciprocal mean aggregate power) with a delta-method standard error.
/// Accumulation is chunked and merged in a fixed order, so results are
/// bit-identical for any thread count. Requires at least 100 realizations.
EstimateResult estimate(const Scenario& s, const SceneConfig& cfg,
                        EstimateKind what);

/// Empirical pmf of the per-scene surviving single-bounce path count (raw
/// counts, no self-blockage weighting); the tail mass is absorbed into the
/// max_n bucket.
std::vector<double> count_pmf(const Scenario& s, const SceneConfig& cfg,
                              std::size_t max_n);

}  // namespace mmgeo
