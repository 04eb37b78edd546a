#include "mmgeo/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "mmgeo/errors.hpp"
#include "mmgeo/first_order.hpp"

namespace mmgeo {

namespace {

constexpr std::uint64_t kChunk = 256;  // realizations per merge unit

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// One independent, reproducible stream per (seed, realization) pair. The
// uniform and Poisson draws are fixed here rather than taken from
// std::distributions so that sequences are identical across standard
// libraries.
class Rng {
  public:
    Rng(std::uint64_t master, std::uint64_t index, std::uint64_t salt = 0) {
        std::uint64_t st = master ^ salt ^ (0xA0761D6478BD642Full * (index + 1));
        std::array<std::uint32_t, 8> seeds;
        for (std::size_t i = 0; i < seeds.size(); i += 2) {
            const std::uint64_t v = splitmix64(st);
            seeds[i] = static_cast<std::uint32_t>(v);
            seeds[i + 1] = static_cast<std::uint32_t>(v >> 32);
        }
        std::seed_seq seq(seeds.begin(), seeds.end());
        eng_.seed(seq);
    }

    double u01() {  // uniform in [0, 1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // Knuth product method in chunks small enough to keep exp(-lambda)
    // representable.
    std::uint64_t poisson(double lambda) {
        std::uint64_t total = 0;
        while (lambda > 0.0) {
            const double part = std::min(lambda, 25.0);
            const double limit = std::exp(-part);
            std::uint64_t k = 0;
            double p = 1.0;
            do {
                ++k;
                p *= u01();
            } while (p > limit);
            total += k - 1;
            lambda -= part;
        }
        return total;
    }

  private:
    std::mt19937_64 eng_;
};

struct DimSampler {
    DimDist dist = DimDist::Constant;
    double p0 = 0.0;
    double p1 = 0.0;

    double sample(Rng& rng) const {
        switch (dist) {
            case DimDist::Constant:
                return p0;
            case DimDist::Uniform:
                return rng.uniform(p0, p1);
            case DimDist::Exponential:
            default:
                return -p0 * std::log1p(-rng.u01());
        }
    }
};

DimSampler make_sampler(DimDist dist, double m1, double m2, const char* side) {
    const double tol = 1e-9 * std::max(1.0, std::abs(m2));
    DimSampler ds;
    ds.dist = dist;
    switch (dist) {
        case DimDist::Constant:
            if (std::abs(m2 - m1 * m1) > tol)
                throw scenario_error(std::string("sampling: constant ") + side +
                                     " distribution cannot match the second "
                                     "moment");
            ds.p0 = m1;
            break;
        case DimDist::Uniform: {
            const double var = m2 - m1 * m1;
            if (var < -tol)
                throw scenario_error(std::string("sampling: ") + side +
                                     " moments imply negative variance");
            const double half = std::sqrt(3.0 * std::max(var, 0.0));
            if (m1 - half < -1e-9)
                throw scenario_error(std::string("sampling: uniform ") + side +
                                     " distribution would need negative "
                                     "support");
            ds.p0 = std::max(m1 - half, 0.0);
            ds.p1 = m1 + half;
            break;
        }
        case DimDist::Exponential:
            if (std::abs(m2 - 2.0 * m1 * m1) > tol)
                throw scenario_error(std::string("sampling: exponential ") +
                                     side +
                                     " distribution cannot match the second "
                                     "moment");
            ds.p0 = m1;
            break;
    }
    return ds;
}

struct Samplers {
    DimSampler length;
    DimSampler width;
};

Samplers make_samplers(const Scenario& s, const SceneConfig& cfg) {
    return {make_sampler(cfg.length_dist, s.moments.e_l, s.moments.e_l2,
                         "length"),
            make_sampler(cfg.width_dist, s.moments.e_w, s.moments.e_w2,
                         "width")};
}

// Cheap reject: can any point of the disc (center, radius) lie inside the
// lobe? Exact for the bounding disc, conservative for the rectangle.
bool cone_may_contain(const Cone& c, Point2 center, double radius) {
    const Vec2 to = center - c.apex;
    const double dist = norm(to);
    if (dist <= radius) return true;
    const double ang = std::abs(
        std::remainder(std::atan2(to.y, to.x) - c.boresight, 2.0 * M_PI));
    const double widen = std::asin(std::min(1.0, radius / dist));
    return ang <= c.half_angle + widen + 1e-12;
}

bool face_visible_from(const BuildingFace& f, Point2 center, Point2 viewer) {
    const Vec2 u = f.seg.b - f.seg.a;
    const double side_v = cross(u, viewer - f.seg.a);
    const double side_c = cross(u, center - f.seg.a);
    return side_v * side_c < 0.0;
}

double building_radius(const Building& b) {
    return std::hypot(b.l, b.w) / 2.0;
}

// Conservative reach of a bounce point from the scene midpoint, used to
// prune second-order pairs.
double bounce_reach(const Scenario& s, const Building& b) {
    constexpr double kClamp = M_PI / 2.0 - 1e-3;
    const AngleSet as = angle_set(s, b.phi_b);
    const double cap =
        std::clamp(std::max(as.theta_ti, as.theta_ru), 0.0, kClamp);
    if (cap <= 0.0) return building_radius(b);
    const double cosf = std::abs(std::cos(b.phi_b));
    const double sinf = std::abs(std::sin(b.phi_b));
    return 0.5 * s.d * (cosf * std::tan(cap) + sinf) + building_radius(b);
}

}  // namespace

void validate_sampling(const Scenario& s, const SceneConfig& cfg) {
    validate(s);
    if (!(cfg.half_extent > 0.0))
        throw scenario_error("sampling: half_extent must be positive");
    if (!(cfg.pdp_bin > 0.0))
        throw scenario_error("sampling: pdp_bin must be positive");
    (void)make_samplers(s, cfg);
}

Scene generate_scene(const Scenario& s, const SceneConfig& cfg,
                     std::uint64_t index) {
    const Samplers samplers = make_samplers(s, cfg);
    Rng rng(cfg.master_seed, index);

    const double h = cfg.half_extent;
    const double area = 4.0 * h * h;
    Scene sc;
    sc.tx = Point2{-s.d, 0.0};
    sc.rx = Point2{0.0, 0.0};

    constexpr int kMaxResamples = 10000;
    for (int attempt = 0;; ++attempt) {
        if (attempt >= kMaxResamples)
            throw scenario_error(
                "generate_scene: could not place tx/rx outside buildings "
                "(density too high)");
        sc.buildings.clear();
        const std::uint64_t n_b = rng.poisson(s.lambda_b * area);
        sc.buildings.reserve(n_b);
        for (std::uint64_t i = 0; i < n_b; ++i) {
            Building b;
            b.center = Point2{rng.uniform(-h, h), rng.uniform(-h, h)};
            b.l = samplers.length.sample(rng);
            b.w = samplers.width.sample(rng);
            b.phi_b = s.orientation == OrientationModel::Fixed
                          ? s.phi_b
                          : rng.uniform(0.0, M_PI);
            sc.buildings.push_back(b);
        }
        bool covered = false;
        for (const Building& b : sc.buildings)
            if (building_contains(b, sc.tx) || building_contains(b, sc.rx)) {
                covered = true;
                break;
            }
        if (!covered) break;
        ++sc.resamples;
    }

    if (s.lambda_h_raw > 0.0) {
        const std::uint64_t n_h = rng.poisson(s.lambda_h_raw * area);
        sc.persons.reserve(n_h);
        for (std::uint64_t i = 0; i < n_h; ++i) {
            const Point2 c{rng.uniform(-h, h), rng.uniform(-h, h)};
            bool inside = false;
            for (const Building& b : sc.buildings) {
                const Vec2 r = c - b.center;
                const double rad = building_radius(b);
                if (norm2(r) > rad * rad) continue;
                if (building_contains(b, c)) {
                    inside = true;
                    break;
                }
            }
            if (!inside) sc.persons.push_back(Person{c, s.w_h});
        }
    }
    return sc;
}

std::vector<RayPath> trace_first_order(const Scene& sc, const Scenario& s) {
    std::vector<RayPath> out;
    const Cone txc{sc.tx, M_PI - s.phi_t, s.theta_bt / 2.0};
    const Cone rxc{sc.rx, M_PI - s.phi_r, s.theta_br / 2.0};
    const double gain = friis_factor(s) * s.gamma_rm;
    const double psi = self_block_weight(s);

    for (std::size_t i = 0; i < sc.buildings.size(); ++i) {
        const Building& b = sc.buildings[i];
        const double rad = building_radius(b);
        if (!cone_may_contain(txc, b.center, rad) ||
            !cone_may_contain(rxc, b.center, rad))
            continue;
        for (const BuildingFace& f : building_faces(b)) {
            if (!face_visible_from(f, b.center, sc.tx)) continue;
            try {
                const auto rv = specular_reflection(sc.tx, sc.rx, f.seg);
                if (!rv) continue;
                if (!in_main_lobe(txc, rv->point) ||
                    !in_main_lobe(rxc, rv->point))
                    continue;
                RayPath p;
                p.order = ReflectionOrder::First;
                p.vertices = {sc.tx, rv->point, sc.rx, Point2{}};
                p.n_vertices = 3;
                const double st = std::clamp(rv->sin_theta, 0.0, 1.0);
                p.theta_n = std::asin(st);
                p.length =
                    distance(sc.tx, rv->point) + distance(rv->point, sc.rx);
                p.delay = p.length / kSpeedOfLight;
                p.power = gain * st / (p.length * p.length);
                p.blocked =
                    segment_blocked({sc.tx, rv->point}, sc.buildings,
                                    sc.persons, i) ||
                    segment_blocked({rv->point, sc.rx}, sc.buildings,
                                    sc.persons, i);
                p.self_block_weight = psi;
                out.push_back(p);
            } catch (const geometry_error&) {
                // degenerate face or endpoint on the face line: no path
            }
        }
    }
    return out;
}

std::vector<RayPath> trace_second_order(const Scene& sc, const Scenario& s) {
    std::vector<RayPath> out;
    if (sc.buildings.empty()) return out;
    const Cone txc{sc.tx, M_PI - s.phi_t, s.theta_bt / 2.0};
    const Cone rxc{sc.rx, M_PI - s.phi_r, s.theta_br / 2.0};
    const double gain = friis_factor(s) * s.gamma_rm * s.gamma_rm;
    const double psi = self_block_weight(s);
    const Point2 mid = (sc.tx + sc.rx) / 2.0;

    const std::size_t n = sc.buildings.size();
    std::vector<double> reach(n), radius(n), mid_dist(n);
    std::vector<char> tx_side(n), rx_side(n);
    double max_dim = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Building& b = sc.buildings[i];
        reach[i] = bounce_reach(s, b);
        radius[i] = building_radius(b);
        mid_dist[i] = distance(b.center, mid);
        tx_side[i] = cone_may_contain(txc, b.center, radius[i]) ? 1 : 0;
        rx_side[i] = cone_may_contain(rxc, b.center, radius[i]) ? 1 : 0;
        max_dim = std::max({max_dim, b.l, b.w});
    }
    const double slack = s.d / 2.0 + 3.0 * max_dim;

    for (std::size_t i = 0; i < n; ++i) {
        if (!tx_side[i] || mid_dist[i] > reach[i] + slack) continue;
        const auto faces_i = building_faces(sc.buildings[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || !rx_side[j] || mid_dist[j] > reach[j] + slack)
                continue;
            const auto faces_j = building_faces(sc.buildings[j]);
            for (const BuildingFace& f1 : faces_i) {
                if (!face_visible_from(f1, sc.buildings[i].center, sc.tx))
                    continue;
                Point2 im1;
                try {
                    im1 = image_point(sc.tx, f1.seg);
                } catch (const geometry_error&) {
                    continue;
                }
                for (const BuildingFace& f2 : faces_j) {
                    if (!face_visible_from(f2, sc.buildings[j].center, sc.rx))
                        continue;
                    try {
                        const auto rv2 =
                            specular_reflection(im1, sc.rx, f2.seg);
                        if (!rv2) continue;
                        const auto rv1 =
                            specular_reflection(sc.tx, rv2->point, f1.seg);
                        if (!rv1) continue;
                        if (!in_main_lobe(txc, rv1->point) ||
                            !in_main_lobe(rxc, rv2->point))
                            continue;
                        RayPath p;
                        p.order = ReflectionOrder::Second;
                        p.vertices = {sc.tx, rv1->point, rv2->point, sc.rx};
                        p.n_vertices = 4;
                        const double s2 = std::clamp(rv2->sin_theta, 0.0, 1.0);
                        p.theta_n = std::asin(s2);
                        p.length = distance(sc.tx, rv1->point) +
                                   distance(rv1->point, rv2->point) +
                                   distance(rv2->point, sc.rx);
                        p.delay = p.length / kSpeedOfLight;
                        p.power = gain * s2 * s2 / (p.length * p.length);
                        p.blocked =
                            segment_blocked2({sc.tx, rv1->point},
                                             sc.buildings, sc.persons, i,
                                             std::nullopt) ||
                            segment_blocked2({rv1->point, rv2->point},
                                             sc.buildings, sc.persons, i, j) ||
                            segment_blocked2({rv2->point, sc.rx},
                                             sc.buildings, sc.persons, j,
                                             std::nullopt);
                        p.self_block_weight = psi;
                        out.push_back(p);
                    } catch (const geometry_error&) {
                        // degenerate construction: no path
                    }
                }
            }
        }
    }
    return out;
}

namespace {

struct ChunkSums {
    double sx = 0.0, sxx = 0.0;            // scalar estimand
    double sw = 0.0, swt = 0.0, swt2 = 0.0;  // power-weighted delays
    std::vector<double> bin_power;
    std::vector<std::uint64_t> bin_hits;
    std::vector<std::uint64_t> counts;  // pmf buckets
};

// Runs `body(index, sums)` for every realization, chunked; chunks are merged
// in index order so the reduction is independent of the thread count.
template <class Body>
std::vector<ChunkSums> run_chunks(std::uint64_t m, Body&& body) {
    const std::uint64_t nchunks = (m + kChunk - 1) / kChunk;
    std::vector<ChunkSums> chunks(nchunks);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    const auto worker = [&] {
        try {
            for (;;) {
                const std::uint64_t c = next.fetch_add(1);
                if (c >= nchunks) break;
                const std::uint64_t lo = c * kChunk;
                const std::uint64_t hi = std::min(m, lo + kChunk);
                for (std::uint64_t idx = lo; idx < hi; ++idx)
                    body(idx, chunks[c]);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };

    const std::uint64_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t nthreads = std::min<std::uint64_t>(hw, nchunks);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (std::uint64_t t = 0; t < nthreads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return chunks;
}

double kahan_total(const std::vector<ChunkSums>& chunks,
                   double ChunkSums::* field) {
    double sum = 0.0, comp = 0.0;
    for (const ChunkSums& c : chunks) {
        const double y = c.*field - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

EstimateWithCI scalar_stats(const std::vector<ChunkSums>& chunks,
                            std::uint64_t m) {
    EstimateWithCI r;
    r.m = m;
    const double sx = kahan_total(chunks, &ChunkSums::sx);
    const double sxx = kahan_total(chunks, &ChunkSums::sxx);
    r.mean = sx / static_cast<double>(m);
    const double var =
        m > 1 ? std::max(0.0, (sxx - static_cast<double>(m) * r.mean * r.mean) /
                                  static_cast<double>(m - 1))
              : 0.0;
    r.se = std::sqrt(var / static_cast<double>(m));
    return r;
}

}  // namespace

EstimateResult estimate(const Scenario& s, const SceneConfig& cfg,
                        EstimateKind what) {
    validate_sampling(s, cfg);
    if (cfg.realizations < 100)
        throw scenario_error("estimate: needs at least 100 realizations");
    const std::uint64_t m = cfg.realizations;
    const double psi = self_block_weight(s);

    std::size_t n_bins = 0;
    if (what == EstimateKind::PdpHistogram) {
        double tau_cap = 6.0 * s.d / kSpeedOfLight;
        if (s.orientation == OrientationModel::Fixed) {
            const PdpModel model = pdp_model(s);
            if (model.tau_max > 0.0) tau_cap = 1.25 * model.tau_max;
        }
        n_bins = static_cast<std::size_t>(std::ceil(tau_cap / cfg.pdp_bin)) + 8;
    }

    const bool both_orders = what == EstimateKind::PdpHistogram ||
                             what == EstimateKind::DelayStatsEmpirical;

    const auto chunks = run_chunks(m, [&](std::uint64_t idx, ChunkSums& cs) {
        const Scene sc = generate_scene(s, cfg, idx);
        std::vector<RayPath> paths = trace_first_order(sc, s);
        if (both_orders && s.second_order) {
            auto second = trace_second_order(sc, s);
            paths.insert(paths.end(), second.begin(), second.end());
        }
        switch (what) {
            case EstimateKind::Count: {
                std::uint64_t k = 0;
                for (const RayPath& p : paths)
                    if (!p.blocked) ++k;
                const double x = psi * static_cast<double>(k);
                cs.sx += x;
                cs.sxx += x * x;
                break;
            }
            case EstimateKind::PathLoss: {
                double p_sum = 0.0;
                for (const RayPath& p : paths)
                    if (!p.blocked) p_sum += psi * p.power;
                cs.sx += p_sum;
                cs.sxx += p_sum * p_sum;
                break;
            }
            case EstimateKind::PdpHistogram: {
                if (cs.bin_power.empty()) {
                    cs.bin_power.assign(n_bins, 0.0);
                    cs.bin_hits.assign(n_bins, 0);
                }
                for (const RayPath& p : paths) {
                    if (p.blocked) continue;
                    auto bin = static_cast<std::size_t>(p.delay / cfg.pdp_bin);
                    bin = std::min(bin, n_bins - 1);
                    cs.bin_power[bin] += psi * p.power;
                    cs.bin_hits[bin] += 1;
                }
                break;
            }
            case EstimateKind::DelayStatsEmpirical: {
                for (const RayPath& p : paths) {
                    if (p.blocked) continue;
                    const double w = psi * p.power;
                    cs.sw += w;
                    cs.swt += w * p.delay;
                    cs.swt2 += w * p.delay * p.delay;
                }
                break;
            }
        }
    });

    switch (what) {
        case EstimateKind::Count:
            return scalar_stats(chunks, m);
        case EstimateKind::PathLoss: {
            const EstimateWithCI power = scalar_stats(chunks, m);
            EstimateWithCI pl;
            pl.m = m;
            if (power.mean <= 0.0) {
                pl.mean = std::numeric_limits<double>::infinity();
                pl.se = std::numeric_limits<double>::infinity();
            } else {
                pl.mean = 1.0 / power.mean;
                pl.se = power.se / (power.mean * power.mean);
            }
            return pl;
        }
        case EstimateKind::PdpHistogram: {
            McPdp hist;
            hist.bin_width = cfg.pdp_bin;
            hist.m = m;
            hist.bins.resize(n_bins);
            for (std::size_t b = 0; b < n_bins; ++b) {
                McPdpBin& bin = hist.bins[b];
                bin.tau_lo = static_cast<double>(b) * cfg.pdp_bin;
                double power = 0.0, comp = 0.0;
                for (const ChunkSums& c : chunks) {
                    if (c.bin_power.empty()) continue;
                    const double y = c.bin_power[b] - comp;
                    const double t = power + y;
                    comp = (t - power) - y;
                    power = t;
                    bin.hits += c.bin_hits[b];
                }
                bin.value =
                    power / (static_cast<double>(m) * cfg.pdp_bin);
            }
            return hist;
        }
        case EstimateKind::DelayStatsEmpirical:
        default: {
            McDelayStats st;
            st.m = m;
            const double sw = kahan_total(chunks, &ChunkSums::sw);
            const double swt = kahan_total(chunks, &ChunkSums::swt);
            const double swt2 = kahan_total(chunks, &ChunkSums::swt2);
            if (sw <= 0.0) {
                st.tau_mean = std::numeric_limits<double>::quiet_NaN();
                st.tau_rms = std::numeric_limits<double>::quiet_NaN();
            } else {
                st.tau_mean = swt / sw;
                st.tau_rms = std::sqrt(
                    std::max(0.0, swt2 / sw - st.tau_mean * st.tau_mean));
            }
            return st;
        }
    }
}

std::vector<double> count_pmf(const Scenario& s, const SceneConfig& cfg,
                              std::size_t max_n) {
    validate_sampling(s, cfg);
    if (cfg.realizations < 100)
        throw scenario_error("count_pmf: needs at least 100 realizations");
    const std::uint64_t m = cfg.realizations;

    const auto chunks = run_chunks(m, [&](std::uint64_t idx, ChunkSums& cs) {
        if (cs.counts.empty()) cs.counts.assign(max_n + 1, 0);
        const Scene sc = generate_scene(s, cfg, idx);
        // Raw surviving-path count: self-blockage enters the estimators as a
        // deterministic weight, not as extra randomness, so the count law is
        // that of the unweighted process.
        std::uint64_t k = 0;
        for (const RayPath& p : trace_first_order(sc, s))
            if (!p.blocked) ++k;
        cs.counts[std::min<std::uint64_t>(k, max_n)] += 1;
    });

    std::vector<double> pmf(max_n + 1, 0.0);
    for (const ChunkSums& c : chunks) {
        if (c.counts.empty()) continue;
        for (std::size_t k = 0; k <= max_n; ++k)
            pmf[k] += static_cast<double>(c.counts[k]);
    }
    for (double& v : pmf) v /= static_cast<double>(m);
    return pmf;
}

}  // namespace mmgeo
