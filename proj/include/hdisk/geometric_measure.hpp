#pragma once

// Smallness certificates for boundary sets: Hausdorff content under a gauge and Riesz
// alpha-capacity.

#include <string>
#include <variant>
#include <vector>

#include "hdisk/disk_geometry.hpp"

namespace hdisk {

enum class Admissibility { yes, no, unknown };
std::string to_string(Admissibility a);

// Cover-cost function h(t), continuous, nonnegative and nondecreasing.
class GaugeFunction {
public:
    enum class Kind { power, tlog, custom };

    // h(t) = t^beta
    static GaugeFunction power(double beta);
    // h(t) = t log(1/t) for t < 1/e, held at 1/e beyond
    static GaugeFunction tlog();
    // Piecewise linear through (t, h) pairs with increasing t; linear from the origin to the first
    // pair and constant after the last.
    static GaugeFunction custom(std::vector<std::pair<double, double>> table);

    double operator()(double t) const noexcept;

    Kind kind() const noexcept { return kind_; }
    double beta() const noexcept { return beta_; }
    const std::vector<std::pair<double, double>>& table() const noexcept { return table_; }
    std::string describe() const;

    // Probe of h(t) / (t log 1/t) -> 0 at t = 2^-j, j = 1..40. See probe_admissibility.
    Admissibility admissible() const noexcept { return admissible_; }

private:
    GaugeFunction() = default;
    Kind kind_ = Kind::power;
    double beta_ = 1.0;
    std::vector<std::pair<double, double>> table_;
    Admissibility admissible_ = Admissibility::unknown;
};

// q_j = h(2^-j) / (2^-j j log 2) for j = 1..40.
std::vector<double> admissibility_probe(const GaugeFunction& h);
// yes: q decreasing on the tail and either q_40 < 1e-2 or q decaying at least like 1/j
// (log-log slope <= -0.9 over j in [20, 40]); no: q nondecreasing on the tail; unknown otherwise.
Admissibility probe_admissibility(const GaugeFunction& h);

// Closed boundary piece with possibly zero length (a point).
struct Segment {
    double start = 0.0;   // [-pi, pi)
    double length = 0.0;  // [0, 2 pi]
};

struct ArcUnion {
    std::vector<Arc> arcs;
};

// Middle-cut Cantor construction on a base arc: each level keeps the two outer pieces of
// relative length ratio.
struct CantorSet {
    Arc base;
    double ratio;
    int depth;
};

struct PointSet {
    std::vector<BoundaryPoint> points;
};

class BoundarySet {
public:
    using Variant = std::variant<ArcUnion, CantorSet, PointSet>;

    explicit BoundarySet(Variant v);
    static BoundarySet full_circle();
    static BoundarySet arcs(std::vector<Arc> arcs) { return BoundarySet(ArcUnion{std::move(arcs)}); }
    static BoundarySet cantor(Arc base, double ratio, int depth) {
        return BoundarySet(CantorSet{base, ratio, depth});
    }
    static BoundarySet points(std::vector<BoundaryPoint> pts) { return BoundarySet(PointSet{std::move(pts)}); }

    const Variant& variant() const noexcept { return v_; }

    // Disjoint pieces sorted by start; touching or overlapping pieces are merged.
    const std::vector<Segment>& segments() const noexcept { return segments_; }
    double total_length() const noexcept;
    bool contains(double theta) const noexcept;
    double distance(double theta) const noexcept;

private:
    Variant v_;
    std::vector<Segment> segments_;
};

enum class ContentMode { exact_dp, greedy, brute_force };
std::string to_string(ContentMode m);

inline constexpr std::size_t max_content_pieces = std::size_t{1} << 14;
inline constexpr std::size_t max_brute_force_pieces = 10;

// A cover by arcs, each the hull of a circular run of consecutive pieces.
struct Run {
    std::size_t first = 0;  // index of the first piece
    std::size_t count = 0;  // number of consecutive pieces (wrapping)
};

struct ContentResult {
    double value = 0.0;
    std::vector<Run> cover;
};

// inf sum h(|S_k|) over arc covers of E. Covers are restricted to hulls of circular runs of E's
// pieces: for nondecreasing h any covering arc can be shrunk to the hull of the pieces it meets
// without raising its cost, and arcs meeting overlapping runs can be replaced by one hull.
ContentResult hausdorff_content_cover(const BoundarySet& e, const GaugeFunction& h,
                                      ContentMode mode = ContentMode::exact_dp);
double hausdorff_content(const BoundarySet& e, const GaugeFunction& h,
                         ContentMode mode = ContentMode::exact_dp);

// Hull length of a run (2 pi minus the uncovered gap when the run takes every piece).
double run_hull(const std::vector<Segment>& pieces, const Run& run) noexcept;
// Sum of h(hull) in ascending order of the runs' first piece.
double cover_cost(const std::vector<Segment>& pieces, std::vector<Run> cover, const GaugeFunction& h);

struct Theorem1Certificate {
    Admissibility admissible = Admissibility::unknown;
    double content = 0.0;      // exact_dp at the realized depth
    double threshold = 1e-9;
    bool pass = false;         // content > threshold
    bool hypotheses_met = false;  // pass and gauge not inadmissible
    std::size_t pieces = 0;
};

Theorem1Certificate certify_theorem1_set(const BoundarySet& e, const GaugeFunction& h,
                                         double threshold = 1e-9);

enum class KernelMode { angular, chordal };
std::string to_string(KernelMode m);

struct CapacityOptions {
    double gap_tolerance = 1e-6;  // relative Frank-Wolfe duality gap
    int max_iterations = 200000;
    bool parallel = true;
};

struct CapacityResult {
    double capacity = 0.0;
    double energy = 0.0;
    double gap = 0.0;
    int iterations = 0;
    double cell_width = 0.0;
    std::vector<double> cell_centers;
    std::vector<double> weights;  // minimizing probability weights per cell
};

// Cells of the uniform grid of spacing 2 pi / G whose centers lie in E, G = grid_points (doubled
// until E spans at least 32 cells). A measure puts uniform mass on each cell, so the energy
// sum_ij mu_i mu_j kbar_ij uses cell-averaged kernels including the diagonal self-energy.
// The energy is minimized over the simplex by pairwise Frank-Wolfe steps with exact line search.
// Throws NonConvergence when the iteration cap is hit.
CapacityResult alpha_capacity(const BoundarySet& e, double alpha, int grid_points,
                              KernelMode mode = KernelMode::angular, const CapacityOptions& opt = {});

// The discretization used by alpha_capacity: cell width and selected cell centers.
struct CapacityGrid {
    double cell_width = 0.0;
    std::vector<double> centers;
};
CapacityGrid capacity_grid(const BoundarySet& e, int grid_points);

// Mean of the kernel over two cells of width w whose centers are `separation` apart.
double cell_averaged_kernel(double separation, double width, double alpha, KernelMode mode);

}  // namespace hdisk
