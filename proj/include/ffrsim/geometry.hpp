#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace ffrsim::geometry {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double dist2(const Vec2& a, const Vec2& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// Square observation window centered on the origin, side 2*half_width (m).
struct Window {
    double half_width = 100.0;

    double area() const { return 4.0 * half_width * half_width; }
    bool contains(const Vec2& p) const {
        return p.x >= -half_width && p.x <= half_width && p.y >= -half_width && p.y <= half_width;
    }
    void validate() const {
        if (!(half_width > 0.0) || !std::isfinite(half_width))
            throw std::invalid_argument("Window: half_width must be > 0 and finite");
    }
};

struct PointSet {
    std::vector<Vec2> positions;

    std::size_t size() const { return positions.size(); }
    bool empty() const { return positions.empty(); }
    const Vec2& operator[](std::size_t i) const { return positions[i]; }
};

// Nearest-BS association of a user set plus per-BS load counts.
struct Association {
    std::vector<std::int32_t> serving; // user index -> BS index
    std::vector<std::int32_t> load;    // BS index -> number of associated users
};

struct NearestTwo {
    int index1 = -1;
    double r1 = 0.0;
    int index2 = -1;
    double r2 = 0.0;
};

// Raised when a drop lacks the geometry needed to continue (e.g. < 2 BSs);
// the caller regenerates the drop.
class DegenerateScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Homogeneous PPP on the window: Poisson(density*area) points, i.i.d. uniform.
PointSet sample_ppp(double density, const Window& window, std::mt19937_64& gen);

// Same draw sequence as sample_ppp, writing into an existing buffer.
void sample_ppp_into(double density, const Window& window, std::mt19937_64& gen, PointSet& out);

// Two closest points to `origin`; ties broken by lower index. Requires >= 2 points.
NearestTwo nearest_two(const Vec2& origin, const PointSet& bss);

// Nearest-BS association for every user; ties broken by lower BS index.
Association associate(const PointSet& users, const PointSet& bss);

// Uniform-bucket index over a point set for O(1) nearest / nearest-two queries.
// Query results are identical to the brute-force scans above, including tie-breaks.
class SpatialGrid {
public:
    void build(const PointSet& points, const Window& window);

    int nearest(const Vec2& q) const;
    NearestTwo nearest_two(const Vec2& q) const;

    // Nearest-point association of a whole user set against the indexed
    // points; identical results to per-user nearest() calls.
    void associate_all(const PointSet& users, Association& out) const;

    bool empty() const { return count_ == 0; }

private:
    int cell_of(double coord) const;
    template <int kNeeded> NearestTwo search(const Vec2& q) const;

    std::vector<std::int32_t> cell_start_; // CSR offsets, size n_*n_+1
    std::vector<std::int32_t> entries_;    // point indices grouped by cell, index-ordered
    std::vector<double> entries_x_;        // coordinates in entry order (contiguous scans)
    std::vector<double> entries_y_;
    const PointSet* points_ = nullptr;
    double origin_ = 0.0;        // window lower-left corner coordinate
    double cell_size_ = 1.0;     // meters
    double inv_cell_size_ = 1.0; // 1/cell_size, shared by build and queries
    int n_ = 0;                  // cells per side
    std::size_t count_ = 0;

    mutable std::vector<std::int32_t> scratch_counts_;
};

}  // namespace ffrsim::geometry
