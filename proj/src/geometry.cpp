#include "ffrsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ffrsim::geometry {

namespace {

struct Best {
    double d2 = std::numeric_limits<double>::infinity();
    int idx = std::numeric_limits<int>::max();
};

// Lexicographic (distance, index) order implements the lower-index tie-break.
inline bool better(double d2, int idx, const Best& b) {
    return d2 < b.d2 || (d2 == b.d2 && idx < b.idx);
}

inline void update_two(double d2, int idx, Best& b1, Best& b2) {
    if (better(d2, idx, b1)) {
        b2 = b1;
        b1 = Best{d2, idx};
    } else if (better(d2, idx, b2)) {
        b2 = Best{d2, idx};
    }
}

}  // namespace

void sample_ppp_into(double density, const Window& window, std::mt19937_64& gen, PointSet& out) {
    window.validate();
    if (!(density >= 0.0) || !std::isfinite(density))
        throw std::invalid_argument("sample_ppp: density must be >= 0 and finite");

    const double mean = density * window.area();
    if (mean == 0.0) {
        out.positions.clear();
        return;
    }

    const long count = std::poisson_distribution<long>(mean)(gen);
    out.positions.resize(static_cast<std::size_t>(count));
    std::uniform_real_distribution<double> coord(-window.half_width, window.half_width);
    for (auto& p : out.positions) {
        p.x = coord(gen);
        p.y = coord(gen);
    }
}

PointSet sample_ppp(double density, const Window& window, std::mt19937_64& gen) {
    PointSet out;
    sample_ppp_into(density, window, gen, out);
    return out;
}

NearestTwo nearest_two(const Vec2& origin, const PointSet& bss) {
    if (bss.size() < 2)
        throw DegenerateScenarioError("nearest_two: need at least 2 points");

    Best b1, b2;
    for (std::size_t i = 0; i < bss.size(); ++i)
        update_two(dist2(origin, bss[i]), static_cast<int>(i), b1, b2);

    return NearestTwo{b1.idx, std::sqrt(b1.d2), b2.idx, std::sqrt(b2.d2)};
}

Association associate(const PointSet& users, const PointSet& bss) {
    if (bss.empty())
        throw DegenerateScenarioError("associate: BS set is empty");

    Association assoc;
    assoc.serving.resize(users.size());
    assoc.load.assign(bss.size(), 0);

    // Grid pays off once the BS set is non-trivial; both paths share the
    // same tie-break, so results are identical.
    if (bss.size() >= 16) {
        Window bounds{1.0};
        double extent = 1e-9;
        for (const auto& p : bss.positions)
            extent = std::max({extent, std::fabs(p.x), std::fabs(p.y)});
        for (const auto& p : users.positions)
            extent = std::max({extent, std::fabs(p.x), std::fabs(p.y)});
        bounds.half_width = extent;

        SpatialGrid grid;
        grid.build(bss, bounds);
        grid.associate_all(users, assoc);
    } else {
        for (std::size_t u = 0; u < users.size(); ++u) {
            Best b1, b2;
            for (std::size_t b = 0; b < bss.size(); ++b)
                update_two(dist2(users[u], bss[b]), static_cast<int>(b), b1, b2);
            assoc.serving[u] = b1.idx;
            ++assoc.load[static_cast<std::size_t>(b1.idx)];
        }
    }
    return assoc;
}

void SpatialGrid::build(const PointSet& points, const Window& window) {
    window.validate();
    points_ = &points;
    count_ = points.size();
    origin_ = -window.half_width;

    const int target = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(std::max<std::size_t>(count_, 1)))));
    n_ = std::clamp(target, 1, 512);
    cell_size_ = 2.0 * window.half_width / n_;
    inv_cell_size_ = 1.0 / cell_size_;

    const std::size_t ncells = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
    scratch_counts_.assign(ncells + 1, 0);
    entries_.resize(count_);
    entries_x_.resize(count_);
    entries_y_.resize(count_);

    auto cell_index = [this](const Vec2& p) {
        const int cx = cell_of(p.x);
        const int cy = cell_of(p.y);
        return static_cast<std::size_t>(cy) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(cx);
    };

    for (std::size_t i = 0; i < count_; ++i)
        ++scratch_counts_[cell_index(points[i]) + 1];
    for (std::size_t c = 1; c < scratch_counts_.size(); ++c)
        scratch_counts_[c] += scratch_counts_[c - 1];
    cell_start_ = scratch_counts_;
    // Fill in ascending point order so each bucket stays index-sorted.
    for (std::size_t i = 0; i < count_; ++i) {
        const std::size_t c = cell_index(points[i]);
        const auto slot = static_cast<std::size_t>(scratch_counts_[c]);
        entries_[slot] = static_cast<std::int32_t>(i);
        entries_x_[slot] = points[i].x;
        entries_y_[slot] = points[i].y;
        ++scratch_counts_[c];
    }
}

int SpatialGrid::cell_of(double coord) const {
    const int c = static_cast<int>((coord - origin_) * inv_cell_size_);
    return std::clamp(c, 0, n_ - 1);
}

template <int kNeeded>
NearestTwo SpatialGrid::search(const Vec2& q) const {
    Best b1, b2;

    const int cx = cell_of(q.x);
    const int cy = cell_of(q.y);

    const std::int32_t* __restrict cs = cell_start_.data();
    const std::int32_t* __restrict en = entries_.data();
    const double* __restrict ex = entries_x_.data();
    const double* __restrict ey = entries_y_.data();

    auto scan_cell = [&](int ix, int iy) {
        if (ix < 0 || ix >= n_ || iy < 0 || iy >= n_) return;
        const std::size_t c = static_cast<std::size_t>(iy) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(ix);
        for (std::int32_t e = cs[c]; e < cs[c + 1]; ++e) {
            const double dx = ex[e] - q.x;
            const double dy = ey[e] - q.y;
            update_two(dx * dx + dy * dy, en[e], b1, b2);
        }
    };

    const int max_ring = 2 * n_;
    for (int d = 0; d <= max_ring; ++d) {
        if (d == 0) {
            scan_cell(cx, cy);
        } else {
            for (int ix = cx - d; ix <= cx + d; ++ix) {
                scan_cell(ix, cy - d);
                scan_cell(ix, cy + d);
            }
            for (int iy = cy - d + 1; iy <= cy + d - 1; ++iy) {
                scan_cell(cx - d, iy);
                scan_cell(cx + d, iy);
            }
        }
        // Unscanned rings lie at least d*cell_size away; strict comparison keeps
        // the tie-break exact even when a point sits on the bound.
        const double reach = static_cast<double>(d) * cell_size_;
        const double need2 = (kNeeded == 1) ? b1.d2 : b2.d2;
        if (need2 < reach * reach) break;
    }

    NearestTwo out;
    out.index1 = b1.idx;
    out.r1 = std::sqrt(b1.d2);
    if (kNeeded == 2) {
        out.index2 = b2.idx;
        out.r2 = std::sqrt(b2.d2);
    }
    return out;
}

int SpatialGrid::nearest(const Vec2& q) const {
    if (count_ < 1) throw DegenerateScenarioError("SpatialGrid::nearest: empty grid");
    return search<1>(q).index1;
}

void SpatialGrid::associate_all(const PointSet& users, Association& out) const {
    if (count_ < 1) throw DegenerateScenarioError("SpatialGrid::associate_all: empty grid");
    out.serving.resize(users.size());
    out.load.assign(count_, 0);

    const std::int32_t* __restrict cs = cell_start_.data();
    const std::int32_t* __restrict en = entries_.data();
    const double* __restrict ex = entries_x_.data();
    const double* __restrict ey = entries_y_.data();
    std::int32_t* __restrict serving = out.serving.data();
    std::int32_t* __restrict load = out.load.data();

    const double bound2 = cell_size_ * cell_size_;
    for (std::size_t u = 0; u < users.size(); ++u) {
        const double qx = users[u].x;
        const double qy = users[u].y;
        const int cx = cell_of(qx);
        const int cy = cell_of(qy);
        const int x0 = std::max(cx - 1, 0);
        const int x1 = std::min(cx + 1, n_ - 1);
        const int y0 = std::max(cy - 1, 0);
        const int y1 = std::min(cy + 1, n_ - 1);

        double best_d2 = std::numeric_limits<double>::infinity();
        std::int32_t best_idx = std::numeric_limits<std::int32_t>::max();
        for (int iy = y0; iy <= y1; ++iy) {
            // Cells of one row are adjacent in the CSR layout, so the three
            // cells scan as a single contiguous span.
            const std::size_t row = static_cast<std::size_t>(iy) * static_cast<std::size_t>(n_);
            const std::int32_t lo = cs[row + static_cast<std::size_t>(x0)];
            const std::int32_t hi = cs[row + static_cast<std::size_t>(x1) + 1];
            for (std::int32_t e = lo; e < hi; ++e) {
                const double dx = ex[e] - qx;
                const double dy = ey[e] - qy;
                const double d2 = dx * dx + dy * dy;
                const std::int32_t idx = en[e];
                const bool better = (d2 < best_d2) | ((d2 == best_d2) & (idx < best_idx));
                best_d2 = better ? d2 : best_d2;
                best_idx = better ? idx : best_idx;
            }
        }
        // Cells beyond the 3x3 block lie at least cell_size away; ties on the
        // bound go through the exact ring search.
        const std::int32_t s = (best_d2 < bound2) ? best_idx : search<1>(Vec2{qx, qy}).index1;
        serving[u] = s;
        ++load[s];
    }
}

NearestTwo SpatialGrid::nearest_two(const Vec2& q) const {
    if (count_ < 2) throw DegenerateScenarioError("SpatialGrid::nearest_two: need at least 2 points");
    return search<2>(q);
}

}  // namespace ffrsim::geometry
