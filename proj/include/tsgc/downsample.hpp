#ifndef TSGC_DOWNSAMPLE_HPP
#define TSGC_DOWNSAMPLE_HPP

#include <span>
#include <utility>
#include <vector>

namespace tsgc {

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

// Partition of series indices into contiguous buckets, singleton first and
// last. Buckets are half-open [begin, end) index ranges.
struct Bucketing {
    std::vector<std::pair<int, int>> buckets;

    int count() const { return static_cast<int>(buckets.size()); }
    int interior_count() const { return count() - 2; }
    int n_points() const { return buckets.empty() ? 0 : buckets.back().second; }
    int bucket_size(int i) const { return buckets[i].second - buckets[i].first; }
    bool covers(std::size_t n) const;
};

// m_interior even-width interior buckets (sizes differ by at most one,
// remainder to the earliest buckets) between the singleton endpoints.
Bucketing naive_buckets(int n_points, int m_interior);

// First point of every bucket.
std::vector<double> dropout(std::span<const double> series, const Bucketing& bk);

// Interior buckets -> (mean index, mean value); endpoints pass through.
std::vector<Point2D> bucket_average(std::span<const double> series, const Bucketing& bk);

// Per interior bucket, the point maximizing the triangle area with the
// previously selected point and the next bucket's average; ties go to the
// lowest index. Needs at least 3 buckets.
std::vector<Point2D> lttb(std::span<const double> series, const Bucketing& bk);

// Unsigned shoelace area.
double triangle_area(Point2D a, Point2D b, Point2D c);

// Sum of squared residuals of the least-squares line through the points.
// Buckets of size <= 2 or with all-equal x give 0.
double ols_sse(std::span<const Point2D> points);

// Variance-weighted rebucketing: p highest-SSE splits followed by p
// least-combined-SSE adjacent merges, endpoints untouched, bucket count
// preserved. Size-1 buckets are skipped to the next-highest SSE; if nothing
// is splittable both phases truncate symmetrically.
Bucketing dynamic_buckets(std::span<const double> series, const Bucketing& bk, int p);

} // namespace tsgc

#endif
