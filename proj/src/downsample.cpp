#include "tsgc/downsample.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tsgc {

bool Bucketing::covers(std::size_t n) const {
    if (buckets.size() < 2) return false;
    if (buckets.front() != std::make_pair(0, 1)) return false;
    if (buckets.back() != std::make_pair(static_cast<int>(n) - 1, static_cast<int>(n))) return false;
    int pos = 0;
    for (const auto& [b, e] : buckets) {
        if (b != pos || e <= b) return false;
        pos = e;
    }
    return pos == static_cast<int>(n);
}

Bucketing naive_buckets(int n_points, int m_interior) {
    if (m_interior < 0) {
        throw std::invalid_argument("naive_buckets: negative bucket count");
    }
    if (n_points < m_interior + 2) {
        throw std::invalid_argument("naive_buckets: invalid target, need n_points >= m_interior + 2 (n_points=" +
                                    std::to_string(n_points) + ", m_interior=" + std::to_string(m_interior) + ")");
    }
    Bucketing bk;
    bk.buckets.reserve(m_interior + 2);
    bk.buckets.emplace_back(0, 1);
    const int interior = n_points - 2;
    if (m_interior > 0) {
        const int base = interior / m_interior;
        const int rem = interior % m_interior;
        int pos = 1;
        for (int j = 0; j < m_interior; ++j) {
            const int size = base + (j < rem ? 1 : 0);
            bk.buckets.emplace_back(pos, pos + size);
            pos += size;
        }
    }
    bk.buckets.emplace_back(n_points - 1, n_points);
    return bk;
}

namespace {

void require_cover(std::span<const double> series, const Bucketing& bk, const char* op) {
    if (!bk.covers(series.size())) {
        throw std::invalid_argument(std::string(op) + ": bucketing does not cover the series");
    }
}

Point2D average_of(std::span<const double> series, std::pair<int, int> bucket) {
    double sx = 0.0, sy = 0.0;
    for (int i = bucket.first; i < bucket.second; ++i) {
        sx += static_cast<double>(i);
        sy += series[i];
    }
    const double inv = 1.0 / static_cast<double>(bucket.second - bucket.first);
    return {sx * inv, sy * inv};
}

} // namespace

std::vector<double> dropout(std::span<const double> series, const Bucketing& bk) {
    require_cover(series, bk, "dropout");
    std::vector<double> out;
    out.reserve(bk.buckets.size());
    for (const auto& [b, e] : bk.buckets) {
        (void)e;
        out.push_back(series[b]);
    }
    return out;
}

std::vector<Point2D> bucket_average(std::span<const double> series, const Bucketing& bk) {
    require_cover(series, bk, "bucket_average");
    std::vector<Point2D> out;
    out.reserve(bk.buckets.size());
    out.push_back({0.0, series.front()});
    for (int j = 1; j + 1 < bk.count(); ++j) {
        out.push_back(average_of(series, bk.buckets[j]));
    }
    out.push_back({static_cast<double>(series.size() - 1), series.back()});
    return out;
}

double triangle_area(Point2D a, Point2D b, Point2D c) {
    return std::abs(a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y)) / 2.0;
}

std::vector<Point2D> lttb(std::span<const double> series, const Bucketing& bk) {
    require_cover(series, bk, "lttb");
    if (bk.count() < 3) {
        throw std::invalid_argument("lttb: invalid target, need at least 3 buckets");
    }
    std::vector<Point2D> out;
    out.reserve(bk.buckets.size());
    Point2D prev{0.0, series.front()};
    out.push_back(prev);
    for (int j = 1; j + 1 < bk.count(); ++j) {
        // the next bucket's average; for the last interior bucket that is the
        // final singleton, i.e. the endpoint itself
        const Point2D next = average_of(series, bk.buckets[j + 1]);
        const auto [b, e] = bk.buckets[j];
        int best = b;
        double best_area = -1.0;
        for (int i = b; i < e; ++i) {
            const double area = triangle_area(prev, {static_cast<double>(i), series[i]}, next);
            if (area > best_area) {
                best_area = area;
                best = i;
            }
        }
        prev = {static_cast<double>(best), series[best]};
        out.push_back(prev);
    }
    out.push_back({static_cast<double>(series.size() - 1), series.back()});
    return out;
}

double ols_sse(std::span<const Point2D> points) {
    const std::size_t n = points.size();
    if (n <= 2) {
        return 0.0;
    }
    double mx = 0.0, my = 0.0;
    for (const Point2D& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const Point2D& p : points) {
        const double dx = p.x - mx;
        const double dy = p.y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) {
        return 0.0; // all-equal x, degenerate fit
    }
    const double sse = syy - sxy * sxy / sxx;
    return sse > 0.0 ? sse : 0.0;
}

namespace {

double bucket_sse(std::span<const double> series, std::pair<int, int> bucket) {
    std::vector<Point2D> pts;
    pts.reserve(bucket.second - bucket.first);
    for (int i = bucket.first; i < bucket.second; ++i) {
        pts.push_back({static_cast<double>(i), series[i]});
    }
    return ols_sse(pts);
}

} // namespace

Bucketing dynamic_buckets(std::span<const double> series, const Bucketing& bk, int p) {
    require_cover(series, bk, "dynamic_buckets");
    if (p < 0) {
        throw std::invalid_argument("dynamic_buckets: negative iteration count");
    }
    Bucketing cur = bk;

    // phase 1: split the highest-SSE interior bucket at floor(size/2)
    int splits_done = 0;
    for (int it = 0; it < p; ++it) {
        int best = -1;
        double best_sse = -1.0;
        for (int j = 1; j + 1 < cur.count(); ++j) {
            if (cur.bucket_size(j) < 2) {
                continue; // a size-1 bucket cannot split; fall through to the next-highest SSE
            }
            const double s = bucket_sse(series, cur.buckets[j]);
            if (s > best_sse) {
                best_sse = s;
                best = j;
            }
        }
        if (best < 0) {
            break; // nothing splittable; truncate both phases symmetrically
        }
        const auto [b, e] = cur.buckets[best];
        const int mid = b + (e - b) / 2;
        cur.buckets[best] = {b, mid};
        cur.buckets.insert(cur.buckets.begin() + best + 1, {mid, e});
        ++splits_done;
    }

    // phase 2: merge the adjacent interior pair with least combined SSE,
    // recomputing SSE each iteration
    for (int it = 0; it < splits_done; ++it) {
        std::vector<double> sse(cur.count());
        for (int j = 1; j + 1 < cur.count(); ++j) {
            sse[j] = bucket_sse(series, cur.buckets[j]);
        }
        int best = -1;
        double best_pair = 0.0;
        for (int a = 1; a + 2 < cur.count(); ++a) {
            const double s = sse[a] + sse[a + 1];
            if (best < 0 || s < best_pair) {
                best_pair = s;
                best = a;
            }
        }
        if (best < 0) {
            break; // cannot happen after a successful split, kept as a guard
        }
        cur.buckets[best].second = cur.buckets[best + 1].second;
        cur.buckets.erase(cur.buckets.begin() + best + 1);
    }
    return cur;
}

} // namespace tsgc
