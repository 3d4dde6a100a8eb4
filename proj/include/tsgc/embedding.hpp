#ifndef TSGC_EMBEDDING_HPP
#define TSGC_EMBEDDING_HPP

#include <span>
#include <vector>

namespace tsgc {

// Points stored row-major, count * dim.
struct PointCloud {
    int dim = 0;
    std::vector<double> coords;

    int size() const { return dim == 0 ? 0 : static_cast<int>(coords.size()) / dim; }
    std::span<const double> point(int i) const {
        return {coords.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
    }
};

// Sliding windows of length m, delay 1: point i = series[i .. i+m).
PointCloud takens_embed(std::span<const double> series, int m);

} // namespace tsgc

#endif
