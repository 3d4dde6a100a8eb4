#include "tsgc/embedding.hpp"

#include <stdexcept>
#include <string>

namespace tsgc {

PointCloud takens_embed(std::span<const double> series, int m) {
    if (m < 1) {
        throw std::invalid_argument("takens_embed: window size must be >= 1");
    }
    if (series.size() < static_cast<std::size_t>(m)) {
        throw std::invalid_argument("takens_embed: invalid window, series length " +
                                    std::to_string(series.size()) + " < m = " + std::to_string(m));
    }
    PointCloud cloud;
    cloud.dim = m;
    const std::size_t count = series.size() - m + 1;
    cloud.coords.reserve(count * m);
    for (std::size_t i = 0; i < count; ++i) {
        cloud.coords.insert(cloud.coords.end(), series.begin() + i, series.begin() + i + m);
    }
    return cloud;
}

} // namespace tsgc
