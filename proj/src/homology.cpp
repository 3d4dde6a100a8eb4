#include "tsgc/homology.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace tsgc {

namespace {

std::uint64_t pack_key(const FilteredSimplex& s) {
    std::uint64_t key = 0;
    for (int i = 0; i < 4; ++i) {
        const std::uint64_t part = i <= s.dim ? static_cast<std::uint64_t>(s.v[i]) : 0xFFFFULL;
        key |= part << (16 * i);
    }
    return key;
}

std::uint64_t pack_verts(const std::uint16_t* v, int count) {
    std::uint64_t key = 0;
    for (int i = 0; i < 4; ++i) {
        const std::uint64_t part = i < count ? static_cast<std::uint64_t>(v[i]) : 0xFFFFULL;
        key |= part << (16 * i);
    }
    return key;
}

bool simplex_less(const FilteredSimplex& a, const FilteredSimplex& b) {
    if (a.diameter != b.diameter) return a.diameter < b.diameter;
    if (a.dim != b.dim) return a.dim < b.dim;
    for (int i = 0; i <= a.dim; ++i) {
        if (a.v[i] != b.v[i]) return a.v[i] < b.v[i];
    }
    return false;
}

} // namespace

Filtration rips_filtration(const DistanceMatrix& dm, int max_dim, double r_max,
                           std::size_t cap) {
    if (!(r_max > 0.0)) {
        throw std::invalid_argument("rips_filtration: r_max must be positive");
    }
    if (max_dim < 0 || max_dim > 3) {
        throw std::invalid_argument("rips_filtration: max_dim must be in [0, 3]");
    }
    const int n = dm.n;
    if (n > 65534) {
        throw std::runtime_error("rips_filtration: too many points for 16-bit vertex ids");
    }

    const auto cap_check = [&](std::size_t count) {
        if (count > cap) {
            throw std::runtime_error(
                "rips_filtration: complexity cap exceeded (" + std::to_string(count) + " > " +
                std::to_string(cap) + " simplices); reduce the chunk length or the epsilon range");
        }
    };

    Filtration filt;
    filt.max_dim = max_dim;
    filt.r_max = r_max;
    filt.n_vertices = n;
    auto& out = filt.simplices;

    // neighbor lists under r_max, ascending
    std::vector<std::vector<std::uint16_t>> nbr(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j != i && dm.at(i, j) < r_max) {
                nbr[i].push_back(static_cast<std::uint16_t>(j));
            }
        }
    }

    for (int i = 0; i < n; ++i) {
        FilteredSimplex s;
        s.v[0] = static_cast<std::uint16_t>(i);
        s.dim = 0;
        s.diameter = 0.0;
        out.push_back(s);
    }
    cap_check(out.size());

    std::vector<std::uint16_t> common2, common3;
    for (int i = 0; i < n && max_dim >= 1; ++i) {
        for (std::uint16_t j : nbr[i]) {
            if (j <= i) continue;
            const double dij = dm.at(i, j);
            FilteredSimplex e;
            e.v = {static_cast<std::uint16_t>(i), j, 0, 0};
            e.dim = 1;
            e.diameter = dij;
            out.push_back(e);
            if (max_dim < 2) continue;

            // triangles (i, j, k), k > j, via neighbor intersection
            common2.clear();
            std::set_intersection(nbr[i].begin(), nbr[i].end(), nbr[j].begin(), nbr[j].end(),
                                  std::back_inserter(common2));
            for (std::uint16_t k : common2) {
                if (k <= j) continue;
                const double diam3 = std::max({dij, dm.at(i, k), dm.at(j, k)});
                FilteredSimplex t;
                t.v = {static_cast<std::uint16_t>(i), j, k, 0};
                t.dim = 2;
                t.diameter = diam3;
                out.push_back(t);
                if (max_dim < 3) continue;

                common3.clear();
                std::set_intersection(common2.begin(), common2.end(), nbr[k].begin(), nbr[k].end(),
                                      std::back_inserter(common3));
                for (std::uint16_t l : common3) {
                    if (l <= k) continue;
                    const double diam4 =
                        std::max({diam3, dm.at(i, l), dm.at(j, l), dm.at(k, l)});
                    FilteredSimplex q;
                    q.v = {static_cast<std::uint16_t>(i), j, k, l};
                    q.dim = 3;
                    q.diameter = diam4;
                    out.push_back(q);
                }
                cap_check(out.size());
            }
            cap_check(out.size());
        }
    }
    cap_check(out.size());

    std::sort(out.begin(), out.end(), simplex_less);
    return filt;
}

namespace {

constexpr std::uint32_t kNoOwner = 0xFFFFFFFFu;

// sorted symmetric difference, GF(2) column addition
void add_columns(std::vector<std::uint32_t>& col, const std::vector<std::uint32_t>& other,
                 std::vector<std::uint32_t>& scratch) {
    scratch.clear();
    std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                  std::back_inserter(scratch));
    col.swap(scratch);
}

} // namespace

// Column reduction of the anti-transposed boundary matrices (the coboundary
// direction), dimension by dimension with clearing. This yields exactly the
// persistence pairing of the boundary reduction but avoids grinding the
// millions of positive top-dimensional columns to zero, which dominates the
// boundary-direction algorithm on dense Rips filtrations. Columns of the
// dim-k pass are the (k-1)-simplices in descending filtration order, rows
// are their cofacets, and the pivot is the earliest cofacet.
Barcode reduce(const Filtration& filtration) {
    const auto& simplices = filtration.simplices;
    const std::uint32_t n = static_cast<std::uint32_t>(simplices.size());

    // per-dimension filtration indices (ascending)
    std::vector<std::vector<std::uint32_t>> per_dim(filtration.max_dim + 1);
    for (std::uint32_t i = 0; i < n; ++i) {
        per_dim[simplices[i].dim].push_back(i);
    }

    // facet -> per-dimension local id. Small vertex counts get O(1)
    // combinadic-rank tables (the hot path for dense filtrations); otherwise
    // sorted key arrays with binary search.
    const std::uint64_t nv = static_cast<std::uint64_t>(filtration.n_vertices);
    const bool use_tables = nv >= 3 && nv * (nv - 1) * (nv - 2) / 6 <= (1u << 23);
    const auto rank2 = [](std::uint64_t a, std::uint64_t b) { return b * (b - 1) / 2 + a; };
    const auto rank3 = [&](std::uint64_t a, std::uint64_t b, std::uint64_t c) {
        return c * (c - 1) * (c - 2) / 6 + rank2(a, b);
    };
    std::vector<std::uint32_t> edge_table, tri_table;
    std::vector<std::vector<std::pair<std::uint64_t, std::uint32_t>>> keys;
    if (use_tables) {
        if (filtration.max_dim >= 2) {
            edge_table.resize(nv * (nv - 1) / 2);
            for (std::uint32_t local = 0; local < per_dim[1].size(); ++local) {
                const FilteredSimplex& s = simplices[per_dim[1][local]];
                edge_table[rank2(s.v[0], s.v[1])] = local;
            }
        }
        if (filtration.max_dim >= 3) {
            tri_table.resize(nv * (nv - 1) * (nv - 2) / 6);
            for (std::uint32_t local = 0; local < per_dim[2].size(); ++local) {
                const FilteredSimplex& s = simplices[per_dim[2][local]];
                tri_table[rank3(s.v[0], s.v[1], s.v[2])] = local;
            }
        }
    } else {
        keys.resize(filtration.max_dim + 1);
        for (int d = 1; d < filtration.max_dim; ++d) {
            keys[d].reserve(per_dim[d].size());
            for (std::uint32_t local = 0; local < per_dim[d].size(); ++local) {
                keys[d].emplace_back(pack_key(simplices[per_dim[d][local]]), local);
            }
            std::sort(keys[d].begin(), keys[d].end());
        }
    }
    const auto local_of = [&](int d, const std::uint16_t* face) -> std::uint32_t {
        if (d == 0) {
            return face[0]; // vertices sort first, in vertex order
        }
        if (use_tables) {
            return d == 1 ? edge_table[rank2(face[0], face[1])]
                          : tri_table[rank3(face[0], face[1], face[2])];
        }
        const std::uint64_t key = pack_verts(face, d + 1);
        auto it = std::lower_bound(keys[d].begin(), keys[d].end(), std::make_pair(key, 0u));
        return it->second;
    };

    Barcode barcode;
    std::vector<char> negative(n, 0); // paired as a death; cleared in the next pass
    std::vector<std::uint32_t> pivot_owner(n, kNoOwner);
    std::vector<std::vector<std::uint32_t>> stored;
    std::vector<std::uint32_t> scratch;

    for (int k = 1; k <= filtration.max_dim; ++k) {
        const auto& rows = per_dim[k];     // k-simplices, by global index
        const auto& cols = per_dim[k - 1]; // (k-1)-simplices

        // cofacet lists, ascending because rows are visited in order
        std::vector<std::vector<std::uint32_t>> cofacets(cols.size());
        std::uint16_t face[4];
        for (std::uint32_t r : rows) {
            const FilteredSimplex& s = simplices[r];
            for (int drop = 0; drop <= k; ++drop) {
                int w = 0;
                for (int i = 0; i <= k; ++i) {
                    if (i != drop) face[w++] = s.v[i];
                }
                cofacets[local_of(k - 1, face)].push_back(r);
            }
        }

        for (std::uint32_t c = static_cast<std::uint32_t>(cols.size()); c-- > 0;) {
            const std::uint32_t sigma = cols[c];
            if (negative[sigma]) {
                continue; // killed something a dimension below; its column reduces to zero
            }
            std::vector<std::uint32_t> col = std::move(cofacets[c]);
            while (true) {
                if (col.empty()) {
                    // no cofacet kills sigma's class: essential in dim k-1
                    barcode.intervals.push_back(
                        {k - 1, simplices[sigma].diameter, kInfiniteDeath});
                    break;
                }
                const std::uint32_t pivot = col.front();
                const std::uint32_t owner = pivot_owner[pivot];
                if (owner == kNoOwner) {
                    pivot_owner[pivot] = static_cast<std::uint32_t>(stored.size());
                    stored.push_back(std::move(col));
                    negative[pivot] = 1;
                    barcode.intervals.push_back(
                        {k - 1, simplices[sigma].diameter, simplices[pivot].diameter});
                    break;
                }
                add_columns(col, stored[owner], scratch);
            }
        }
    }

    if (filtration.max_dim == 0) {
        for (std::size_t i = 0; i < per_dim[0].size(); ++i) {
            barcode.intervals.push_back({0, 0.0, kInfiniteDeath});
        }
    }
    return barcode;
}

EpsilonSeries betti_series(const Barcode& barcode, const EpsilonGrid& grid,
                           const std::vector<int>& dims) {
    EpsilonSeries series;
    series.grid = grid;
    series.kind = SeriesKind::betti;
    series.channels.reserve(dims.size());
    for (int k : dims) {
        std::vector<double> births, deaths;
        for (const BarcodeInterval& iv : barcode.intervals) {
            if (iv.dim != k) continue;
            births.push_back(iv.birth);
            if (iv.death != kInfiniteDeath) {
                deaths.push_back(iv.death);
            }
        }
        std::sort(births.begin(), births.end());
        std::sort(deaths.begin(), deaths.end());
        std::vector<double> channel(grid.values.size());
        for (std::size_t g = 0; g < grid.values.size(); ++g) {
            const double eps = grid.values[g];
            // #{birth < eps} - #{death < eps}: intervals alive at eps
            const auto nb = std::lower_bound(births.begin(), births.end(), eps) - births.begin();
            const auto nd = std::lower_bound(deaths.begin(), deaths.end(), eps) - deaths.begin();
            channel[g] = static_cast<double>(nb - nd);
        }
        series.channels.push_back(std::move(channel));
    }
    return series;
}

// ---------------------------------------------------------------------------
// naive oracle: explicit boundary matrices at one epsilon, GF(2) elimination

namespace {

constexpr int kOracleCap = 12;

void require_oracle_scale(const DistanceMatrix& dm) {
    if (dm.n > kOracleCap) {
        throw std::runtime_error("betti_naive: oracle limited to " +
                                 std::to_string(kOracleCap) + " points, got " +
                                 std::to_string(dm.n));
    }
}

// all k-simplices (k+1 vertices) of the complex {diameter < eps}, as sorted
// vertex tuples in lexicographic order
std::vector<std::array<int, 4>> enumerate_simplices(const DistanceMatrix& dm, double eps, int k) {
    const int n = dm.n;
    std::vector<std::array<int, 4>> out;
    std::array<int, 4> verts{};
    const auto fits = [&](int count, int cand) {
        for (int i = 0; i < count; ++i) {
            if (!(dm.at(verts[i], cand) < eps)) return false;
        }
        return true;
    };
    const auto recurse = [&](auto&& self, int depth, int start) -> void {
        if (depth == k + 1) {
            out.push_back(verts);
            return;
        }
        for (int v = start; v < n; ++v) {
            if (fits(depth, v)) {
                verts[depth] = v;
                self(self, depth + 1, v + 1);
            }
        }
    };
    recurse(recurse, 0, 0);
    return out;
}

// rank over GF(2) of the boundary map d_k : C_k -> C_{k-1}
std::size_t boundary_rank(const DistanceMatrix& dm, double eps, int k) {
    if (k <= 0) {
        return 0; // d_0 is the zero map
    }
    const auto rows = enumerate_simplices(dm, eps, k - 1);
    const auto cols = enumerate_simplices(dm, eps, k);
    if (rows.empty() || cols.empty()) {
        return 0;
    }
    std::vector<std::pair<std::array<int, 4>, std::size_t>> row_index;
    row_index.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        row_index.emplace_back(rows[i], i);
    }
    std::sort(row_index.begin(), row_index.end());

    const std::size_t words = (rows.size() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> reduced; // pivot-owning columns
    std::vector<std::size_t> pivots;
    std::vector<std::uint64_t> col(words);

    std::size_t rank = 0;
    for (const auto& c : cols) {
        std::fill(col.begin(), col.end(), 0);
        for (int drop = 0; drop <= k; ++drop) {
            std::array<int, 4> face{};
            int w = 0;
            for (int i = 0; i <= k; ++i) {
                if (i != drop) face[w++] = c[i];
            }
            auto it = std::lower_bound(row_index.begin(), row_index.end(),
                                       std::make_pair(face, std::size_t{0}));
            const std::size_t r = it->second;
            col[r / 64] ^= 1ULL << (r % 64);
        }
        // eliminate against previous pivot columns
        while (true) {
            int highest = -1;
            for (int w = static_cast<int>(words) - 1; w >= 0; --w) {
                if (col[w]) {
                    highest = w * 64 + 63 - std::countl_zero(col[w]);
                    break;
                }
            }
            if (highest < 0) {
                break; // dependent column
            }
            bool hit = false;
            for (std::size_t p = 0; p < pivots.size(); ++p) {
                if (pivots[p] == static_cast<std::size_t>(highest)) {
                    for (std::size_t w = 0; w < words; ++w) col[w] ^= reduced[p][w];
                    hit = true;
                    break;
                }
            }
            if (!hit) {
                pivots.push_back(static_cast<std::size_t>(highest));
                reduced.push_back(col);
                ++rank;
                break;
            }
        }
    }
    return rank;
}

} // namespace

std::array<std::size_t, 4> naive_simplex_counts(const DistanceMatrix& dm, double eps) {
    require_oracle_scale(dm);
    std::array<std::size_t, 4> counts{};
    for (int k = 0; k <= 3; ++k) {
        counts[k] = enumerate_simplices(dm, eps, k).size();
    }
    return counts;
}

std::size_t naive_boundary_rank(const DistanceMatrix& dm, double eps, int k) {
    require_oracle_scale(dm);
    return boundary_rank(dm, eps, k);
}

int betti_naive(const DistanceMatrix& dm, double eps, int k) {
    require_oracle_scale(dm);
    if (k < 0 || k > 2) {
        throw std::invalid_argument("betti_naive: k must be in {0, 1, 2}");
    }
    const std::size_t n_k = enumerate_simplices(dm, eps, k).size();
    const std::size_t rank_k = boundary_rank(dm, eps, k);
    const std::size_t rank_k1 = boundary_rank(dm, eps, k + 1);
    // dim Ker(d_k) - rank(d_{k+1})
    return static_cast<int>(n_k - rank_k - rank_k1);
}

} // namespace tsgc
