#pragma once

#include <cmath>
#include <cstdint>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kcenter {

using PointIndex = std::uint32_t;
using IndexSet = std::vector<PointIndex>;

/// Distance-evaluation and wall-time tally for one (simulated) machine.
/// Counters only ever increase; aggregation across machines happens at
/// round barriers, never by sharing a counter.
struct CostCounter {
    std::uint64_t distance_evals = 0;
    std::uint64_t wall_nanos = 0;
};

/// Immutable set of n points in d-dimensional Euclidean space, ids 0..n-1.
/// Distances are always computed on demand; no pairwise matrix is ever built.
class PointSet {
public:
    PointSet(std::vector<double> coords, std::size_t dim)
        : coords_(std::move(coords)), dim_(dim) {
        if (dim_ < 1) throw std::invalid_argument("PointSet: dimension must be >= 1");
        if (coords_.empty() || coords_.size() % dim_ != 0)
            throw std::invalid_argument("PointSet: coordinate count not a multiple of dim");
        n_ = coords_.size() / dim_;
        for (double v : coords_)
            if (!std::isfinite(v))
                throw std::invalid_argument("PointSet: coordinates must be finite");
    }

    static PointSet from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) throw std::invalid_argument("PointSet: no points");
        const std::size_t dim = rows.front().size();
        std::vector<double> flat;
        flat.reserve(rows.size() * dim);
        for (const auto& r : rows) {
            if (r.size() != dim)
                throw std::invalid_argument("PointSet: ragged rows");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return PointSet(std::move(flat), dim);
    }

    std::size_t size() const { return n_; }
    std::size_t dim() const { return dim_; }

    const double* row(PointIndex i) const { return coords_.data() + std::size_t{i} * dim_; }

    std::span<const double> point(PointIndex i) const { return {row(i), dim_}; }

    void check_index(std::size_t i) const {
        if (i >= n_) throw std::out_of_range("PointSet: index " + std::to_string(i) +
                                             " out of range (n=" + std::to_string(n_) + ")");
    }

private:
    std::vector<double> coords_;
    std::size_t dim_;
    std::size_t n_;
};

inline IndexSet all_indices(std::size_t n) {
    IndexSet ids(n);
    std::iota(ids.begin(), ids.end(), PointIndex{0});
    return ids;
}

namespace detail {

inline double sqdist(const double* a, const double* b, std::size_t dim) {
    switch (dim) {
        case 1: {
            const double d0 = a[0] - b[0];
            return d0 * d0;
        }
        case 2: {
            const double d0 = a[0] - b[0], d1 = a[1] - b[1];
            return d0 * d0 + d1 * d1;
        }
        case 3: {
            const double d0 = a[0] - b[0], d1 = a[1] - b[1], d2 = a[2] - b[2];
            return d0 * d0 + d1 * d1 + d2 * d2;
        }
        default: {
            double s = 0.0;
            for (std::size_t t = 0; t < dim; ++t) {
                const double d = a[t] - b[t];
                s += d * d;
            }
            return s;
        }
    }
}

}  // namespace detail

/// Euclidean distance between points i and j; counts one evaluation.
inline double distance(const PointSet& ps, std::size_t i, std::size_t j, CostCounter& counter) {
    ps.check_index(i);
    ps.check_index(j);
    ++counter.distance_evals;
    return std::sqrt(detail::sqdist(ps.row(static_cast<PointIndex>(i)),
                                    ps.row(static_cast<PointIndex>(j)), ps.dim()));
}

/// Column-major copy of a point subset. Acts as the "data sent to a reducer":
/// building it is data movement (uncounted); scanning it is where distance
/// evaluations happen. The layout keeps the min-distance scan vectorizable.
class GatheredPoints {
public:
    GatheredPoints() = default;

    GatheredPoints(const PointSet& ps, std::span<const PointIndex> ids)
        : count_(ids.size()), dim_(ps.dim()), cols_(count_ * dim_) {
        for (std::size_t t = 0; t < dim_; ++t) {
            double* col = cols_.data() + t * count_;
            for (std::size_t i = 0; i < count_; ++i) col[i] = ps.row(ids[i])[t];
        }
    }

    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }

    /// Squared distance from p (dim_ coordinates) to its nearest member.
    /// One pair evaluation per member; the caller charges size() evals.
    double min_sqdist(const double* p) const {
        double best = std::numeric_limits<double>::infinity();
        if (dim_ == 2) {
            const double px = p[0], py = p[1];
            const double* xs = cols_.data();
            const double* ys = cols_.data() + count_;
            for (std::size_t i = 0; i < count_; ++i) {
                const double dx = xs[i] - px, dy = ys[i] - py;
                const double s = dx * dx + dy * dy;
                best = s < best ? s : best;
            }
        } else if (dim_ == 3) {
            const double px = p[0], py = p[1], pz = p[2];
            const double* xs = cols_.data();
            const double* ys = cols_.data() + count_;
            const double* zs = cols_.data() + 2 * count_;
            for (std::size_t i = 0; i < count_; ++i) {
                const double dx = xs[i] - px, dy = ys[i] - py, dz = zs[i] - pz;
                const double s = dx * dx + dy * dy + dz * dz;
                best = s < best ? s : best;
            }
        } else {
            for (std::size_t i = 0; i < count_; ++i) {
                double s = 0.0;
                for (std::size_t t = 0; t < dim_; ++t) {
                    const double d = cols_[t * count_ + i] - p[t];
                    s += d * d;
                }
                best = s < best ? s : best;
            }
        }
        return best;
    }

private:
    std::size_t count_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> cols_;
};

/// Covering radius of `centers` over `subset`: max over v in subset of the
/// distance from v to its nearest center. This is the max-min objective;
/// the problem statement is sometimes typeset min-max, but the assignment
/// reading (every point goes to its nearest center, worst case minimized)
/// is the one implemented.
inline double covering_radius(const PointSet& ps, std::span<const PointIndex> subset,
                              std::span<const PointIndex> centers,
                              CostCounter* counter = nullptr) {
    if (centers.empty()) throw std::invalid_argument("covering_radius: empty center set");
    for (PointIndex c : centers) ps.check_index(c);
    const GatheredPoints block(ps, centers);
    double worst = 0.0;
    for (PointIndex v : subset) {
        ps.check_index(v);
        const double s = block.min_sqdist(ps.row(v));
        worst = s > worst ? s : worst;
    }
    if (counter) counter->distance_evals += subset.size() * centers.size();
    return std::sqrt(worst);
}

inline double covering_radius(const PointSet& ps, std::span<const PointIndex> centers,
                              CostCounter* counter = nullptr) {
    const IndexSet everything = all_indices(ps.size());
    return covering_radius(ps, everything, centers, counter);
}

/// One k-center solution: chosen point ids, achieved covering radius, and
/// where it came from.
struct CenterSolution {
    IndexSet centers;
    double radius = 0.0;
    std::string algorithm;
    std::string params;
    std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// CSV point files: one point per line, comma-separated decimal coordinates,
// lines starting with '#' are comments. Dimension is inferred from the first
// data row; ragged rows are a parse error.

inline PointSet read_points_csv(std::istream& in, const std::string& name = "<stream>") {
    std::vector<double> flat;
    std::size_t dim = 0;
    std::size_t line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view sv(line);
        // skip comment and blank lines
        std::size_t first = sv.find_first_not_of(" \t");
        if (first == std::string_view::npos || sv[first] == '#') continue;

        std::size_t col = 0;
        std::size_t pos = 0;
        while (pos <= sv.size()) {
            std::size_t comma = sv.find(',', pos);
            std::string_view field = sv.substr(pos, comma == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : comma - pos);
            // trim
            std::size_t b = field.find_first_not_of(" \t");
            std::size_t e = field.find_last_not_of(" \t");
            field = (b == std::string_view::npos) ? std::string_view{}
                                                  : field.substr(b, e - b + 1);
            ++col;
            double value = 0.0;
            const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
            if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
                throw std::runtime_error(name + ": line " + std::to_string(line_no) +
                                         ", column " + std::to_string(col) +
                                         ": not a number: '" + std::string(field) + "'");
            if (!std::isfinite(value))
                throw std::runtime_error(name + ": line " + std::to_string(line_no) +
                                         ", column " + std::to_string(col) +
                                         ": non-finite value");
            flat.push_back(value);
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        if (dim == 0) {
            dim = col;
        } else if (col != dim) {
            throw std::runtime_error(name + ": line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(dim) + " values, got " +
                                     std::to_string(col));
        }
    }
    if (flat.empty()) throw std::runtime_error(name + ": no points");
    return PointSet(std::move(flat), dim);
}

inline PointSet load_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_points_csv(in, path);
}

inline void format_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

inline void write_points_csv(std::ostream& out, const PointSet& ps,
                             const std::string& header_comment = {}) {
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    std::string line;
    for (PointIndex i = 0; i < ps.size(); ++i) {
        line.clear();
        const double* r = ps.row(i);
        for (std::size_t t = 0; t < ps.dim(); ++t) {
            if (t) line.push_back(',');
            format_double(line, r[t]);
        }
        line.push_back('\n');
        out << line;
    }
}

}  // namespace kcenter
