#include "taublab/lattice.hpp"

#include "taublab/errors.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace taublab {

IntBox::IntBox(std::vector<Coord> lo_, std::vector<Coord> hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.empty() || lo.size() != hi.size()) throw DomainError("box corners must have equal, positive dimension");
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (lo[i] > hi[i]) throw DomainError("box has lo > hi on axis " + std::to_string(i));
    }
}

bool IntBox::contains(std::span<const Coord> p) const {
    if (p.size() != lo.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < lo[i] || p[i] > hi[i]) return false;
    }
    return true;
}

std::string IntBox::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (i) os << " x ";
        os << '[' << lo[i] << ',' << hi[i] << ']';
    }
    return os.str();
}

std::int64_t box_lattice_count(const IntBox& box) {
    __int128 n = 1;
    for (std::size_t i = 0; i < box.dim(); ++i) {
        n *= static_cast<__int128>(box.hi[i]) - box.lo[i] + 1;
        if (n > std::numeric_limits<std::int64_t>::max()) throw DomainError("box volume overflows 64 bits");
    }
    return static_cast<std::int64_t>(n);
}

LatticeSet::LatticeSet(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw DomainError("lattice dimension must be positive");
}

LatticeSet::LatticeSet(std::size_t dim, std::vector<LatticePoint> points) : dim_(dim) {
    if (dim == 0) throw DomainError("lattice dimension must be positive");
    for (const auto& p : points) {
        if (p.dim() != dim) {
            throw DomainError("point of dimension " + std::to_string(p.dim()) + " in a set of dimension " +
                              std::to_string(dim));
        }
    }
    canonicalize(points);
}

void LatticeSet::canonicalize(std::vector<LatticePoint>& points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    coords_.clear();
    coords_.reserve(points.size() * dim_);
    for (const auto& p : points) coords_.insert(coords_.end(), p.coords.begin(), p.coords.end());
}

LatticeSet LatticeSet::line(std::vector<Coord> xs) {
    std::vector<LatticePoint> pts;
    pts.reserve(xs.size());
    for (Coord x : xs) pts.push_back(LatticePoint{x});
    return LatticeSet(1, std::move(pts));
}

LatticeSet LatticeSet::interval(Coord lo, std::int64_t k) {
    if (k < 1) throw DomainError("interval length must be positive");
    std::vector<Coord> xs(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < k; ++i) xs[static_cast<std::size_t>(i)] = lo + i;
    return line(std::move(xs));
}

LatticeSet LatticeSet::from_box(const IntBox& box) {
    const std::size_t n = box.dim();
    std::vector<LatticePoint> pts;
    pts.reserve(static_cast<std::size_t>(box_lattice_count(box)));
    std::vector<Coord> cur = box.lo;
    while (true) {
        pts.emplace_back(cur);
        std::size_t axis = n;
        while (axis > 0) {
            --axis;
            if (cur[axis] < box.hi[axis]) {
                ++cur[axis];
                break;
            }
            cur[axis] = box.lo[axis];
            if (axis == 0) return LatticeSet(n, std::move(pts));
        }
    }
}

LatticePoint LatticeSet::point_value(std::size_t i) const {
    auto p = point(i);
    return LatticePoint(std::vector<Coord>(p.begin(), p.end()));
}

std::vector<LatticePoint> LatticeSet::points() const {
    std::vector<LatticePoint> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(point_value(i));
    return out;
}

bool LatticeSet::contains(std::span<const Coord> p) const {
    if (p.size() != dim_) return false;
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        auto q = point(mid);
        if (std::lexicographical_compare(q.begin(), q.end(), p.begin(), p.end())) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return lo < size() && std::equal(p.begin(), p.end(), point(lo).begin());
}

IntBox LatticeSet::bounding_box() const {
    if (empty()) throw DomainError("bounding box of an empty set");
    std::vector<Coord> lo(point(0).begin(), point(0).end());
    std::vector<Coord> hi = lo;
    for (std::size_t i = 1; i < size(); ++i) {
        auto p = point(i);
        for (std::size_t a = 0; a < dim_; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    }
    return IntBox(std::move(lo), std::move(hi));
}

LatticeSet LatticeSet::translated(std::span<const Coord> v) const {
    if (v.size() != dim_) throw DomainError("translation vector has the wrong dimension");
    LatticeSet out = *this;
    for (std::size_t i = 0; i < out.coords_.size(); ++i) out.coords_[i] += v[i % dim_];
    return out;  // translation preserves lexicographic order
}

LatticeSet LatticeSet::negated() const {
    auto pts = points();
    for (auto& p : pts) {
        for (auto& c : p.coords) c = -c;
    }
    return LatticeSet(dim_, std::move(pts));
}

std::strong_ordering operator<=>(const LatticeSet& a, const LatticeSet& b) {
    if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.coords_.begin(), a.coords_.end(), b.coords_.begin(),
                                                  b.coords_.end());
}

}  // namespace taublab
