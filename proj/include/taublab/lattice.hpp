#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace taublab {

using Coord = std::int64_t;

/// A point of Z^n.
struct LatticePoint {
    std::vector<Coord> coords;

    LatticePoint() = default;
    explicit LatticePoint(std::vector<Coord> c) : coords(std::move(c)) {}
    LatticePoint(std::initializer_list<Coord> c) : coords(c) {}

    std::size_t dim() const { return coords.size(); }
    Coord operator[](std::size_t i) const { return coords[i]; }

    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

/// Axis-parallel integer box [lo_1, hi_1] x ... x [lo_n, hi_n].
struct IntBox {
    std::vector<Coord> lo;
    std::vector<Coord> hi;

    IntBox() = default;
    /// Throws DomainError on mismatched lengths, n == 0 or lo_i > hi_i.
    IntBox(std::vector<Coord> lo_, std::vector<Coord> hi_);

    std::size_t dim() const { return lo.size(); }
    bool contains(std::span<const Coord> p) const;
    std::string str() const;

    friend auto operator<=>(const IntBox&, const IntBox&) = default;
};

/// Number of lattice points in the box, prod(hi_i - lo_i + 1).
std::int64_t box_lattice_count(const IntBox& box);

/// Finite subset of Z^n kept deduplicated in lexicographic order, so two
/// sets are equal exactly when their representations are.
class LatticeSet {
public:
    LatticeSet() = default;
    /// Empty set of the given dimension (dim >= 1).
    explicit LatticeSet(std::size_t dim);
    /// Throws DomainError when dim == 0 or a point has the wrong dimension.
    LatticeSet(std::size_t dim, std::vector<LatticePoint> points);
    /// Convenience for 1-D sets.
    static LatticeSet line(std::vector<Coord> xs);
    /// {lo, ..., lo + k - 1} in Z.
    static LatticeSet interval(Coord lo, std::int64_t k);
    /// All points of a box.
    static LatticeSet from_box(const IntBox& box);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    bool empty() const { return coords_.empty(); }

    std::span<const Coord> point(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    LatticePoint point_value(std::size_t i) const;
    std::vector<LatticePoint> points() const;
    bool contains(std::span<const Coord> p) const;
    bool contains(const LatticePoint& p) const { return contains(std::span<const Coord>(p.coords)); }

    /// Smallest box holding every point. Throws DomainError on an empty set.
    IntBox bounding_box() const;

    LatticeSet translated(std::span<const Coord> v) const;
    LatticeSet negated() const;

    friend bool operator==(const LatticeSet&, const LatticeSet&) = default;
    /// Lexicographic comparison of the sorted point lists.
    friend std::strong_ordering operator<=>(const LatticeSet& a, const LatticeSet& b);

private:
    void canonicalize(std::vector<LatticePoint>& points);

    std::size_t dim_ = 0;
    std::vector<Coord> coords_;  // row-major, size() * dim_
};

}  // namespace taublab
