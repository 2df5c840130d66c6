#include "taublab/lattice_maximal.hpp"

#include "taublab/errors.hpp"

#include <boost/container_hash/hash.hpp>

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace taublab::lattice {

namespace {

constexpr std::size_t kDenseGridLimit = std::size_t{1} << 24;

void require_nonempty(const LatticeSet& E) {
    if (E.empty()) throw DomainError("the set E must be nonempty");
}

void require_point_dim(const LatticeSet& E, const LatticePoint& m) {
    if (m.dim() != E.dim()) {
        throw DomainError("point of dimension " + std::to_string(m.dim()) + " evaluated against a set of dimension " +
                          std::to_string(E.dim()));
    }
}

void require_line(const LatticeSet& E) {
    if (E.dim() != 1) throw DomainError("one-sided operators are defined on Z only (dimension 1)");
}

std::int64_t checked_volume(std::span<const Coord> lo, std::span<const Coord> hi) {
    __int128 v = 1;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        v *= static_cast<__int128>(hi[i]) - lo[i] + 1;
        if (v > std::numeric_limits<std::int64_t>::max()) throw DomainError("box volume overflows 64 bits");
    }
    return static_cast<std::int64_t>(v);
}

/// Point counts of E over boxes, in coordinates compressed to the distinct
/// values E takes on each axis.
class CountGrid {
public:
    explicit CountGrid(const LatticeSet& E) : n_(E.dim()), xs_(n_) {
        for (std::size_t i = 0; i < E.size(); ++i) {
            auto p = E.point(i);
            for (std::size_t a = 0; a < n_; ++a) xs_[a].push_back(p[a]);
        }
        for (auto& axis : xs_) {
            std::sort(axis.begin(), axis.end());
            axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
        }
        idx_.resize(E.size() * n_);
        for (std::size_t i = 0; i < E.size(); ++i) {
            auto p = E.point(i);
            for (std::size_t a = 0; a < n_; ++a) {
                idx_[i * n_ + a] =
                    static_cast<std::size_t>(std::lower_bound(xs_[a].begin(), xs_[a].end(), p[a]) - xs_[a].begin());
            }
        }
        std::size_t cells = 1;
        dense_ = true;
        stride_.assign(n_, 0);
        for (std::size_t a = n_; a-- > 0;) {
            stride_[a] = cells;
            const std::size_t extent = xs_[a].size() + 1;
            if (cells > kDenseGridLimit / extent) {
                dense_ = false;
                break;
            }
            cells *= extent;
        }
        if (!dense_) return;
        prefix_.assign(cells, 0);
        for (std::size_t i = 0; i < E.size(); ++i) {
            std::size_t off = 0;
            for (std::size_t a = 0; a < n_; ++a) off += (idx_[i * n_ + a] + 1) * stride_[a];
            prefix_[off] += 1;
        }
        // Running sums along each axis in turn.
        for (std::size_t a = 0; a < n_; ++a) {
            for (std::size_t off = 0; off < cells; ++off) {
                const std::size_t coord = (off / stride_[a]) % (xs_[a].size() + 1);
                if (coord > 0) prefix_[off] += prefix_[off - stride_[a]];
            }
        }
    }

    std::size_t dim() const { return n_; }
    const std::vector<Coord>& axis(std::size_t a) const { return xs_[a]; }

    /// Points with compressed index in [a_i, b_i] on every axis.
    std::int64_t count(std::span<const std::size_t> a, std::span<const std::size_t> b) const {
        if (!dense_) {
            std::int64_t c = 0;
            const std::size_t npts = idx_.size() / n_;
            for (std::size_t i = 0; i < npts; ++i) {
                bool in = true;
                for (std::size_t ax = 0; ax < n_ && in; ++ax) {
                    const std::size_t v = idx_[i * n_ + ax];
                    in = v >= a[ax] && v <= b[ax];
                }
                c += in ? 1 : 0;
            }
            return c;
        }
        std::int64_t total = 0;
        const std::size_t corners = std::size_t{1} << n_;
        for (std::size_t mask = 0; mask < corners; ++mask) {
            std::size_t off = 0;
            int lower = 0;
            for (std::size_t ax = 0; ax < n_; ++ax) {
                if (mask >> ax & 1U) {
                    off += a[ax] * stride_[ax];
                    ++lower;
                } else {
                    off += (b[ax] + 1) * stride_[ax];
                }
            }
            total += (lower % 2 == 0) ? prefix_[off] : -prefix_[off];
        }
        return total;
    }

    /// Count of E inside an arbitrary integer box given by raw coordinates.
    std::int64_t count_box(std::span<const Coord> lo, std::span<const Coord> hi, std::vector<std::size_t>& a,
                           std::vector<std::size_t>& b) const {
        for (std::size_t ax = 0; ax < n_; ++ax) {
            const auto& xs = xs_[ax];
            const auto first = std::lower_bound(xs.begin(), xs.end(), lo[ax]);
            const auto last = std::upper_bound(xs.begin(), xs.end(), hi[ax]);
            if (first >= last) return 0;
            a[ax] = static_cast<std::size_t>(first - xs.begin());
            b[ax] = static_cast<std::size_t>(last - xs.begin()) - 1;
        }
        return count(a, b);
    }

private:
    std::size_t n_;
    std::vector<std::vector<Coord>> xs_;
    std::vector<std::size_t> idx_;
    std::vector<std::size_t> stride_;
    std::vector<std::int64_t> prefix_;
    bool dense_ = false;
};

/// Candidate faces for boxes containing m: on each axis, lo ranges over m and
/// the E-coordinates below it, hi over m and the E-coordinates above it. Any
/// other face can be pulled inward to one of these without losing points.
struct FaceCandidates {
    std::vector<std::vector<Coord>> lo;
    std::vector<std::vector<Coord>> hi;
};

FaceCandidates face_candidates(const CountGrid& grid, const LatticePoint& m) {
    FaceCandidates fc;
    fc.lo.resize(grid.dim());
    fc.hi.resize(grid.dim());
    for (std::size_t a = 0; a < grid.dim(); ++a) {
        fc.lo[a].push_back(m[a]);
        fc.hi[a].push_back(m[a]);
        for (Coord x : grid.axis(a)) {
            if (x < m[a]) fc.lo[a].push_back(x);
            if (x > m[a]) fc.hi[a].push_back(x);
        }
        std::sort(fc.lo[a].begin(), fc.lo[a].end());
    }
    return fc;
}

/// Visits every candidate box; the visitor returns false to stop early.
template <typename Visitor>
void for_each_candidate_box(const FaceCandidates& fc, Visitor&& visit) {
    const std::size_t n = fc.lo.size();
    std::vector<std::size_t> li(n, 0), hi_i(n, 0);
    std::vector<Coord> lo(n), hi(n);
    for (std::size_t a = 0; a < n; ++a) {
        lo[a] = fc.lo[a][0];
        hi[a] = fc.hi[a][0];
    }
    while (true) {
        if (!visit(std::span<const Coord>(lo), std::span<const Coord>(hi))) return;
        // Odometer over (lo_0, hi_0, ..., lo_{n-1}, hi_{n-1}), last axis fastest.
        std::size_t slot = 2 * n;
        while (true) {
            if (slot == 0) return;
            --slot;
            const std::size_t a = slot / 2;
            if (slot % 2 == 1) {
                if (++hi_i[a] < fc.hi[a].size()) {
                    hi[a] = fc.hi[a][hi_i[a]];
                    break;
                }
                hi_i[a] = 0;
                hi[a] = fc.hi[a][0];
            } else {
                if (++li[a] < fc.lo[a].size()) {
                    lo[a] = fc.lo[a][li[a]];
                    break;
                }
                li[a] = 0;
                lo[a] = fc.lo[a][0];
            }
        }
    }
}

using Interval = std::pair<Coord, Coord>;

struct VecHash {
    std::size_t operator()(const std::vector<Coord>& v) const { return boost::hash_range(v.begin(), v.end()); }
};

/// Halo as a union of per-row intervals along the last axis, keyed by the
/// leading n - 1 coordinates.
class RowUnion {
public:
    void add(const std::vector<Coord>& prefix, Coord lo, Coord hi) {
        auto it = rows_.find(prefix);
        if (it == rows_.end()) it = rows_.emplace(prefix, std::vector<Interval>{}).first;
        it->second.emplace_back(lo, hi);
    }

    void merge() {
        for (auto& [key, ivs] : rows_) {
            std::sort(ivs.begin(), ivs.end());
            std::vector<Interval> merged;
            for (const auto& iv : ivs) {
                if (!merged.empty() && iv.first <= merged.back().second + 1) {
                    merged.back().second = std::max(merged.back().second, iv.second);
                } else {
                    merged.push_back(iv);
                }
            }
            ivs = std::move(merged);
        }
    }

    std::int64_t size() const {
        std::int64_t s = 0;
        for (const auto& [key, ivs] : rows_) {
            for (const auto& iv : ivs) s += iv.second - iv.first + 1;
        }
        return s;
    }

    LatticeSet materialize(std::size_t dim) const {
        std::vector<LatticePoint> pts;
        pts.reserve(static_cast<std::size_t>(size()));
        for (const auto& [key, ivs] : rows_) {
            for (const auto& iv : ivs) {
                for (Coord x = iv.first; x <= iv.second; ++x) {
                    std::vector<Coord> c = key;
                    c.push_back(x);
                    pts.emplace_back(std::move(c));
                }
            }
        }
        return LatticeSet(dim, std::move(pts));
    }

private:
    std::unordered_map<std::vector<Coord>, std::vector<Interval>, VecHash> rows_;
};

/// Emits the points m with vol(bbox(core ∪ {m})) <= budget, axis by axis.
class CoreCover {
public:
    CoreCover(std::size_t n, RowUnion& out) : n_(n), prefix_(n - 1), tail_(n + 1), out_(out) {}

    void cover(const std::vector<Coord>& lo, const std::vector<Coord>& hi, std::int64_t budget) {
        lo_ = &lo;
        hi_ = &hi;
        tail_[n_] = 1;
        for (std::size_t a = n_; a-- > 0;) tail_[a] = tail_[a + 1] * (hi[a] - lo[a] + 1);
        recurse(0, budget);
    }

private:
    void recurse(std::size_t axis, std::int64_t budget) {
        const Coord lo = (*lo_)[axis];
        const Coord hi = (*hi_)[axis];
        const std::int64_t max_len = budget / tail_[axis + 1];
        const Coord from = hi - max_len + 1;
        const Coord to = lo + max_len - 1;
        if (axis + 1 == n_) {
            out_.add(prefix_, from, to);
            return;
        }
        for (Coord m = from; m <= to; ++m) {
            const std::int64_t len = std::max(hi, m) - std::min(lo, m) + 1;
            prefix_[axis] = m;
            recurse(axis + 1, budget / len);
        }
    }

    std::size_t n_;
    std::vector<Coord> prefix_;
    std::vector<std::int64_t> tail_;
    const std::vector<Coord>* lo_ = nullptr;
    const std::vector<Coord>* hi_ = nullptr;
    RowUnion& out_;
};

/// m lies in the halo iff some box B ∋ m has density > alpha. Trimming B's
/// faces inward to E-coordinates gives a "core" K ⊆ B with the same count,
/// and bbox(K ∪ {m}) ⊆ B is then at least as dense. So the halo is the union
/// over cores K of {m : vol(bbox(K ∪ {m})) <= V(K)}, V(K) the largest volume
/// still beating alpha at count #(E ∩ K). Cores whose faces carry no point of
/// E are dominated by a tighter core and skipped.
RowUnion strong_halo_rows(const LatticeSet& E, const Rational& alpha) {
    require_nonempty(E);
    require_unit_open(alpha);
    const Threshold threshold(alpha);
    const CountGrid grid(E);
    const std::size_t n = E.dim();

    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs(n);
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t d = grid.axis(a).size();
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i; j < d; ++j) pairs[a].emplace_back(i, j);
        }
    }

    RowUnion rows;
    CoreCover cover(n, rows);
    std::vector<std::size_t> sel(n, 0), ia(n), ib(n), fa(n), fb(n);
    std::vector<Coord> lo(n), hi(n);
    while (true) {
        for (std::size_t a = 0; a < n; ++a) {
            ia[a] = pairs[a][sel[a]].first;
            ib[a] = pairs[a][sel[a]].second;
        }
        const std::int64_t c = grid.count(ia, ib);
        if (c > 0) {
            for (std::size_t a = 0; a < n; ++a) {
                lo[a] = grid.axis(a)[ia[a]];
                hi[a] = grid.axis(a)[ib[a]];
            }
            const std::int64_t budget = threshold.max_volume(c);
            bool useful = checked_volume(lo, hi) <= budget;
            for (std::size_t a = 0; a < n && useful; ++a) {
                if (ia[a] == ib[a]) continue;
                fa = ia;
                fb = ib;
                fb[a] = ia[a];
                useful = grid.count(fa, fb) > 0;
                if (!useful) break;
                fb[a] = ib[a];
                fa[a] = ib[a];
                useful = grid.count(fa, fb) > 0;
            }
            if (useful) cover.cover(lo, hi, budget);
        }
        std::size_t a = n;
        while (a > 0) {
            --a;
            if (++sel[a] < pairs[a].size()) break;
            sel[a] = 0;
            if (a == 0) {
                rows.merge();
                return rows;
            }
        }
    }
}

struct SortedLine {
    std::vector<Coord> xs;
};

SortedLine sorted_line(const LatticeSet& E) {
    require_line(E);
    require_nonempty(E);
    SortedLine line;
    line.xs.reserve(E.size());
    for (std::size_t i = 0; i < E.size(); ++i) line.xs.push_back(E.point(i)[0]);
    return line;  // LatticeSet order is already ascending
}

RowUnion one_sided_halo_rows(const LatticeSet& E, const Rational& alpha) {
    require_unit_open(alpha);
    const SortedLine line = sorted_line(E);
    const Threshold threshold(alpha);
    const auto& xs = line.xs;
    RowUnion rows;
    const std::vector<Coord> key;
    // A forward window [m, xs[b]] with m <= xs[a] holds at least b - a + 1
    // points of E; it beats alpha once its length fits the volume budget.
    for (std::size_t a = 0; a < xs.size(); ++a) {
        for (std::size_t b = a; b < xs.size(); ++b) {
            const std::int64_t budget = threshold.max_volume(static_cast<std::int64_t>(b - a + 1));
            if (xs[b] - xs[a] + 1 > budget) continue;
            rows.add(key, xs[b] - budget + 1, xs[a]);
        }
    }
    rows.merge();
    return rows;
}

}  // namespace

MaximalValue eval_strong_max_witness(const LatticeSet& E, const LatticePoint& m) {
    require_nonempty(E);
    require_point_dim(E, m);
    const CountGrid grid(E);
    const FaceCandidates fc = face_candidates(grid, m);
    const std::size_t n = E.dim();
    std::vector<std::size_t> a(n), b(n);
    std::int64_t best_c = -1, best_v = 1;
    std::vector<Coord> best_lo, best_hi;
    for_each_candidate_box(fc, [&](std::span<const Coord> lo, std::span<const Coord> hi) {
        const std::int64_t c = grid.count_box(lo, hi, a, b);
        const std::int64_t v = checked_volume(lo, hi);
        const auto cmp = best_c < 0 ? std::strong_ordering::greater : compare_fractions(c, v, best_c, best_v);
        const bool better = cmp > 0 ||
                            (cmp == 0 && (std::lexicographical_compare(lo.begin(), lo.end(), best_lo.begin(),
                                                                       best_lo.end()) ||
                                          (std::equal(lo.begin(), lo.end(), best_lo.begin()) &&
                                           std::lexicographical_compare(hi.begin(), hi.end(), best_hi.begin(),
                                                                        best_hi.end()))));
        if (better) {
            best_c = c;
            best_v = v;
            best_lo.assign(lo.begin(), lo.end());
            best_hi.assign(hi.begin(), hi.end());
        }
        return true;
    });
    return MaximalValue{Rational(best_c, best_v), IntBox(best_lo, best_hi)};
}

Rational eval_strong_max(const LatticeSet& E, const LatticePoint& m) { return eval_strong_max_witness(E, m).value; }

bool exceeds(const LatticeSet& E, const LatticePoint& m, const Rational& alpha) {
    require_unit_open(alpha);
    require_nonempty(E);
    require_point_dim(E, m);
    const Threshold threshold(alpha);
    const CountGrid grid(E);
    const FaceCandidates fc = face_candidates(grid, m);
    std::vector<std::size_t> a(E.dim()), b(E.dim());
    bool found = false;
    for_each_candidate_box(fc, [&](std::span<const Coord> lo, std::span<const Coord> hi) {
        found = threshold.exceeded_by(grid.count_box(lo, hi, a, b), checked_volume(lo, hi));
        return !found;
    });
    return found;
}

IntBox halo_search_region(const LatticeSet& E, const Rational& alpha) {
    require_nonempty(E);
    require_unit_open(alpha);
    // ceil(#E / alpha) = ceil(#E * q / p)
    const BigInt num = BigInt(static_cast<std::int64_t>(E.size())) * alpha.denominator();
    const BigInt p = alpha.numerator();
    const BigInt dil = (num + p - 1) / p;
    if (dil > std::numeric_limits<std::int32_t>::max()) throw DomainError("halo search region too large");
    const auto d = static_cast<Coord>(dil);
    IntBox box = E.bounding_box();
    for (std::size_t a = 0; a < box.dim(); ++a) {
        box.lo[a] -= d;
        box.hi[a] += d;
    }
    return box;
}

HaloSet halo(const LatticeSet& E, const Rational& alpha) {
    return HaloSet{alpha, strong_halo_rows(E, alpha).materialize(E.dim()), E};
}

std::int64_t halo_size(const LatticeSet& E, const Rational& alpha) { return strong_halo_rows(E, alpha).size(); }

Rational halo_ratio(const LatticeSet& E, const Rational& alpha) {
    return Rational(halo_size(E, alpha), static_cast<std::int64_t>(E.size()));
}

Rational one_sided_max(const LatticeSet& E, const LatticePoint& m) {
    const SortedLine line = sorted_line(E);
    require_point_dim(E, m);
    const auto& xs = line.xs;
    const auto first = std::lower_bound(xs.begin(), xs.end(), m[0]);
    std::int64_t best_c = 0, best_v = 1;
    std::int64_t c = 0;
    for (auto it = first; it != xs.end(); ++it) {
        ++c;
        const std::int64_t v = *it - m[0] + 1;
        if (compare_fractions(c, v, best_c, best_v) > 0) {
            best_c = c;
            best_v = v;
        }
    }
    return Rational(best_c, best_v);
}

LatticeSet one_sided_halo(const LatticeSet& E, const Rational& alpha) {
    return one_sided_halo_rows(E, alpha).materialize(1);
}

std::int64_t one_sided_halo_size(const LatticeSet& E, const Rational& alpha) {
    return one_sided_halo_rows(E, alpha).size();
}

Rational one_sided_halo_ratio(const LatticeSet& E, const Rational& alpha) {
    return Rational(one_sided_halo_size(E, alpha), static_cast<std::int64_t>(E.size()));
}

TauberianEstimate interval_witness(std::int64_t k, const Rational& alpha) {
    if (k < 1) throw DomainError("interval witness needs k >= 1");
    require_unit_open(alpha);
    LatticeSet E = LatticeSet::interval(0, k);
    const std::int64_t h = halo_size(E, alpha);
    return TauberianEstimate{alpha,         Rational(h, k), std::move(E), Rational(k), Rational(h),
                             "interval",    EstimateMode::exact};
}

LatticeSet product_witness(const LatticeSet& E1, const LatticeSet& E2) {
    if (E1.dim() != 1 || E2.dim() != 1) throw DomainError("product witness takes two one-dimensional sets");
    require_nonempty(E1);
    require_nonempty(E2);
    std::vector<LatticePoint> pts;
    pts.reserve(E1.size() * E2.size());
    for (std::size_t i = 0; i < E1.size(); ++i) {
        for (std::size_t j = 0; j < E2.size(); ++j) pts.push_back(LatticePoint{E1.point(i)[0], E2.point(j)[0]});
    }
    return LatticeSet(2, std::move(pts));
}

}  // namespace taublab::lattice
