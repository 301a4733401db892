#pragma once

// The two counterexample families: points above dyadic-interval endpoints,
// each with a radially perturbed twin at a prescribed tiny pseudo-hyperbolic
// distance.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "nlab/disk_geom.hpp"

namespace nlab {

enum class PointKind : int { A = 0, B = 1 };
enum class FamilyKind : int { Nevanlinna = 0, Smirnov = 1 };

struct PointIndex {
    int n = 0;           // generation >= 1
    std::int64_t k = 0;  // odd, 0 < k < 2^n
    int m = 0;           // radial level (>= 2n; Smirnov: m == 2n)
    PointKind kind = PointKind::A;

    auto operator<=>(const PointIndex&) const = default;
};

struct FamilyPoint {
    PointIndex idx;
    DiskPoint point;
    // Exact radial offset gap(B) - gap(A) of the pair this point belongs to.
    // Twin distances can only be resolved through this value.
    LogMagnitude twin_delta;
};

class SequenceFamily {
public:
    FamilyKind family = FamilyKind::Nevanlinna;
    int n_gen = 0;
    int m_extra = 0; // radial levels per ray beyond the first (Nevanlinna only)

    const std::vector<FamilyPoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    const FamilyPoint& at(std::size_t i) const { return points_[i]; }

    bool contains(const PointIndex& idx) const { return by_index_.count(idx) != 0; }
    const FamilyPoint& find(const PointIndex& idx) const;
    std::size_t position(const PointIndex& idx) const;

    PointIndex twin(const PointIndex& idx) const;

    // pseudo-hyperbolic distance between two members, twin pairs resolved
    // through the stored exact offset
    LogMagnitude member_rho(std::size_t i, std::size_t j) const;

    std::vector<std::size_t> kind_positions(PointKind kind) const;

    void export_csv(std::ostream& os) const;
    static SequenceFamily import_csv(std::istream& is);

    static SequenceFamily build_nevanlinna(int n_gen, int m_extra,
                                           std::size_t point_cap = 200000);
    static SequenceFamily build_smirnov(int n_gen, std::size_t point_cap = 200000);

private:
    std::vector<FamilyPoint> points_;
    std::map<PointIndex, std::size_t> by_index_;

    void push(FamilyPoint fp);
};

} // namespace nlab
