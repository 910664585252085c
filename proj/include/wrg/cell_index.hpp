#pragma once

#include "wrg/geometry.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace wrg {

/// Spatial hash over a periodic box for one species' point set. Entries are
/// keyed by the owner's particle ids (dense array slots). Cell edges are at
/// least `cell_size` long, so a 3^d neighborhood query covers every point
/// within that radius.
class CellIndex {
public:
    CellIndex() = default;

    CellIndex(const Domain& dom, double cell_size) : dom_(dom) {
        if (!(cell_size > 0.0)) throw std::invalid_argument("CellIndex: cell size must be > 0");
        for (int i = 0; i < dom.dimension; ++i) {
            cells_per_axis_[i] = std::max(1, static_cast<int>(std::floor(dom.side[i] / cell_size)));
            inv_cell_[i] = cells_per_axis_[i] / dom.side[i];
        }
        cells_.resize(static_cast<std::size_t>(cells_per_axis_[0]) * cells_per_axis_[1]);
    }

    int size() const { return count_; }

    void insert(int id, const Vec& pos) {
        if (!dom_.contains(pos)) throw std::domain_error("CellIndex: position outside domain");
        const int cell = cell_of(pos);
        if (static_cast<std::size_t>(id) >= where_.size()) where_.resize(id + 1, {-1, -1});
        if (where_[id].cell >= 0) throw std::logic_error("CellIndex: id already present");
        where_[id] = {cell, static_cast<int>(cells_[cell].size())};
        cells_[cell].push_back({id, pos});
        ++count_;
    }

    void remove(int id) {
        const Locator loc = locate(id);
        auto& bucket = cells_[loc.cell];
        const int last = static_cast<int>(bucket.size()) - 1;
        if (loc.slot != last) {
            bucket[loc.slot] = bucket[last];
            where_[bucket[loc.slot].id].slot = loc.slot;
        }
        bucket.pop_back();
        where_[id] = {-1, -1};
        --count_;
    }

    /// Renames an entry after the owner swap-pops its array: `from` must be
    /// present, `to` must be free.
    void rekey(int from, int to) {
        if (from == to) return;
        const Locator loc = locate(from);
        if (static_cast<std::size_t>(to) >= where_.size()) where_.resize(to + 1, {-1, -1});
        if (where_[to].cell >= 0) throw std::logic_error("CellIndex: rekey target occupied");
        cells_[loc.cell][loc.slot].id = to;
        where_[to] = loc;
        where_[from] = {-1, -1};
    }

    const Vec& position(int id) const {
        const Locator loc = locate(id);
        return cells_[loc.cell][loc.slot].pos;
    }

    bool contains_id(int id) const {
        return static_cast<std::size_t>(id) < where_.size() && where_[id].cell >= 0;
    }

    /// Visits (id, pos) of every entry in the 3^d cell neighborhood of x —
    /// a superset of all entries within one cell edge of x.
    template <class F>
    void for_each_candidate(const Vec& x, F&& visit) const {
        std::array<int, 3> axis_cells[2];
        std::array<int, 2> axis_n = {1, 1};
        for (int d = 0; d < dom_.dimension; ++d) {
            const int c = coord_of(x[d], d);
            const int n = cells_per_axis_[d];
            int k = 0;
            for (int off = -1; off <= 1; ++off) {
                int w = (c + off + n) % n;
                bool dup = false;
                for (int j = 0; j < k; ++j) dup |= (axis_cells[d][j] == w);
                if (!dup) axis_cells[d][k++] = w;
            }
            axis_n[d] = k;
        }
        if (dom_.dimension == 1) {
            for (int i = 0; i < axis_n[0]; ++i)
                for (const Entry& e : cells_[axis_cells[0][i]]) visit(e.id, e.pos);
        } else {
            for (int i = 0; i < axis_n[0]; ++i)
                for (int j = 0; j < axis_n[1]; ++j) {
                    const int cell = axis_cells[0][i] + cells_per_axis_[0] * axis_cells[1][j];
                    for (const Entry& e : cells_[cell]) visit(e.id, e.pos);
                }
        }
    }

    template <class F>
    void for_each(F&& visit) const {
        for (const auto& bucket : cells_)
            for (const Entry& e : bucket) visit(e.id, e.pos);
    }

    /// Per-cell occupancy, used by partition checks in tests.
    std::vector<int> occupancy() const {
        std::vector<int> occ(cells_.size());
        for (std::size_t c = 0; c < cells_.size(); ++c) occ[c] = static_cast<int>(cells_[c].size());
        return occ;
    }

private:
    struct Entry {
        int id;
        Vec pos;
    };
    struct Locator {
        int cell = -1;
        int slot = -1;
    };

    int coord_of(double x, int d) const {
        int c = static_cast<int>(x * inv_cell_[d]);
        if (c >= cells_per_axis_[d]) c = cells_per_axis_[d] - 1;
        return c;
    }

    int cell_of(const Vec& pos) const {
        int cell = coord_of(pos[0], 0);
        if (dom_.dimension == 2) cell += cells_per_axis_[0] * coord_of(pos[1], 1);
        return cell;
    }

    Locator locate(int id) const {
        if (!contains_id(id)) throw std::logic_error("CellIndex: id not present");
        return where_[id];
    }

    Domain dom_;
    std::array<int, 2> cells_per_axis_ = {1, 1};
    std::array<double, 2> inv_cell_ = {0.0, 0.0};
    std::vector<std::vector<Entry>> cells_{1};
    std::vector<Locator> where_;
    int count_ = 0;
};

}  // namespace wrg
