#pragma once

#include "precosym/context.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace precosym {

enum class CoordRole { Base, Position, Fibre, Gauge };
enum class FibreKind { None, Velocity, Momentum };

// Ordered, role-tagged coordinate system of one phase space. Fibre
// coordinates are indexed by (position i, base alpha) pairs; pairs may be
// absent (reduced Darboux charts).
class Chart {
public:
    Chart(ContextPtr ctx, int k, int n) : ctx_(std::move(ctx)), k_(k), n_(n) {
        if (k < 1 || n < 0) throw chart_error("chart requires k >= 1 and n >= 0");
        fibre_.assign(n, std::vector<std::optional<SymId>>(k, std::nullopt));
    }

    const ContextPtr& context() const { return ctx_; }
    int k() const { return k_; }
    int n() const { return n_; }

    SymId add_base(const std::string& name) {
        SymId s = ctx_->add_coordinate(name);
        if (static_cast<int>(base_.size()) >= k_) throw chart_error("too many base coordinates");
        base_.push_back(s);
        coords_.push_back(s);
        return s;
    }
    SymId add_position(const std::string& name) {
        SymId s = ctx_->add_coordinate(name);
        if (static_cast<int>(positions_.size()) >= n_) throw chart_error("too many positions");
        positions_.push_back(s);
        coords_.push_back(s);
        return s;
    }
    SymId add_fibre(const std::string& name, int i, int alpha, FibreKind kind) {
        if (i < 0 || i >= n_ || alpha < 0 || alpha >= k_)
            throw chart_error("fibre index out of range for " + name);
        if (fibre_[i][alpha]) throw chart_error("duplicate fibre slot for " + name);
        if (fibre_kind_ == FibreKind::None) fibre_kind_ = kind;
        else if (fibre_kind_ != kind) throw chart_error("mixed fibre kinds in one chart");
        SymId s = ctx_->add_coordinate(name);
        fibre_[i][alpha] = s;
        coords_.push_back(s);
        return s;
    }
    SymId add_gauge(const std::string& name) {
        SymId s = ctx_->add_coordinate(name);
        gauge_.push_back(s);
        coords_.push_back(s);
        return s;
    }
    // Re-use existing coordinate symbols (shared base/position/momentum
    // symbols between the charts of a Legendre map and its image).
    void adopt_base(SymId s) { base_.push_back(s); coords_.push_back(s); }
    void adopt_position(SymId s) { positions_.push_back(s); coords_.push_back(s); }
    void adopt_fibre(SymId s, int i, int alpha, FibreKind kind) {
        if (i < 0 || i >= n_ || alpha < 0 || alpha >= k_)
            throw chart_error("fibre index out of range");
        if (fibre_[i][alpha]) throw chart_error("duplicate fibre slot");
        if (fibre_kind_ == FibreKind::None) fibre_kind_ = kind;
        else if (fibre_kind_ != kind) throw chart_error("mixed fibre kinds in one chart");
        fibre_[i][alpha] = s;
        coords_.push_back(s);
    }

    const std::vector<SymId>& coords() const { return coords_; }
    const std::vector<SymId>& base() const { return base_; }
    const std::vector<SymId>& positions() const { return positions_; }
    const std::vector<SymId>& gauge() const { return gauge_; }
    FibreKind fibre_kind() const { return fibre_kind_; }

    std::optional<SymId> fibre(int i, int alpha) const { return fibre_.at(i).at(alpha); }
    const std::vector<std::vector<std::optional<SymId>>>& fibre_table() const { return fibre_; }

    bool has(SymId s) const {
        for (SymId c : coords_)
            if (c == s) return true;
        return false;
    }
    // Position of a coordinate in the chart order.
    int coord_pos(SymId s) const {
        for (std::size_t i = 0; i < coords_.size(); ++i)
            if (coords_[i] == s) return static_cast<int>(i);
        throw chart_error("coordinate does not belong to the chart: " + ctx_->name(s));
    }

    CoordRole role(SymId s) const {
        for (SymId b : base_)
            if (b == s) return CoordRole::Base;
        for (SymId p : positions_)
            if (p == s) return CoordRole::Position;
        for (SymId g : gauge_)
            if (g == s) return CoordRole::Gauge;
        for (auto& row : fibre_)
            for (auto& f : row)
                if (f && *f == s) return CoordRole::Fibre;
        throw chart_error("coordinate does not belong to the chart: " + ctx_->name(s));
    }

    std::optional<int> base_index(SymId s) const {
        for (std::size_t a = 0; a < base_.size(); ++a)
            if (base_[a] == s) return static_cast<int>(a);
        return std::nullopt;
    }
    std::optional<int> position_index(SymId s) const {
        for (std::size_t i = 0; i < positions_.size(); ++i)
            if (positions_[i] == s) return static_cast<int>(i);
        return std::nullopt;
    }
    std::optional<std::pair<int, int>> fibre_index(SymId s) const {
        for (int i = 0; i < n_; ++i)
            for (int a = 0; a < k_; ++a)
                if (fibre_[i][a] && *fibre_[i][a] == s) return std::make_pair(i, a);
        return std::nullopt;
    }

    void check_complete() const {
        if (static_cast<int>(base_.size()) != k_)
            throw chart_error("chart declares fewer base coordinates than k");
        if (static_cast<int>(positions_.size()) != n_)
            throw chart_error("chart declares fewer positions than n");
    }

    bool full_fibre() const {
        for (auto& row : fibre_)
            for (auto& f : row)
                if (!f) return false;
        return true;
    }

private:
    ContextPtr ctx_;
    int k_;
    int n_;
    std::vector<SymId> coords_;
    std::vector<SymId> base_;
    std::vector<SymId> positions_;
    std::vector<std::vector<std::optional<SymId>>> fibre_;
    std::vector<SymId> gauge_;
    FibreKind fibre_kind_ = FibreKind::None;
};

using ChartPtr = std::shared_ptr<const Chart>;

}  // namespace precosym
