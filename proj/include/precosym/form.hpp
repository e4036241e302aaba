#pragma once

#include "precosym/chart.hpp"
#include "precosym/expr.hpp"

#include <map>
#include <vector>

namespace precosym {

// Vector field over a chart: coordinate -> coefficient expression.
class VectorField {
public:
    explicit VectorField(ChartPtr chart) : chart_(std::move(chart)) {}

    const ChartPtr& chart() const { return chart_; }

    void set(SymId coord, Expression e) {
        if (!chart_->has(coord))
            throw chart_error("vector field component outside chart: " +
                              chart_->context()->name(coord));
        if (e.is_zero()) comps_.erase(coord);
        else comps_.insert_or_assign(coord, std::move(e));
    }
    Expression coeff(SymId coord) const {
        auto it = comps_.find(coord);
        if (it != comps_.end()) return it->second;
        return Expression::zero(chart_->context());
    }
    const std::map<SymId, Expression>& components() const { return comps_; }

    static VectorField coordinate(const ChartPtr& chart, SymId coord) {
        VectorField v(chart);
        v.set(coord, Expression::one(chart->context()));
        return v;
    }

    // Directional derivative v(f).
    Expression apply(const Expression& f) const;

    VectorField operator+(const VectorField& o) const;
    VectorField operator*(const Expression& c) const;

    std::string str() const;

private:
    ChartPtr chart_;
    std::map<SymId, Expression> comps_;
};

// k-tuple of vector fields.
using KVectorField = std::vector<VectorField>;

// Degree-graded antisymmetric coefficient table over strictly increasing
// coordinate index tuples. Only sorted tuples are stored; the sign
// bookkeeping happens at insertion via permutation parity.
class DifferentialForm {
public:
    using Key = std::vector<int>;  // chart positions, strictly increasing

    DifferentialForm(ChartPtr chart, int degree) : chart_(std::move(chart)), degree_(degree) {
        if (degree < 0) throw chart_error("negative form degree");
    }

    static DifferentialForm scalar(const ChartPtr& chart, Expression e) {
        DifferentialForm f(chart, 0);
        f.add(Key{}, std::move(e));
        return f;
    }
    // dx for a chart coordinate.
    static DifferentialForm d_coord(const ChartPtr& chart, SymId coord) {
        DifferentialForm f(chart, 1);
        f.add(Key{chart->coord_pos(coord)}, Expression::one(chart->context()));
        return f;
    }

    const ChartPtr& chart() const { return chart_; }
    int degree() const { return degree_; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::map<Key, Expression>& coefficients() const { return coeffs_; }

    // Adds c * dX_{key}; key need not be sorted, repeated indices vanish.
    void add(Key key, Expression c);

    Expression coefficient(const Key& sorted_key) const {
        auto it = coeffs_.find(sorted_key);
        if (it != coeffs_.end()) return it->second;
        return Expression::zero(chart_->context());
    }

    DifferentialForm operator+(const DifferentialForm& o) const;
    DifferentialForm operator-(const DifferentialForm& o) const;
    DifferentialForm operator-() const;
    DifferentialForm operator*(const Expression& c) const;

    bool operator==(const DifferentialForm& o) const {
        return degree_ == o.degree_ && coeffs_ == o.coeffs_;
    }
    bool operator!=(const DifferentialForm& o) const { return !(*this == o); }

    std::string str() const;

private:
    ChartPtr chart_;
    int degree_;
    std::map<Key, Expression> coeffs_;
};

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm ext_d(const DifferentialForm& a);
DifferentialForm interior(const VectorField& v, const DifferentialForm& a);

// Pullback along a coordinate map phi: every coordinate of the target chart
// is assigned an expression over the source chart. Source and target must
// share one symbol context.
DifferentialForm pullback(const std::map<SymId, Expression>& phi, const ChartPtr& source,
                          const DifferentialForm& a);

// Exterior derivative of a scalar function as a 1-form.
DifferentialForm d_scalar(const ChartPtr& chart, const Expression& f);

// Full contraction of a degree-d form with d vector fields.
Expression apply_form(const DifferentialForm& a, const std::vector<VectorField>& vs);

}  // namespace precosym
