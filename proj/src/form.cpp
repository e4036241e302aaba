#include "precosym/form.hpp"

#include "precosym/errors.hpp"

#include <algorithm>
#include <sstream>

namespace precosym {

Expression VectorField::apply(const Expression& f) const {
    Expression acc = Expression::zero(chart_->context());
    for (auto& [coord, c] : comps_) acc = acc + c * f.diff(coord);
    return acc;
}

VectorField VectorField::operator+(const VectorField& o) const {
    VectorField r = *this;
    for (auto& [coord, c] : o.comps_) r.set(coord, r.coeff(coord) + c);
    return r;
}

VectorField VectorField::operator*(const Expression& c) const {
    VectorField r(chart_);
    for (auto& [coord, e] : comps_) r.set(coord, e * c);
    return r;
}

std::string VectorField::str() const {
    if (comps_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Deterministic: chart order.
    for (SymId c : chart_->coords()) {
        auto it = comps_.find(c);
        if (it == comps_.end()) continue;
        if (!first) os << " + ";
        first = false;
        std::string s = it->second.str();
        if (s.find(' ') != std::string::npos) s = "(" + s + ")";
        os << s << "*d/d" << chart_->context()->name(c);
    }
    return os.str();
}

void DifferentialForm::add(Key key, Expression c) {
    if (static_cast<int>(key.size()) != degree_)
        throw chart_error("wedge monomial length does not match form degree");
    if (c.is_zero()) return;
    // Sort with parity; repeated index kills the term.
    int sign = 1;
    for (std::size_t i = 1; i < key.size(); ++i)
        for (std::size_t j = i; j > 0 && key[j - 1] >= key[j]; --j) {
            if (key[j - 1] == key[j]) return;
            std::swap(key[j - 1], key[j]);
            sign = -sign;
        }
    if (sign < 0) c = -c;
    auto it = coeffs_.find(key);
    if (it == coeffs_.end()) {
        coeffs_.emplace(std::move(key), std::move(c));
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

DifferentialForm DifferentialForm::operator+(const DifferentialForm& o) const {
    if (degree_ != o.degree_) throw chart_error("adding forms of different degree");
    DifferentialForm r = *this;
    for (auto& [k, c] : o.coeffs_) r.add(k, c);
    return r;
}

DifferentialForm DifferentialForm::operator-(const DifferentialForm& o) const {
    return *this + (-o);
}

DifferentialForm DifferentialForm::operator-() const {
    DifferentialForm r(chart_, degree_);
    for (auto& [k, c] : coeffs_) r.coeffs_.emplace(k, -c);
    return r;
}

DifferentialForm DifferentialForm::operator*(const Expression& c) const {
    DifferentialForm r(chart_, degree_);
    if (c.is_zero()) return r;
    for (auto& [k, e] : coeffs_) {
        Expression p = e * c;
        if (!p.is_zero()) r.coeffs_.emplace(k, std::move(p));
    }
    return r;
}

std::string DifferentialForm::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [k, c] : coeffs_) {
        std::string cs = c.str();
        bool neg = cs.size() > 0 && cs[0] == '-';
        if (first) {
            if (neg) {
                os << "-";
                cs = cs.substr(1);
            }
        } else {
            os << (neg ? " - " : " + ");
            if (neg) cs = cs.substr(1);
        }
        first = false;
        bool one = cs == "1";
        if (degree_ == 0) {
            os << cs;
            continue;
        }
        if (!one) {
            if (cs.find(' ') != std::string::npos) cs = "(" + cs + ")";
            os << cs << " ";
        }
        for (std::size_t i = 0; i < k.size(); ++i) {
            if (i) os << "^";
            os << "d" << chart_->context()->name(chart_->coords()[k[i]]);
        }
    }
    return os.str();
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
    if (a.chart() != b.chart()) throw chart_error("wedge of forms over different charts");
    DifferentialForm r(a.chart(), a.degree() + b.degree());
    for (auto& [ka, ca] : a.coefficients())
        for (auto& [kb, cb] : b.coefficients()) {
            DifferentialForm::Key k = ka;
            k.insert(k.end(), kb.begin(), kb.end());
            r.add(std::move(k), ca * cb);
        }
    return r;
}

DifferentialForm ext_d(const DifferentialForm& a) {
    const ChartPtr& chart = a.chart();
    DifferentialForm r(chart, a.degree() + 1);
    for (auto& [k, c] : a.coefficients()) {
        for (SymId s : chart->coords()) {
            Expression dc = c.diff(s);
            if (dc.is_zero()) continue;
            DifferentialForm::Key key;
            key.reserve(k.size() + 1);
            key.push_back(chart->coord_pos(s));
            key.insert(key.end(), k.begin(), k.end());
            r.add(std::move(key), std::move(dc));
        }
    }
    return r;
}

DifferentialForm interior(const VectorField& v, const DifferentialForm& a) {
    if (v.chart() != a.chart()) throw chart_error("interior product over different charts");
    if (a.degree() == 0) throw chart_error("interior product of a degree-0 form");
    DifferentialForm r(a.chart(), a.degree() - 1);
    const auto& coords = a.chart()->coords();
    for (auto& [k, c] : a.coefficients()) {
        for (std::size_t j = 0; j < k.size(); ++j) {
            Expression vc = v.coeff(coords[k[j]]);
            if (vc.is_zero()) continue;
            DifferentialForm::Key rest;
            rest.reserve(k.size() - 1);
            for (std::size_t i = 0; i < k.size(); ++i)
                if (i != j) rest.push_back(k[i]);
            Expression term = vc * c;
            if (j % 2 == 1) term = -term;
            r.add(std::move(rest), std::move(term));
        }
    }
    return r;
}

DifferentialForm d_scalar(const ChartPtr& chart, const Expression& f) {
    DifferentialForm r(chart, 1);
    for (SymId s : chart->coords()) {
        Expression d = f.diff(s);
        if (!d.is_zero()) r.add({chart->coord_pos(s)}, std::move(d));
    }
    return r;
}

DifferentialForm pullback(const std::map<SymId, Expression>& phi, const ChartPtr& source,
                          const DifferentialForm& a) {
    const ChartPtr& target = a.chart();
    if (target->context() != source->context())
        throw chart_error("pullback requires charts sharing one symbol context");
    for (SymId c : target->coords())
        if (!phi.count(c))
            throw chart_error("pullback map misses target coordinate " +
                              target->context()->name(c));
    DifferentialForm r(source, a.degree());
    for (auto& [k, c] : a.coefficients()) {
        Expression cc = c.substitute(phi);
        DifferentialForm term = DifferentialForm::scalar(source, cc);
        for (int idx : k) {
            SymId tc = target->coords()[idx];
            term = wedge(term, d_scalar(source, phi.at(tc)));
        }
        r = r + term;
    }
    return r;
}

Expression apply_form(const DifferentialForm& a, const std::vector<VectorField>& vs) {
    if (static_cast<int>(vs.size()) != a.degree())
        throw chart_error("form applied to the wrong number of vector fields");
    DifferentialForm cur = a;
    for (const VectorField& v : vs) cur = interior(v, cur);
    auto it = cur.coefficients().find({});
    if (it == cur.coefficients().end()) return Expression::zero(a.chart()->context());
    return it->second;
}

}  // namespace precosym
