#pragma once

#include "precosym/errors.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace precosym {

using SymId = std::uint32_t;

enum class SymClass : std::uint8_t {
    Coordinate = 0,
    Parameter = 1,
    Opaque = 2,
    Partial = 3,
    Unknown = 4,
};

// The symbol workspace of one model: chart coordinates, parameters, opaque
// scalar functions and their formal partials, and solver unknowns. Symbols
// are append-only; the total order used by the monomial order is derived
// from (class, key) so it does not depend on creation order of partials.
class SymbolContext {
public:
    struct Info {
        std::string name;
        SymClass klass;
        std::vector<int> key;       // sort key within the class
        // Opaque: argument coordinates. Partial: base opaque + multi-index.
        std::vector<SymId> args;
        SymId base = 0;             // for partials: the opaque symbol
        std::vector<int> multi_index;
    };

    SymbolContext() = default;
    SymbolContext(const SymbolContext&) = delete;
    SymbolContext& operator=(const SymbolContext&) = delete;

    SymId add_coordinate(const std::string& name) {
        return add(name, SymClass::Coordinate, {next_coordinate_rank_++});
    }
    SymId add_parameter(const std::string& name) {
        return add(name, SymClass::Parameter, {next_parameter_rank_++});
    }
    SymId add_opaque(const std::string& name, std::vector<SymId> arg_coords) {
        for (SymId a : arg_coords)
            if (info(a).klass != SymClass::Coordinate)
                throw chart_error("opaque function '" + name +
                                  "' argument is not a coordinate: " + this->name(a));
        SymId id = add(name, SymClass::Opaque, {next_opaque_rank_++});
        symbols_[id].args = std::move(arg_coords);
        return id;
    }
    SymId add_unknown(const std::string& name) {
        return add(name, SymClass::Unknown, {next_unknown_rank_++});
    }

    // Formal partial of an opaque function (or of another partial) with
    // respect to a coordinate in its argument list. Commutativity is baked
    // in: the multi-index representation is order-free.
    SymId partial(SymId s, SymId coord) {
        const Info& si = info(s);
        SymId base;
        std::vector<int> mi;
        if (si.klass == SymClass::Opaque) {
            base = s;
            mi.assign(si.args.size(), 0);
        } else if (si.klass == SymClass::Partial) {
            base = si.base;
            mi = si.multi_index;
        } else {
            throw chart_error("partial of non-opaque symbol: " + si.name);
        }
        const Info& bi = info(base);
        bool found = false;
        for (std::size_t i = 0; i < bi.args.size(); ++i) {
            if (bi.args[i] == coord) {
                ++mi[i];
                found = true;
                break;
            }
        }
        if (!found)
            throw chart_error("coordinate " + name(coord) +
                              " is not an argument of " + bi.name);
        return partial_symbol(base, mi);
    }

    // d(symbol)/d(coord) for the chain rule: nullopt means zero, otherwise
    // {1, symbol} meaning the given symbol (or exactly 1 when s == coord).
    struct SymDeriv {
        bool is_one = false;
        SymId sym = 0;
    };
    std::optional<SymDeriv> symbol_derivative(SymId s, SymId coord) {
        const Info& si = info(s);
        switch (si.klass) {
            case SymClass::Coordinate:
                if (s == coord) return SymDeriv{true, 0};
                return std::nullopt;
            case SymClass::Parameter:
                return std::nullopt;
            case SymClass::Opaque:
            case SymClass::Partial: {
                const Info& bi = si.klass == SymClass::Opaque ? si : info(si.base);
                for (SymId a : bi.args)
                    if (a == coord) return SymDeriv{false, partial(s, coord)};
                return std::nullopt;
            }
            case SymClass::Unknown:
                throw internal_error("derivative of unknown coefficient " + si.name);
        }
        return std::nullopt;
    }

    const Info& info(SymId id) const { return symbols_.at(id); }
    const std::string& name(SymId id) const { return symbols_.at(id).name; }
    std::size_t size() const { return symbols_.size(); }

    std::optional<SymId> find(std::string_view name) const {
        auto it = by_name_.find(std::string(name));
        if (it == by_name_.end()) return std::nullopt;
        return it->second;
    }

    bool is_coordinate(SymId id) const { return info(id).klass == SymClass::Coordinate; }
    bool is_unknown(SymId id) const { return info(id).klass == SymClass::Unknown; }

    // Total symbol order: coordinates (chart order) < parameters < opaques
    // < partials < unknowns. Smaller = more significant in the monomial
    // order.
    int compare(SymId a, SymId b) const {
        if (a == b) return 0;
        const Info& ia = info(a);
        const Info& ib = info(b);
        if (ia.klass != ib.klass)
            return static_cast<int>(ia.klass) < static_cast<int>(ib.klass) ? -1 : 1;
        if (ia.key != ib.key) return ia.key < ib.key ? -1 : 1;
        return ia.name < ib.name ? -1 : (ia.name == ib.name ? 0 : 1);
    }

private:
    SymId add(const std::string& name, SymClass klass, std::vector<int> key) {
        if (name.empty()) throw chart_error("empty symbol name");
        if (by_name_.count(name))
            throw chart_error("duplicate symbol name: " + name);
        SymId id = static_cast<SymId>(symbols_.size());
        symbols_.push_back(Info{name, klass, std::move(key), {}, 0, {}});
        by_name_.emplace(name, id);
        return id;
    }

    SymId partial_symbol(SymId base, const std::vector<int>& mi) {
        const Info& bi = info(base);
        std::string nm = "D(" + bi.name;
        for (std::size_t i = 0; i < mi.size(); ++i)
            for (int r = 0; r < mi[i]; ++r) nm += "," + name(bi.args[i]);
        nm += ")";
        if (auto existing = find(nm)) return *existing;
        std::vector<int> key;
        key.push_back(bi.key.at(0));
        key.insert(key.end(), mi.begin(), mi.end());
        SymId id = add(nm, SymClass::Partial, std::move(key));
        symbols_[id].base = base;
        symbols_[id].multi_index = mi;
        return id;
    }

    std::vector<Info> symbols_;
    std::map<std::string, SymId> by_name_;
    int next_coordinate_rank_ = 0;
    int next_parameter_rank_ = 0;
    int next_opaque_rank_ = 0;
    int next_unknown_rank_ = 0;
};

using ContextPtr = std::shared_ptr<SymbolContext>;

}  // namespace precosym
