#ifndef HILIM_INSTANCE_HPP
#define HILIM_INSTANCE_HPP

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hilim/diagram.hpp"

namespace hilim {

/// On-disk instance: field, poset, and optionally a functor. Scalars are
/// strings ("3", "-1/2") over Q and nonnegative integers over F_p, so the
/// format is exact. Unknown keys are rejected. The map for cover p < q is
/// keyed "p<q" and holds the row-major dim(p) x dim(q) matrix of
/// F(q) -> F(p). Element order in the file is the canonical internal order.
struct InstanceFile {
    FieldSpec field;
    std::vector<std::string> elements;
    std::vector<std::pair<std::string, std::string>> covers;
    bool has_functor = false;
    std::map<std::string, long long> dims;
    std::map<std::string, std::vector<std::vector<std::string>>> maps;

    Poset build_poset() const { return Poset::build(elements, covers); }

    template <class Scalar>
    ModuleDiagram<Scalar> build_diagram() const {
        if (!has_functor)
            throw InputError(InputError::Code::ParseError, "instance has no functor");
        if (!FieldTraits<Scalar>::matches(field))
            throw InputError(InputError::Code::ParseError, "scalar type does not match field");
        ModuleDiagram<Scalar> f;
        f.poset = build_poset();
        f.field = field;
        f.dim.assign(static_cast<std::size_t>(f.poset.size()), 0);
        for (const auto& [name, d] : dims) {
            if (d < 0)
                throw InputError(InputError::Code::ParseError, "negative dimension for " + name);
            f.dim[static_cast<std::size_t>(f.poset.index_of(name))] = static_cast<Index>(d);
        }
        for (const Poset::Cover& c : f.poset.covers()) {
            std::string key = f.poset.name(c.lower) + "<" + f.poset.name(c.upper);
            Index rows = f.dim[static_cast<std::size_t>(c.lower)];
            Index cols = f.dim[static_cast<std::size_t>(c.upper)];
            DenseMatrix<Scalar> m = zero_matrix<Scalar>(rows, cols);
            auto it = maps.find(key);
            if (it == maps.end()) {
                if (rows != 0 && cols != 0)
                    throw InputError(InputError::Code::ParseError, "missing map " + key);
            } else {
                const auto& entries = it->second;
                if (static_cast<Index>(entries.size()) != rows)
                    throw InputError(InputError::Code::ParseError,
                                     "map " + key + " has wrong number of rows");
                for (Index r = 0; r < rows; ++r) {
                    if (static_cast<Index>(entries[static_cast<std::size_t>(r)].size()) != cols)
                        throw InputError(InputError::Code::ParseError,
                                         "map " + key + " has wrong number of columns");
                    for (Index cc = 0; cc < cols; ++cc)
                        m(r, cc) = FieldTraits<Scalar>::from_string(
                            field, entries[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)]);
                }
            }
            f.restriction.push_back(std::move(m));
        }
        for (const auto& [key, unused] : maps) {
            (void)unused;
            auto sep = key.find('<');
            if (sep == std::string::npos)
                throw InputError(InputError::Code::ParseError, "bad map key: " + key);
            int lo = f.poset.index_of(key.substr(0, sep));
            int hi = f.poset.index_of(key.substr(sep + 1));
            bool found = false;
            for (const Poset::Cover& c : f.poset.covers())
                if (c.lower == lo && c.upper == hi) found = true;
            if (!found)
                throw InputError(InputError::Code::ParseError,
                                 "map key " + key + " is not a cover");
        }
        validate_functor<Scalar>(f);
        return f;
    }

    template <class Scalar>
    static InstanceFile from_diagram(const ModuleDiagram<Scalar>& f) {
        InstanceFile out;
        out.field = f.field;
        out.elements = f.poset.elements();
        for (const Poset::Cover& c : f.poset.covers())
            out.covers.emplace_back(f.poset.name(c.lower), f.poset.name(c.upper));
        out.has_functor = true;
        for (int p = 0; p < f.poset.size(); ++p)
            out.dims[f.poset.name(p)] = f.dim_of(p);
        for (std::size_t ci = 0; ci < f.poset.covers().size(); ++ci) {
            const Poset::Cover& c = f.poset.covers()[ci];
            const DenseMatrix<Scalar>& m = f.restriction[ci];
            std::vector<std::vector<std::string>> rows;
            for (Index r = 0; r < m.rows(); ++r) {
                std::vector<std::string> row;
                for (Index cc = 0; cc < m.cols(); ++cc)
                    row.push_back(FieldTraits<Scalar>::to_string(m(r, cc)));
                rows.push_back(std::move(row));
            }
            out.maps[f.poset.name(c.lower) + "<" + f.poset.name(c.upper)] = std::move(rows);
        }
        return out;
    }

    static InstanceFile parse(const nlohmann::json& j) {
        if (!j.is_object())
            throw InputError(InputError::Code::ParseError, "instance must be a JSON object");
        for (const auto& [key, unused] : j.items()) {
            (void)unused;
            if (key != "field" && key != "poset" && key != "functor")
                throw InputError(InputError::Code::ParseError, "unknown key: " + key);
        }
        InstanceFile out;
        out.field = j.contains("field") ? FieldSpec::parse(get_string(j, "field"))
                                        : FieldSpec::rationals();
        if (!j.contains("poset"))
            throw InputError(InputError::Code::ParseError, "missing key: poset");
        const nlohmann::json& jp = j.at("poset");
        for (const auto& [key, unused] : jp.items()) {
            (void)unused;
            if (key != "elements" && key != "covers")
                throw InputError(InputError::Code::ParseError, "unknown poset key: " + key);
        }
        for (const auto& e : jp.value("elements", nlohmann::json::array()))
            out.elements.push_back(as_string(e, "element"));
        for (const auto& c : jp.value("covers", nlohmann::json::array())) {
            if (!c.is_array() || c.size() != 2)
                throw InputError(InputError::Code::ParseError, "cover must be a pair");
            out.covers.emplace_back(as_string(c[0], "cover endpoint"),
                                    as_string(c[1], "cover endpoint"));
        }
        if (j.contains("functor")) {
            out.has_functor = true;
            const nlohmann::json& jf = j.at("functor");
            for (const auto& [key, unused] : jf.items()) {
                (void)unused;
                if (key != "dims" && key != "maps")
                    throw InputError(InputError::Code::ParseError, "unknown functor key: " + key);
            }
            const nlohmann::json jdims = jf.value("dims", nlohmann::json::object());
            for (const auto& [name, d] : jdims.items()) {
                if (!d.is_number_integer())
                    throw InputError(InputError::Code::ParseError, "dims must be integers");
                out.dims[name] = d.get<long long>();
            }
            const nlohmann::json jmaps = jf.value("maps", nlohmann::json::object());
            for (const auto& [key, m] : jmaps.items()) {
                std::vector<std::vector<std::string>> rows;
                if (!m.is_array())
                    throw InputError(InputError::Code::ParseError, "map must be an array");
                for (const auto& row : m) {
                    std::vector<std::string> r;
                    if (!row.is_array())
                        throw InputError(InputError::Code::ParseError, "map row must be an array");
                    for (const auto& entry : row) {
                        if (entry.is_string())
                            r.push_back(entry.get<std::string>());
                        else if (entry.is_number_integer())
                            r.push_back(std::to_string(entry.get<long long>()));
                        else
                            throw InputError(InputError::Code::ParseError,
                                             "map entries must be strings or integers");
                    }
                    rows.push_back(std::move(r));
                }
                out.maps[key] = std::move(rows);
            }
        }
        return out;
    }

    static InstanceFile load(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw InputError(InputError::Code::ParseError, "cannot open " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw InputError(InputError::Code::ParseError,
                             path + ": " + std::string(e.what()));
        }
        return parse(j);
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["field"] = field.name();
        j["poset"]["elements"] = elements;
        nlohmann::json jc = nlohmann::json::array();
        for (const auto& [lo, hi] : covers) jc.push_back({lo, hi});
        j["poset"]["covers"] = jc;
        if (has_functor) {
            j["functor"]["dims"] = dims;
            j["functor"]["maps"] = maps;
        }
        return j;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out)
            throw InputError(InputError::Code::ParseError, "cannot write " + path);
        out << to_json().dump(2) << "\n";
    }

private:
    static std::string get_string(const nlohmann::json& j, const std::string& key) {
        const nlohmann::json& v = j.at(key);
        return as_string(v, key);
    }
    static std::string as_string(const nlohmann::json& v, const std::string& what) {
        if (!v.is_string())
            throw InputError(InputError::Code::ParseError, what + " must be a string");
        return v.get<std::string>();
    }
};

} // namespace hilim

#endif
