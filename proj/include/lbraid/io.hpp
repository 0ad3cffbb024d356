#pragma once

// JSON files for tensors, tensor bases and simplicial sets. Coefficients are
// decimal strings so that arbitrary precision survives a round trip.
// Errors carry "file:line" for syntax problems and "file: <path>" for
// semantic ones.

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lbraid/braiding.hpp"
#include "lbraid/classfun.hpp"
#include "lbraid/coeff.hpp"
#include "lbraid/dga.hpp"
#include "lbraid/error.hpp"
#include "lbraid/freegroup.hpp"

namespace lbraid {

using Json = nlohmann::json;

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("io", path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw Error("io", path + ": cannot write file");
}

inline Json parse_json(const std::string& text, const std::string& source)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        // e.byte is 1-based and may point one past the end
        auto end = text.begin() + static_cast<std::ptrdiff_t>(std::min(e.byte > 0 ? e.byte - 1 : 0, text.size()));
        auto line = 1 + std::count(text.begin(), end, '\n');
        throw Error("syntax", source + ":" + std::to_string(line) + ": malformed JSON");
    }
}

namespace detail {

// Looks up a member, reporting the path and file when it is missing or of
// the wrong type.
template <class T>
T member(const Json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        throw Error("syntax", where + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw Error("syntax", where + ": field '" + key + "' has the wrong type");
    }
}

inline Json terms_to_json(const BraidingTensor& t)
{
    Json terms = Json::array();
    for (const auto& [seq, c] : t.terms()) {
        Json names = Json::array();
        for (int x : seq)
            names.push_back(t.gens().name(x));
        terms.push_back({{"seq", names}, {"coeff", c.str()}});
    }
    return terms;
}

inline BraidingTensor terms_from_json(const Json& terms, const Ring& ring, const GenSet& gens,
                                      const std::string& where)
{
    if (!terms.is_array())
        throw Error("syntax", where + ": 'terms' must be an array");
    BraidingTensor t(ring, gens);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        std::string at = where + ": terms[" + std::to_string(i) + "]";
        auto names = member<std::vector<std::string>>(terms[i], "seq", at);
        auto coeff = member<std::string>(terms[i], "coeff", at);
        Sequence seq;
        for (const auto& n : names) {
            auto g = gens.index_of(n);
            if (!g)
                throw Error("unknown_generator", at + ": unknown generator '" + n + "'");
            seq.push_back(*g);
        }
        try {
            t.add_term(seq, ring.parse_element(coeff));
        } catch (const Error& e) {
            throw Error(e.code(), at + ": " + e.message());
        }
    }
    return t;
}

inline Ring ring_member(const Json& j, const std::string& where)
{
    try {
        return Ring::parse(member<std::string>(j, "ring", where));
    } catch (const Error& e) {
        throw Error(e.code(), where + ": " + e.message());
    }
}

inline GenSet gens_member(const Json& j, const std::string& where)
{
    try {
        return GenSet(member<std::vector<std::string>>(j, "gens", where));
    } catch (const Error& e) {
        throw Error(e.code(), where + ": " + e.message());
    }
}

} // namespace detail

inline Json tensor_to_json(const BraidingTensor& t)
{
    return {{"ring", t.ring().name()}, {"gens", t.gens().names()}, {"terms", detail::terms_to_json(t)}};
}

inline BraidingTensor tensor_from_json(const Json& j, const std::string& source)
{
    Ring ring = detail::ring_member(j, source);
    GenSet gens = detail::gens_member(j, source);
    return detail::terms_from_json(j.contains("terms") ? j.at("terms") : Json::array(), ring, gens, source);
}

inline BraidingTensor read_tensor(const std::string& path)
{
    return tensor_from_json(parse_json(read_file(path), path), path);
}

inline Json basis_to_json(const TensorBasis& B)
{
    Json tensors = Json::array();
    for (std::size_t i = 0; i < B.rank(); ++i) {
        Json t{{"weight", B.weights.at(i)}, {"terms", detail::terms_to_json(B.tensors[i])}};
        if (B.annihilators.at(i) != 0)
            t["annihilator"] = B.annihilators[i].str();
        tensors.push_back(std::move(t));
    }
    return {{"kind", B.kind},       {"n", B.n}, {"ring", B.ring.name()}, {"gens", B.gens.names()},
            {"ranks_per_weight", B.ranks_per_weight}, {"tensors", tensors}};
}

inline TensorBasis basis_from_json(const Json& j, const std::string& source)
{
    TensorBasis B;
    B.ring = detail::ring_member(j, source);
    B.gens = detail::gens_member(j, source);
    B.n = detail::member<int>(j, "n", source);
    B.kind = detail::member<std::string>(j, "kind", source);
    B.ranks_per_weight = detail::member<std::vector<std::size_t>>(j, "ranks_per_weight", source);
    auto tensors = detail::member<Json>(j, "tensors", source);
    if (!tensors.is_array())
        throw Error("syntax", source + ": 'tensors' must be an array");
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        std::string at = source + ": tensors[" + std::to_string(i) + "]";
        B.weights.push_back(detail::member<int>(tensors[i], "weight", at));
        B.annihilators.push_back(
            tensors[i].contains("annihilator") ? BigInt(detail::member<std::string>(tensors[i], "annihilator", at))
                                               : BigInt(0));
        B.tensors.push_back(detail::terms_from_json(detail::member<Json>(tensors[i], "terms", at), B.ring, B.gens, at));
    }
    return B;
}

// { "dims": D, "simplices": {"0": [...], ...}, "faces": {"id": [{"target", "degeneracies"}]} }
inline SimplicialSetModel simplicial_set_from_json(const Json& j, const std::string& source)
{
    int dims = detail::member<int>(j, "dims", source);
    auto simplices = detail::member<Json>(j, "simplices", source);
    auto faces = j.contains("faces") ? j.at("faces") : Json::object();
    if (!simplices.is_object() || !faces.is_object())
        throw Error("syntax", source + ": 'simplices' and 'faces' must be objects");
    for (const auto& [key, _] : simplices.items())
        if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
            std::stoi(key) > dims)
            throw Error("syntax", source + ": simplices key '" + key + "' is not a dimension <= dims");
    SimplicialSetModel X;
    for (int d = 0; d <= dims; ++d) {
        std::string key = std::to_string(d);
        if (!simplices.contains(key))
            continue;
        auto names = detail::member<std::vector<std::string>>(simplices, key.c_str(), source);
        for (const auto& name : names) {
            std::string at = source + ": faces." + name;
            if (X.find(name))
                throw Error("bad_simplicial_set", source + ": duplicate simplex '" + name + "'");
            std::vector<Simplex> fs;
            if (d > 0) {
                auto list = detail::member<Json>(faces, name.c_str(), at);
                if (!list.is_array() || static_cast<int>(list.size()) != d + 1)
                    throw Error("bad_simplicial_set", at + ": a " + key + "-simplex needs " + std::to_string(d + 1) +
                                                          " faces");
                for (std::size_t i = 0; i < list.size(); ++i) {
                    std::string fat = at + "[" + std::to_string(i) + "]";
                    auto target = detail::member<std::string>(list[i], "target", fat);
                    auto id = X.find(target);
                    if (!id)
                        throw Error("bad_simplicial_set", fat + ": unknown target '" + target + "'");
                    std::vector<int> degs;
                    if (list[i].contains("degeneracies"))
                        degs = detail::member<std::vector<int>>(list[i], "degeneracies", fat);
                    fs.push_back({*id, canonical_degeneracies(degs)});
                }
            }
            X.add_cell(name, d, std::move(fs));
        }
    }
    try {
        X.validate();
    } catch (const Error& e) {
        throw Error(e.code(), source + ": " + e.message());
    }
    return X;
}

inline Json simplicial_set_to_json(const SimplicialSetModel& X)
{
    Json simplices = Json::object(), faces = Json::object();
    for (int d = 0; d <= X.top_dimension(); ++d) {
        Json names = Json::array();
        for (int id : X.cells_of_dim(d)) {
            const auto& c = X.cell(id);
            names.push_back(c.name);
            if (d == 0)
                continue;
            Json list = Json::array();
            for (const auto& f : c.faces)
                list.push_back({{"target", X.cell(f.cell).name}, {"degeneracies", f.degeneracies}});
            faces[c.name] = list;
        }
        simplices[std::to_string(d)] = names;
    }
    return {{"dims", X.top_dimension()}, {"simplices", simplices}, {"faces", faces}};
}

inline SimplicialSetModel read_simplicial_set(const std::string& path)
{
    return simplicial_set_from_json(parse_json(read_file(path), path), path);
}

inline Presentation read_presentation(const std::string& path)
{
    return parse_presentation(read_file(path), path);
}

} // namespace lbraid
