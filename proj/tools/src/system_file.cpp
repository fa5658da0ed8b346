#include "holex/cli.hpp"

#include "holex/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace holex::cli {

namespace {

using nlohmann::json;

// Byte offset -> "line L, column C" (1-based).
std::string position_of(std::string_view text, std::size_t offset) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            fail(path, "unknown field '" + key + "'");
        }
    }
}

const json& require(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing required field '") + key + "'");
    return *it;
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

std::vector<Atom> atom_list(const json& obj, const std::string& path, const char* key) {
    std::vector<Atom> atoms;
    auto it = obj.find(key);
    if (it == obj.end()) return atoms;
    const std::string here = path + "." + key;
    if (!it->is_array()) fail(here, "expected an array of atom names");
    for (std::size_t i = 0; i < it->size(); ++i) {
        atoms.push_back({as_string((*it)[i], here + "[" + std::to_string(i) + "]")});
    }
    return atoms;
}

ProbEntry parse_entry(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
    reject_unknown_keys(v, path, {"output", "given", "theta"});
    ProbEntry e;
    e.output = {as_string(require(v, path, "output"), path + ".output")};
    e.given = atom_list(v, path, "given");
    const auto& theta = require(v, path, "theta");
    if (!theta.is_number()) fail(path + ".theta", "expected a number");
    e.theta = theta.get<double>();
    return e;
}

Model parse_model(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
    reject_unknown_keys(v, path, {"id", "external_inputs", "internal_inputs", "outputs", "prob"});
    Model m;
    m.id = as_string(require(v, path, "id"), path + ".id");
    m.external_inputs = atom_list(v, path, "external_inputs");
    m.internal_inputs = atom_list(v, path, "internal_inputs");
    require(v, path, "outputs");
    m.outputs = atom_list(v, path, "outputs");
    if (auto it = v.find("prob"); it != v.end()) {
        if (!it->is_array()) fail(path + ".prob", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            m.table.push_back(parse_entry((*it)[i], path + ".prob[" + std::to_string(i) + "]"));
        }
    }
    return m;
}

}  // namespace

MultiModelSystem parse_system(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError("malformed JSON at " + position_of(text, e.byte > 0 ? e.byte - 1 : 0) +
                              ": " + e.what());
    }

    if (!doc.is_object()) fail("$", "expected an object at the top level");
    reject_unknown_keys(doc, "$", {"models", "links"});
    const auto& models_json = require(doc, "$", "models");
    if (!models_json.is_array()) fail("$.models", "expected an array");

    std::vector<Model> models;
    for (std::size_t i = 0; i < models_json.size(); ++i) {
        models.push_back(parse_model(models_json[i], "$.models[" + std::to_string(i) + "]"));
    }

    std::optional<std::vector<Link>> links;
    if (auto it = doc.find("links"); it != doc.end()) {
        if (!it->is_array()) fail("$.links", "expected an array of [from, to] pairs");
        links.emplace();
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string here = "$.links[" + std::to_string(i) + "]";
            const auto& pair = (*it)[i];
            if (!pair.is_array() || pair.size() != 2) fail(here, "expected a [from, to] pair");
            links->push_back({as_string(pair[0], here + "[0]"), as_string(pair[1], here + "[1]")});
        }
    }

    return make_system(std::move(models), std::move(links));
}

MultiModelSystem load_system(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open system file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_system(buf.str());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

}  // namespace holex::cli
