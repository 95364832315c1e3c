#include "stark/baselines.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "stark/errors.hpp"

#ifndef STARK_DEFAULT_BASELINES
#define STARK_DEFAULT_BASELINES "data/baselines.json"
#endif

namespace stark {

Baselines Baselines::load(const std::string& path) {
    Baselines b;
    std::ifstream in(path);
    if (!in) return b;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("baselines: cannot parse '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw InputError("baselines: '" + path + "' is not a JSON object");
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number()) throw InputError("baselines: value of '" + k + "' is not a number");
        b.values_[k] = v.get<double>();
    }
    return b;
}

void Baselines::save(const std::string& path) const {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : values_) j[k] = v;
    std::ofstream out(path);
    if (!out) throw InputError("baselines: cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

std::optional<double> Baselines::get(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string baselines_path() {
    if (const char* env = std::getenv("STARK_SPECTRA_BASELINES"); env && *env) return env;
    return STARK_DEFAULT_BASELINES;
}

}  // namespace stark
