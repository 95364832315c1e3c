#pragma once

// Frozen empirical constants (name -> value) for the envelope regressions.

#include <map>
#include <optional>
#include <string>

namespace stark {

class Baselines {
public:
    /// Missing file yields an empty set; malformed JSON is an InputError.
    static Baselines load(const std::string& path);
    void save(const std::string& path) const;

    std::optional<double> get(const std::string& name) const;
    void set(const std::string& name, double value) { values_[name] = value; }
    const std::map<std::string, double>& values() const { return values_; }
    bool empty() const { return values_.empty(); }

private:
    std::map<std::string, double> values_;
};

/// STARK_SPECTRA_BASELINES if set, else the checked-in data/baselines.json.
std::string baselines_path();

/// Headroom applied to measured sup-ratios when freezing.
inline constexpr double kBaselineHeadroom = 1.05;

}  // namespace stark
